#ifndef SLPFO_ENGINE_HPP
#define SLPFO_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "slpfo/bigint.hpp"
#include "slpfo/dagpaths.hpp"
#include "slpfo/expansion.hpp"
#include "slpfo/query.hpp"
#include "slpfo/slp.hpp"

namespace slpfo {

// Preprocessed data for one radius rho: realized rho-types, valid node lists, and
// lazily built per-type contracted dags with their node counts.
class RhoContext {
public:
    RhoContext(const SlpIndex& index, const WeightedDag& w, unsigned rho, std::uint64_t* steps);

    unsigned rho() const { return catalog_.rho; }
    const TypeCatalog& catalog() const { return catalog_; }
    const DagI& dag(TypeId type);
    // beta: number of nodes of val(D) whose rho-type is `type`.
    const Nat& beta(TypeId type);
    // Expansion node of `a` as an A-representation.
    const LocalNode& node(Nonterminal a, std::uint32_t expansion_node) const {
        return catalog_.expansions[a].ball.nodes[expansion_node];
    }

private:
    const WeightedDag* w_;
    TypeCatalog catalog_;
    std::vector<std::unique_ptr<DagI>> dags_;
    std::vector<std::optional<Nat>> betas_;
    std::uint64_t* steps_;
};

// Validated SLP with shared preprocessing. Enumeration-path operations require an apex
// SLP with relations of arity at most two.
class Engine {
public:
    explicit Engine(const Slp& slp);

    const Slp& slp() const { return *slp_; }
    const SlpIndex& index() const { return index_; }
    const WeightedDag& weighted() const { return weighted_; }
    std::size_t degree() const { return degree_; }
    RhoContext& context(unsigned rho);

    std::uint64_t preprocessing_steps = 0;
    std::uint64_t enumeration_steps = 0;

private:
    const Slp* slp_;
    SlpIndex index_;
    WeightedDag weighted_;
    std::size_t degree_ = 0;
    std::map<unsigned, std::unique_ptr<RhoContext>> contexts_;
};

// beta_i = sum over useful A of P_A * |L_{i,A}|.
Nat count_type_nodes(RhoContext& ctx, TypeId type);

// Enumerates the nodes of val(D) of one rho-type: for every initial path p ending in a
// useful nonterminal A (in lexicographic order), the valid type-nodes of E(A).
class TypeStream {
public:
    TypeStream(RhoContext& ctx, TypeId type, std::uint64_t* steps = nullptr);

    // Restarts the stream before its first item.
    void restart();
    // Moves to the next item; false at the end.
    bool next();

    MinMaxPath& path() { return path_; }
    const MinMaxPath& path() const { return path_; }
    Nonterminal nonterminal() const { return a_; }
    std::uint32_t entry_index() const { return (*list_)[pos_]; }
    const ValidNodeEntry& entry() const;
    TypeId type() const { return type_; }

private:
    RhoContext* ctx_;
    TypeId type_;
    const DagI* dag_;
    MinMaxPath path_;
    bool started_ = false;
    bool done_ = false;
    Nonterminal a_ = 0;
    const std::vector<std::uint32_t>* list_ = nullptr;
    std::size_t pos_ = 0;
    std::uint64_t* steps_;
};

// A node of val(D) given by its path cursor, the nonterminal A the path ends in, and
// a valid entry of E(A), together with the expansion nodes forming its tuple part.
struct ItemRef {
    MinMaxPath* path = nullptr;
    Nonterminal a = 0;
    const ValidNodeEntry* entry = nullptr;
    std::vector<std::uint32_t> nodes;  // expansion nodes of E(a)
};

// Expansion nodes pi_c(sigma(j)) of an item for a component option (or the center alone).
std::vector<std::uint32_t> item_nodes(const ValidNodeEntry& entry, const ComponentOption* option);

// True iff some node of x's tuple part lies within `bound` of some node of y's, decided
// by the prefix test on the path cursors (extensions of length at most max_ext) and a
// local ball in val(A) of the shorter path. Cursors are restored before returning.
bool distance_leq(const Engine& engine, RhoContext& ctx, ItemRef& x, ItemRef& y, unsigned bound,
                  unsigned max_ext, std::uint64_t* steps = nullptr);

// Local test of the second step: are the nodes of `lo` (in val(a_lo)) within `bound`
// of the nodes of `hi` embedded along q (a path from a_lo to a_hi)?
bool local_near(const Engine& engine, Nonterminal a_lo, const std::vector<LocalNode>& lo, Nonterminal a_hi,
                const std::vector<LocalNode>& hi, const std::vector<std::uint32_t>& q, unsigned bound,
                std::uint64_t* steps = nullptr);

struct LevelInfo {
    TypeId type = 0;
    Nat beta;
    bool short_level = false;
    bool materialized = false;
};

// Algorithm-1 style DFLR traversal over admissible stacks for one factorization.
class FactorizationSession {
public:
    FactorizationSession(Engine& engine, RhoContext& ctx, const Factorization& f, unsigned k, unsigned r);

    // Next admissible tuple over k positions; false at the end.
    bool next(std::vector<LexRep>& out);

    const std::vector<LevelInfo>& levels() const { return info_; }
    std::uint64_t skipped() const { return skipped_; }
    std::uint64_t max_skipped_run() const { return max_run_; }

private:
    struct Stored {
        MinMaxPath path;
        Nonterminal a;
        std::uint32_t entry;
    };
    struct Level {
        const ComponentOption* option = nullptr;
        TypeId type = 0;
        bool materialized = false;
        std::vector<Stored> items;
        std::size_t cursor = 0;
        std::unique_ptr<TypeStream> stream;
    };

    void reset(std::size_t l);
    bool advance(std::size_t l);
    ItemRef item(std::size_t l);
    void assemble(std::vector<LexRep>& out);

    Engine* engine_;
    RhoContext* ctx_;
    unsigned k_;
    unsigned r_;
    unsigned max_ext_;
    std::vector<Level> levels_;
    std::vector<LevelInfo> info_;
    std::size_t depth_ = 0;
    bool started_ = false;
    bool finished_ = false;
    std::uint64_t skipped_ = 0;
    std::uint64_t run_ = 0;
    std::uint64_t max_run_ = 0;
};

// Truth of a basic local sentence: threshold enumeration of the nodes whose r-type
// satisfies theta, then an exact packing search below the threshold.
bool eval_sentence(Engine& engine, const Query& q, const QueryNode& sentence);

struct EnumerationStats {
    std::size_t plans = 0;
    std::size_t candidates = 0;
    std::size_t satisfying_candidates = 0;
    std::uint64_t sessions = 0;
    std::uint64_t outputs = 0;
    std::uint64_t max_delay = 0;
    std::vector<std::uint64_t> delays;  // engine steps between consecutive outputs
    std::vector<LevelInfo> levels;      // per session level, in session order
};

// Enumerates the result set of a Boolean combination of local formulas and basic local
// sentences as k-tuples of lex-representations.
class QueryEnumerator {
public:
    QueryEnumerator(Engine& engine, const Query& q, bool record_delays = false);

    bool next(std::vector<LexRep>& out);
    const EnumerationStats& stats() const { return stats_; }

private:
    struct PlanState {
        DedupPlan plan;
        RhoContext* ctx = nullptr;
        const CandidateSet* candidates = nullptr;
        std::vector<std::size_t> satisfying;
    };

    bool open_next_session();

    Engine* engine_;
    const Query* query_;
    bool record_;
    unsigned r_ = 0;
    std::map<unsigned, CandidateSet> candidate_sets_;
    std::vector<PlanState> plans_;
    std::size_t plan_ = 0;
    std::size_t candidate_ = 0;
    std::vector<std::uint32_t> digits_;
    bool digits_fresh_ = true;
    std::unique_ptr<FactorizationSession> session_;
    std::vector<LexRep> scratch_;
    bool sentence_mode_ = false;
    bool sentence_value_ = false;
    bool done_ = false;
    std::uint64_t last_output_steps_ = 0;
    EnumerationStats stats_;
};

// Explicit D-representation of a lex-representation.
ARep resolve_rep(const Engine& engine, const LexRep& rep);

}  // namespace slpfo

#endif
