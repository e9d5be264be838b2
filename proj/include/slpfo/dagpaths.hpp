#ifndef SLPFO_DAGPATHS_HPP
#define SLPFO_DAGPATHS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "slpfo/bigint.hpp"
#include "slpfo/levelancestor.hpp"
#include "slpfo/slp.hpp"

namespace slpfo {

// dag(D)' with path counts and edge weights. Node ids: nonterminal A is A, its leaf A'
// is N + A. Child i of A (0-based) in dag(D)' is A' for i = 0 and gamma(A)_i otherwise,
// so the child index equals the reference index.
struct WeightedDag {
    std::uint32_t n = 0;  // number of nonterminals
    std::uint32_t initial = 0;
    std::vector<std::vector<std::uint32_t>> children;  // over 2n nodes
    std::vector<Nat> number_paths;                     // over 2n nodes
    std::vector<std::vector<Nat>> edge_weight;         // [A][i]
    std::vector<Nat> paths_to;                         // P_A, over n nonterminals
    std::vector<bool> reachable;                       // from the initial node
    std::vector<std::uint32_t> topological;            // nonterminals, parents first
    std::vector<std::string> names;

    bool is_leaf(std::uint32_t v) const { return v >= n; }
    std::uint32_t leaf_of(std::uint32_t a) const { return n + a; }
    std::size_t edge_count() const;
};

WeightedDag extend_and_weight(const OrderedDag& dag, std::uint64_t* steps = nullptr);

// P_A for every nonterminal (0 when unreachable).
std::vector<Nat> count_paths_to(const WeightedDag& w);

// Number of initial paths of dag(D).
Nat count_initial_paths(const WeightedDag& w);

// The initial path of dag(D) with lex rank n; throws InvalidArgument when n is out of range.
std::vector<std::uint32_t> resolve_lex(const WeightedDag& w, const Nat& n);

// lex_A(q): sum of the edge weights along q read from A.
Nat lex_of_local(const WeightedDag& w, std::uint32_t a, const std::vector<std::uint32_t>& q,
                 std::size_t max_length = static_cast<std::size_t>(-1));

// lex of an explicit initial path.
Nat lex_of_path(const WeightedDag& w, const std::vector<std::uint32_t>& path);

// An edge of a contracted per-type dag. It stands for the dag(D)' path
// from --orig_index--> head --> ... --> to, where the tail follows unique children.
struct ContractedEdge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    std::uint32_t head = 0;
    std::uint32_t orig_index = 0;  // child index in dag(D)'
    std::uint32_t index = 0;       // 1-based index among the outgoing edges of `from`
    Nat base;                      // edgeWeight(from, orig_index, head)
    Nat weight;                    // weight of the whole contracted path
    bool contracted = false;       // head != to
};

// dag_i: dag(D)' restricted to a useful set, with non-branching paths contracted.
class DagI {
public:
    DagI() = default;
    DagI(const WeightedDag& w, const std::vector<bool>& useful, std::uint64_t* steps = nullptr);

    bool empty() const { return empty_; }
    const WeightedDag& weighted() const { return *w_; }
    std::uint32_t initial() const { return initial_; }
    std::optional<std::uint32_t> stub() const { return stub_; }
    const ContractedEdge& edge(std::uint32_t e) const { return edges_[e]; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::uint32_t>& out(std::uint32_t v) const { return out_[v]; }
    bool is_leaf(std::uint32_t v) const { return out_[v].empty(); }
    std::size_t node_count() const;

    std::uint32_t min_leaf(std::uint32_t v) const { return min_leaf_[v]; }
    std::uint32_t max_leaf(std::uint32_t v) const { return max_leaf_[v]; }
    const Nat& min_weight(std::uint32_t v) const { return min_weight_[v]; }
    const Nat& max_weight(std::uint32_t v) const { return max_weight_[v]; }
    // Parent of u on v's min (max) path, u != v.
    std::uint32_t wp_min(std::uint32_t v, std::uint32_t u) const;
    std::uint32_t wp_max(std::uint32_t v, std::uint32_t u) const;

    // Non-branching chains of dag(D)': for a node x of outdegree one, its unique child.
    std::uint32_t chain_child(std::uint32_t x) const { return chain_parent_[x]; }
    std::uint32_t chain_child_index(std::uint32_t x) const { return chain_index_[x]; }
    const Nat& chain_weight(std::uint32_t x) const { return g_[x]; }
    // Predecessor of `end` on the chain starting at `head` (end != head).
    std::uint32_t chain_predecessor(std::uint32_t head, std::uint32_t end) const;

    // Weight of the dag(D)' path from --orig--> head --> ... --> end for edge e.
    Nat partial_weight(std::uint32_t e, std::uint32_t end) const;

    std::size_t memory_words() const;

private:
    const WeightedDag* w_ = nullptr;
    bool empty_ = true;
    std::uint32_t initial_ = 0;
    std::optional<std::uint32_t> stub_;
    std::vector<ContractedEdge> edges_;
    std::vector<std::vector<std::uint32_t>> out_;
    std::vector<std::uint32_t> min_leaf_, max_leaf_;
    std::vector<Nat> min_weight_, max_weight_;
    std::vector<std::uint32_t> chain_parent_, chain_index_;
    std::vector<Nat> g_;
    LevelAncestor fmin_, fmax_, chain_;
};

// A dag(D)' edge, as removed by MinMaxPath::shorten.
struct DagEdge {
    std::uint32_t from = 0;
    std::uint32_t index = 0;
    std::uint32_t to = 0;
    bool operator==(const DagEdge& o) const { return from == o.from && index == o.index && to == o.to; }
};

enum class TripleKind : std::uint8_t { Min, Max, Edge };

struct Triple {
    TripleKind kind = TripleKind::Edge;
    std::uint32_t from = 0;
    std::uint32_t to = 0;     // end node (for Edge: possibly a chain node before the edge's end)
    std::uint32_t edge = 0;   // contracted edge id for Edge triples
    Nat weight;

    bool operator==(const Triple& o) const {
        return kind == o.kind && from == o.from && to == o.to && edge == o.edge && weight == o.weight;
    }
};

// Min-max-contracted representation of an initial-to-leaf path of a DagI, with
// triple weights, total weight, and a stack of shorten records.
class MinMaxPath {
public:
    explicit MinMaxPath(const DagI& dag) : dag_(&dag) {}

    // Positions the cursor on the least path; false when the dag is empty.
    bool first();
    // Advances to the lexicographic successor; false at the end.
    bool next();

    const Nat& weight() const { return weight_; }
    const std::vector<Triple>& triples() const { return triples_; }
    // Last node of the represented path.
    std::uint32_t end_node() const;
    // Nonterminal whose leaf ends the (unshortened) path.
    std::uint32_t end_nonterminal() const;

    // Removes the last dag(D)' edge and returns it; throws on the empty path.
    DagEdge shorten();
    // Inverse of the most recent shorten.
    void restore();
    std::size_t shortened() const { return records_.size(); }
    bool path_empty() const { return triples_.empty(); }

    // Explicit dag(D)' edge list of the represented path.
    std::vector<DagEdge> explicit_path() const;

    bool operator==(const MinMaxPath& o) const { return triples_ == o.triples_ && weight_ == o.weight_; }

    // Triples removed plus added by the last next() call.
    std::size_t last_edit() const { return last_edit_; }
    std::uint64_t operations() const { return operations_; }

private:
    struct Record {
        std::vector<Triple> popped;
        std::size_t pushed = 0;
    };

    void push(Triple t);
    Triple pop();
    void push_min(std::uint32_t u, std::uint32_t v);
    void push_max(std::uint32_t u, std::uint32_t v);
    void push_edge(std::uint32_t e);
    void append_max_edge(std::uint32_t e);
    void descend_min(std::uint32_t v);
    bool advance_from_min();
    bool advance_from_edge();
    std::size_t base() const { return dag_->stub() ? 1 : 0; }

    const DagI* dag_;
    std::vector<Triple> triples_;
    Nat weight_;
    std::vector<Record> records_;
    std::size_t last_edit_ = 0;
    std::uint64_t operations_ = 0;
};

// The dag(D) path (1-based child indices) of an initial-to-leaf path of dag(D)'.
std::vector<std::uint32_t> dag_path(const MinMaxPath& p);

}  // namespace slpfo

#endif
