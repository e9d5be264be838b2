#ifndef SLPFO_SLP_HPP
#define SLPFO_SLP_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "slpfo/bigint.hpp"
#include "slpfo/hash.hpp"
#include "slpfo/structure.hpp"

namespace slpfo {

using Nonterminal = std::uint32_t;

struct Reference {
    Nonterminal target = 0;
    // sigma[i] is the host node merged with contact i+1 of the target.
    std::vector<std::optional<NodeId>> sigma;
    std::size_t line = 0;
};

struct Production {
    std::string name;
    unsigned rank = 0;
    bool declared = false;
    Structure local;                               // U_A, node labels kept
    std::vector<std::optional<NodeId>> contacts;  // tau_A: contact i+1 -> local node
    std::vector<Reference> refs;                  // E_A in file order
    std::size_t line = 0;

    bool is_contact(NodeId v) const;
    // 0-based contact index of v, if v is a contact.
    std::optional<unsigned> contact_index(NodeId v) const;
};

struct Slp {
    Signature signature;
    std::vector<Production> productions;
    Nonterminal initial = 0;
    std::map<std::string, Nonterminal> index;

    std::optional<Nonterminal> find(const std::string& name) const;
    const Production& at(Nonterminal a) const { return productions.at(a); }
    std::size_t nonterminal_count() const { return productions.size(); }
};

Slp parse_slp(const std::string& text);
std::string format_slp(const Slp& slp);

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    std::vector<bool> apex_per_production;
    bool apex = true;
    bool acyclic = true;
    std::vector<Nonterminal> unreachable;

    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Slp& slp);
std::string format_report(const Slp& slp, const ValidationReport& report);

// Throws InvalidArgument when the SLP is not structurally valid, ApexRequired when
// `need_apex` is set and the apex condition fails.
void require_valid(const Slp& slp, bool need_apex);

// Sum over productions of |U_A| plus (1 + rank(B)) per reference.
Nat slp_size(const Slp& slp);

struct OrderedDag {
    std::vector<std::vector<std::uint32_t>> children;  // gamma(v), in order
    std::uint32_t initial = 0;
    std::vector<std::string> names;

    std::size_t node_count() const { return children.size(); }
    std::size_t edge_count() const;
};

OrderedDag build_dag(const Slp& slp);

// Node of val(start) addressed by a dag path (1-based child indices) and a local node.
struct ARep {
    Nonterminal start = 0;
    std::vector<std::uint32_t> path;
    NodeId local = 0;

    bool operator==(const ARep& o) const { return start == o.start && path == o.path && local == o.local; }
    bool operator<(const ARep& o) const;
};

// Node of val(D) by lex rank of its initial path and local node; `nonterminal` is the
// path's end, carried for label printing.
struct LexRep {
    Nat lex;
    NodeId local = 0;
    Nonterminal nonterminal = 0;

    bool operator==(const LexRep& o) const { return lex == o.lex && local == o.local; }
    bool operator<(const LexRep& o) const { return lex != o.lex ? lex < o.lex : local < o.local; }
};

// End nonterminal of `path` read from `start`; throws InvalidArgument on a bad index.
Nonterminal path_end(const Slp& slp, Nonterminal start, const std::vector<std::uint32_t>& path);

// True when `rep` is a well-formed representation in val(rep.start).
bool is_valid_rep(const Slp& slp, const ARep& rep);

std::string format_rep(const Slp& slp, const ARep& rep);
std::string format_path(const Slp& slp, Nonterminal start, const std::vector<std::uint32_t>& path);

struct Decompressed {
    Nonterminal start = 0;
    Structure structure;
    std::vector<ARep> reps;          // node id -> representation
    std::vector<NodeId> contacts;    // tau images of val(start)
    std::unordered_map<std::vector<std::uint32_t>, NodeId, VectorHash> by_rep;

    std::optional<NodeId> find(const std::vector<std::uint32_t>& path, NodeId local) const;
};

// Number of nodes of val(A) without decompressing.
Nat val_node_count(const Slp& slp, Nonterminal a);

constexpr std::size_t kDefaultDecompressCap = 1000000;
// Cap from SLPFO_DECOMPRESS_CAP, else kDefaultDecompressCap.
std::size_t decompress_cap_from_env();

// val(A) by the quotient construction. Throws CapExceeded above `cap` nodes.
Decompressed decompress(const Slp& slp, Nonterminal a, std::size_t cap = kDefaultDecompressCap);

// Maximum degree of val(D) computed from the productions; requires apex.
std::size_t val_degree(const Slp& slp);

// eta_p: maps a B-representation into the A-representation for the path p from A to B.
ARep embed(const Slp& slp, Nonterminal a, const std::vector<std::uint32_t>& p, const ARep& n);

Slp reduce_arity_slp(const Slp& slp);

}  // namespace slpfo

#endif
