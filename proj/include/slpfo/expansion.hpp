#ifndef SLPFO_EXPANSION_HPP
#define SLPFO_EXPANSION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "slpfo/canonical.hpp"
#include "slpfo/hash.hpp"
#include "slpfo/slp.hpp"

namespace slpfo {

// A node of val(A) in A-representation, with the nonterminal its path ends in.
struct LocalNode {
    std::vector<std::uint32_t> path;
    NodeId local = 0;
    Nonterminal end = 0;
};

// Per-production lookup tables used by the local BFS.
struct SlpIndex {
    const Slp* slp = nullptr;
    std::vector<Adjacency> adjacency;                                   // G(U_A)
    std::vector<std::vector<int>> contact;                              // local node -> contact index or -1
    // local node -> (reference index, position) pairs with sigma_j(i) = node (0-based)
    std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>> attachments;
    // local node -> (relation, tuple index) of the tuples of U_A containing it
    std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>> incident;

    explicit SlpIndex(const Slp& s);
};

// Neighbors of (path, local) in val(A) generated by the four BFS moves, in
// (rule, reference index, local id) order. Requires an apex SLP.
std::vector<LocalNode> local_neighbors(const SlpIndex& index, Nonterminal a, const LocalNode& n);

// Fragment of val(A) reached by a bounded BFS, with induced tuples.
struct LocalBall {
    Nonterminal a = 0;
    std::vector<LocalNode> nodes;             // discovery order
    std::vector<std::uint32_t> dist;          // distance from the seeds
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VectorHash> index;
    CompactStructure tuples;                  // induced tuples over ball ids
    Adjacency adjacency;                      // Gaifman graph over ball ids
    // Per node: indices into tuples.unary and tuples.binary incident to it.
    std::vector<std::vector<std::uint32_t>> unary_of;
    std::vector<std::vector<std::uint32_t>> binary_of;

    std::optional<std::uint32_t> find(const std::vector<std::uint32_t>& path, NodeId local) const;
    std::size_t size() const { return nodes.size(); }
};

std::vector<std::uint32_t> local_key(const std::vector<std::uint32_t>& path, NodeId local);

// BFS in val(A) from `seeds` up to `radius`; every step increments *steps when given.
LocalBall local_ball(const SlpIndex& index, Nonterminal a, const std::vector<LocalNode>& seeds, unsigned radius,
                     std::uint64_t* steps = nullptr);

struct Expansion {
    Nonterminal a = 0;
    unsigned zeta = 0;
    LocalBall ball;                  // seeded with In_A, dist = label
    std::vector<bool> boundary;      // contact of A, or label == zeta
    std::vector<bool> internal;      // member of In_A

    std::size_t size() const { return ball.size(); }
};

Expansion compute_expansion(const SlpIndex& index, Nonterminal a, unsigned zeta, std::uint64_t* steps = nullptr);

// Induced substructure of a ball on the nodes within `radius` of `center`, as a compact
// structure whose node 0 is the center; `members` receives ball ids per compact node.
CompactStructure ball_neighborhood(const LocalBall& ball, std::uint32_t center, unsigned radius,
                                   std::vector<std::uint32_t>& members, std::uint64_t* steps = nullptr);

struct ValidNodeEntry {
    std::uint32_t node = 0;            // expansion node id of c
    TypeId type = 0;
    std::vector<std::uint32_t> pi;     // canonical node -> expansion node id, pi[0] = node
};

// All valid nodes of `exp` for radius rho, each with its interned type. `exp.zeta`
// must equal 2 rho + 1.
std::vector<ValidNodeEntry> valid_nodes(const Expansion& exp, unsigned rho, TypeTable& table,
                                        std::uint64_t* steps = nullptr);

// Valid nodes of the given type only.
std::vector<ValidNodeEntry> valid_nodes(const Expansion& exp, TypeId type, unsigned rho, TypeTable& table);

// Realized rho-types of val(D) and, per type and nonterminal, the valid node lists.
struct TypeCatalog {
    unsigned rho = 0;
    TypeTable table;
    std::vector<bool> reachable;
    std::vector<Expansion> expansions;                 // by nonterminal (empty if unreachable)
    std::vector<std::vector<ValidNodeEntry>> valid;    // by nonterminal
    // lists[type][a] = indices into valid[a] of the valid type-nodes of E(a).
    std::vector<std::vector<std::vector<std::uint32_t>>> lists;
    std::uint64_t steps = 0;

    explicit TypeCatalog(const Signature& sig) : table(sig) {}
    std::size_t type_count() const { return lists.size(); }
    std::vector<Nonterminal> useful(TypeId type) const;
};

TypeCatalog build_catalog(const SlpIndex& index, unsigned rho);

std::vector<Nonterminal> useful_nonterminals(const TypeCatalog& catalog, TypeId type);

// The r-neighborhood of c inside val(A), with the A-representation of every node.
struct LocalSphere {
    PointedNeighborhood neighborhood;
    std::vector<LocalNode> nodes;  // by neighborhood node id
};

LocalSphere local_sphere(const SlpIndex& index, Nonterminal a, const ARep& c, unsigned r);

}  // namespace slpfo

#endif
