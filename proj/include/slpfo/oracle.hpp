#ifndef SLPFO_ORACLE_HPP
#define SLPFO_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slpfo/query.hpp"
#include "slpfo/slp.hpp"
#include "slpfo/structure.hpp"

namespace slpfo {

// Limits of the brute-force evaluator; exceeding them throws CapExceeded.
struct OracleBudget {
    std::size_t max_nodes = 200000;
    std::uint64_t max_tuples = 50000000;
};

// All tuples of val satisfying q, by exhaustive search over U^k in lexicographic order
// of node ids. Sentences (k = 0) yield one empty tuple when true.
std::vector<std::vector<NodeId>> naive_eval(const Structure& s, const Query& q, const OracleBudget& budget = {});

// Truth of one basic local sentence leaf of q on s.
bool naive_sentence(const Structure& s, const Query& q, const QueryNode& sentence);

// All paths from the initial node of an ordered dag (1-based child indices), sorted
// lexicographically, prefixes first. Throws CapExceeded above `cap` paths.
std::vector<std::vector<std::uint32_t>> naive_initial_paths(const OrderedDag& dag, std::size_t cap = 1000000);

// Partition of the nodes of s by isomorphism type of their rho-neighborhoods, decided by
// pairwise isomorphism tests against class representatives. Classes are ordered by their
// least node.
std::vector<std::vector<NodeId>> naive_type_classes(const Structure& s, unsigned rho);

// dist(a, b) <= bound in the Gaifman graph.
bool naive_distance_leq(const Adjacency& adj, NodeId a, NodeId b, unsigned bound);

}  // namespace slpfo

#endif
