#ifndef SLPFO_QUERY_HPP
#define SLPFO_QUERY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slpfo/bigint.hpp"
#include "slpfo/canonical.hpp"
#include "slpfo/expansion.hpp"
#include "slpfo/formula.hpp"

namespace slpfo {

enum class QueryKind { Local, Scattered, And, Or, Not, True, False, Fo };

struct QueryNode {
    QueryKind kind = QueryKind::True;
    FormulaPtr raw;       // formula as written (Local, Scattered, Fo)
    FormulaPtr formula;   // relativized for Local and Scattered, raw for Fo
    unsigned r = 0;
    unsigned q = 0;
    std::vector<std::uint32_t> vars;  // Local/Fo: free slots x1..xk; Scattered: the free slot of theta, if any
    std::vector<std::shared_ptr<const QueryNode>> children;
};

// A Boolean combination of local formulas and basic local sentences, or (oracle only)
// a plain first-order formula.
struct Query {
    std::shared_ptr<const QueryNode> root;
    std::vector<std::string> slot_names;
    std::vector<std::uint32_t> free;  // output variables in order
    bool oracle_only = false;         // contains an (fo ...) leaf

    unsigned k() const { return static_cast<unsigned>(free.size()); }
    std::uint32_t slot_count() const { return static_cast<std::uint32_t>(slot_names.size()); }
    // Largest radius over the local leaves (0 when there are none).
    unsigned radius() const;
    std::vector<const QueryNode*> leaves(QueryKind kind) const;
};

Query parse_query(const std::string& text, const Signature& sig);
std::string format_query(const Query& q, const Signature& sig);

// Truth of the Boolean combination rooted at `node`, with `leaf` deciding the leaves.
bool evaluate_combination(const QueryNode& node, const std::function<bool(const QueryNode&)>& leaf);

// One equality pattern of a k-tuple: position i takes the value of class class_of[i];
// classes are numbered by first occurrence.
struct DedupPlan {
    std::vector<std::uint32_t> class_of;
    unsigned classes = 0;

    template <class T>
    std::vector<T> inflate(const std::vector<T>& reps) const {
        std::vector<T> out;
        out.reserve(class_of.size());
        for (std::uint32_t c : class_of) out.push_back(reps[c]);
        return out;
    }
};

// All equivalence relations on [k] (Bell(k) plans).
std::vector<DedupPlan> dedup_plan(unsigned k);

// A type with its structure prepared for formula evaluation.
struct TypeModel {
    const NeighborhoodType* type = nullptr;
    Model model;
    NearList near;
    explicit TypeModel(const NeighborhoodType& t);
};

// Truth of a local leaf at the centers of a (classes, r)-type under the equality plan.
bool eval_local_on_type(const Query& q, const QueryNode& leaf, const TypeModel& type, const DedupPlan& plan);
bool eval_local_on_type(const Query& q, const QueryNode& leaf, const NeighborhoodType& type, const DedupPlan& plan);

// Truth of theta^{z,r} at the center of a (1, r')-type with r' >= r.
bool eval_theta_on_type(const Query& q, const QueryNode& sentence, const TypeModel& type);

// One component of a factorization: a realized rho-type and the positions it hosts.
struct ComponentOption {
    TypeId rho_type = 0;
    // (position in [k], node of the rho-type); the first entry is the anchor at the center.
    std::vector<std::pair<std::uint32_t, NodeId>> sigma;
};

// All options with isomorphic component neighborhoods, for one block of positions.
struct ComponentGroup {
    std::vector<std::uint32_t> block;
    NeighborhoodType component;  // k centers, only the block's positions set
    std::vector<ComponentOption> options;
};

struct Factorization {
    std::vector<std::vector<std::uint32_t>> blocks;
    std::vector<const ComponentOption*> parts;
};

struct CandidateType {
    NeighborhoodType type;             // (k, r)-type with pairwise distinct centers
    std::vector<std::uint32_t> groups; // per block, in block order
    Nat factorization_count;
};

struct CandidateSet {
    unsigned k = 0;
    unsigned r = 0;
    unsigned rho = 0;
    std::vector<ComponentGroup> groups;
    std::vector<CandidateType> types;

    // The factorization picking option digits[i] in the group of block i.
    Factorization factorization(const CandidateType& c, const std::vector<std::uint32_t>& digits) const;
    std::vector<Factorization> factorizations(const CandidateType& c) const;
};

// (k, r)-types assembled from the realized rho-types of the catalog (rho = rho(r, k)).
CandidateSet candidate_types(const TypeCatalog& catalog, unsigned k, unsigned r);

// The r-neighborhood of a partial tuple inside a rho-type, if it is connected.
std::optional<NeighborhoodType> component_of(const NeighborhoodType& rho_type, const PartialTuple& t, unsigned r);

}  // namespace slpfo

#endif
