#ifndef SLPFO_FORMULA_HPP
#define SLPFO_FORMULA_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "slpfo/structure.hpp"

namespace slpfo {

enum class FormulaKind { True, False, Equal, Atom, Not, And, Or, Exists, Forall };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// First-order formula over variable slots. Every binder introduces its own slot, so
// slots never clash between scopes.
struct Formula {
    FormulaKind kind = FormulaKind::True;
    std::uint32_t relation = 0;            // Atom
    std::vector<std::uint32_t> vars;       // Atom/Equal: arguments; Exists/Forall: {bound slot}
    std::vector<FormulaPtr> children;
    // Exists/Forall: when set, the quantifier ranges over nodes within this distance
    // of the centers of the enclosing local evaluation.
    std::optional<unsigned> guard;
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_equal(std::uint32_t a, std::uint32_t b);
FormulaPtr make_atom(std::uint32_t relation, std::vector<std::uint32_t> args);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_and(std::vector<FormulaPtr> fs);
FormulaPtr make_or(std::vector<FormulaPtr> fs);
FormulaPtr make_exists(std::uint32_t var, FormulaPtr body, std::optional<unsigned> guard = std::nullopt);
FormulaPtr make_forall(std::uint32_t var, FormulaPtr body, std::optional<unsigned> guard = std::nullopt);

unsigned quantifier_rank(const Formula& f);

// Free slots in order of first occurrence.
std::vector<std::uint32_t> free_variables(const Formula& f);

// Largest slot used plus one.
std::uint32_t slot_bound(const Formula& f);

// psi^{x,r}: every quantifier becomes guarded by distance r to the centers.
FormulaPtr relativize(const FormulaPtr& f, unsigned r);

// rho = 2rk - r + k - 1.
unsigned rho(unsigned r, unsigned k);

std::string format_formula(const Formula& f, const Signature& sig, const std::vector<std::string>& names);

// Rewrites a formula over `sig` into one over the arity-reduced signature `reduced`
// (see reduce_arity): quantifiers are restricted to the original universe and atoms of
// arity above two go through their tuple elements. New slots start at `next_slot`.
FormulaPtr reduce_arity_formula(const FormulaPtr& f, const Signature& sig, const Signature& reduced,
                                std::uint32_t& next_slot);

// Tuple membership tests over a structure with relations of arity <= 2 (plus arity 0
// relations treated as propositions over the empty tuple).
class Model {
public:
    explicit Model(const Structure& s);
    std::size_t size() const { return size_; }
    bool holds(std::uint32_t relation, const std::vector<NodeId>& args) const;
    const Adjacency& adjacency() const { return adjacency_; }

private:
    std::size_t size_ = 0;
    std::vector<unsigned> arity_;
    std::vector<std::vector<bool>> unary_;
    std::vector<std::unordered_set<std::uint64_t>> binary_;
    std::vector<std::unordered_set<std::string>> general_;
    Adjacency adjacency_;
};

// Nodes within reach of the current centers, with their distance to the nearest center.
using NearList = std::vector<std::pair<NodeId, std::uint32_t>>;

NearList near_nodes(const Adjacency& adj, const std::vector<NodeId>& centers, unsigned radius);

// Truth of f under env (slot -> node). Guarded quantifiers range over `near` (required
// when f has guards); unguarded ones range over the whole universe.
bool evaluate(const Model& m, const Formula& f, std::vector<NodeId>& env, const NearList* near = nullptr);

}  // namespace slpfo

#endif
