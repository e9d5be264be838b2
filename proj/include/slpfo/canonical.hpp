#ifndef SLPFO_CANONICAL_HPP
#define SLPFO_CANONICAL_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "slpfo/hash.hpp"
#include "slpfo/structure.hpp"

namespace slpfo {

// Flat relational structure used on the canonicalization hot path.
struct CompactStructure {
    std::uint32_t node_count = 0;
    std::uint32_t relation_count = 0;
    std::vector<std::array<std::uint32_t, 2>> unary;   // (relation, node)
    std::vector<std::array<std::uint32_t, 3>> binary;  // (relation, first, second)
};

CompactStructure to_compact(const Structure& s);
Structure from_compact(const CompactStructure& c, const Signature& sig);

struct NeighborhoodType {
    Structure structure;  // universe [l] in canonical order, centers first
    PartialTuple centers;
    unsigned k = 0;
    unsigned r = 0;
    std::vector<std::uint32_t> encoding;  // bit-identical for isomorphic inputs

    bool operator==(const NeighborhoodType& other) const { return encoding == other.encoding; }
    std::size_t node_count() const { return structure.universe_size; }
};

struct CanonicalResult {
    NeighborhoodType type;
    // pi[i] = node of the input that canonical node i is mapped to.
    std::vector<NodeId> pi;
};

struct CanonicalForm {
    std::vector<std::uint32_t> encoding;  // radius independent
    std::vector<NodeId> pi;
    CompactStructure canonical;
    PartialTuple centers;
};

// Canonical form of a compact pointed structure (no radius check).
CanonicalForm canonical_form(const CompactStructure& s, const PartialTuple& centers);

// Canonical type of a pointed r-neighborhood. Throws InvalidArgument when a node lies
// beyond radius r of every center.
CanonicalResult canonical_type(const PointedNeighborhood& n);
CanonicalResult canonical_type(const Structure& s, const PartialTuple& centers, unsigned r);

// Center and relation preserving bijection a -> b, if any. Throws CapExceeded above `cap` nodes.
std::optional<std::vector<NodeId>> find_isomorphism(const Structure& a, const PartialTuple& centers_a,
                                                    const Structure& b, const PartialTuple& centers_b,
                                                    std::size_t cap = 4096);

using EncodingHash = VectorHash;

using TypeId = std::uint32_t;

// Interns neighborhood types so that equal types share one id.
class TypeTable {
public:
    explicit TypeTable(Signature sig) : signature_(std::move(sig)) {}
    TypeId intern(NeighborhoodType type);
    // Builds the type from a canonical form and interns it.
    TypeId intern(const CanonicalForm& form, unsigned k, unsigned r);
    const NeighborhoodType& get(TypeId id) const { return *types_.at(id); }
    std::size_t size() const { return types_.size(); }
    const Signature& signature() const { return signature_; }

private:
    Signature signature_;
    std::vector<std::unique_ptr<NeighborhoodType>> types_;
    std::unordered_map<std::vector<std::uint32_t>, TypeId, EncodingHash> index_;
};

}  // namespace slpfo

#endif
