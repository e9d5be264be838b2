#ifndef SLPFO_STRUCTURE_HPP
#define SLPFO_STRUCTURE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slpfo {

using NodeId = std::uint32_t;

// Gaifman distance; std::nullopt is the explicit "unreachable" value.
using Distance = std::optional<std::uint32_t>;

struct Relation {
    std::string name;
    unsigned arity = 0;
};

class Signature {
public:
    std::vector<Relation> relations;

    // Index of the relation called `name`, or -1.
    int find(const std::string& name) const;
    // Appends a relation; throws InvalidArgument on a duplicate name or arity 0.
    std::size_t add(const std::string& name, unsigned arity);
    unsigned max_arity() const;
    std::size_t size() const { return relations.size(); }
    bool operator==(const Signature& other) const;
};

struct Structure {
    Signature signature;
    std::size_t universe_size = 0;
    // tuples[i] holds the tuples of relation i, kept sorted and duplicate free by normalize().
    std::vector<std::vector<std::vector<NodeId>>> tuples;
    // Either empty or one label per node.
    std::vector<std::string> labels;

    Structure() = default;
    explicit Structure(Signature sig);

    NodeId add_node(const std::string& label = "");
    void add_tuple(std::size_t relation, std::vector<NodeId> tuple);
    void normalize();
    // |U| + sum of arity * |R| over all relations.
    std::size_t size() const;
    std::size_t tuple_count() const;
    bool has_tuple(std::size_t relation, const std::vector<NodeId>& tuple) const;
    std::string label(NodeId v) const;
};

// Partial k-tuple: position i is either unset or a node id.
using PartialTuple = std::vector<std::optional<NodeId>>;

// Disjoint union of partial tuples with disjoint domains; throws InvalidArgument otherwise.
PartialTuple disjoint_union(const PartialTuple& a, const PartialTuple& b);

using Adjacency = std::vector<std::vector<NodeId>>;

// Undirected Gaifman graph with sorted, duplicate free neighbor lists and no self loops.
Adjacency gaifman_adjacency(const Structure& s);
std::size_t undirected_edge_count(const Adjacency& adj);
std::size_t max_degree(const Structure& s);

// Multi-source BFS; nodes farther than `limit` (if given) stay unreachable.
std::vector<Distance> bfs_distances(const Adjacency& adj, const std::vector<NodeId>& sources,
                                    std::optional<std::uint32_t> limit = std::nullopt);
Distance distance(const Adjacency& adj, NodeId a, NodeId b);

// Sorted node set {b : dist(t, b) <= r}.
std::vector<NodeId> sphere(const Structure& s, const PartialTuple& t, unsigned r);

struct PointedNeighborhood {
    Structure structure;
    PartialTuple centers;  // in the neighborhood's own node ids
    unsigned radius = 0;
    std::vector<NodeId> origin;  // neighborhood node -> ambient node
};

// Induced substructure on `nodes` (sorted, unique); mapping[new] = old.
Structure induced_substructure(const Structure& s, const std::vector<NodeId>& nodes);

PointedNeighborhood neighborhood(const Structure& s, const PartialTuple& t, unsigned r);

struct Components {
    std::vector<Structure> parts;
    std::vector<std::vector<NodeId>> members;  // ambient ids per component, sorted
    std::vector<std::size_t> component_of;     // ambient node -> component index
};

// Gaifman-connected components ordered by least contained node id.
Components components(const Structure& s);

// Arity reduction; the identity when every relation already has arity <= 2.
Structure reduce_arity(const Structure& s);

// Names used by reduce_arity for the added relations.
struct ArityReductionNames {
    std::string universe;                       // R_U
    std::vector<std::string> element_of;        // R'_i per relation (empty name if arity <= 2)
    std::vector<std::string> position;          // E_1 .. E_n
};
ArityReductionNames arity_reduction_names(const Signature& sig);

Structure parse_structure(const std::string& text);
std::string format_structure(const Structure& s);

}  // namespace slpfo

#endif
