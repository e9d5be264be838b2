#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "slpfo/canonical.hpp"
#include "slpfo/errors.hpp"
#include "slpfo/structure.hpp"

using namespace slpfo;

namespace {

Structure path_structure(std::size_t n) {
    Signature sig;
    sig.add("e", 2);
    Structure s(sig);
    for (std::size_t i = 0; i < n; ++i) s.add_node();
    for (NodeId i = 0; i + 1 < n; ++i) s.add_tuple(0, {i, i + 1});
    s.normalize();
    return s;
}

}  // namespace

TEST_CASE("gaifman adjacency") {
    Signature sig;
    sig.add("r1", 2);
    sig.add("p", 1);
    Structure s(sig);
    NodeId a = s.add_node("a"), b = s.add_node("b");
    s.add_tuple(1, {a});
    Adjacency only_unary = gaifman_adjacency(s);
    CHECK(undirected_edge_count(only_unary) == 0);
    s.add_tuple(0, {a, b});
    Adjacency adj = gaifman_adjacency(s);
    CHECK(adj[a] == std::vector<NodeId>{b});
    CHECK(adj[b] == std::vector<NodeId>{a});

    Slp slp = example6();
    Decompressed d = decompress(slp, slp.initial);
    CHECK(undirected_edge_count(gaifman_adjacency(d.structure)) == 11);
}

TEST_CASE("max degree") {
    Signature sig;
    Structure single(sig);
    single.add_node();
    CHECK(max_degree(single) == 0);
    CHECK(max_degree(path_structure(3)) == 2);
    Slp slp = example6();
    CHECK(max_degree(decompress(slp, slp.initial).structure) == 4);
}

TEST_CASE("spheres and neighborhoods") {
    Structure p = path_structure(5);
    CHECK(sphere(p, {NodeId(2)}, 0) == std::vector<NodeId>{2});
    CHECK(sphere(p, {NodeId(0)}, 10).size() == 5);
    Slp slp = example6();
    Decompressed d = decompress(slp, slp.initial);
    NodeId u = val_node(slp, d, {}, "u");
    CHECK(sphere(d.structure, {u}, 1).size() == 5);
    PointedNeighborhood n = neighborhood(d.structure, {u}, 1);
    CHECK(n.structure.universe_size == 5);
    CHECK(n.centers.size() == 1);

    Signature sig;
    Structure isolated(sig);
    isolated.add_node();
    isolated.add_node();
    PointedNeighborhood single = neighborhood(isolated, {NodeId(1)}, 3);
    CHECK(single.structure.universe_size == 1);
    PointedNeighborhood pair = neighborhood(isolated, {NodeId(0), NodeId(1)}, 0);
    CHECK(pair.structure.universe_size == 2);
    PointedNeighborhood repeated = neighborhood(isolated, {NodeId(0), NodeId(0)}, 0);
    CHECK(repeated.structure.universe_size == 1);
}

TEST_CASE("canonical types of the example") {
    Slp slp = example6();
    Decompressed d = decompress(slp, slp.initial);
    NodeId w1 = val_node(slp, d, {1, 1}, "w");
    NodeId w2 = val_node(slp, d, {2, 1}, "w");
    NodeId u = val_node(slp, d, {}, "u");
    auto t1 = canonical_type(neighborhood(d.structure, {w1}, 1)).type;
    auto t2 = canonical_type(neighborhood(d.structure, {w2}, 1)).type;
    auto tu = canonical_type(neighborhood(d.structure, {u}, 1)).type;
    CHECK(t1 == t2);
    CHECK_FALSE(t1 == tu);

    Signature sig;
    Structure single(sig);
    single.add_node();
    auto ts = canonical_type(single, {NodeId(0)}, 2);
    CHECK(ts.type.node_count() == 1);
    CHECK(ts.type.centers[0] == NodeId(0));
}

TEST_CASE("isomorphism search") {
    Structure p = path_structure(4);
    CHECK(find_isomorphism(p, {NodeId(0)}, p, {NodeId(0)}).has_value());
    Structure edge = path_structure(2);
    Signature sig;
    sig.add("e", 2);
    Structure loose(sig);
    loose.add_node();
    loose.add_node();
    CHECK_FALSE(find_isomorphism(edge, {}, loose, {}).has_value());

    std::mt19937_64 rng(9);
    for (int round = 0; round < 30; ++round) {
        Signature rs;
        rs.add("r", 2);
        rs.add("p", 1);
        Structure a(rs);
        const std::size_t n = 2 + rng() % 7;
        for (std::size_t i = 0; i < n; ++i) a.add_node();
        for (int t = 0; t < 8; ++t) a.add_tuple(0, {NodeId(rng() % n), NodeId(rng() % n)});
        a.add_tuple(1, {NodeId(rng() % n)});
        a.normalize();
        std::vector<NodeId> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Structure b(rs);
        for (std::size_t i = 0; i < n; ++i) b.add_node();
        for (std::size_t r = 0; r < 2; ++r)
            for (const auto& t : a.tuples[r]) {
                std::vector<NodeId> m;
                for (NodeId v : t) m.push_back(perm[v]);
                b.add_tuple(r, m);
            }
        b.normalize();
        CHECK(find_isomorphism(a, {NodeId(0)}, b, {perm[0]}).has_value());
        CHECK(canonical_type(neighborhood(a, {NodeId(0)}, 100)).type == canonical_type(neighborhood(b, {perm[0]}, 100)).type);
    }
}

TEST_CASE("arity reduction") {
    Signature sig;
    sig.add("t", 3);
    Structure s(sig);
    NodeId a = s.add_node("a"), b = s.add_node("b"), c = s.add_node("c");
    s.add_tuple(0, {a, b, c});
    s.normalize();
    Structure r = reduce_arity(s);
    CHECK(r.universe_size == 4);
    CHECK(r.signature.max_arity() == 2);
    ArityReductionNames names = arity_reduction_names(sig);
    CHECK(r.tuples[static_cast<std::size_t>(r.signature.find(names.element_of[0]))].size() == 1);
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& e = r.tuples[static_cast<std::size_t>(r.signature.find(names.position[j]))];
        REQUIRE(e.size() == 1);
        CHECK(e[0][0] == 3);
        CHECK(e[0][1] == NodeId(j));
    }
    Structure binary = path_structure(3);
    Structure same = reduce_arity(binary);
    CHECK(same.universe_size == binary.universe_size);
    CHECK(same.tuples == binary.tuples);
}

TEST_CASE("components") {
    CHECK(components(path_structure(4)).parts.size() == 1);
    Signature sig;
    Structure loose(sig);
    for (int i = 0; i < 3; ++i) loose.add_node();
    CHECK(components(loose).parts.size() == 3);

    Slp slp = example6();
    Decompressed d = decompress(slp, slp.initial);
    NodeId left = val_node(slp, d, {1}, "b1");
    NodeId right = val_node(slp, d, {2}, "b1");
    CHECK(distance(gaifman_adjacency(d.structure), left, right).value() >= 2);
    PointedNeighborhood n = neighborhood(d.structure, {left, right}, 0);
    CHECK(components(n.structure).parts.size() == 2);
}

TEST_CASE("structure text round trip") {
    Slp slp = example6();
    Structure s = decompress(slp, slp.initial).structure;
    Structure t = parse_structure(format_structure(s));
    CHECK(t.universe_size == s.universe_size);
    CHECK(t.tuples == s.tuples);
    CHECK_THROWS_AS(parse_structure("signature r/2\nnode a\ntuple r a\n"), ParseError);
}
