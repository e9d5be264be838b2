#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "slpfo/canonical.hpp"
#include "slpfo/expansion.hpp"
#include "slpfo/generators.hpp"
#include "slpfo/oracle.hpp"

using namespace slpfo;

TEST_CASE("expansion of B with radius one") {
    Slp slp = example6();
    SlpIndex index(slp);
    Expansion e = compute_expansion(index, *slp.find("B"), 1);
    CHECK(e.size() == 3);
    std::size_t boundary = 0;
    for (std::uint32_t i = 0; i < e.size(); ++i) boundary += e.boundary[i];
    CHECK(boundary == 2);
    TypeTable table(slp.signature);
    CHECK(valid_nodes(compute_expansion(index, *slp.find("B"), 3), 1, table).empty());
}

TEST_CASE("expansion of S with radius one") {
    Slp slp = example6();
    SlpIndex index(slp);
    Expansion e = compute_expansion(index, *slp.find("S"), 1);
    CHECK(e.size() == 7);
    std::size_t boundary = 0;
    for (std::uint32_t i = 0; i < e.size(); ++i) boundary += e.boundary[i];
    CHECK(boundary == 5);
}

TEST_CASE("zero-radius expansion holds exactly the internal nodes") {
    Slp slp = example6();
    SlpIndex index(slp);
    for (Nonterminal a = 0; a < slp.nonterminal_count(); ++a) {
        Expansion e = compute_expansion(index, a, 0);
        const Production& p = slp.at(a);
        std::size_t internal = 0;
        for (NodeId v = 0; v < p.local.universe_size; ++v) internal += !p.is_contact(v);
        CHECK(e.size() == internal);
        for (std::uint32_t i = 0; i < e.size(); ++i) {
            CHECK(e.ball.nodes[i].path.empty());
            CHECK(e.internal[i]);
            CHECK(e.boundary[i]);
        }
    }
}

TEST_CASE("valid node of u and the useful set of its type") {
    Slp slp = example6();
    SlpIndex index(slp);
    TypeCatalog cat = build_catalog(index, 1);
    const Nonterminal s = *slp.find("S");
    const NodeId u = local_id(slp, "S", "u");
    std::optional<TypeId> tu;
    for (const ValidNodeEntry& v : cat.valid[s])
        if (cat.expansions[s].ball.nodes[v.node].path.empty() && cat.expansions[s].ball.nodes[v.node].local == u)
            tu = v.type;
    REQUIRE(tu.has_value());
    std::vector<Nonterminal> useful = useful_nonterminals(cat, *tu);
    CHECK(std::find(useful.begin(), useful.end(), s) != useful.end());
}

TEST_CASE("realized types equal the oracle type classes") {
    Slp slp = example6();
    SlpIndex index(slp);
    TypeCatalog cat = build_catalog(index, 1);
    Decompressed d = decompress(slp, slp.initial);
    CHECK(cat.type_count() == naive_type_classes(d.structure, 1).size());

    Slp tree = gen_ptree(4);
    SlpIndex tindex(tree);
    TypeCatalog tcat = build_catalog(tindex, 1);
    Decompressed td = decompress(tree, tree.initial);
    CHECK(tcat.type_count() == naive_type_classes(td.structure, 1).size());

    Slp one = parse_slp("signature e/2\ninitial S\nnonterminal S rank 0\nnode S a\n");
    SlpIndex oindex(one);
    CHECK(build_catalog(oindex, 2).type_count() == 1);
}

TEST_CASE("local spheres") {
    Slp slp = example6();
    SlpIndex index(slp);
    const Nonterminal s = *slp.find("S");
    ARep w{s, {3}, local_id(slp, "B", "w")};
    LocalSphere sp = local_sphere(index, s, w, 1);
    std::set<std::pair<std::vector<std::uint32_t>, NodeId>> got;
    for (const LocalNode& n : sp.nodes) got.insert({n.path, n.local});
    std::set<std::pair<std::vector<std::uint32_t>, NodeId>> expected{
        {{3}, local_id(slp, "B", "w")}, {{}, local_id(slp, "S", "u")}, {{}, local_id(slp, "S", "v")}};
    CHECK(got == expected);
    CHECK(local_sphere(index, s, w, 0).nodes.size() == 1);

    std::mt19937_64 rng(31);
    RandomApexParams params;
    params.max_nodes = 300;
    for (int round = 0; round < 20; ++round) {
        Slp r = gen_random_apex(rng, params);
        SlpIndex ri(r);
        Decompressed d = decompress(r, r.initial);
        for (NodeId v = 0; v < d.structure.universe_size; v += 3) {
            for (unsigned radius : {1u, 2u}) {
                LocalSphere ls = local_sphere(ri, r.initial, d.reps[v], radius);
                PointedNeighborhood on = neighborhood(d.structure, {v}, radius);
                CHECK(ls.neighborhood.structure.universe_size == on.structure.universe_size);
                CHECK(canonical_type(ls.neighborhood).type == canonical_type(on).type);
            }
        }
    }
}
