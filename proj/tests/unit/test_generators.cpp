#include "doctest.h"
#include "slpfo/generators.hpp"
#include "slpfo/oracle.hpp"
#include "slpfo/slp.hpp"

using namespace slpfo;

TEST_CASE("ptree 3 decompresses to the 15-node tree with 8 leaves") {
    Slp slp = gen_ptree(3);
    require_valid(slp, true);
    Decompressed d = decompress(slp, slp.initial);
    CHECK(d.structure.universe_size == 15);
    Adjacency adj = gaifman_adjacency(d.structure);
    std::size_t leaves = 0;
    for (const auto& n : adj) leaves += n.size() == 1;
    CHECK(leaves == 8);
    CHECK(val_node_count(gen_ptree(40), 0) == (Nat(1) << 41) - 1);
}

TEST_CASE("chain 1 is a single edge") {
    Slp slp = gen_chain(1);
    Decompressed d = decompress(slp, slp.initial);
    CHECK(d.structure.universe_size == 2);
    CHECK(d.structure.tuple_count() == 1);
    Decompressed d5 = decompress(gen_chain(5), 0);
    CHECK(d5.structure.universe_size == 6);
}

TEST_CASE("grid-strip is an apex ladder") {
    for (unsigned n = 0; n <= 3; ++n) {
        Slp slp = gen_grid_strip(n);
        require_valid(slp, true);
        Decompressed d = decompress(slp, slp.initial);
        const std::size_t rungs = 3 * (std::size_t(1) << n) - 1;
        CHECK(d.structure.universe_size == 2 * rungs);
        CHECK(d.structure.tuple_count() == rungs + 2 * (rungs - 1));
        CHECK(val_degree(slp) == (n == 0 ? 2u : 3u));
    }
}

TEST_CASE("random apex SLPs respect their bounds and are deterministic") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 a(seed), b(seed);
        Slp x = gen_random_apex(a);
        Slp y = gen_random_apex(b);
        CHECK(format_slp(x) == format_slp(y));
        require_valid(x, true);
        CHECK(x.nonterminal_count() <= 30);
        CHECK(val_node_count(x, x.initial) <= 5000);
        CHECK(val_degree(x) <= 4);
        CHECK(max_degree(decompress(x, x.initial).structure) == val_degree(x));
    }
}

TEST_CASE("random dags stay within their bounds") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        OrderedDag dag = gen_random_dag(rng);
        CHECK(dag.edge_count() <= 200);
        CHECK(naive_initial_paths(dag).size() <= 10000);
    }
}
