#include <random>
#include <vector>

#include "doctest.h"
#include "slpfo/dagpaths.hpp"
#include "slpfo/generators.hpp"
#include "slpfo/levelancestor.hpp"
#include "slpfo/oracle.hpp"

using namespace slpfo;

namespace {

std::uint32_t brute_ancestor(const std::vector<std::uint32_t>& parent, std::uint32_t v, std::uint32_t steps) {
    while (steps-- > 0) v = parent[v];
    return v;
}

}  // namespace

TEST_CASE("level ancestor agrees with walking parent pointers") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 40; ++round) {
        const std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(1, 400)(rng);
        std::vector<std::uint32_t> parent(n, LevelAncestor::kNone);
        for (std::uint32_t v = 1; v < n; ++v) {
            if (std::uniform_int_distribution<int>(0, 19)(rng) == 0) continue;
            const std::uint32_t lo = v > 3 ? v - 3 : 0;
            const bool near = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
            parent[v] = std::uniform_int_distribution<std::uint32_t>(near ? lo : 0, v - 1)(rng);
        }
        LevelAncestor la(parent);
        for (std::uint32_t v = 0; v < n; ++v) {
            std::uint32_t depth = 0;
            for (std::uint32_t u = v; parent[u] != LevelAncestor::kNone; u = parent[u]) ++depth;
            REQUIRE(la.depth(v) == depth);
            for (std::uint32_t d = 0; d <= depth; ++d) {
                const std::uint32_t anc = brute_ancestor(parent, v, depth - d);
                REQUIRE(la.ancestor_at(v, d) == anc);
                if (d < depth) REQUIRE(la.next_link(anc, v) == brute_ancestor(parent, v, depth - d - 1));
            }
        }
    }
}

TEST_CASE("inactive nodes are ignored") {
    std::vector<std::uint32_t> parent = {LevelAncestor::kNone, 0, 1, 0, 3};
    std::vector<bool> active = {true, true, true, false, false};
    LevelAncestor la(parent, active);
    CHECK(la.depth(2) == 2);
    CHECK(la.ancestor_at(2, 0) == 0);
    CHECK(la.next_link(0, 2) == 1);
}

TEST_CASE("resolve and lex are inverse on random dags") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 30; ++round) {
        OrderedDag dag = gen_random_dag(rng, 80, 3000);
        WeightedDag w = extend_and_weight(dag);
        std::vector<std::vector<std::uint32_t>> paths = naive_initial_paths(dag);
        REQUIRE(count_initial_paths(w) == paths.size());
        for (std::size_t i = 0; i < paths.size(); ++i) {
            REQUIRE(resolve_lex(w, Nat(i)) == paths[i]);
            REQUIRE(lex_of_path(w, paths[i]) == i);
        }
        for (std::size_t i = 0; i < paths.size(); i += 7) {
            const std::vector<std::uint32_t>& p = paths[i];
            for (std::size_t cut = 0; cut <= p.size(); ++cut) {
                std::vector<std::uint32_t> head(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(cut));
                std::vector<std::uint32_t> tail(p.begin() + static_cast<std::ptrdiff_t>(cut), p.end());
                std::uint32_t mid = dag.initial;
                for (std::uint32_t c : head) mid = dag.children[mid][c - 1];
                REQUIRE(lex_of_path(w, p) == lex_of_path(w, head) + lex_of_local(w, mid, tail));
            }
        }
    }
}

TEST_CASE("leaf paths of the perfect tree family") {
    Slp slp = gen_ptree(40);
    WeightedDag w = extend_and_weight(build_dag(slp));
    Nat leaves = 1;
    for (int i = 0; i < 40; ++i) leaves *= 2;
    bool found = false;
    for (std::uint32_t a = 0; a < w.n; ++a) found = found || w.paths_to[a] == leaves;
    CHECK(found);
}
