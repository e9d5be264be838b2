#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "slpfo/dagpaths.hpp"
#include "slpfo/errors.hpp"

using namespace slpfo;

namespace {

std::string path_text(const Slp& slp, const std::vector<std::uint32_t>& p) { return format_path(slp, slp.initial, p); }

std::vector<bool> only(const Slp& slp, const std::vector<std::string>& names) {
    std::vector<bool> u(slp.nonterminal_count(), false);
    for (const auto& n : names) u[*slp.find(n)] = true;
    return u;
}

}  // namespace

TEST_CASE("weighted dag of the example") {
    Slp slp = example6();
    WeightedDag w = extend_and_weight(build_dag(slp));
    Nonterminal s = *slp.find("S"), a = *slp.find("A"), b = *slp.find("B");
    CHECK(w.number_paths[s] == 6);
    CHECK(w.number_paths[a] == 2);
    CHECK(w.number_paths[b] == 1);
    CHECK(w.edge_weight[s][0] == 0);
    CHECK(w.edge_weight[s][1] == 1);
    CHECK(w.edge_weight[s][2] == 3);
    CHECK(w.edge_weight[s][3] == 5);
    CHECK(w.edge_weight[a][1] == 1);
    CHECK(w.paths_to[s] == 1);
    CHECK(w.paths_to[a] == 2);
    CHECK(w.paths_to[b] == 3);
    CHECK(path_text(slp, resolve_lex(w, 0)) == "S");
    CHECK(path_text(slp, resolve_lex(w, 2)) == "S1A1B");
    CHECK(path_text(slp, resolve_lex(w, 4)) == "S2A1B");
    CHECK(path_text(slp, resolve_lex(w, 5)) == "S3B");
    CHECK(lex_of_path(w, {2}) + lex_of_local(w, a, {1}) == 4);
    CHECK_THROWS_AS(resolve_lex(w, 6), InvalidArgument);
}

TEST_CASE("contracted dag and enumeration for useful B") {
    Slp slp = example6();
    WeightedDag w = extend_and_weight(build_dag(slp));
    DagI d(w, only(slp, {"B"}));
    REQUIRE(!d.empty());
    CHECK(!d.stub());
    CHECK(d.out(d.initial()).size() == 3);
    std::vector<Nat> ws;
    for (auto e : d.out(d.initial())) ws.push_back(d.edge(e).weight);
    CHECK(ws == std::vector<Nat>{2, 4, 5});

    MinMaxPath p(d);
    REQUIRE(p.first());
    CHECK(p.weight() == 2);
    CHECK(p.triples().size() == 1);
    CHECK(p.triples()[0].kind == TripleKind::Min);
    REQUIRE(p.next());
    CHECK(p.weight() == 4);
    CHECK(p.triples()[0].kind == TripleKind::Edge);
    REQUIRE(p.next());
    CHECK(p.weight() == 5);
    CHECK(p.triples()[0].kind == TripleKind::Max);
    CHECK(!p.next());
}

TEST_CASE("shorten walks back through prefixes") {
    Slp slp = example6();
    WeightedDag w = extend_and_weight(build_dag(slp));
    DagI d(w, only(slp, {"B"}));
    MinMaxPath p(d);
    REQUIRE(p.first());
    REQUIRE(p.next());
    auto before = p.triples();
    std::vector<Nat> ws{p.weight()};
    for (int i = 0; i < 3; ++i) {
        p.shorten();
        ws.push_back(p.weight());
    }
    CHECK(ws == std::vector<Nat>{4, 4, 3, 0});
    CHECK_THROWS_AS(p.shorten(), InvalidArgument);
    for (int i = 0; i < 3; ++i) p.restore();
    CHECK(p.triples() == before);
    CHECK(p.weight() == 4);
}

TEST_CASE("full dag enumerates every initial path in order") {
    Slp slp = example6();
    WeightedDag w = extend_and_weight(build_dag(slp));
    DagI d(w, std::vector<bool>(3, true));
    MinMaxPath p(d);
    REQUIRE(p.first());
    int k = 0;
    do {
        CHECK(p.weight() == k);
        ++k;
    } while (p.next());
    CHECK(k == 6);
}
