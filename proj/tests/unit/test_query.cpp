#include "doctest.h"
#include "fixtures.hpp"
#include "slpfo/errors.hpp"
#include "slpfo/oracle.hpp"
#include "slpfo/query.hpp"

using namespace slpfo;

TEST_CASE("parsing local formulas and sentences") {
    Slp slp = example6();
    Query q = parse_query("(local :r 1 :vars (x) (exists y (r1 x y)))", slp.signature);
    CHECK(q.root->kind == QueryKind::Local);
    CHECK(q.k() == 1);
    CHECK(q.radius() == 1);
    Query s = parse_query("(scattered :q 2 :r 1 (r1 z z))", slp.signature);
    CHECK(s.root->kind == QueryKind::Scattered);
    CHECK(s.root->q == 2);
    CHECK(s.k() == 0);
    CHECK_THROWS_AS(parse_query("(local :r 1 :vars (x) (r1 x))", slp.signature), ParseError);
    CHECK_THROWS_AS(parse_query("(local :r 1 :vars (x) (q x))", slp.signature), ParseError);
    CHECK_THROWS_AS(parse_query("(local :r 1 :vars (x) (r1 x y))", slp.signature), ParseError);
}

TEST_CASE("quantifier rank") {
    Slp slp = example6();
    auto rank = [&](const std::string& f) {
        return quantifier_rank(*parse_query("(fo " + f + ")", slp.signature).root->formula);
    };
    CHECK(rank("(r1 a b)") == 0);
    CHECK(rank("(exists x (forall y (r1 x y)))") == 2);
    CHECK(rank("(not (and (exists x (r1 x x)) (r1 a a)))") == 1);
}

TEST_CASE("relativization") {
    Slp slp = example6();
    Query q = parse_query("(local :r 2 :vars (x y) (and (r1 x y) (not (= x y))))", slp.signature);
    CHECK(format_formula(*q.root->formula, slp.signature, q.slot_names) ==
          format_formula(*q.root->raw, slp.signature, q.slot_names));
    Query e = parse_query("(local :r 2 :vars (x) (exists y (r1 x y)))", slp.signature);
    CHECK(e.root->formula->guard == std::optional<unsigned>(2));
    CHECK_FALSE(e.root->raw->guard.has_value());
}

TEST_CASE("rho values") {
    CHECK(rho(1, 1) == 1);
    CHECK(rho(1, 2) == 4);
    CHECK(rho(2, 3) == 12);
    CHECK_THROWS_AS(rho(1, 0), InvalidArgument);
}

TEST_CASE("equality plans") {
    CHECK(dedup_plan(1).size() == 1);
    CHECK(dedup_plan(2).size() == 2);
    CHECK(dedup_plan(3).size() == 5);
    CHECK(dedup_plan(4).size() == 15);
    for (const DedupPlan& p : dedup_plan(3)) CHECK(p.class_of[0] == 0);
}

TEST_CASE("local formulas on types") {
    Slp slp = example6();
    SlpIndex index(slp);
    TypeCatalog cat = build_catalog(index, 1);
    const Nonterminal s = *slp.find("S");
    const NodeId u = local_id(slp, "S", "u");
    Query q = parse_query("(local :r 1 :vars (x) (exists y (r1 x y)))", slp.signature);
    Query never = parse_query("(local :r 1 :vars (x) (not (= x x)))", slp.signature);
    DedupPlan plan = dedup_plan(1)[0];
    for (const ValidNodeEntry& v : cat.valid[s]) {
        const LocalNode& n = cat.expansions[s].ball.nodes[v.node];
        TypeModel tm(cat.table.get(v.type));
        if (n.path.empty() && n.local == u) CHECK(eval_local_on_type(q, *q.root, tm, plan));
        CHECK_FALSE(eval_local_on_type(never, *never.root, tm, plan));
    }
}

TEST_CASE("candidate types for one variable") {
    Slp slp = example6();
    SlpIndex index(slp);
    TypeCatalog cat = build_catalog(index, rho(1, 1));
    CandidateSet c = candidate_types(cat, 1, 1);
    Decompressed d = decompress(slp, slp.initial);
    CHECK(c.types.size() == naive_type_classes(d.structure, 1).size());
    for (const CandidateType& t : c.types) {
        CHECK(t.groups.size() == 1);
        CHECK(c.factorizations(t).size() >= 1);
    }
}

TEST_CASE("query text round trip") {
    Slp slp = example6();
    const std::string text =
        "(and (local :r 1 :vars (x y) (or (r1 x y) (exists z (and (r1 x z) (r1 z y))))) "
        "(not (scattered :q 2 :r 1 (exists w (r1 z w)))))";
    Query q = parse_query(text, slp.signature);
    Query again = parse_query(format_query(q, slp.signature), slp.signature);
    CHECK(format_query(again, slp.signature) == format_query(q, slp.signature));
    CHECK(q.k() == 2);
}
