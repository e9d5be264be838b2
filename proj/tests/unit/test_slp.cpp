#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "slpfo/errors.hpp"
#include "slpfo/generators.hpp"
#include "slpfo/slp.hpp"

using namespace slpfo;

TEST_CASE("validation of the example and its mutants") {
    Slp slp = example6();
    ValidationReport ok = validate(slp);
    CHECK(ok.ok());
    CHECK(ok.apex);
    CHECK(ok.acyclic);

    Slp mutant = parse_slp(read_file(fixture_path("nonapex.slp")));
    ValidationReport bad = validate(mutant);
    CHECK_FALSE(bad.apex);
    CHECK_THROWS_AS(require_valid(mutant, true), ApexRequired);

    Slp cyclic = parse_slp(read_file(fixture_path("cyclic.slp")));
    ValidationReport cyc = validate(cyclic);
    CHECK_FALSE(cyc.acyclic);
    CHECK_FALSE(cyc.ok());
}

TEST_CASE("slp size") {
    Slp single = parse_slp("signature r/2\ninitial S\nnonterminal S rank 0\nnode S a\n");
    CHECK(slp_size(single) == 1);
    Slp slp = example6();
    CHECK(slp_size(slp) == 28);
    std::string text = read_file(fixture_path("example6.slp"));
    text += "ref S B 1=v 2=u\n";
    CHECK(slp_size(parse_slp(text)) == 31);
}

TEST_CASE("dag of the example") {
    Slp slp = example6();
    OrderedDag dag = build_dag(slp);
    const Nonterminal s = *slp.find("S"), a = *slp.find("A"), b = *slp.find("B");
    CHECK(dag.children[s] == std::vector<std::uint32_t>{a, a, b});
    CHECK(dag.children[a] == std::vector<std::uint32_t>{b});
    CHECK(dag.children[b].empty());
    CHECK(build_dag(gen_ptree(0)).edge_count() == 0);
}

TEST_CASE("decompression of the example") {
    Slp slp = example6();
    Decompressed db = decompress(slp, *slp.find("B"));
    CHECK(db.structure.universe_size == 3);
    CHECK(db.structure.tuple_count() == 2);
    Decompressed da = decompress(slp, *slp.find("A"));
    CHECK(da.structure.universe_size == 4);
    CHECK(da.structure.tuple_count() == 4);
    Decompressed ds = decompress(slp, *slp.find("S"));
    CHECK(ds.structure.universe_size == 9);
    CHECK(ds.structure.tuple_count() == 11);
    CHECK(ds.structure.size() == 31);
    CHECK(val_node_count(slp, slp.initial) == 9);
    CHECK_THROWS_AS(decompress(gen_ptree(20), 0, 1000), CapExceeded);
}

TEST_CASE("degree from productions") {
    Slp slp = example6();
    CHECK(val_degree(slp) == 4);
    Slp flat = parse_slp("signature e/2\ninitial S\nnonterminal S rank 0\nnode S a\nnode S b\nnode S c\ntuple S e a b\ntuple S e a c\n");
    CHECK(val_degree(flat) == 2);
}

TEST_CASE("embedding along a path") {
    Slp slp = example6();
    const Nonterminal s = *slp.find("S"), b = *slp.find("B");
    ARep w{b, {}, local_id(slp, "B", "w")};
    ARep out = embed(slp, s, {2, 1}, w);
    CHECK(out.path == std::vector<std::uint32_t>{2, 1});
    CHECK(out.local == local_id(slp, "B", "w"));
    ARep contact{b, {}, local_id(slp, "B", "s")};
    ARep up = embed(slp, s, {2, 1}, contact);
    CHECK(up.path == std::vector<std::uint32_t>{2});
    CHECK(up.local == local_id(slp, "A", "b1"));
    ARep same = embed(slp, b, {}, w);
    CHECK(same == w);
}

TEST_CASE("arity reduction of SLPs") {
    Slp slp = example6();
    CHECK(format_slp(reduce_arity_slp(slp)) == format_slp(slp));
    Slp ternary = parse_slp("signature t/3\ninitial S\nnonterminal S rank 0\nnode S a\nnode S b\nnode S c\ntuple S t a b c\n");
    Slp reduced = reduce_arity_slp(ternary);
    CHECK(reduced.signature.max_arity() == 2);
    Decompressed d = decompress(reduced, reduced.initial);
    CHECK(d.structure.universe_size == 4);
    CHECK(d.structure.tuple_count() == 7);
}

TEST_CASE("slp text round trip") {
    Slp slp = example6();
    CHECK(format_slp(parse_slp(format_slp(slp))) == format_slp(slp));
    CHECK_THROWS_AS(parse_slp("signature r/2\ninitial S\nnonterminal S rank 0\ntuple S r a b\n"), ParseError);
}
