#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "compare.hpp"
#include "random_query.hpp"
#include "slpfo/dagpaths.hpp"
#include "slpfo/engine.hpp"
#include "slpfo/generators.hpp"
#include "slpfo/oracle.hpp"
#include "slpfo/slp.hpp"
#include "slpfo/text.hpp"

using namespace slpfo;
using namespace slpfo::testing;

namespace {

// Pinned tolerances and workload sizes.
constexpr double kFixtureSeconds = 1.0;
constexpr std::size_t kRandomDags = 200;
constexpr std::size_t kMaxDagEdges = 200;
constexpr std::size_t kMaxDagPaths = 10000;
constexpr double kPathSeconds = 30.0;
constexpr std::size_t kShortenSamples = 10000;
constexpr std::size_t kPoolSize = 300;
constexpr std::size_t kQueriesPerSlp = 2;
constexpr double kOracleSeconds = 600.0;
constexpr unsigned kPtreeHeight = 40;
constexpr double kCountSeconds = 1.0;
constexpr unsigned kCountCrossCheckHeight = 12;
constexpr double kDelayRatio = 2.0;
constexpr double kPreprocessingRatio = 2.5;
constexpr std::size_t kDistancePairs = 10000;
constexpr unsigned kSentenceMaxQ = 3;
constexpr unsigned kSentenceMaxR = 2;
constexpr std::uint64_t kSeed = 20240611;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct PoolEntry {
    Slp slp;
    Decompressed val;
};

std::vector<PoolEntry>& pool() {
    static std::vector<PoolEntry> entries = [] {
        std::vector<PoolEntry> out;
        std::mt19937_64 rng(kSeed);
        for (std::size_t i = 0; i < kPoolSize; ++i) {
            Slp slp = gen_random_apex(rng);
            Decompressed d = decompress(slp, slp.initial);
            out.push_back(PoolEntry{std::move(slp), std::move(d)});
        }
        return out;
    }();
    return entries;
}

std::string fixture(const std::string& name) { return std::string(SLPFO_FIXTURE_DIR) + "/" + name; }

Outcome fixture_structure() {
    auto t0 = Clock::now();
    Slp slp = parse_slp(read_file(fixture("example6.slp")));
    ValidationReport report = validate(slp);
    Decompressed d = decompress(slp, slp.initial);
    const Nat size = slp_size(slp);
    const double secs = seconds_since(t0);
    std::ostringstream o;
    o << "apex=" << (report.apex ? "yes" : "no") << " nodes=" << d.structure.universe_size
      << " tuples=" << d.structure.tuple_count() << " size=" << d.structure.size() << " slp_size=" << size
      << " (S 11, A 10, B 7; 26 when the binary tuple of S is left out)"
      << " time=" << secs << "s";
    bool pass = report.ok() && report.apex && d.structure.universe_size == 9 && d.structure.tuple_count() == 11 &&
                d.structure.size() == 31 && size == 28 && secs < kFixtureSeconds;
    return {pass, o.str()};
}

Outcome fixture_lex() {
    Slp slp = parse_slp(read_file(fixture("example6.slp")));
    WeightedDag w = extend_and_weight(build_dag(slp));
    const Nonterminal s = *slp.find("S");
    const Nonterminal a = *slp.find("A");
    std::ostringstream o;
    const Nat np = w.number_paths[s];
    std::string r2 = format_path(slp, s, resolve_lex(w, 2));
    std::string r4 = format_path(slp, s, resolve_lex(w, 4));
    std::string r5 = format_path(slp, s, resolve_lex(w, 5));
    Nat sum = lex_of_path(w, {2}) + lex_of_local(w, a, {1});
    o << "numberPaths(S)=" << np << " resolve_lex(2,4,5)=" << r2 << "," << r4 << "," << r5
      << " lex(S2A)+lex_A(A1B)=" << sum;
    return {np == 6 && r2 == "S1A1B" && r4 == "S2A1B" && r5 == "S3B" && sum == 4, o.str()};
}

std::vector<OrderedDag>& random_dags() {
    static std::vector<OrderedDag> dags = [] {
        std::mt19937_64 rng(kSeed + 1);
        std::vector<OrderedDag> out;
        for (std::size_t i = 0; i < kRandomDags; ++i) out.push_back(gen_random_dag(rng, kMaxDagEdges, kMaxDagPaths));
        return out;
    }();
    return dags;
}

Outcome path_enumeration() {
    auto t0 = Clock::now();
    std::size_t paths = 0, bad = 0;
    for (const OrderedDag& dag : random_dags()) {
        WeightedDag w = extend_and_weight(dag);
        DagI all(w, std::vector<bool>(w.n, true));
        std::vector<std::vector<std::uint32_t>> expected = naive_initial_paths(dag);
        MinMaxPath p(all);
        std::size_t k = 0;
        bool ok = true;
        for (bool more = p.first(); more; more = p.next(), ++k) {
            if (k >= expected.size() || dag_path(p) != expected[k] || p.weight() != k) ok = false;
        }
        if (k != expected.size()) ok = false;
        paths += expected.size();
        bad += !ok;
    }
    const double secs = seconds_since(t0);
    std::ostringstream o;
    o << random_dags().size() << " dags, " << paths << " paths, " << bad << " mismatching dags, time=" << secs << "s";
    return {bad == 0 && secs < kPathSeconds, o.str()};
}

Outcome shorten_restore() {
    std::mt19937_64 rng(kSeed + 2);
    const std::size_t per_dag = kShortenSamples / random_dags().size();
    std::size_t samples = 0, bad = 0;
    for (const OrderedDag& dag : random_dags()) {
        WeightedDag w = extend_and_weight(dag);
        DagI all(w, std::vector<bool>(w.n, true));
        std::vector<std::vector<std::uint32_t>> expected = naive_initial_paths(dag);
        std::map<std::vector<std::uint32_t>, std::size_t> rank;
        for (std::size_t i = 0; i < expected.size(); ++i) rank[expected[i]] = i;
        std::multiset<std::size_t> chosen;
        for (std::size_t i = 0; i < per_dag; ++i)
            chosen.insert(std::uniform_int_distribution<std::size_t>(0, expected.size() - 1)(rng));
        MinMaxPath p(all);
        std::size_t k = 0;
        for (bool more = p.first(); more; more = p.next(), ++k) {
            for (std::size_t c = chosen.count(k); c > 0; --c) {
                const std::vector<std::uint32_t>& path = expected[k];
                const std::size_t length = path.size() + 1;
                const std::size_t j = std::uniform_int_distribution<std::size_t>(0, length)(rng);
                MinMaxPath snapshot = p;
                const std::vector<Triple> triples = p.triples();
                bool ok = true;
                for (std::size_t step = 0; step < j; ++step) p.shorten();
                if (j > 0) {
                    std::vector<std::uint32_t> prefix(path.begin(), path.begin() + (length - j));
                    ok = p.weight() == rank.at(prefix);
                } else {
                    ok = p.weight() == k;
                }
                for (std::size_t step = 0; step < j; ++step) p.restore();
                ok = ok && p == snapshot && p.triples() == triples && p.shortened() == 0;
                ++samples;
                bad += !ok;
            }
        }
    }
    std::ostringstream o;
    o << samples << " samples, " << bad << " failures";
    return {bad == 0 && samples >= kShortenSamples, o.str()};
}

Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(kSeed + 3);
    RandomQueryParams params;
    params.max_k = 2;
    params.max_r = 2;
    params.max_rank = 2;
    RandomQuery gen(rng, params);
    std::size_t runs = 0, mismatches = 0, duplicates = 0, tuples = 0;
    std::string first_failure;
    for (PoolEntry& e : pool()) {
        for (std::size_t i = 0; i < kQueriesPerSlp; ++i) {
            const std::string text = gen.generate();
            Query q = parse_query(text, e.slp.signature);
            Engine engine(e.slp);
            EngineRun run = run_engine(engine, q);
            std::set<RepTuple> got(run.tuples.begin(), run.tuples.end());
            std::set<RepTuple> expected = run_oracle(e.val, q);
            ++runs;
            tuples += run.tuples.size();
            duplicates += run.duplicates;
            if (got != expected) {
                ++mismatches;
                if (first_failure.empty()) first_failure = " first mismatch: " + text;
            }
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream o;
    o << pool().size() << " SLPs, " << runs << " queries, " << tuples << " tuples, " << mismatches << " mismatches, "
      << duplicates << " duplicates, time=" << secs << "s" << first_failure;
    return {pool().size() >= kPoolSize && mismatches == 0 && duplicates == 0 && secs < kOracleSeconds, o.str()};
}

ARep item_rep(RhoContext& ctx, const WeightedDag& w, const MinMaxPath& p, Nonterminal a, std::uint32_t node) {
    const LocalNode& ln = ctx.node(a, node);
    std::vector<std::uint32_t> path = dag_path(p);
    path.insert(path.end(), ln.path.begin(), ln.path.end());
    return ARep{w.initial, path, ln.local};
}

Outcome type_bijection() {
    std::size_t types = 0, bad = 0;
    for (PoolEntry& e : pool()) {
        for (unsigned rho : {1u, 2u}) {
            Engine engine(e.slp);
            RhoContext& ctx = engine.context(rho);
            std::set<std::set<ARep>> streamed;
            std::size_t streamed_total = 0;
            for (TypeId t = 0; t < ctx.catalog().type_count(); ++t) {
                std::set<ARep> nodes;
                std::size_t length = 0;
                TypeStream s(ctx, t);
                while (s.next()) {
                    nodes.insert(item_rep(ctx, engine.weighted(), s.path(), s.nonterminal(), s.entry().node));
                    ++length;
                }
                ++types;
                if (nodes.size() != length || count_type_nodes(ctx, t) != length) ++bad;
                streamed_total += length;
                if (length > 0) streamed.insert(std::move(nodes));
            }
            std::set<std::set<ARep>> oracle;
            for (const auto& cls : naive_type_classes(e.val.structure, rho)) {
                std::set<ARep> nodes;
                for (NodeId v : cls) nodes.insert(e.val.reps[v]);
                oracle.insert(std::move(nodes));
            }
            if (streamed != oracle || streamed_total != e.val.structure.universe_size) ++bad;
        }
    }
    std::ostringstream o;
    o << pool().size() << " SLPs at rho 1 and 2, " << types << " realized types, " << bad << " failures";
    return {bad == 0, o.str()};
}

std::optional<TypeId> leaf_type(RhoContext& ctx) {
    for (TypeId t = 0; t < ctx.catalog().type_count(); ++t)
        if (ctx.catalog().table.get(t).node_count() == 2) return t;
    return std::nullopt;
}

Outcome ptree_counting() {
    auto t0 = Clock::now();
    Slp slp = gen_ptree(kPtreeHeight);
    Engine engine(slp);
    RhoContext& ctx = engine.context(1);
    std::optional<TypeId> leaf = leaf_type(ctx);
    Nat beta = leaf ? count_type_nodes(ctx, *leaf) : Nat(0);
    const double secs = seconds_since(t0);
    bool cross = true;
    for (unsigned h = 1; h <= kCountCrossCheckHeight; ++h) {
        Slp small = gen_ptree(h);
        Engine se(small);
        RhoContext& sctx = se.context(1);
        std::optional<TypeId> sl = leaf_type(sctx);
        Decompressed d = decompress(small, small.initial);
        Adjacency adj = gaifman_adjacency(d.structure);
        std::size_t oracle = 0;
        for (const auto& cls : naive_type_classes(d.structure, 1))
            if (adj[cls.front()].size() == 1) oracle = cls.size();
        if (!sl || count_type_nodes(sctx, *sl) != oracle || oracle != (std::size_t(1) << h)) cross = false;
    }
    std::ostringstream o;
    o << "beta(leaf type, height " << kPtreeHeight << ")=" << beta << " time=" << secs
      << "s, oracle cross-check heights 1.." << kCountCrossCheckHeight << ": " << (cross ? "equal" : "DIFFERENT");
    return {beta == (Nat(1) << kPtreeHeight) && secs < kCountSeconds && cross, o.str()};
}

const char* kPtreeQuery = "(local :r 1 :vars (x) (exists y (exists z (and (e x y) (e x z) (not (= y z))))))";

Outcome constant_delay() {
    std::vector<std::uint64_t> delays;
    std::vector<std::string> parts;
    for (unsigned h : {6u, 10u, 14u}) {
        Slp slp = gen_ptree(h);
        Query q = parse_query(kPtreeQuery, slp.signature);
        Engine engine(slp);
        QueryEnumerator e(engine, q);
        std::vector<LexRep> out;
        while (e.next(out)) {
        }
        delays.push_back(e.stats().max_delay);
        parts.push_back("h" + std::to_string(h) + ": " + std::to_string(e.stats().outputs) + " outputs, max delay " +
                        std::to_string(e.stats().max_delay));
    }
    const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
    const double ratio = *lo == 0 ? 0 : static_cast<double>(*hi) / static_cast<double>(*lo);
    std::ostringstream o;
    for (const auto& p : parts) o << p << "; ";
    o << "ratio=" << ratio;
    return {*lo > 0 && ratio <= kDelayRatio, o.str()};
}

std::uint64_t preprocessing_steps(unsigned n) {
    Slp slp = gen_ptree(n);
    Query q = parse_query(kPtreeQuery, slp.signature);
    Engine engine(slp);
    QueryEnumerator e(engine, q);
    return engine.preprocessing_steps;
}

Outcome linear_preprocessing() {
    std::ostringstream o;
    bool pass = true;
    for (unsigned n : {8u, 16u, 32u}) {
        const std::uint64_t a = preprocessing_steps(n);
        const std::uint64_t b = preprocessing_steps(2 * n);
        const double ratio = static_cast<double>(b) / static_cast<double>(a);
        o << "steps(" << 2 * n << ")/steps(" << n << ")=" << b << "/" << a << "=" << ratio << "; ";
        pass = pass && ratio <= kPreprocessingRatio;
    }
    return {pass, o.str()};
}

Outcome distance_checks() {
    std::mt19937_64 rng(kSeed + 4);
    std::size_t pairs = 0, near = 0, bad = 0, audit = 0;
    const std::size_t per_slp = (kDistancePairs + pool().size() - 1) / pool().size();
    for (PoolEntry& e : pool()) {
        const unsigned r = static_cast<unsigned>(std::uniform_int_distribution<int>(0, 2)(rng));
        const unsigned rh = rho(r, 2);
        Engine engine(e.slp);
        RhoContext& ctx = engine.context(rh);
        struct Item {
            MinMaxPath path;
            Nonterminal a;
            std::uint32_t entry;
            NodeId node;
        };
        std::vector<Item> items;
        std::vector<std::ptrdiff_t> item_of(e.val.structure.universe_size, -1);
        for (TypeId t = 0; t < ctx.catalog().type_count(); ++t) {
            TypeStream s(ctx, t);
            while (s.next()) {
                ARep rep = item_rep(ctx, engine.weighted(), s.path(), s.nonterminal(), s.entry().node);
                NodeId v = *e.val.find(rep.path, rep.local);
                item_of[v] = static_cast<std::ptrdiff_t>(items.size());
                items.push_back(Item{s.path(), s.nonterminal(), s.entry_index(), v});
            }
        }
        Adjacency adj = gaifman_adjacency(e.val.structure);
        const unsigned bound = 2 * r + 1;
        for (std::size_t i = 0; i < per_slp && !items.empty(); ++i) {
            std::size_t x = std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng);
            std::size_t y = std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng);
            if (std::uniform_int_distribution<int>(0, 1)(rng)) {
                std::vector<Distance> d = bfs_distances(adj, {items[x].node}, bound + 1);
                std::vector<std::size_t> close;
                for (NodeId v = 0; v < d.size(); ++v)
                    if (d[v] && item_of[v] >= 0) close.push_back(static_cast<std::size_t>(item_of[v]));
                y = close[std::uniform_int_distribution<std::size_t>(0, close.size() - 1)(rng)];
            }
            MinMaxPath px = items[x].path, py = items[y].path;
            const MinMaxPath sx = px, sy = py;
            ItemRef rx{&px, items[x].a, &ctx.catalog().valid[items[x].a][items[x].entry], {}};
            ItemRef ry{&py, items[y].a, &ctx.catalog().valid[items[y].a][items[y].entry], {}};
            rx.nodes = item_nodes(*rx.entry, nullptr);
            ry.nodes = item_nodes(*ry.entry, nullptr);
            const bool got = distance_leq(engine, ctx, rx, ry, bound, 3 * rh - r);
            const bool expected = naive_distance_leq(adj, items[x].node, items[y].node, bound);
            ++pairs;
            near += expected;
            bad += got != expected;
            audit += !(px == sx && py == sy && px.triples() == sx.triples() && py.triples() == sy.triples() &&
                       px.shortened() == 0 && py.shortened() == 0);
        }
    }
    std::ostringstream o;
    o << pairs << " pairs (" << near << " within the bound), " << bad << " disagreements, " << audit
      << " restore audit failures";
    return {pairs >= kDistancePairs && bad == 0 && audit == 0, o.str()};
}

Outcome sentences() {
    std::mt19937_64 rng(kSeed + 5);
    RandomQueryParams params;
    params.max_q = kSentenceMaxQ;
    params.max_r = kSentenceMaxR;
    params.max_sentence_r = kSentenceMaxR;
    params.max_rank = 2;
    RandomQuery gen(rng, params);
    std::size_t checks = 0, bad = 0, truths = 0;
    std::string first_failure;
    for (PoolEntry& e : pool()) {
        for (int i = 0; i < 2; ++i) {
            const std::string text = gen.sentence();
            Query q = parse_query(text, e.slp.signature);
            Engine engine(e.slp);
            const bool got = eval_sentence(engine, q, *q.root);
            const bool expected = naive_sentence(e.val.structure, q, *q.root);
            ++checks;
            truths += expected;
            if (got != expected) {
                ++bad;
                if (first_failure.empty()) first_failure = " first mismatch: " + text;
            }
        }
    }
    std::ostringstream o;
    o << checks << " sentences (" << truths << " true), " << bad << " disagreements" << first_failure;
    return {bad == 0, o.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"fixture structure and sizes", fixture_structure},
        {"fixture lex values", fixture_lex},
        {"path enumeration vs naive order", path_enumeration},
        {"shorten/restore prefixes", shorten_restore},
        {"enumeration vs oracle on random apex SLPs", oracle_equivalence},
        {"type streams vs oracle type classes", type_bijection},
        {"leaf count of ptree 40", ptree_counting},
        {"constant delay over ptree heights", constant_delay},
        {"linear preprocessing over ptree", linear_preprocessing},
        {"distance checks vs BFS", distance_checks},
        {"basic local sentences vs oracle", sentences},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failed += !out.pass;
        std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    out.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
