#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "slpfo/dagpaths.hpp"
#include "slpfo/engine.hpp"
#include "slpfo/errors.hpp"
#include "slpfo/generators.hpp"
#include "slpfo/oracle.hpp"
#include "slpfo/output.hpp"
#include "slpfo/query.hpp"
#include "slpfo/slp.hpp"
#include "slpfo/text.hpp"

using namespace slpfo;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct QuerySource {
    std::string text;
    std::string file;

    std::string get() const {
        if (!text.empty() && !file.empty()) throw InvalidArgument("give either --query or --query-file");
        if (!file.empty()) return read_file(file);
        if (text.empty()) throw InvalidArgument("a query is required (--query or --query-file)");
        return text;
    }
};

void add_query_options(CLI::App* cmd, QuerySource& q) {
    cmd->add_option("--query", q.text, "Query text");
    cmd->add_option("--query-file", q.file, "File holding the query")->check(CLI::ExistingFile);
}

bool looks_like_slp(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream words(line);
        std::string head;
        words >> head;
        if (head == "nonterminal" || head == "initial") return true;
    }
    return false;
}

void print_tuple(const PrintedTuple& t, const std::string& format) {
    std::cout << (format == "json" ? format_json_line(t) : format_tsv(t)) << '\n';
}

std::string join_paths(const Slp& slp, const std::vector<ARep>& reps) {
    std::string out;
    for (const ARep& r : reps) out += (out.empty() ? "" : "\t") + format_rep(slp, r);
    return out;
}

int cmd_validate(const std::string& file) {
    Slp slp = parse_slp(read_file(file));
    ValidationReport report = validate(slp);
    std::cout << format_report(slp, report);
    return report.ok() && report.apex ? 0 : kExitFailure;
}

int cmd_decompress(const std::string& file, const std::string& start) {
    Slp slp = parse_slp(read_file(file));
    require_valid(slp, false);
    Nonterminal a = slp.initial;
    if (!start.empty()) {
        auto found = slp.find(start);
        if (!found) throw InvalidArgument("unknown nonterminal " + start);
        a = *found;
    }
    Decompressed d = decompress(slp, a, decompress_cap_from_env());
    std::cout << "# nodes " << d.structure.universe_size << " tuples " << d.structure.tuple_count() << " size "
              << d.structure.size() << '\n';
    std::cout << format_structure(d.structure);
    return 0;
}

int cmd_stats(const std::string& file, unsigned rho_value) {
    Slp slp = parse_slp(read_file(file));
    ValidationReport report = validate(slp);
    if (!report.ok()) {
        std::cout << format_report(slp, report);
        return kExitFailure;
    }
    WeightedDag w = extend_and_weight(build_dag(slp));
    std::cout << "nonterminals: " << slp.nonterminal_count() << '\n';
    std::cout << "slp_size: " << slp_size(slp) << '\n';
    std::cout << "apex: " << (report.apex ? "yes" : "no") << '\n';
    std::cout << "val_nodes: " << val_node_count(slp, slp.initial) << '\n';
    std::cout << "initial_paths: " << count_initial_paths(w) << '\n';
    if (!report.apex) return 0;
    std::cout << "val_degree: " << val_degree(slp) << '\n';
    SlpIndex index(slp);
    TypeCatalog cat = build_catalog(index, rho_value);
    std::cout << "rho: " << rho_value << '\n';
    std::cout << "realized_types: " << cat.type_count() << '\n';
    std::cout << "nonterminal\treachable\texpansion_nodes\tvalid_nodes\n";
    for (Nonterminal a = 0; a < slp.nonterminal_count(); ++a)
        std::cout << slp.at(a).name << '\t' << (cat.reachable[a] ? "yes" : "no") << '\t' << cat.expansions[a].size()
                  << '\t' << cat.valid[a].size() << '\n';
    return 0;
}

int cmd_paths(const std::string& file, std::optional<unsigned> type, unsigned rho_value, std::size_t limit,
              bool verify) {
    Slp slp = parse_slp(read_file(file));
    Engine engine(slp);
    const WeightedDag& w = engine.weighted();
    std::vector<std::vector<std::uint32_t>> streamed;
    std::vector<Nat> weights;
    auto emit = [&](const MinMaxPath& p) {
        std::vector<std::uint32_t> path = dag_path(p);
        std::cout << p.weight() << '\t' << format_path(slp, w.initial, path) << '\n';
        streamed.push_back(std::move(path));
        weights.push_back(p.weight());
    };
    std::vector<bool> useful(w.n, true);
    std::unique_ptr<DagI> all;
    if (type) {
        RhoContext& ctx = engine.context(rho_value);
        if (*type >= ctx.catalog().type_count()) throw InvalidArgument("type id out of range");
        for (Nonterminal a = 0; a < w.n; ++a) useful[a] = !ctx.catalog().lists[*type][a].empty();
        all = std::make_unique<DagI>(w, useful);
    } else {
        all = std::make_unique<DagI>(w, useful);
    }
    MinMaxPath p(*all);
    for (bool ok = p.first(); ok && streamed.size() < limit; ok = p.next()) emit(p);
    std::cout << kEndOfEnumeration << '\n';
    if (!verify) return 0;
    std::vector<std::vector<std::uint32_t>> expected;
    for (auto& q : naive_initial_paths(build_dag(slp)))
        if (useful[path_end(slp, slp.initial, q)]) expected.push_back(std::move(q));
    if (expected.size() > limit) expected.resize(limit);
    bool ok = expected == streamed;
    for (std::size_t i = 0; ok && i < streamed.size(); ++i) ok = lex_of_path(w, streamed[i]) == weights[i];
    std::cerr << "verify: " << (ok ? "ok" : "MISMATCH") << " (" << streamed.size() << " paths)\n";
    return ok ? 0 : kExitFailure;
}

int cmd_count(const std::string& file, std::optional<unsigned> type, unsigned rho_value) {
    Slp slp = parse_slp(read_file(file));
    Engine engine(slp);
    RhoContext& ctx = engine.context(rho_value);
    const TypeCatalog& cat = ctx.catalog();
    if (type) {
        if (*type >= cat.type_count()) throw InvalidArgument("type id out of range");
        std::cout << count_type_nodes(ctx, *type) << '\n';
        return 0;
    }
    std::cout << "type\tbeta\ttype_nodes\ttype_tuples\n";
    for (TypeId t = 0; t < cat.type_count(); ++t) {
        const NeighborhoodType& nt = cat.table.get(t);
        std::cout << t << '\t' << count_type_nodes(ctx, t) << '\t' << nt.node_count() << '\t'
                  << nt.structure.tuple_count() << '\n';
    }
    return 0;
}

struct EnumerateOptions {
    std::string file;
    QuerySource query;
    std::size_t limit = static_cast<std::size_t>(-1);
    bool resolve = false;
    bool verify = false;
    bool stats = false;
    std::string format = "tsv";
};

std::set<PrintedTuple> oracle_tuples(const Slp& slp, const Query& q) {
    Decompressed d = decompress(slp, slp.initial, decompress_cap_from_env());
    WeightedDag w = extend_and_weight(build_dag(slp));
    std::set<PrintedTuple> out;
    for (const auto& t : naive_eval(d.structure, q)) {
        PrintedTuple p;
        for (NodeId v : t) {
            const ARep& r = d.reps[v];
            Nonterminal end = path_end(slp, r.start, r.path);
            p.push_back(PrintedNode{lex_of_path(w, r.path).str(), slp.at(end).local.label(r.local)});
        }
        out.insert(std::move(p));
    }
    return out;
}

void print_stats(const Engine& engine, const QueryEnumerator& e) {
    const EnumerationStats& s = e.stats();
    std::cerr << "preprocessing_steps: " << engine.preprocessing_steps << '\n';
    std::cerr << "enumeration_steps: " << engine.enumeration_steps << '\n';
    std::cerr << "outputs: " << s.outputs << '\n';
    std::cerr << "equality_plans: " << s.plans << '\n';
    std::cerr << "candidate_types: " << s.candidates << " satisfying: " << s.satisfying_candidates << '\n';
    std::cerr << "sessions: " << s.sessions << '\n';
    std::cerr << "max_delay_steps: " << s.max_delay << '\n';
    std::cerr << "levels (type, beta, class):\n";
    for (const LevelInfo& l : s.levels)
        std::cerr << "  " << l.type << '\t' << l.beta << '\t'
                  << (l.short_level ? (l.materialized ? "short, materialized" : "short") : "long") << '\n';
    std::map<unsigned, std::uint64_t> histogram;
    for (std::uint64_t d : s.delays) {
        unsigned bucket = 0;
        while ((std::uint64_t(1) << bucket) < d) ++bucket;
        ++histogram[bucket];
    }
    std::cerr << "delay histogram (steps <= 2^b: count):\n";
    for (auto [b, c] : histogram) std::cerr << "  " << b << '\t' << c << '\n';
}

int cmd_enumerate(const EnumerateOptions& o) {
    Slp slp = parse_slp(read_file(o.file));
    Query q = parse_query(o.query.get(), slp.signature);
    Engine engine(slp);
    QueryEnumerator e(engine, q, o.stats);
    std::vector<LexRep> out;
    std::vector<PrintedTuple> printed;
    std::size_t count = 0;
    while (count < o.limit && e.next(out)) {
        ++count;
        PrintedTuple t;
        for (const LexRep& l : out) t.push_back(printed_node(slp, l));
        print_tuple(t, o.format);
        if (o.resolve) {
            std::vector<ARep> reps;
            for (const LexRep& l : out) reps.push_back(resolve_rep(engine, l));
            std::cout << "# " << join_paths(slp, reps) << '\n';
        }
        if (o.verify) printed.push_back(std::move(t));
    }
    std::cout << kEndOfEnumeration << '\n';
    if (o.stats) print_stats(engine, e);
    if (!o.verify) return 0;
    std::set<PrintedTuple> got(printed.begin(), printed.end());
    std::set<PrintedTuple> expected = oracle_tuples(slp, q);
    bool ok = got.size() == printed.size();
    if (count < o.limit)
        ok = ok && got == expected;
    else
        ok = ok && std::includes(expected.begin(), expected.end(), got.begin(), got.end());
    std::cerr << "verify: " << (ok ? "ok" : "MISMATCH") << " (" << printed.size() << " tuples, oracle "
              << expected.size() << ")\n";
    return ok ? 0 : kExitFailure;
}

int cmd_oracle_eval(const std::string& file, const QuerySource& qs, const std::string& format) {
    const std::string text = read_file(file);
    if (looks_like_slp(text)) {
        Slp slp = parse_slp(text);
        require_valid(slp, false);
        Query q = parse_query(qs.get(), slp.signature);
        for (const PrintedTuple& t : oracle_tuples(slp, q)) print_tuple(t, format);
    } else {
        Structure s = parse_structure(text);
        Query q = parse_query(qs.get(), s.signature);
        for (const auto& t : naive_eval(s, q)) {
            PrintedTuple p;
            for (NodeId v : t) p.push_back(PrintedNode{std::to_string(v), s.label(v)});
            print_tuple(p, format);
        }
    }
    std::cout << kEndOfEnumeration << '\n';
    return 0;
}

int cmd_gen(const std::string& family, unsigned n, std::uint64_t seed, const RandomApexParams& params,
            const std::string& output) {
    std::string text = gen_family_text(family, n, seed, params);
    if (output.empty() || output == "-") {
        std::cout << text;
    } else {
        std::ofstream f(output);
        if (!f) throw InvalidArgument("cannot write " + output);
        f << text;
    }
    return 0;
}

int cmd_bench(const std::string& family, const std::vector<unsigned>& sizes, const QuerySource& qs,
              std::uint64_t seed, std::size_t limit) {
    const std::string query_text = qs.get();
    std::cout << "size,slp_size,val_nodes,preprocessing_steps,max_delay_steps,median_delay_steps,outputs,wall_ms\n";
    for (unsigned n : sizes) {
        Slp slp = parse_slp(gen_family_text(family, n, seed));
        Query q = parse_query(query_text, slp.signature);
        auto t0 = std::chrono::steady_clock::now();
        Engine engine(slp);
        QueryEnumerator e(engine, q, true);
        std::vector<LexRep> out;
        std::uint64_t outputs = 0;
        while (outputs < limit && e.next(out)) ++outputs;
        auto t1 = std::chrono::steady_clock::now();
        std::vector<std::uint64_t> delays = e.stats().delays;
        std::uint64_t median = 0, max = 0;
        if (!delays.empty()) {
            std::sort(delays.begin(), delays.end());
            median = delays[delays.size() / 2];
            max = delays.back();
        }
        std::cout << n << ',' << slp_size(slp) << ',' << val_node_count(slp, slp.initial) << ','
                  << engine.preprocessing_steps << ',' << max << ',' << median << ',' << outputs << ','
                  << std::chrono::duration<double, std::milli>(t1 - t0).count() << '\n';
    }
    std::cout << kEndOfEnumeration << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant-delay enumeration of first-order queries over SLP-compressed structures"};
    app.require_subcommand(1);

    std::string file;
    auto* validate_cmd = app.add_subcommand("validate", "Check an SLP file and report apex status");
    validate_cmd->add_option("slp", file, "SLP file")->required()->check(CLI::ExistingFile);

    std::string start;
    auto* decompress_cmd = app.add_subcommand("decompress", "Print val(A) as a structure (capped)");
    decompress_cmd->add_option("slp", file, "SLP file")->required()->check(CLI::ExistingFile);
    decompress_cmd->add_option("--nonterminal", start, "Nonterminal to expand (default: initial)");

    unsigned rho_value = 1;
    auto* stats_cmd = app.add_subcommand("stats", "Sizes, degree and per-nonterminal expansion sizes");
    stats_cmd->add_option("slp", file, "SLP file")->required()->check(CLI::ExistingFile);
    stats_cmd->add_option("--rho", rho_value, "Expansion radius");

    std::optional<unsigned> type;
    std::size_t limit = static_cast<std::size_t>(-1);
    bool verify = false;
    bool all = false;
    auto* paths_cmd = app.add_subcommand("paths", "Stream initial paths in lexicographic order");
    paths_cmd->add_option("slp", file, "SLP file")->required()->check(CLI::ExistingFile);
    auto* type_opt = paths_cmd->add_option("--type", type, "Restrict to paths ending in type-useful nonterminals");
    paths_cmd->add_flag("--all", all, "All initial paths (default)")->excludes(type_opt);
    paths_cmd->add_option("--rho", rho_value, "Radius of the type catalog");
    paths_cmd->add_option("--limit", limit, "Stop after n paths");
    paths_cmd->add_flag("--verify", verify, "Cross-check against the naive enumeration");

    auto* count_cmd = app.add_subcommand("count", "Exact number of nodes per realized rho-type");
    count_cmd->add_option("slp", file, "SLP file")->required()->check(CLI::ExistingFile);
    count_cmd->add_option("--type", type, "Type id (default: list all types)");
    count_cmd->add_option("--rho", rho_value, "Neighborhood radius");

    EnumerateOptions eo;
    auto* enumerate_cmd = app.add_subcommand("enumerate", "Enumerate the result tuples of a query");
    enumerate_cmd->add_option("slp", eo.file, "SLP file")->required()->check(CLI::ExistingFile);
    add_query_options(enumerate_cmd, eo.query);
    enumerate_cmd->add_option("--limit", eo.limit, "Stop after n tuples");
    enumerate_cmd->add_flag("--resolve", eo.resolve, "Also print explicit dag paths");
    enumerate_cmd->add_flag("--verify", eo.verify, "Cross-check against the oracle");
    enumerate_cmd->add_flag("--stats", eo.stats, "Print counters, levels and the delay histogram to stderr");
    enumerate_cmd->add_option("--format", eo.format, "Output format")->check(CLI::IsMember({"tsv", "json"}));

    QuerySource oq;
    std::string oformat = "tsv";
    auto* oracle_cmd = app.add_subcommand("oracle-eval", "Brute-force evaluation on a structure or decompressed SLP");
    oracle_cmd->add_option("input", file, "Structure or SLP file")->required()->check(CLI::ExistingFile);
    add_query_options(oracle_cmd, oq);
    oracle_cmd->add_option("--format", oformat, "Output format")->check(CLI::IsMember({"tsv", "json"}));

    std::string family;
    unsigned n = 0;
    std::uint64_t seed = 1;
    RandomApexParams params;
    std::string output;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an SLP family member");
    gen_cmd->add_option("family", family, "ptree, chain, grid-strip or random-apex")
        ->required()
        ->check(CLI::IsMember({"ptree", "chain", "grid-strip", "random-apex"}));
    gen_cmd->add_option("n", n, "Size parameter (random-apex: max nonterminals, 0 = default)")->required();
    gen_cmd->add_option("--seed", seed, "Random seed");
    gen_cmd->add_option("--max-nodes", params.max_nodes, "random-apex: bound on |val(D)|");
    gen_cmd->add_option("--max-degree", params.max_degree, "random-apex: bound on the degree");
    gen_cmd->add_option("-o,--output", output, "Output file (default: stdout)");

    std::vector<unsigned> sizes;
    QuerySource bq;
    auto* bench_cmd = app.add_subcommand("bench", "CSV of preprocessing and delay step counts over a family");
    bench_cmd->add_option("family", family, "Generator family")
        ->required()
        ->check(CLI::IsMember({"ptree", "chain", "grid-strip", "random-apex"}));
    bench_cmd->add_option("--sizes", sizes, "Family sizes")->required()->delimiter(',');
    add_query_options(bench_cmd, bq);
    bench_cmd->add_option("--seed", seed, "Random seed");
    bench_cmd->add_option("--limit", limit, "Stop each run after n tuples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*validate_cmd) return cmd_validate(file);
        if (*decompress_cmd) return cmd_decompress(file, start);
        if (*stats_cmd) return cmd_stats(file, rho_value);
        if (*paths_cmd) return cmd_paths(file, type, rho_value, limit, verify);
        if (*count_cmd) return cmd_count(file, type, rho_value);
        if (*enumerate_cmd) return cmd_enumerate(eo);
        if (*oracle_cmd) return cmd_oracle_eval(file, oq, oformat);
        if (*gen_cmd) return cmd_gen(family, n, seed, params, output);
        if (*bench_cmd) return cmd_bench(family, sizes, bq, seed, limit);
    } catch (const CapExceeded& e) {
        std::cerr << "error: cap exceeded: " << e.what() << " (size at least " << e.size_lower_bound() << ")\n";
        return kExitCap;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const ApexRequired& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const ArityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
