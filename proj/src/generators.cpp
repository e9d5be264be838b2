#include "slpfo/generators.hpp"

#include <algorithm>
#include <sstream>

#include "slpfo/errors.hpp"

namespace slpfo {

namespace {

std::string tree_name(unsigned h) { return "T" + std::to_string(h); }

}  // namespace

Slp gen_ptree(unsigned n) {
    std::ostringstream o;
    o << "signature e/2\ninitial S\n\nnonterminal S rank 0\nnode S x\n";
    if (n > 0) o << "ref S " << tree_name(n - 1) << " 1=x\nref S " << tree_name(n - 1) << " 1=x\n";
    for (unsigned h = 0; h + 1 <= n; ++h) {
        const std::string t = tree_name(h);
        o << "\nnonterminal " << t << " rank 1\ncontact " << t << " 1 c\nnode " << t << " y\ntuple " << t
          << " e c y\n";
        if (h > 0) o << "ref " << t << " " << tree_name(h - 1) << " 1=y\nref " << t << " " << tree_name(h - 1) << " 1=y\n";
    }
    return parse_slp(o.str());
}

Slp gen_chain(unsigned n) {
    std::ostringstream o;
    o << "signature e/2\ninitial S\n\nnonterminal S rank 0\nnode S x\n";
    if (n > 0) o << "ref S C" << n << " 1=x\n";
    for (unsigned h = 1; h <= n; ++h) {
        const std::string c = "C" + std::to_string(h);
        o << "\nnonterminal " << c << " rank 1\ncontact " << c << " 1 c\nnode " << c << " y\ntuple " << c << " e c y\n";
        if (h > 1) o << "ref " << c << " C" << h - 1 << " 1=y\n";
    }
    return parse_slp(o.str());
}

Slp gen_grid_strip(unsigned n) {
    std::ostringstream o;
    o << "signature e/2\ninitial S\n\nnonterminal S rank 0\n"
      << "node S a1\nnode S a2\nnode S b1\nnode S b2\ntuple S e a1 a2\ntuple S e b1 b2\n"
      << "ref S L" << n << " 1=a1 2=a2 3=b1 4=b2\n";
    for (unsigned h = 0; h <= n; ++h) {
        const std::string l = "L" + std::to_string(h);
        o << "\nnonterminal " << l << " rank 4\n";
        o << "contact " << l << " 1 s1\ncontact " << l << " 2 s2\ncontact " << l << " 3 t1\ncontact " << l << " 4 t2\n";
        if (h == 0) {
            o << "tuple " << l << " e s1 t1\ntuple " << l << " e s2 t2\n";
            continue;
        }
        const std::string c = "L" + std::to_string(h - 1);
        for (const char* v : {"u1", "u2", "m1", "m2", "v1", "v2"}) o << "node " << l << " " << v << "\n";
        o << "tuple " << l << " e s1 u1\ntuple " << l << " e s2 u2\ntuple " << l << " e v1 t1\ntuple " << l
          << " e v2 t2\n";
        o << "tuple " << l << " e u1 u2\ntuple " << l << " e m1 m2\ntuple " << l << " e v1 v2\n";
        o << "ref " << l << " " << c << " 1=u1 2=u2 3=m1 4=m2\n";
        o << "ref " << l << " " << c << " 1=m1 2=m2 3=v1 4=v2\n";
    }
    return parse_slp(o.str());
}

Slp gen_random_apex(std::mt19937_64& rng, const RandomApexParams& params) {
    if (params.max_nonterminals == 0 || params.max_internal == 0)
        throw InvalidArgument("random-apex needs at least one nonterminal and one internal node");
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    const char* binary[] = {"r1", "r2"};
    for (unsigned attempt = 0; attempt < 100000; ++attempt) {
        const std::size_t m = pick(1, params.max_nonterminals);
        std::vector<unsigned> rank(m, 0), internal(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            rank[i] = i == 0 ? 0 : static_cast<unsigned>(pick(0, 2));
            internal[i] = static_cast<unsigned>(pick(1, params.max_internal));
        }
        std::ostringstream o;
        o << "signature r1/2 r2/2 p/1\ninitial N0\n";
        for (std::size_t i = 0; i < m; ++i) {
            const std::string a = "N" + std::to_string(i);
            o << "\nnonterminal " << a << " rank " << rank[i] << "\n";
            std::vector<std::string> nodes;
            for (unsigned c = 1; c <= rank[i]; ++c) {
                nodes.push_back("c" + std::to_string(c));
                o << "contact " << a << " " << c << " " << nodes.back() << "\n";
            }
            std::vector<std::string> inner;
            for (unsigned v = 0; v < internal[i]; ++v) {
                inner.push_back("v" + std::to_string(v));
                nodes.push_back(inner.back());
                o << "node " << a << " " << inner.back() << "\n";
            }
            const std::size_t tuples = pick(0, params.max_tuples);
            for (std::size_t t = 0; t < tuples; ++t) {
                if (pick(0, 3) == 0) {
                    o << "tuple " << a << " p " << nodes[pick(0, nodes.size() - 1)] << "\n";
                } else {
                    o << "tuple " << a << " " << binary[pick(0, 1)] << " " << nodes[pick(0, nodes.size() - 1)] << " "
                      << nodes[pick(0, nodes.size() - 1)] << "\n";
                }
            }
            if (i + 1 == m) continue;
            const std::size_t refs = pick(params.max_refs > 0 ? 1 : 0, params.max_refs);
            std::vector<std::string> hosts = inner;
            std::shuffle(hosts.begin(), hosts.end(), rng);
            std::size_t next_host = 0;
            for (std::size_t e = 0; e < refs; ++e) {
                const std::size_t b = pick(i + 1, m - 1);
                if (rank[b] > inner.size()) continue;
                std::vector<std::string> chosen;
                while (chosen.size() < rank[b]) {
                    const std::string& h = hosts[next_host++ % hosts.size()];
                    if (std::find(chosen.begin(), chosen.end(), h) == chosen.end()) chosen.push_back(h);
                }
                o << "ref " << a << " N" << b;
                for (unsigned c = 0; c < rank[b]; ++c) o << " " << c + 1 << "=" << chosen[c];
                o << "\n";
            }
        }
        Slp slp = parse_slp(o.str());
        if (val_node_count(slp, slp.initial) > params.max_nodes) continue;
        if (val_degree(slp) > params.max_degree) continue;
        return slp;
    }
    throw InternalError("random-apex generation did not meet its bounds");
}

OrderedDag gen_random_dag(std::mt19937_64& rng, std::size_t max_edges, std::size_t max_paths) {
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    if (max_paths == 0) throw InvalidArgument("a dag has at least one initial path");
    const std::size_t n = pick(1, 60);
    OrderedDag dag;
    dag.children.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) dag.names.push_back("V" + std::to_string(v));
    std::vector<Nat> paths(n, 1);
    std::size_t edges = 0;
    for (std::size_t v = n; v-- > 0;) {
        if (v + 1 == n) continue;
        const std::size_t out = pick(0, 4);
        for (std::size_t e = 0; e < out && edges < max_edges; ++e) {
            const std::size_t c = pick(0, 2) ? std::min(n - 1, v + pick(1, 3)) : pick(v + 1, n - 1);
            if (paths[v] + paths[c] > max_paths) continue;
            dag.children[v].push_back(static_cast<std::uint32_t>(c));
            paths[v] += paths[c];
            ++edges;
        }
    }
    return dag;
}

std::string gen_family_text(const std::string& family, unsigned n, std::uint64_t seed,
                            const RandomApexParams& params) {
    if (family == "ptree") return format_slp(gen_ptree(n));
    if (family == "chain") return format_slp(gen_chain(n));
    if (family == "grid-strip") return format_slp(gen_grid_strip(n));
    if (family == "random-apex") {
        std::mt19937_64 rng(seed);
        RandomApexParams p = params;
        if (n > 0) p.max_nonterminals = n;
        return format_slp(gen_random_apex(rng, p));
    }
    throw InvalidArgument("unknown family " + family + " (expected ptree, chain, grid-strip or random-apex)");
}

}  // namespace slpfo
