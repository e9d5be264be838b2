#include "slpfo/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include "slpfo/canonical.hpp"
#include "slpfo/errors.hpp"
#include "slpfo/formula.hpp"

namespace slpfo {

namespace {

bool pack(const std::vector<NodeId>& candidates, const std::vector<std::vector<bool>>& close, unsigned q) {
    std::vector<std::size_t> chosen;
    std::function<bool(std::size_t)> go = [&](std::size_t from) {
        if (chosen.size() == q) return true;
        for (std::size_t i = from; i + (q - chosen.size()) <= candidates.size(); ++i) {
            bool ok = std::none_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return close[c][i]; });
            if (!ok) continue;
            chosen.push_back(i);
            if (go(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return go(0);
}

bool sentence_on_model(const Model& m, const Query& q, const QueryNode& s) {
    std::vector<NodeId> sat;
    std::vector<NodeId> env(q.slot_count(), 0);
    for (NodeId v = 0; v < m.size(); ++v) {
        NearList near = near_nodes(m.adjacency(), {v}, s.r);
        for (std::uint32_t x : s.vars) env[x] = v;
        if (evaluate(m, *s.formula, env, &near)) sat.push_back(v);
    }
    if (sat.size() < s.q) return false;
    std::vector<std::vector<bool>> close(sat.size(), std::vector<bool>(sat.size(), false));
    for (std::size_t i = 0; i < sat.size(); ++i) {
        std::vector<Distance> d = bfs_distances(m.adjacency(), {sat[i]}, 2 * s.r);
        for (std::size_t j = 0; j < sat.size(); ++j) close[i][j] = d[sat[j]].has_value();
    }
    return pack(sat, close, s.q);
}

}  // namespace

bool naive_sentence(const Structure& s, const Query& q, const QueryNode& sentence) {
    Model m(s);
    return sentence_on_model(m, q, sentence);
}

std::vector<std::vector<NodeId>> naive_eval(const Structure& s, const Query& q, const OracleBudget& budget) {
    if (s.universe_size > budget.max_nodes) throw CapExceeded("oracle universe", std::to_string(s.universe_size));
    const unsigned k = q.k();
    std::uint64_t total = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (s.universe_size != 0 && total > budget.max_tuples / s.universe_size)
            throw CapExceeded("oracle tuple space", std::to_string(budget.max_tuples + 1));
        total *= s.universe_size;
    }
    Model m(s);
    std::map<const QueryNode*, bool> sentences;
    for (const QueryNode* leaf : q.leaves(QueryKind::Scattered)) sentences[leaf] = sentence_on_model(m, q, *leaf);

    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> tuple(k, 0);
    std::vector<NodeId> env(q.slot_count(), 0);
    auto leaf = [&](const QueryNode& n) {
        if (n.kind == QueryKind::Scattered) return sentences.at(&n);
        for (std::size_t i = 0; i < n.vars.size(); ++i) {
            std::size_t pos = std::find(q.free.begin(), q.free.end(), n.vars[i]) - q.free.begin();
            env[n.vars[i]] = tuple[pos];
        }
        if (n.kind == QueryKind::Fo) return evaluate(m, *n.formula, env, nullptr);
        std::vector<NodeId> centers;
        for (std::uint32_t v : n.vars) centers.push_back(env[v]);
        NearList near = near_nodes(m.adjacency(), centers, n.r);
        return evaluate(m, *n.formula, env, &near);
    };
    if (k > 0 && s.universe_size == 0) return out;
    while (true) {
        if (evaluate_combination(*q.root, leaf)) out.push_back(tuple);
        std::size_t i = k;
        while (i > 0) {
            if (++tuple[i - 1] < s.universe_size) break;
            tuple[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    return out;
}

std::vector<std::vector<std::uint32_t>> naive_initial_paths(const OrderedDag& dag, std::size_t cap) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> stack{{dag.initial, {}}};
    while (!stack.empty()) {
        auto [v, p] = std::move(stack.back());
        stack.pop_back();
        if (out.size() >= cap) throw CapExceeded("initial paths", std::to_string(cap + 1));
        for (std::uint32_t i = 0; i < dag.children[v].size(); ++i) {
            auto q = p;
            q.push_back(i + 1);
            stack.push_back({dag.children[v][i], std::move(q)});
        }
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<NodeId>> naive_type_classes(const Structure& s, unsigned rho) {
    struct Class {
        PointedNeighborhood rep;
        std::vector<NodeId> members;
    };
    std::vector<Class> classes;
    for (NodeId v = 0; v < s.universe_size; ++v) {
        PointedNeighborhood n = neighborhood(s, {v}, rho);
        bool placed = false;
        for (Class& c : classes) {
            if (c.rep.structure.universe_size != n.structure.universe_size) continue;
            if (c.rep.structure.tuple_count() != n.structure.tuple_count()) continue;
            if (find_isomorphism(c.rep.structure, c.rep.centers, n.structure, n.centers)) {
                c.members.push_back(v);
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back(Class{std::move(n), {v}});
    }
    std::vector<std::vector<NodeId>> out;
    for (Class& c : classes) out.push_back(std::move(c.members));
    return out;
}

bool naive_distance_leq(const Adjacency& adj, NodeId a, NodeId b, unsigned bound) {
    return bfs_distances(adj, {a}, bound)[b].has_value();
}

}  // namespace slpfo
