#include "slpfo/expansion.hpp"

#include <algorithm>
#include <deque>

#include "slpfo/errors.hpp"

namespace slpfo {

SlpIndex::SlpIndex(const Slp& s) : slp(&s) {
    for (std::size_t a = 0; a < s.productions.size(); ++a) {
        const Production& p = s.productions[a];
        adjacency.push_back(gaifman_adjacency(p.local));
        std::vector<int> c(p.local.universe_size, -1);
        for (std::size_t i = 0; i < p.contacts.size(); ++i)
            if (p.contacts[i]) c[*p.contacts[i]] = static_cast<int>(i);
        contact.push_back(std::move(c));
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> att(p.local.universe_size);
        for (std::size_t j = 0; j < p.refs.size(); ++j)
            for (std::size_t i = 0; i < p.refs[j].sigma.size(); ++i)
                if (p.refs[j].sigma[i])
                    att[*p.refs[j].sigma[i]].push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(i)});
        attachments.push_back(std::move(att));
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> inc(p.local.universe_size);
        for (std::size_t r = 0; r < p.local.tuples.size(); ++r)
            for (std::size_t t = 0; t < p.local.tuples[r].size(); ++t) {
                const auto& tuple = p.local.tuples[r][t];
                for (std::size_t x = 0; x < tuple.size(); ++x) {
                    if (std::find(tuple.begin(), tuple.begin() + static_cast<long>(x), tuple[x]) !=
                        tuple.begin() + static_cast<long>(x))
                        continue;
                    inc[tuple[x]].push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(t)});
                }
            }
        incident.push_back(std::move(inc));
    }
}

std::vector<std::uint32_t> local_key(const std::vector<std::uint32_t>& path, NodeId local) {
    std::vector<std::uint32_t> key;
    key.reserve(path.size() + 1);
    key.insert(key.end(), path.begin(), path.end());
    key.push_back(local);
    return key;
}

std::optional<std::uint32_t> LocalBall::find(const std::vector<std::uint32_t>& path, NodeId local) const {
    auto it = index.find(local_key(path, local));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

namespace {

// (path, y) for a local node y of the copy at `path`, lifting contacts to the parent copy.
LocalNode resolve(const SlpIndex& index, Nonterminal a, const std::vector<std::uint32_t>& path, Nonterminal end,
                  NodeId y) {
    const Slp& slp = *index.slp;
    int ci = index.contact[end][y];
    if (path.empty() || ci < 0) return LocalNode{path, y, end};
    std::vector<std::uint32_t> prefix(path.begin(), path.end() - 1);
    Nonterminal parent = path_end(slp, a, prefix);
    const Reference& ref = slp.at(parent).refs[path.back() - 1];
    NodeId up = *ref.sigma[static_cast<std::size_t>(ci)];
    if (!prefix.empty() && index.contact[parent][up] >= 0) throw ApexRequired();
    return LocalNode{std::move(prefix), up, parent};
}

}  // namespace

std::vector<LocalNode> local_neighbors(const SlpIndex& index, Nonterminal a, const LocalNode& n) {
    const Slp& slp = *index.slp;
    std::vector<LocalNode> out;
    const Nonterminal b = n.end;
    for (NodeId v : index.adjacency[b][n.local]) out.push_back(resolve(index, a, n.path, b, v));
    const Production& pb = slp.at(b);
    for (const auto& [j, i] : index.attachments[b][n.local]) {
        const Reference& ref = pb.refs[j];
        const Nonterminal c = ref.target;
        NodeId tc = *slp.at(c).contacts[i];
        for (NodeId y : index.adjacency[c][tc]) {
            int ci = index.contact[c][y];
            if (ci >= 0) {
                out.push_back(LocalNode{n.path, *ref.sigma[static_cast<std::size_t>(ci)], b});
            } else {
                LocalNode down{n.path, y, c};
                down.path.push_back(j + 1);
                out.push_back(std::move(down));
            }
        }
    }
    return out;
}

namespace {

std::uint32_t lookup(const LocalBall& ball, const LocalNode& n, bool& ok) {
    auto id = ball.find(n.path, n.local);
    if (!id) {
        ok = false;
        return 0;
    }
    return *id;
}

void collect_tuples(const SlpIndex& index, LocalBall& ball) {
    const Slp& slp = *index.slp;
    std::vector<std::array<std::uint32_t, 2>> unary;
    std::vector<std::array<std::uint32_t, 3>> binary;
    auto emit = [&](std::uint32_t rel, const std::vector<std::uint32_t>& ids) {
        if (ids.size() == 1)
            unary.push_back({rel, ids[0]});
        else if (ids.size() == 2)
            binary.push_back({rel, ids[0], ids[1]});
        else
            throw ArityError("local expansion requires arity <= 2");
    };
    for (std::uint32_t x = 0; x < ball.nodes.size(); ++x) {
        const LocalNode& n = ball.nodes[x];
        const Nonterminal b = n.end;
        const Production& pb = slp.at(b);
        for (const auto& [rel, t] : index.incident[b][n.local]) {
            const auto& tuple = pb.local.tuples[rel][t];
            std::vector<std::uint32_t> ids;
            bool ok = true;
            for (NodeId y : tuple) {
                ids.push_back(y == n.local ? x : lookup(ball, resolve(index, ball.a, n.path, b, y), ok));
                if (!ok) break;
            }
            if (ok) emit(rel, ids);
        }
        for (const auto& [j, i] : index.attachments[b][n.local]) {
            const Reference& ref = pb.refs[j];
            const Nonterminal c = ref.target;
            const Production& pc = slp.at(c);
            for (const auto& [rel, t] : index.incident[c][*pc.contacts[i]]) {
                const auto& tuple = pc.local.tuples[rel][t];
                std::vector<std::uint32_t> ids;
                bool ok = true;
                for (NodeId y : tuple) {
                    int ci = index.contact[c][y];
                    if (ci < 0) {
                        ok = false;
                        break;
                    }
                    ids.push_back(lookup(ball, LocalNode{n.path, *ref.sigma[static_cast<std::size_t>(ci)], b}, ok));
                    if (!ok) break;
                }
                if (ok) emit(rel, ids);
            }
        }
    }
    std::sort(unary.begin(), unary.end());
    unary.erase(std::unique(unary.begin(), unary.end()), unary.end());
    std::sort(binary.begin(), binary.end());
    binary.erase(std::unique(binary.begin(), binary.end()), binary.end());

    const std::size_t n = ball.nodes.size();
    ball.tuples.node_count = static_cast<std::uint32_t>(n);
    ball.tuples.relation_count = static_cast<std::uint32_t>(slp.signature.size());
    ball.adjacency.assign(n, {});
    ball.unary_of.assign(n, {});
    ball.binary_of.assign(n, {});
    for (std::uint32_t u = 0; u < unary.size(); ++u) ball.unary_of[unary[u][1]].push_back(u);
    for (std::uint32_t e = 0; e < binary.size(); ++e) {
        std::uint32_t s = binary[e][1], t = binary[e][2];
        ball.binary_of[s].push_back(e);
        if (s != t) {
            ball.binary_of[t].push_back(e);
            ball.adjacency[s].push_back(t);
            ball.adjacency[t].push_back(s);
        }
    }
    for (auto& l : ball.adjacency) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    ball.tuples.unary = std::move(unary);
    ball.tuples.binary = std::move(binary);
}

}  // namespace

LocalBall local_ball(const SlpIndex& index, Nonterminal a, const std::vector<LocalNode>& seeds, unsigned radius,
                     std::uint64_t* steps) {
    LocalBall ball;
    ball.a = a;
    std::deque<std::uint32_t> queue;
    auto visit = [&](LocalNode n, std::uint32_t d) {
        auto [it, inserted] = ball.index.emplace(local_key(n.path, n.local), static_cast<std::uint32_t>(ball.nodes.size()));
        if (!inserted) return;
        ball.nodes.push_back(std::move(n));
        ball.dist.push_back(d);
        queue.push_back(it->second);
    };
    for (const auto& s : seeds) visit(s, 0);
    while (!queue.empty()) {
        std::uint32_t x = queue.front();
        queue.pop_front();
        if (steps) ++*steps;
        std::uint32_t d = ball.dist[x];
        if (d >= radius) continue;
        LocalNode cur = ball.nodes[x];
        for (auto& nb : local_neighbors(index, a, cur)) {
            if (steps) ++*steps;
            visit(std::move(nb), d + 1);
        }
    }
    collect_tuples(index, ball);
    if (steps) *steps += ball.tuples.unary.size() + ball.tuples.binary.size();
    return ball;
}

Expansion compute_expansion(const SlpIndex& index, Nonterminal a, unsigned zeta, std::uint64_t* steps) {
    const Production& p = index.slp->at(a);
    std::vector<LocalNode> seeds;
    for (NodeId v = 0; v < p.local.universe_size; ++v)
        if (index.contact[a][v] < 0) seeds.push_back(LocalNode{{}, v, a});
    Expansion exp;
    exp.a = a;
    exp.zeta = zeta;
    exp.ball = local_ball(index, a, seeds, zeta, steps);
    const std::size_t n = exp.ball.size();
    exp.boundary.assign(n, false);
    exp.internal.assign(n, false);
    for (std::size_t x = 0; x < n; ++x) {
        const LocalNode& node = exp.ball.nodes[x];
        bool top = node.path.empty();
        if (top && index.contact[a][node.local] >= 0) exp.boundary[x] = true;
        if (exp.ball.dist[x] == zeta) exp.boundary[x] = true;
        if (top && index.contact[a][node.local] < 0) exp.internal[x] = true;
    }
    return exp;
}

namespace {

// Scratch map from ball ids to compact ids, reset after every use.
struct BallScratch {
    std::vector<std::int32_t> slot;
    std::vector<std::uint32_t> dist;
};

CompactStructure neighborhood_with(const LocalBall& ball, std::uint32_t center, unsigned radius,
                                   std::vector<std::uint32_t>& members, BallScratch& scratch,
                                   std::uint64_t* steps) {
    if (scratch.slot.size() < ball.size()) {
        scratch.slot.assign(ball.size(), -1);
        scratch.dist.assign(ball.size(), 0);
    }
    members.clear();
    members.push_back(center);
    scratch.slot[center] = 0;
    scratch.dist[center] = 0;
    for (std::size_t head = 0; head < members.size(); ++head) {
        std::uint32_t x = members[head];
        if (steps) ++*steps;
        if (scratch.dist[x] >= radius) continue;
        for (std::uint32_t y : ball.adjacency[x]) {
            if (scratch.slot[y] >= 0) continue;
            scratch.slot[y] = static_cast<std::int32_t>(members.size());
            scratch.dist[y] = scratch.dist[x] + 1;
            members.push_back(y);
        }
    }
    CompactStructure c;
    c.node_count = static_cast<std::uint32_t>(members.size());
    c.relation_count = ball.tuples.relation_count;
    for (std::uint32_t x : members) {
        std::uint32_t cx = static_cast<std::uint32_t>(scratch.slot[x]);
        for (std::uint32_t u : ball.unary_of[x]) c.unary.push_back({ball.tuples.unary[u][0], cx});
        for (std::uint32_t e : ball.binary_of[x]) {
            const auto& t = ball.tuples.binary[e];
            if (t[1] != x) continue;
            if (scratch.slot[t[2]] < 0) continue;
            c.binary.push_back({t[0], cx, static_cast<std::uint32_t>(scratch.slot[t[2]])});
        }
    }
    for (std::uint32_t x : members) scratch.slot[x] = -1;
    std::sort(c.unary.begin(), c.unary.end());
    std::sort(c.binary.begin(), c.binary.end());
    return c;
}

}  // namespace

CompactStructure ball_neighborhood(const LocalBall& ball, std::uint32_t center, unsigned radius,
                                   std::vector<std::uint32_t>& members, std::uint64_t* steps) {
    BallScratch scratch;
    return neighborhood_with(ball, center, radius, members, scratch, steps);
}

namespace {

std::vector<ValidNodeEntry> collect_valid(const Expansion& exp, unsigned rho, TypeTable& table,
                                          std::optional<TypeId> only, std::uint64_t* steps) {
    if (exp.zeta != 2 * rho + 1)
        throw InvalidArgument("valid_nodes: expansion radius " + std::to_string(exp.zeta) + " does not match 2*" +
                              std::to_string(rho) + "+1");
    std::vector<ValidNodeEntry> out;
    BallScratch scratch;
    std::vector<std::uint32_t> members;
    for (std::uint32_t c = 0; c < exp.size(); ++c) {
        if (exp.ball.dist[c] > rho) continue;
        CompactStructure nb = neighborhood_with(exp.ball, c, rho, members, scratch, steps);
        bool touches = false;
        for (std::uint32_t x : members)
            if (exp.boundary[x]) {
                touches = true;
                break;
            }
        if (touches) continue;
        CanonicalForm form = canonical_form(nb, PartialTuple{NodeId{0}});
        if (steps) *steps += form.pi.size();
        TypeId type = table.intern(form, 1, rho);
        if (only && type != *only) continue;
        ValidNodeEntry e;
        e.node = c;
        e.type = type;
        e.pi.reserve(form.pi.size());
        for (NodeId x : form.pi) e.pi.push_back(members[x]);
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

std::vector<ValidNodeEntry> valid_nodes(const Expansion& exp, unsigned rho, TypeTable& table, std::uint64_t* steps) {
    return collect_valid(exp, rho, table, std::nullopt, steps);
}

std::vector<ValidNodeEntry> valid_nodes(const Expansion& exp, TypeId type, unsigned rho, TypeTable& table) {
    return collect_valid(exp, rho, table, type, nullptr);
}

std::vector<Nonterminal> TypeCatalog::useful(TypeId type) const {
    std::vector<Nonterminal> out;
    if (type >= lists.size()) return out;
    for (Nonterminal a = 0; a < lists[type].size(); ++a)
        if (!lists[type][a].empty()) out.push_back(a);
    return out;
}

std::vector<Nonterminal> useful_nonterminals(const TypeCatalog& catalog, TypeId type) { return catalog.useful(type); }

TypeCatalog build_catalog(const SlpIndex& index, unsigned rho) {
    const Slp& slp = *index.slp;
    ValidationReport report = validate(slp);
    if (!report.ok()) throw InvalidArgument("invalid SLP: " + report.violations.front());
    if (!report.apex) throw ApexRequired();
    if (slp.signature.max_arity() > 2) throw ArityError("enumeration requires arity <= 2; reduce the SLP first");
    const std::size_t n = slp.productions.size();
    TypeCatalog cat(slp.signature);
    cat.rho = rho;
    cat.reachable.assign(n, true);
    for (Nonterminal a : report.unreachable) cat.reachable[a] = false;
    cat.expansions.resize(n);
    cat.valid.resize(n);
    for (Nonterminal a = 0; a < n; ++a) {
        if (!cat.reachable[a]) continue;
        cat.expansions[a] = compute_expansion(index, a, 2 * rho + 1, &cat.steps);
        cat.valid[a] = valid_nodes(cat.expansions[a], rho, cat.table, &cat.steps);
    }
    cat.lists.assign(cat.table.size(), std::vector<std::vector<std::uint32_t>>(n));
    for (Nonterminal a = 0; a < n; ++a)
        for (std::uint32_t i = 0; i < cat.valid[a].size(); ++i) cat.lists[cat.valid[a][i].type][a].push_back(i);
    return cat;
}

LocalSphere local_sphere(const SlpIndex& index, Nonterminal a, const ARep& c, unsigned r) {
    const Slp& slp = *index.slp;
    if (c.start != a || !is_valid_rep(slp, c)) throw InvalidArgument("local_sphere: invalid representation");
    LocalNode seed{c.path, c.local, path_end(slp, a, c.path)};
    LocalBall ball = local_ball(index, a, {seed}, r);
    LocalSphere out;
    out.neighborhood.structure = from_compact(ball.tuples, slp.signature);
    out.neighborhood.centers = {NodeId{0}};
    out.neighborhood.radius = r;
    for (std::uint32_t x = 0; x < ball.size(); ++x) out.neighborhood.origin.push_back(x);
    out.nodes = std::move(ball.nodes);
    return out;
}

}  // namespace slpfo
