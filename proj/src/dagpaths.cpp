#include "slpfo/dagpaths.hpp"

#include <algorithm>

#include "slpfo/errors.hpp"

namespace slpfo {

std::size_t WeightedDag::edge_count() const {
    std::size_t e = 0;
    for (const auto& c : children) e += c.size();
    return e;
}

WeightedDag extend_and_weight(const OrderedDag& dag, std::uint64_t* steps) {
    WeightedDag w;
    w.n = static_cast<std::uint32_t>(dag.node_count());
    w.initial = dag.initial;
    w.names = dag.names;
    const std::uint32_t n = w.n;
    w.children.assign(2 * n, {});
    for (std::uint32_t a = 0; a < n; ++a) {
        w.children[a].push_back(n + a);
        for (std::uint32_t c : dag.children[a]) w.children[a].push_back(c);
    }

    // Reverse postorder over all nonterminals gives parents before children.
    std::vector<int> state(n, 0);
    std::vector<std::uint32_t> post;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (state[root]) continue;
        std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto& [a, next] = stack.back();
            if (next == dag.children[a].size()) {
                state[a] = 2;
                post.push_back(a);
                stack.pop_back();
                continue;
            }
            std::uint32_t c = dag.children[a][next++];
            if (state[c] == 1) throw InvalidArgument("dag contains a cycle");
            if (state[c] == 0) {
                state[c] = 1;
                stack.push_back({c, 0});
            }
        }
    }
    w.topological.assign(post.rbegin(), post.rend());

    w.number_paths.assign(2 * n, Nat(1));
    w.edge_weight.assign(n, {});
    for (std::uint32_t a : post) {
        Nat sum = 0;
        for (std::uint32_t c : w.children[a]) {
            w.edge_weight[a].push_back(sum);
            sum += w.number_paths[c];
            if (steps) ++*steps;
        }
        w.number_paths[a] = sum;
    }

    w.reachable.assign(n, false);
    w.reachable[w.initial] = true;
    for (std::uint32_t a : w.topological)
        if (w.reachable[a])
            for (std::uint32_t c : dag.children[a]) w.reachable[c] = true;
    w.paths_to = count_paths_to(w);
    return w;
}

std::vector<Nat> count_paths_to(const WeightedDag& w) {
    std::vector<Nat> p(w.n, Nat(0));
    p[w.initial] = 1;
    for (std::uint32_t a : w.topological) {
        if (p[a] == 0) continue;
        for (std::size_t i = 1; i < w.children[a].size(); ++i) p[w.children[a][i]] += p[a];
    }
    return p;
}

Nat count_initial_paths(const WeightedDag& w) { return w.number_paths[w.initial]; }

std::vector<std::uint32_t> resolve_lex(const WeightedDag& w, const Nat& n) {
    if (n < 0 || n >= w.number_paths[w.initial]) throw InvalidArgument("lex rank out of range");
    std::vector<std::uint32_t> path;
    std::uint32_t cur = w.initial;
    Nat rem = n;
    while (rem != 0) {
        const auto& ew = w.edge_weight[cur];
        auto it = std::upper_bound(ew.begin() + 1, ew.end(), rem);
        std::uint32_t i = static_cast<std::uint32_t>(it - ew.begin()) - 1;
        rem -= ew[i];
        path.push_back(i);
        cur = w.children[cur][i];
    }
    return path;
}

Nat lex_of_local(const WeightedDag& w, std::uint32_t a, const std::vector<std::uint32_t>& q, std::size_t max_length) {
    if (q.size() > max_length) throw InvalidArgument("local path longer than the permitted bound");
    Nat sum = 0;
    std::uint32_t cur = a;
    for (std::uint32_t i : q) {
        if (i == 0 || i >= w.children[cur].size()) throw InvalidArgument("path index out of range");
        sum += w.edge_weight[cur][i];
        cur = w.children[cur][i];
    }
    return sum;
}

Nat lex_of_path(const WeightedDag& w, const std::vector<std::uint32_t>& path) {
    return lex_of_local(w, w.initial, path);
}

DagI::DagI(const WeightedDag& w, const std::vector<bool>& useful, std::uint64_t* steps) : w_(&w) {
    const std::uint32_t n = w.n;
    const std::uint32_t total = 2 * n;
    std::vector<bool> alive(total, false);
    for (std::uint32_t a = 0; a < n; ++a) alive[n + a] = w.reachable[a] && a < useful.size() && useful[a];
    for (auto it = w.topological.rbegin(); it != w.topological.rend(); ++it) {
        std::uint32_t a = *it;
        if (!w.reachable[a]) continue;
        for (std::uint32_t c : w.children[a])
            if (alive[c]) {
                alive[a] = true;
                break;
            }
    }
    out_.assign(total, {});
    chain_parent_.assign(total, LevelAncestor::kNone);
    chain_index_.assign(total, 0);
    g_.assign(total, Nat(0));
    min_leaf_.assign(total, LevelAncestor::kNone);
    max_leaf_.assign(total, LevelAncestor::kNone);
    min_weight_.assign(total, Nat(0));
    max_weight_.assign(total, Nat(0));
    if (!alive[w.initial]) return;
    empty_ = false;

    std::vector<std::vector<std::uint32_t>> alive_children(n);
    std::vector<bool> unary(total, false);
    for (std::uint32_t a = 0; a < n; ++a) {
        if (!alive[a]) continue;
        for (std::uint32_t i = 0; i < w.children[a].size(); ++i)
            if (alive[w.children[a][i]]) alive_children[a].push_back(i);
        if (steps) *steps += w.children[a].size();
        if (alive_children[a].size() == 1) {
            unary[a] = true;
            chain_index_[a] = alive_children[a][0];
            chain_parent_[a] = w.children[a][chain_index_[a]];
        }
    }
    std::vector<std::uint32_t> omega(total);
    for (std::uint32_t v = 0; v < total; ++v) omega[v] = v;
    for (auto it = w.topological.rbegin(); it != w.topological.rend(); ++it) {
        std::uint32_t a = *it;
        if (!unary[a]) continue;
        std::uint32_t c = chain_parent_[a];
        const Nat& ew = w.edge_weight[a][chain_index_[a]];
        if (unary[c]) {
            omega[a] = omega[c];
            g_[a] = ew + g_[c];
        } else {
            omega[a] = c;
            g_[a] = ew;
        }
    }

    auto make_edge = [&](std::uint32_t from, std::uint32_t i, std::uint32_t index) {
        ContractedEdge e;
        e.from = from;
        e.orig_index = i;
        e.head = w.children[from][i];
        e.to = unary[e.head] ? omega[e.head] : e.head;
        e.index = index;
        e.base = w.edge_weight[from][i];
        e.weight = e.base + g_[e.head];
        e.contracted = e.head != e.to;
        return e;
    };
    for (std::uint32_t a = 0; a < n; ++a) {
        if (!alive[a] || unary[a]) continue;
        std::uint32_t k = 0;
        for (std::uint32_t i : alive_children[a]) {
            out_[a].push_back(static_cast<std::uint32_t>(edges_.size()));
            edges_.push_back(make_edge(a, i, ++k));
        }
    }
    initial_ = w.initial;
    if (unary[w.initial]) {
        stub_ = static_cast<std::uint32_t>(edges_.size());
        edges_.push_back(make_edge(w.initial, chain_index_[w.initial], 1));
        initial_ = edges_.back().to;
    }

    std::vector<bool> in_g(total, false);
    for (std::uint32_t v = 0; v < total; ++v) in_g[v] = alive[v] && !unary[v];
    for (std::uint32_t a = n; a < total; ++a)
        if (in_g[a]) {
            min_leaf_[a] = max_leaf_[a] = a;
        }
    std::vector<std::uint32_t> pmin(total, LevelAncestor::kNone), pmax(total, LevelAncestor::kNone);
    for (auto it = w.topological.rbegin(); it != w.topological.rend(); ++it) {
        std::uint32_t a = *it;
        if (!in_g[a]) continue;
        const ContractedEdge& lo = edges_[out_[a].front()];
        const ContractedEdge& hi = edges_[out_[a].back()];
        min_leaf_[a] = min_leaf_[lo.to];
        min_weight_[a] = lo.weight + min_weight_[lo.to];
        max_leaf_[a] = max_leaf_[hi.to];
        max_weight_[a] = hi.weight + max_weight_[hi.to];
        pmin[a] = lo.to;
        pmax[a] = hi.to;
    }
    fmin_ = LevelAncestor(pmin, in_g);
    fmax_ = LevelAncestor(pmax, in_g);
    chain_ = LevelAncestor(chain_parent_, alive);
    if (steps) *steps += edges_.size() + total;
}

std::size_t DagI::node_count() const {
    std::size_t c = 0;
    for (std::uint32_t v = 0; v < out_.size(); ++v)
        if (min_leaf_[v] != LevelAncestor::kNone) ++c;
    return c;
}

std::uint32_t DagI::wp_min(std::uint32_t v, std::uint32_t u) const { return fmin_.next_link(u, v); }

std::uint32_t DagI::wp_max(std::uint32_t v, std::uint32_t u) const { return fmax_.next_link(u, v); }

std::uint32_t DagI::chain_predecessor(std::uint32_t head, std::uint32_t end) const {
    return chain_.next_link(end, head);
}

Nat DagI::partial_weight(std::uint32_t e, std::uint32_t end) const {
    const ContractedEdge& ed = edges_[e];
    return ed.base + g_[ed.head] - g_[end];
}

std::size_t DagI::memory_words() const {
    return edges_.size() * 8 + out_.size() * 8 + fmin_.memory_words() + fmax_.memory_words() + chain_.memory_words();
}

void MinMaxPath::push(Triple t) {
    weight_ += t.weight;
    triples_.push_back(std::move(t));
    ++operations_;
}

Triple MinMaxPath::pop() {
    Triple t = std::move(triples_.back());
    triples_.pop_back();
    weight_ -= t.weight;
    ++operations_;
    return t;
}

void MinMaxPath::push_min(std::uint32_t u, std::uint32_t v) {
    if (u == v) return;
    push(Triple{TripleKind::Min, u, v, 0, dag_->min_weight(u) - dag_->min_weight(v)});
}

void MinMaxPath::push_max(std::uint32_t u, std::uint32_t v) {
    if (u == v) return;
    push(Triple{TripleKind::Max, u, v, 0, dag_->max_weight(u) - dag_->max_weight(v)});
}

void MinMaxPath::push_edge(std::uint32_t e) {
    const ContractedEdge& ed = dag_->edge(e);
    push(Triple{TripleKind::Edge, ed.from, ed.to, e, ed.weight});
}

void MinMaxPath::append_max_edge(std::uint32_t e) {
    const ContractedEdge& ed = dag_->edge(e);
    if (triples_.size() > base() && triples_.back().kind == TripleKind::Max && triples_.back().to == ed.from) {
        Triple t = pop();
        push_max(t.from, ed.to);
    } else {
        push_max(ed.from, ed.to);
    }
}

void MinMaxPath::descend_min(std::uint32_t v) { push_min(v, dag_->min_leaf(v)); }

bool MinMaxPath::first() {
    triples_.clear();
    records_.clear();
    weight_ = 0;
    last_edit_ = 0;
    if (dag_->empty()) return false;
    if (dag_->stub()) push_edge(*dag_->stub());
    descend_min(dag_->initial());
    return true;
}

bool MinMaxPath::advance_from_min() {
    Triple t = pop();
    std::uint32_t v1 = t.from, v2 = t.to;
    std::uint32_t v3 = dag_->wp_min(v1, v2);
    const auto& out = dag_->out(v3);
    std::uint32_t e2 = out[1];
    if (v1 != v3) push_min(v1, v3);
    if (out.size() > 2)
        push_edge(e2);
    else
        append_max_edge(e2);
    descend_min(dag_->edge(e2).to);
    return true;
}

bool MinMaxPath::advance_from_edge() {
    Triple t = pop();
    const ContractedEdge& ed = dag_->edge(t.edge);
    const auto& out = dag_->out(ed.from);
    std::uint32_t next = out[ed.index];
    if (ed.index + 1 < out.size())
        push_edge(next);
    else
        append_max_edge(next);
    descend_min(dag_->edge(next).to);
    return true;
}

bool MinMaxPath::next() {
    if (!records_.empty()) throw InternalError("next() on a shortened path");
    std::uint64_t before = operations_;
    if (triples_.size() <= base()) return false;
    bool moved = false;
    switch (triples_.back().kind) {
        case TripleKind::Max:
            if (triples_.size() == base() + 1) return false;
            pop();
            moved = triples_.back().kind == TripleKind::Min ? advance_from_min() : advance_from_edge();
            break;
        case TripleKind::Min:
            moved = advance_from_min();
            break;
        case TripleKind::Edge:
            moved = advance_from_edge();
            break;
    }
    last_edit_ = static_cast<std::size_t>(operations_ - before);
    return moved;
}

std::uint32_t MinMaxPath::end_node() const {
    if (triples_.empty()) return dag_->weighted().initial;
    return triples_.back().to;
}

std::uint32_t MinMaxPath::end_nonterminal() const {
    std::uint32_t v = end_node();
    const std::uint32_t n = dag_->weighted().n;
    return v >= n ? v - n : v;
}

DagEdge MinMaxPath::shorten() {
    if (triples_.empty()) throw InvalidArgument("cannot shorten the empty path");
    Record rec;
    std::size_t before = triples_.size();
    Triple t = pop();
    std::uint32_t e = t.edge;
    std::uint32_t end = t.to;
    if (t.kind != TripleKind::Edge) {
        bool is_min = t.kind == TripleKind::Min;
        const auto& out = dag_->out(t.from);
        std::uint32_t direct = is_min ? out.front() : out.back();
        if (dag_->edge(direct).to == t.to) {
            e = direct;
        } else {
            std::uint32_t wp = is_min ? dag_->wp_min(t.from, t.to) : dag_->wp_max(t.from, t.to);
            if (is_min)
                push_min(t.from, wp);
            else
                push_max(t.from, wp);
            const auto& wout = dag_->out(wp);
            e = is_min ? wout.front() : wout.back();
        }
    }
    rec.popped.push_back(std::move(t));
    const ContractedEdge& ed = dag_->edge(e);
    DagEdge removed;
    if (end == ed.head) {
        removed = DagEdge{ed.from, ed.orig_index, ed.head};
    } else {
        std::uint32_t y = dag_->chain_predecessor(ed.head, end);
        push(Triple{TripleKind::Edge, ed.from, y, e, dag_->partial_weight(e, y)});
        removed = DagEdge{y, dag_->chain_child_index(y), end};
    }
    rec.pushed = triples_.size() - (before - 1);
    records_.push_back(std::move(rec));
    return removed;
}

void MinMaxPath::restore() {
    if (records_.empty()) throw InvalidArgument("restore without a matching shorten");
    Record rec = std::move(records_.back());
    records_.pop_back();
    for (std::size_t i = 0; i < rec.pushed; ++i) pop();
    for (auto it = rec.popped.rbegin(); it != rec.popped.rend(); ++it) push(std::move(*it));
}

std::vector<DagEdge> MinMaxPath::explicit_path() const {
    std::vector<DagEdge> out;
    auto expand = [&](std::uint32_t e, std::uint32_t end) {
        const ContractedEdge& ed = dag_->edge(e);
        out.push_back(DagEdge{ed.from, ed.orig_index, ed.head});
        for (std::uint32_t x = ed.head; x != end;) {
            std::uint32_t c = dag_->chain_child(x);
            out.push_back(DagEdge{x, dag_->chain_child_index(x), c});
            x = c;
        }
    };
    for (const Triple& t : triples_) {
        if (t.kind == TripleKind::Edge) {
            expand(t.edge, t.to);
            continue;
        }
        for (std::uint32_t x = t.from; x != t.to;) {
            const auto& o = dag_->out(x);
            std::uint32_t e = t.kind == TripleKind::Min ? o.front() : o.back();
            expand(e, dag_->edge(e).to);
            x = dag_->edge(e).to;
        }
    }
    return out;
}

std::vector<std::uint32_t> dag_path(const MinMaxPath& p) {
    std::vector<std::uint32_t> out;
    for (const DagEdge& e : p.explicit_path())
        if (e.index != 0) out.push_back(e.index);
    return out;
}

}  // namespace slpfo
