#include "slpfo/structure.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "slpfo/errors.hpp"
#include "slpfo/text.hpp"

namespace slpfo {

int Signature::find(const std::string& name) const {
    for (std::size_t i = 0; i < relations.size(); ++i)
        if (relations[i].name == name) return static_cast<int>(i);
    return -1;
}

std::size_t Signature::add(const std::string& name, unsigned arity) {
    if (arity == 0) throw InvalidArgument("relation " + name + " has arity 0");
    if (find(name) >= 0) throw InvalidArgument("duplicate relation name " + name);
    relations.push_back({name, arity});
    return relations.size() - 1;
}

unsigned Signature::max_arity() const {
    unsigned m = 0;
    for (const auto& r : relations) m = std::max(m, r.arity);
    return m;
}

bool Signature::operator==(const Signature& other) const {
    if (relations.size() != other.relations.size()) return false;
    for (std::size_t i = 0; i < relations.size(); ++i)
        if (relations[i].name != other.relations[i].name || relations[i].arity != other.relations[i].arity)
            return false;
    return true;
}

Structure::Structure(Signature sig) : signature(std::move(sig)), tuples(signature.size()) {}

NodeId Structure::add_node(const std::string& label) {
    if (!label.empty() || !labels.empty()) {
        labels.resize(universe_size);
        labels.push_back(label);
    }
    return static_cast<NodeId>(universe_size++);
}

void Structure::add_tuple(std::size_t relation, std::vector<NodeId> tuple) {
    if (relation >= signature.size()) throw InvalidArgument("unknown relation index");
    if (tuple.size() != signature.relations[relation].arity)
        throw InvalidArgument("tuple arity mismatch for relation " + signature.relations[relation].name);
    for (NodeId v : tuple)
        if (v >= universe_size) throw InvalidArgument("tuple references a node outside the universe");
    if (tuples.size() < signature.size()) tuples.resize(signature.size());
    tuples[relation].push_back(std::move(tuple));
}

void Structure::normalize() {
    tuples.resize(signature.size());
    for (auto& rel : tuples) {
        std::sort(rel.begin(), rel.end());
        rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    }
    if (!labels.empty()) labels.resize(universe_size);
}

std::size_t Structure::size() const {
    std::size_t total = universe_size;
    for (std::size_t i = 0; i < tuples.size(); ++i) total += signature.relations[i].arity * tuples[i].size();
    return total;
}

std::size_t Structure::tuple_count() const {
    std::size_t total = 0;
    for (const auto& rel : tuples) total += rel.size();
    return total;
}

bool Structure::has_tuple(std::size_t relation, const std::vector<NodeId>& tuple) const {
    if (relation >= tuples.size()) return false;
    return std::binary_search(tuples[relation].begin(), tuples[relation].end(), tuple);
}

std::string Structure::label(NodeId v) const {
    if (v < labels.size() && !labels[v].empty()) return labels[v];
    return std::to_string(v);
}

PartialTuple disjoint_union(const PartialTuple& a, const PartialTuple& b) {
    PartialTuple out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool in_a = i < a.size() && a[i].has_value();
        bool in_b = i < b.size() && b[i].has_value();
        if (in_a && in_b) throw InvalidArgument("partial tuples have overlapping domains");
        if (in_a) out[i] = a[i];
        if (in_b) out[i] = b[i];
    }
    return out;
}

Adjacency gaifman_adjacency(const Structure& s) {
    if (s.signature.max_arity() > 2) throw ArityError("Gaifman adjacency requires arity <= 2");
    Adjacency adj(s.universe_size);
    for (std::size_t i = 0; i < s.tuples.size(); ++i) {
        if (s.signature.relations[i].arity != 2) continue;
        for (const auto& t : s.tuples[i]) {
            if (t[0] == t[1]) continue;
            adj[t[0]].push_back(t[1]);
            adj[t[1]].push_back(t[0]);
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

std::size_t undirected_edge_count(const Adjacency& adj) {
    std::size_t twice = 0;
    for (const auto& list : adj) twice += list.size();
    return twice / 2;
}

std::size_t max_degree(const Structure& s) {
    std::size_t best = 0;
    for (const auto& list : gaifman_adjacency(s)) best = std::max(best, list.size());
    return best;
}

std::vector<Distance> bfs_distances(const Adjacency& adj, const std::vector<NodeId>& sources,
                                    std::optional<std::uint32_t> limit) {
    std::vector<Distance> dist(adj.size());
    std::deque<NodeId> queue;
    for (NodeId s : sources) {
        if (s >= adj.size()) throw InvalidArgument("BFS source outside the universe");
        if (!dist[s]) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        std::uint32_t d = *dist[v];
        if (limit && d >= *limit) continue;
        for (NodeId w : adj[v]) {
            if (dist[w]) continue;
            dist[w] = d + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

Distance distance(const Adjacency& adj, NodeId a, NodeId b) { return bfs_distances(adj, {a})[b]; }

namespace {

std::vector<NodeId> tuple_sources(const PartialTuple& t, std::size_t n) {
    std::vector<NodeId> sources;
    for (const auto& x : t) {
        if (!x) continue;
        if (*x >= n) throw InvalidArgument("tuple entry outside the universe");
        sources.push_back(*x);
    }
    return sources;
}

}  // namespace

std::vector<NodeId> sphere(const Structure& s, const PartialTuple& t, unsigned r) {
    Adjacency adj = gaifman_adjacency(s);
    std::vector<NodeId> sources = tuple_sources(t, s.universe_size);
    if (sources.empty()) return {};
    std::vector<Distance> dist = bfs_distances(adj, sources, r);
    std::vector<NodeId> out;
    for (NodeId v = 0; v < dist.size(); ++v)
        if (dist[v]) out.push_back(v);
    return out;
}

Structure induced_substructure(const Structure& s, const std::vector<NodeId>& nodes) {
    Structure out(s.signature);
    std::vector<std::optional<NodeId>> remap(s.universe_size);
    for (NodeId v : nodes) {
        remap[v] = out.add_node(v < s.labels.size() ? s.labels[v] : "");
    }
    for (std::size_t i = 0; i < s.tuples.size(); ++i) {
        for (const auto& t : s.tuples[i]) {
            std::vector<NodeId> mapped;
            mapped.reserve(t.size());
            bool inside = true;
            for (NodeId v : t) {
                if (!remap[v]) {
                    inside = false;
                    break;
                }
                mapped.push_back(*remap[v]);
            }
            if (inside) out.tuples[i].push_back(std::move(mapped));
        }
    }
    out.normalize();
    return out;
}

PointedNeighborhood neighborhood(const Structure& s, const PartialTuple& t, unsigned r) {
    std::vector<NodeId> nodes = sphere(s, t, r);
    PointedNeighborhood n;
    n.structure = induced_substructure(s, nodes);
    n.radius = r;
    n.origin = nodes;
    n.centers.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i]) continue;
        auto it = std::lower_bound(nodes.begin(), nodes.end(), *t[i]);
        n.centers[i] = static_cast<NodeId>(it - nodes.begin());
    }
    return n;
}

Components components(const Structure& s) {
    Adjacency adj = gaifman_adjacency(s);
    Components c;
    c.component_of.assign(s.universe_size, static_cast<std::size_t>(-1));
    for (NodeId start = 0; start < s.universe_size; ++start) {
        if (c.component_of[start] != static_cast<std::size_t>(-1)) continue;
        std::size_t index = c.members.size();
        std::vector<NodeId> members;
        std::deque<NodeId> queue{start};
        c.component_of[start] = index;
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            members.push_back(v);
            for (NodeId w : adj[v]) {
                if (c.component_of[w] != static_cast<std::size_t>(-1)) continue;
                c.component_of[w] = index;
                queue.push_back(w);
            }
        }
        std::sort(members.begin(), members.end());
        c.parts.push_back(induced_substructure(s, members));
        c.members.push_back(std::move(members));
    }
    return c;
}

namespace {

std::string fresh_name(const Signature& sig, std::set<std::string>& taken, std::string base) {
    while (sig.find(base) >= 0 || taken.count(base)) base += "_";
    taken.insert(base);
    return base;
}

}  // namespace

ArityReductionNames arity_reduction_names(const Signature& sig) {
    ArityReductionNames names;
    std::set<std::string> taken;
    names.universe = fresh_name(sig, taken, "R_U");
    names.element_of.resize(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
        if (sig.relations[i].arity > 2) names.element_of[i] = fresh_name(sig, taken, sig.relations[i].name + "'");
    unsigned n = sig.max_arity();
    for (unsigned j = 1; j <= n; ++j) names.position.push_back(fresh_name(sig, taken, "E" + std::to_string(j)));
    return names;
}

Structure reduce_arity(const Structure& s) {
    if (s.signature.max_arity() <= 2) return s;
    ArityReductionNames names = arity_reduction_names(s.signature);
    Signature sig;
    std::vector<int> target(s.signature.size(), -1);
    for (std::size_t i = 0; i < s.signature.size(); ++i) {
        const Relation& r = s.signature.relations[i];
        target[i] = static_cast<int>(sig.add(r.arity > 2 ? names.element_of[i] : r.name, r.arity > 2 ? 1 : r.arity));
    }
    std::size_t universe_rel = sig.add(names.universe, 1);
    std::vector<std::size_t> position_rel;
    for (const auto& name : names.position) position_rel.push_back(sig.add(name, 2));

    Structure out(sig);
    for (NodeId v = 0; v < s.universe_size; ++v) {
        out.add_node(v < s.labels.size() ? s.labels[v] : "");
        out.add_tuple(universe_rel, {v});
    }
    for (std::size_t i = 0; i < s.tuples.size(); ++i) {
        const Relation& r = s.signature.relations[i];
        for (const auto& t : s.tuples[i]) {
            if (r.arity <= 2) {
                out.add_tuple(static_cast<std::size_t>(target[i]), t);
                continue;
            }
            std::string label;
            if (!s.labels.empty()) {
                label = r.name + "(";
                for (std::size_t j = 0; j < t.size(); ++j) label += (j ? "," : "") + s.label(t[j]);
                label += ")";
            }
            NodeId x = out.add_node(label);
            out.add_tuple(static_cast<std::size_t>(target[i]), {x});
            for (std::size_t j = 0; j < t.size(); ++j) out.add_tuple(position_rel[j], {x, t[j]});
        }
    }
    out.normalize();
    return out;
}

Structure parse_structure(const std::string& text) {
    std::vector<LineTokens> lines = tokenize_lines(text);
    Structure s;
    bool have_signature = false;
    std::map<std::string, NodeId> by_label;
    for (const auto& line : lines) {
        const std::string& head = line.tokens[0].text;
        if (head == "signature") {
            if (have_signature) throw ParseError(line.number, 1, "duplicate signature line");
            have_signature = true;
            for (std::size_t i = 1; i < line.tokens.size(); ++i) {
                auto [name, arity] = parse_relation_decl(line.tokens[i], line.number);
                if (s.signature.find(name) >= 0)
                    throw ParseError(line.number, line.tokens[i].column, "duplicate relation " + name);
                s.signature.add(name, arity);
            }
            s.tuples.resize(s.signature.size());
        } else if (head == "node") {
            if (line.tokens.size() != 2) throw ParseError(line.number, 1, "expected: node <label>");
            const std::string& label = line.tokens[1].text;
            if (by_label.count(label)) throw ParseError(line.number, line.tokens[1].column, "duplicate node " + label);
            by_label[label] = s.add_node(label);
        } else if (head == "tuple") {
            if (!have_signature) throw ParseError(line.number, 1, "tuple before signature");
            if (line.tokens.size() < 2) throw ParseError(line.number, 1, "expected: tuple <rel> <label...>");
            int rel = s.signature.find(line.tokens[1].text);
            if (rel < 0) throw ParseError(line.number, line.tokens[1].column, "unknown relation " + line.tokens[1].text);
            std::size_t arity = s.signature.relations[static_cast<std::size_t>(rel)].arity;
            if (line.tokens.size() - 2 != arity)
                throw ParseError(line.number, line.tokens[1].column,
                                 "relation " + line.tokens[1].text + " expects " + std::to_string(arity) + " arguments");
            std::vector<NodeId> t;
            for (std::size_t i = 2; i < line.tokens.size(); ++i) {
                auto it = by_label.find(line.tokens[i].text);
                if (it == by_label.end())
                    throw ParseError(line.number, line.tokens[i].column, "unknown node " + line.tokens[i].text);
                t.push_back(it->second);
            }
            s.add_tuple(static_cast<std::size_t>(rel), std::move(t));
        } else {
            throw ParseError(line.number, line.tokens[0].column, "unknown directive " + head);
        }
    }
    s.normalize();
    return s;
}

std::string format_structure(const Structure& s) {
    std::ostringstream out;
    out << "signature";
    for (const auto& r : s.signature.relations) out << ' ' << r.name << '/' << r.arity;
    out << '\n';
    for (NodeId v = 0; v < s.universe_size; ++v) out << "node " << s.label(v) << '\n';
    for (std::size_t i = 0; i < s.tuples.size(); ++i)
        for (const auto& t : s.tuples[i]) {
            out << "tuple " << s.signature.relations[i].name;
            for (NodeId v : t) out << ' ' << s.label(v);
            out << '\n';
        }
    return out.str();
}

}  // namespace slpfo
