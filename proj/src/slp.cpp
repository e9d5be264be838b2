#include "slpfo/slp.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include "slpfo/errors.hpp"
#include "slpfo/text.hpp"

namespace slpfo {

bool Production::is_contact(NodeId v) const { return contact_index(v).has_value(); }

std::optional<unsigned> Production::contact_index(NodeId v) const {
    for (std::size_t i = 0; i < contacts.size(); ++i)
        if (contacts[i] && *contacts[i] == v) return static_cast<unsigned>(i);
    return std::nullopt;
}

std::optional<Nonterminal> Slp::find(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

namespace {

struct ParseState {
    Slp slp;
    std::vector<std::map<std::string, NodeId>> labels;
    bool have_signature = false;
    std::optional<std::string> initial_name;
    std::size_t initial_line = 0;

    Nonterminal intern(const std::string& name) {
        auto it = slp.index.find(name);
        if (it != slp.index.end()) return it->second;
        Nonterminal id = static_cast<Nonterminal>(slp.productions.size());
        Production p;
        p.name = name;
        p.local = Structure(slp.signature);
        slp.productions.push_back(std::move(p));
        labels.emplace_back();
        slp.index[name] = id;
        return id;
    }

    Nonterminal declared(const LineTokens& line, std::size_t pos) {
        if (line.tokens.size() <= pos) throw ParseError(line.number, 1, "missing nonterminal name");
        const Token& t = line.tokens[pos];
        auto it = slp.index.find(t.text);
        if (it == slp.index.end() || !slp.productions[it->second].declared)
            throw ParseError(line.number, t.column, "nonterminal " + t.text + " used before its declaration");
        return it->second;
    }

    NodeId node(Nonterminal a, const Token& t, std::size_t line) {
        auto it = labels[a].find(t.text);
        if (it == labels[a].end())
            throw ParseError(line, t.column, "unknown node " + t.text + " in production " + slp.productions[a].name);
        return it->second;
    }
};

}  // namespace

Slp parse_slp(const std::string& text) {
    ParseState st;
    for (const auto& line : tokenize_lines(text)) {
        const std::string& head = line.tokens[0].text;
        const std::size_t n = line.tokens.size();
        if (head == "signature") {
            if (st.have_signature) throw ParseError(line.number, 1, "duplicate signature line");
            if (!st.slp.productions.empty()) throw ParseError(line.number, 1, "signature must precede productions");
            st.have_signature = true;
            for (std::size_t i = 1; i < n; ++i) {
                auto [name, arity] = parse_relation_decl(line.tokens[i], line.number);
                if (st.slp.signature.find(name) >= 0)
                    throw ParseError(line.number, line.tokens[i].column, "duplicate relation " + name);
                st.slp.signature.add(name, arity);
            }
            continue;
        }
        if (!st.have_signature) throw ParseError(line.number, 1, "expected a signature line first");
        if (head == "initial") {
            if (n != 2) throw ParseError(line.number, 1, "expected: initial <nonterminal>");
            if (st.initial_name) throw ParseError(line.number, 1, "duplicate initial line");
            st.initial_name = line.tokens[1].text;
            st.initial_line = line.number;
        } else if (head == "nonterminal") {
            if (n != 4 || line.tokens[2].text != "rank")
                throw ParseError(line.number, 1, "expected: nonterminal <name> rank <k>");
            Nonterminal a = st.intern(line.tokens[1].text);
            Production& p = st.slp.productions[a];
            if (p.declared) throw ParseError(line.number, line.tokens[1].column, "duplicate nonterminal " + p.name);
            unsigned long long rank = parse_unsigned(line.tokens[3], line.number);
            if (rank > 64) throw ParseError(line.number, line.tokens[3].column, "rank out of range");
            p.declared = true;
            p.rank = static_cast<unsigned>(rank);
            p.line = line.number;
            p.contacts.assign(p.rank, std::nullopt);
        } else if (head == "node") {
            if (n != 3) throw ParseError(line.number, 1, "expected: node <nonterminal> <label>");
            Nonterminal a = st.declared(line, 1);
            const Token& label = line.tokens[2];
            if (st.labels[a].count(label.text))
                throw ParseError(line.number, label.column, "duplicate node " + label.text);
            st.labels[a][label.text] = st.slp.productions[a].local.add_node(label.text);
        } else if (head == "contact") {
            if (n != 4) throw ParseError(line.number, 1, "expected: contact <nonterminal> <i> <label>");
            Nonterminal a = st.declared(line, 1);
            Production& p = st.slp.productions[a];
            unsigned long long i = parse_unsigned(line.tokens[2], line.number);
            if (i == 0 || i > p.rank)
                throw ParseError(line.number, line.tokens[2].column,
                                 "contact index out of range 1.." + std::to_string(p.rank));
            if (p.contacts[i - 1])
                throw ParseError(line.number, line.tokens[2].column, "contact " + std::to_string(i) + " defined twice");
            const Token& label = line.tokens[3];
            auto it = st.labels[a].find(label.text);
            NodeId v = it != st.labels[a].end() ? it->second : p.local.add_node(label.text);
            st.labels[a][label.text] = v;
            p.contacts[i - 1] = v;
        } else if (head == "tuple") {
            if (n < 3) throw ParseError(line.number, 1, "expected: tuple <nonterminal> <rel> <label...>");
            Nonterminal a = st.declared(line, 1);
            int rel = st.slp.signature.find(line.tokens[2].text);
            if (rel < 0) throw ParseError(line.number, line.tokens[2].column, "unknown relation " + line.tokens[2].text);
            unsigned arity = st.slp.signature.relations[static_cast<std::size_t>(rel)].arity;
            if (n - 3 != arity)
                throw ParseError(line.number, line.tokens[2].column,
                                 "relation " + line.tokens[2].text + " expects " + std::to_string(arity) + " arguments");
            std::vector<NodeId> t;
            for (std::size_t i = 3; i < n; ++i) t.push_back(st.node(a, line.tokens[i], line.number));
            st.slp.productions[a].local.add_tuple(static_cast<std::size_t>(rel), std::move(t));
        } else if (head == "ref") {
            if (n < 3) throw ParseError(line.number, 1, "expected: ref <nonterminal> <target> <i>=<label> ...");
            Nonterminal a = st.declared(line, 1);
            Reference ref;
            ref.target = st.intern(line.tokens[2].text);
            ref.line = line.number;
            for (std::size_t k = 3; k < n; ++k) {
                const Token& t = line.tokens[k];
                std::size_t eq = t.text.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == t.text.size())
                    throw ParseError(line.number, t.column, "expected <i>=<label>, got " + t.text);
                unsigned long long i = parse_unsigned(Token{t.text.substr(0, eq), t.column}, line.number);
                if (i == 0 || i > 64) throw ParseError(line.number, t.column, "contact index out of range");
                if (ref.sigma.size() < i) ref.sigma.resize(i);
                if (ref.sigma[i - 1])
                    throw ParseError(line.number, t.column, "position " + std::to_string(i) + " mapped twice");
                ref.sigma[i - 1] = st.node(a, Token{t.text.substr(eq + 1), t.column + eq + 1}, line.number);
            }
            st.slp.productions[a].refs.push_back(std::move(ref));
        } else {
            throw ParseError(line.number, line.tokens[0].column, "unknown directive " + head);
        }
    }
    if (!st.have_signature) throw ParseError(1, 1, "missing signature line");
    if (!st.initial_name) throw ParseError(1, 1, "missing initial line");
    auto it = st.slp.index.find(*st.initial_name);
    if (it == st.slp.index.end() || !st.slp.productions[it->second].declared)
        throw ParseError(st.initial_line, 1, "initial nonterminal " + *st.initial_name + " has no production");
    st.slp.initial = it->second;
    for (auto& p : st.slp.productions) {
        p.local.signature = st.slp.signature;
        p.local.normalize();
    }
    return st.slp;
}

std::string format_slp(const Slp& slp) {
    std::ostringstream out;
    out << "signature";
    for (const auto& r : slp.signature.relations) out << ' ' << r.name << '/' << r.arity;
    out << "\ninitial " << slp.at(slp.initial).name << '\n';
    for (const auto& p : slp.productions) {
        if (!p.declared) continue;
        out << "nonterminal " << p.name << " rank " << p.rank << '\n';
        std::vector<bool> is_contact(p.local.universe_size, false);
        for (std::size_t i = 0; i < p.contacts.size(); ++i)
            if (p.contacts[i]) {
                if (!is_contact[*p.contacts[i]]) is_contact[*p.contacts[i]] = true;
                out << "contact " << p.name << ' ' << i + 1 << ' ' << p.local.label(*p.contacts[i]) << '\n';
            }
        for (NodeId v = 0; v < p.local.universe_size; ++v)
            if (!is_contact[v]) out << "node " << p.name << ' ' << p.local.label(v) << '\n';
        for (std::size_t r = 0; r < p.local.tuples.size(); ++r)
            for (const auto& t : p.local.tuples[r]) {
                out << "tuple " << p.name << ' ' << slp.signature.relations[r].name;
                for (NodeId v : t) out << ' ' << p.local.label(v);
                out << '\n';
            }
        for (const auto& ref : p.refs) {
            out << "ref " << p.name << ' ' << slp.at(ref.target).name;
            for (std::size_t i = 0; i < ref.sigma.size(); ++i)
                if (ref.sigma[i]) out << ' ' << i + 1 << '=' << p.local.label(*ref.sigma[i]);
            out << '\n';
        }
    }
    return out.str();
}

ValidationReport validate(const Slp& slp) {
    ValidationReport rep;
    const std::size_t n = slp.productions.size();
    rep.apex_per_production.assign(n, true);
    if (slp.at(slp.initial).rank != 0)
        rep.violations.push_back("initial nonterminal " + slp.at(slp.initial).name + " has rank " +
                                 std::to_string(slp.at(slp.initial).rank) + ", expected 0");
    for (Nonterminal a = 0; a < n; ++a) {
        const Production& p = slp.productions[a];
        if (!p.declared) {
            rep.violations.push_back("nonterminal " + p.name + " is referenced but has no production");
            continue;
        }
        std::set<NodeId> seen;
        for (std::size_t i = 0; i < p.contacts.size(); ++i) {
            if (!p.contacts[i]) {
                rep.violations.push_back(p.name + ": contact " + std::to_string(i + 1) + " is missing");
            } else if (!seen.insert(*p.contacts[i]).second) {
                rep.violations.push_back(p.name + ": tau is not injective (node " + p.local.label(*p.contacts[i]) +
                                         " is contact " + std::to_string(i + 1) + " and an earlier contact)");
            }
        }
        for (std::size_t j = 0; j < p.refs.size(); ++j) {
            const Reference& ref = p.refs[j];
            const Production& b = slp.at(ref.target);
            std::string where = p.name + " reference " + std::to_string(j + 1) + " (line " + std::to_string(ref.line) + ")";
            if (b.declared && ref.sigma.size() > b.rank)
                rep.violations.push_back(where + ": maps " + std::to_string(ref.sigma.size()) + " positions but " +
                                         b.name + " has rank " + std::to_string(b.rank));
            std::set<NodeId> images;
            for (std::size_t i = 0; i < std::max<std::size_t>(ref.sigma.size(), b.declared ? b.rank : 0); ++i) {
                if (i >= ref.sigma.size() || !ref.sigma[i]) {
                    rep.violations.push_back(where + ": position " + std::to_string(i + 1) + " is unmapped");
                    continue;
                }
                NodeId v = *ref.sigma[i];
                if (!images.insert(v).second)
                    rep.violations.push_back(where + ": sigma is not injective at node " + p.local.label(v));
                if (p.is_contact(v)) rep.apex_per_production[a] = false;
            }
        }
        if (!rep.apex_per_production[a]) rep.apex = false;
    }

    std::vector<int> state(n, 0);
    std::vector<std::pair<Nonterminal, std::size_t>> stack;
    for (Nonterminal root = 0; root < n; ++root) {
        if (state[root]) continue;
        stack.push_back({root, 0});
        state[root] = 1;
        while (!stack.empty()) {
            auto& [a, next] = stack.back();
            const auto& refs = slp.productions[a].refs;
            if (next == refs.size()) {
                state[a] = 2;
                stack.pop_back();
                continue;
            }
            Nonterminal b = refs[next++].target;
            if (state[b] == 1) {
                if (rep.acyclic)
                    rep.violations.push_back("cycle through nonterminal " + slp.productions[b].name);
                rep.acyclic = false;
            } else if (state[b] == 0) {
                state[b] = 1;
                stack.push_back({b, 0});
            }
        }
    }

    std::vector<bool> reach(n, false);
    std::vector<Nonterminal> todo{slp.initial};
    reach[slp.initial] = true;
    while (!todo.empty()) {
        Nonterminal a = todo.back();
        todo.pop_back();
        for (const auto& ref : slp.productions[a].refs)
            if (!reach[ref.target]) {
                reach[ref.target] = true;
                todo.push_back(ref.target);
            }
    }
    for (Nonterminal a = 0; a < n; ++a)
        if (!reach[a]) {
            rep.unreachable.push_back(a);
            rep.warnings.push_back("nonterminal " + slp.productions[a].name + " is unreachable from the initial one");
        }
    return rep;
}

std::string format_report(const Slp& slp, const ValidationReport& report) {
    std::ostringstream out;
    out << "valid: " << (report.ok() ? "yes" : "no") << '\n';
    out << "acyclic: " << (report.acyclic ? "yes" : "no") << '\n';
    out << "apex: " << (report.apex ? "yes" : "no") << '\n';
    for (Nonterminal a = 0; a < slp.productions.size(); ++a)
        out << "apex " << slp.productions[a].name << ": " << (report.apex_per_production[a] ? "yes" : "no") << '\n';
    for (const auto& v : report.violations) out << "violation: " << v << '\n';
    for (const auto& w : report.warnings) out << "warning: " << w << '\n';
    return out.str();
}

void require_valid(const Slp& slp, bool need_apex) {
    ValidationReport rep = validate(slp);
    if (!rep.ok()) throw InvalidArgument("invalid SLP: " + rep.violations.front());
    if (need_apex && !rep.apex) throw ApexRequired();
}

Nat slp_size(const Slp& slp) {
    Nat total = 0;
    for (const auto& p : slp.productions) {
        if (!p.declared) continue;
        total += p.local.size();
        for (const auto& ref : p.refs) total += 1 + slp.at(ref.target).rank;
    }
    return total;
}

std::size_t OrderedDag::edge_count() const {
    std::size_t e = 0;
    for (const auto& c : children) e += c.size();
    return e;
}

OrderedDag build_dag(const Slp& slp) {
    OrderedDag dag;
    dag.initial = slp.initial;
    for (const auto& p : slp.productions) {
        dag.names.push_back(p.name);
        std::vector<std::uint32_t> kids;
        for (const auto& ref : p.refs) kids.push_back(ref.target);
        dag.children.push_back(std::move(kids));
    }
    return dag;
}

bool ARep::operator<(const ARep& o) const {
    if (start != o.start) return start < o.start;
    if (path != o.path) return path < o.path;
    return local < o.local;
}

Nonterminal path_end(const Slp& slp, Nonterminal start, const std::vector<std::uint32_t>& path) {
    Nonterminal cur = start;
    for (std::uint32_t j : path) {
        const auto& refs = slp.at(cur).refs;
        if (j == 0 || j > refs.size())
            throw InvalidArgument("path index " + std::to_string(j) + " out of range at " + slp.at(cur).name);
        cur = refs[j - 1].target;
    }
    return cur;
}

bool is_valid_rep(const Slp& slp, const ARep& rep) {
    if (rep.start >= slp.productions.size()) return false;
    Nonterminal end = 0;
    try {
        end = path_end(slp, rep.start, rep.path);
    } catch (const InvalidArgument&) {
        return false;
    }
    const Production& p = slp.at(end);
    if (rep.local >= p.local.universe_size) return false;
    return rep.path.empty() || !p.is_contact(rep.local);
}

std::string format_path(const Slp& slp, Nonterminal start, const std::vector<std::uint32_t>& path) {
    std::string s = slp.at(start).name;
    Nonterminal cur = start;
    for (std::uint32_t j : path) {
        cur = slp.at(cur).refs.at(j - 1).target;
        s += std::to_string(j) + slp.at(cur).name;
    }
    return s;
}

std::string format_rep(const Slp& slp, const ARep& rep) {
    Nonterminal end = path_end(slp, rep.start, rep.path);
    return "(" + format_path(slp, rep.start, rep.path) + "," + slp.at(end).local.label(rep.local) + ")";
}

namespace {

std::vector<std::uint32_t> rep_key(const std::vector<std::uint32_t>& path, NodeId local) {
    std::vector<std::uint32_t> key(path);
    key.push_back(local);
    return key;
}

}  // namespace

std::optional<NodeId> Decompressed::find(const std::vector<std::uint32_t>& path, NodeId local) const {
    auto it = by_rep.find(rep_key(path, local));
    if (it == by_rep.end()) return std::nullopt;
    return it->second;
}

Nat val_node_count(const Slp& slp, Nonterminal a) {
    std::vector<std::optional<Nat>> memo(slp.productions.size());
    std::function<Nat(Nonterminal)> count = [&](Nonterminal x) -> Nat {
        if (memo[x]) return *memo[x];
        const Production& p = slp.at(x);
        Nat c = p.local.universe_size;
        for (const auto& ref : p.refs) c += count(ref.target) - slp.at(ref.target).rank;
        memo[x] = c;
        return c;
    };
    return count(a);
}

std::size_t decompress_cap_from_env() {
    const char* env = std::getenv("SLPFO_DECOMPRESS_CAP");
    if (!env || !*env) return kDefaultDecompressCap;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw InvalidArgument("SLPFO_DECOMPRESS_CAP must be a positive integer");
    return static_cast<std::size_t>(v);
}

Decompressed decompress(const Slp& slp, Nonterminal a, std::size_t cap) {
    require_valid(slp, false);
    Nat total = val_node_count(slp, a);
    if (total > cap)
        throw CapExceeded("val(" + slp.at(a).name + ") has " + to_string(total) + " nodes, above the cap of " +
                              std::to_string(cap),
                          to_string(total));

    Decompressed out;
    out.start = a;
    out.structure = Structure(slp.signature);
    struct Frame {
        Nonterminal nt;
        std::vector<std::uint32_t> path;
        std::vector<NodeId> images;
    };
    std::vector<Frame> stack;
    stack.push_back({a, {}, {}});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        const Production& p = slp.at(f.nt);
        std::vector<NodeId> map(p.local.universe_size);
        for (NodeId v = 0; v < p.local.universe_size; ++v) {
            auto ci = p.contact_index(v);
            if (ci && !f.images.empty()) {
                map[v] = f.images[*ci];
                continue;
            }
            std::string label = f.path.empty() ? p.local.label(v) : format_rep(slp, ARep{a, f.path, v});
            NodeId id = out.structure.add_node(label);
            map[v] = id;
            out.reps.push_back(ARep{a, f.path, v});
            out.by_rep[rep_key(f.path, v)] = id;
        }
        if (f.path.empty())
            for (const auto& c : p.contacts) out.contacts.push_back(map[*c]);
        for (std::size_t r = 0; r < p.local.tuples.size(); ++r)
            for (const auto& t : p.local.tuples[r]) {
                std::vector<NodeId> mt;
                for (NodeId v : t) mt.push_back(map[v]);
                out.structure.add_tuple(r, std::move(mt));
            }
        for (std::size_t j = p.refs.size(); j-- > 0;) {
            const Reference& ref = p.refs[j];
            Frame child{ref.target, f.path, {}};
            child.path.push_back(static_cast<std::uint32_t>(j + 1));
            for (const auto& s : ref.sigma) child.images.push_back(map[*s]);
            stack.push_back(std::move(child));
        }
    }
    out.structure.normalize();
    return out;
}

std::size_t val_degree(const Slp& slp) {
    ValidationReport rep = validate(slp);
    if (!rep.ok()) throw InvalidArgument("invalid SLP: " + rep.violations.front());
    if (!rep.apex) throw ApexRequired();
    std::vector<bool> unreachable(slp.productions.size(), false);
    for (Nonterminal a : rep.unreachable) unreachable[a] = true;
    std::vector<Adjacency> adj;
    for (const auto& p : slp.productions) adj.push_back(gaifman_adjacency(p.local));

    std::size_t best = 0;
    for (Nonterminal a = 0; a < slp.productions.size(); ++a) {
        if (unreachable[a]) continue;
        const Production& p = slp.at(a);
        std::vector<std::vector<NodeId>> local(p.local.universe_size);
        std::vector<std::size_t> internal(p.local.universe_size, 0);
        for (NodeId v = 0; v < p.local.universe_size; ++v) local[v] = adj[a][v];
        for (const auto& ref : p.refs) {
            const Production& b = slp.at(ref.target);
            for (std::size_t i = 0; i < ref.sigma.size(); ++i) {
                NodeId v = *ref.sigma[i];
                for (NodeId y : adj[ref.target][*b.contacts[i]]) {
                    auto ci = b.contact_index(y);
                    if (ci) local[v].push_back(*ref.sigma[*ci]);
                    else ++internal[v];
                }
            }
        }
        for (NodeId v = 0; v < p.local.universe_size; ++v) {
            if (p.is_contact(v)) continue;
            auto& l = local[v];
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
            l.erase(std::remove(l.begin(), l.end(), v), l.end());
            best = std::max(best, l.size() + internal[v]);
        }
    }
    return best;
}

ARep embed(const Slp& slp, Nonterminal a, const std::vector<std::uint32_t>& p, const ARep& n) {
    Nonterminal b = path_end(slp, a, p);
    if (n.start != b) throw InvalidArgument("embed: path does not end at the representation's start");
    if (!is_valid_rep(slp, n)) throw InvalidArgument("embed: invalid representation");
    std::vector<std::uint32_t> prefix = p;
    NodeId local = n.local;
    if (!n.path.empty()) {
        prefix.insert(prefix.end(), n.path.begin(), n.path.end());
        return ARep{a, std::move(prefix), local};
    }
    Nonterminal cur = b;
    while (!prefix.empty()) {
        auto ci = slp.at(cur).contact_index(local);
        if (!ci) break;
        std::uint32_t j = prefix.back();
        prefix.pop_back();
        Nonterminal parent = path_end(slp, a, prefix);
        const auto& sigma = slp.at(parent).refs.at(j - 1).sigma;
        if (*ci >= sigma.size() || !sigma[*ci]) throw InvalidArgument("embed: contact index out of range");
        local = *sigma[*ci];
        cur = parent;
    }
    return ARep{a, std::move(prefix), local};
}

Slp reduce_arity_slp(const Slp& slp) {
    if (slp.signature.max_arity() <= 2) return slp;
    Slp out = slp;
    bool first = true;
    for (auto& p : out.productions) {
        p.local = reduce_arity(p.local);
        if (first) {
            out.signature = p.local.signature;
            first = false;
        }
    }
    return out;
}

}  // namespace slpfo
