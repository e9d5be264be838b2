#include "slpfo/formula.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "slpfo/errors.hpp"

namespace slpfo {

namespace {

FormulaPtr make(FormulaKind kind) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    return f;
}

FormulaPtr make_quantifier(FormulaKind kind, std::uint32_t var, FormulaPtr body, std::optional<unsigned> guard) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    f->vars = {var};
    f->children = {std::move(body)};
    f->guard = guard;
    return f;
}

std::string args_key(const std::vector<NodeId>& args) {
    std::string key;
    for (NodeId a : args) {
        key.append(reinterpret_cast<const char*>(&a), sizeof(a));
    }
    return key;
}

}  // namespace

FormulaPtr make_true() { return make(FormulaKind::True); }
FormulaPtr make_false() { return make(FormulaKind::False); }

FormulaPtr make_equal(std::uint32_t a, std::uint32_t b) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Equal;
    f->vars = {a, b};
    return f;
}

FormulaPtr make_atom(std::uint32_t relation, std::vector<std::uint32_t> args) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Atom;
    f->relation = relation;
    f->vars = std::move(args);
    return f;
}

FormulaPtr make_not(FormulaPtr g) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Not;
    f->children = {std::move(g)};
    return f;
}

FormulaPtr make_and(std::vector<FormulaPtr> fs) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::And;
    f->children = std::move(fs);
    return f;
}

FormulaPtr make_or(std::vector<FormulaPtr> fs) {
    auto f = std::make_shared<Formula>();
    f->kind = FormulaKind::Or;
    f->children = std::move(fs);
    return f;
}

FormulaPtr make_exists(std::uint32_t var, FormulaPtr body, std::optional<unsigned> guard) {
    return make_quantifier(FormulaKind::Exists, var, std::move(body), guard);
}

FormulaPtr make_forall(std::uint32_t var, FormulaPtr body, std::optional<unsigned> guard) {
    return make_quantifier(FormulaKind::Forall, var, std::move(body), guard);
}

unsigned quantifier_rank(const Formula& f) {
    unsigned inner = 0;
    for (const auto& c : f.children) inner = std::max(inner, quantifier_rank(*c));
    if (f.kind == FormulaKind::Exists || f.kind == FormulaKind::Forall) return inner + 1;
    return inner;
}

std::vector<std::uint32_t> free_variables(const Formula& f) {
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> bound;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        switch (g.kind) {
            case FormulaKind::Equal:
            case FormulaKind::Atom:
                for (std::uint32_t v : g.vars)
                    if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
                        std::find(out.begin(), out.end(), v) == out.end())
                        out.push_back(v);
                break;
            case FormulaKind::Exists:
            case FormulaKind::Forall:
                bound.push_back(g.vars[0]);
                walk(*g.children[0]);
                bound.pop_back();
                break;
            default:
                for (const auto& c : g.children) walk(*c);
        }
    };
    walk(f);
    return out;
}

std::uint32_t slot_bound(const Formula& f) {
    std::uint32_t b = 0;
    for (std::uint32_t v : f.vars) b = std::max(b, v + 1);
    for (const auto& c : f.children) b = std::max(b, slot_bound(*c));
    return b;
}

FormulaPtr relativize(const FormulaPtr& f, unsigned r) {
    switch (f->kind) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Equal:
        case FormulaKind::Atom:
            return f;
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            return make_quantifier(f->kind, f->vars[0], relativize(f->children[0], r), r);
        default: {
            auto g = std::make_shared<Formula>(*f);
            for (auto& c : g->children) c = relativize(c, r);
            return g;
        }
    }
}

unsigned rho(unsigned r, unsigned k) {
    if (k == 0) throw InvalidArgument("rho requires k >= 1");
    return 2 * r * k + k - r - 1;
}

std::string format_formula(const Formula& f, const Signature& sig, const std::vector<std::string>& names) {
    auto name = [&](std::uint32_t v) { return v < names.size() ? names[v] : "v" + std::to_string(v); };
    auto list = [&](const char* head) {
        std::string s = std::string("(") + head;
        for (const auto& c : f.children) s += " " + format_formula(*c, sig, names);
        return s + ")";
    };
    switch (f.kind) {
        case FormulaKind::True:
            return "true";
        case FormulaKind::False:
            return "false";
        case FormulaKind::Equal:
            return "(= " + name(f.vars[0]) + " " + name(f.vars[1]) + ")";
        case FormulaKind::Atom: {
            std::string s = "(" + sig.relations.at(f.relation).name;
            for (std::uint32_t v : f.vars) s += " " + name(v);
            return s + ")";
        }
        case FormulaKind::Not:
            return list("not");
        case FormulaKind::And:
            return list("and");
        case FormulaKind::Or:
            return list("or");
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            std::string s = f.kind == FormulaKind::Exists ? "(exists " : "(forall ";
            s += name(f.vars[0]);
            if (f.guard) s += " :within " + std::to_string(*f.guard);
            return s + " " + format_formula(*f.children[0], sig, names) + ")";
        }
    }
    return "";
}

FormulaPtr reduce_arity_formula(const FormulaPtr& f, const Signature& sig, const Signature& reduced,
                                std::uint32_t& next_slot) {
    if (sig.max_arity() <= 2) return f;
    ArityReductionNames names = arity_reduction_names(sig);
    int universe = reduced.find(names.universe);
    if (universe < 0) throw InvalidArgument("reduced signature lacks the universe relation");
    std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& g) -> FormulaPtr {
        switch (g->kind) {
            case FormulaKind::True:
            case FormulaKind::False:
            case FormulaKind::Equal:
                return g;
            case FormulaKind::Atom: {
                const Relation& rel = sig.relations.at(g->relation);
                if (rel.arity <= 2) {
                    int target = reduced.find(rel.name);
                    return make_atom(static_cast<std::uint32_t>(target), g->vars);
                }
                std::uint32_t b = next_slot++;
                std::vector<FormulaPtr> parts;
                parts.push_back(make_atom(static_cast<std::uint32_t>(reduced.find(names.element_of[g->relation])), {b}));
                for (std::size_t j = 0; j < g->vars.size(); ++j)
                    parts.push_back(make_atom(static_cast<std::uint32_t>(reduced.find(names.position[j])), {b, g->vars[j]}));
                return make_exists(b, make_and(std::move(parts)));
            }
            case FormulaKind::Exists: {
                auto in_u = make_atom(static_cast<std::uint32_t>(universe), {g->vars[0]});
                return make_exists(g->vars[0], make_and({in_u, go(g->children[0])}), g->guard);
            }
            case FormulaKind::Forall: {
                auto in_u = make_atom(static_cast<std::uint32_t>(universe), {g->vars[0]});
                return make_forall(g->vars[0], make_or({make_not(in_u), go(g->children[0])}), g->guard);
            }
            default: {
                auto h = std::make_shared<Formula>(*g);
                for (auto& c : h->children) c = go(c);
                return h;
            }
        }
    };
    return go(f);
}

Model::Model(const Structure& s) : size_(s.universe_size) {
    const std::size_t nrel = s.signature.size();
    arity_.resize(nrel);
    unary_.resize(nrel);
    binary_.resize(nrel);
    general_.resize(nrel);
    for (std::size_t i = 0; i < nrel; ++i) {
        arity_[i] = s.signature.relations[i].arity;
        if (arity_[i] == 1) unary_[i].assign(size_, false);
        for (const auto& t : s.tuples[i]) {
            if (arity_[i] == 1)
                unary_[i][t[0]] = true;
            else if (arity_[i] == 2)
                binary_[i].insert((static_cast<std::uint64_t>(t[0]) << 32) | t[1]);
            else
                general_[i].insert(args_key(t));
        }
    }
    adjacency_ = gaifman_adjacency(s);
}

bool Model::holds(std::uint32_t relation, const std::vector<NodeId>& args) const {
    switch (arity_.at(relation)) {
        case 1:
            return unary_[relation][args[0]];
        case 2:
            return binary_[relation].count((static_cast<std::uint64_t>(args[0]) << 32) | args[1]) > 0;
        default:
            return general_[relation].count(args_key(args)) > 0;
    }
}

NearList near_nodes(const Adjacency& adj, const std::vector<NodeId>& centers, unsigned radius) {
    NearList out;
    std::vector<Distance> dist = bfs_distances(adj, centers, radius);
    for (NodeId v = 0; v < dist.size(); ++v)
        if (dist[v]) out.push_back({v, *dist[v]});
    return out;
}

bool evaluate(const Model& m, const Formula& f, std::vector<NodeId>& env, const NearList* near) {
    switch (f.kind) {
        case FormulaKind::True:
            return true;
        case FormulaKind::False:
            return false;
        case FormulaKind::Equal:
            return env[f.vars[0]] == env[f.vars[1]];
        case FormulaKind::Atom: {
            std::vector<NodeId> args;
            args.reserve(f.vars.size());
            for (std::uint32_t v : f.vars) args.push_back(env[v]);
            return m.holds(f.relation, args);
        }
        case FormulaKind::Not:
            return !evaluate(m, *f.children[0], env, near);
        case FormulaKind::And:
            for (const auto& c : f.children)
                if (!evaluate(m, *c, env, near)) return false;
            return true;
        case FormulaKind::Or:
            for (const auto& c : f.children)
                if (evaluate(m, *c, env, near)) return true;
            return false;
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            const bool want = f.kind == FormulaKind::Exists;
            const std::uint32_t slot = f.vars[0];
            const NodeId saved = env[slot];
            bool result = !want;
            if (f.guard) {
                if (!near) throw InvalidArgument("guarded quantifier evaluated without centers");
                for (const auto& [v, d] : *near) {
                    if (d > *f.guard) continue;
                    env[slot] = v;
                    if (evaluate(m, *f.children[0], env, near) == want) {
                        result = want;
                        break;
                    }
                }
            } else {
                for (NodeId v = 0; v < m.size(); ++v) {
                    env[slot] = v;
                    if (evaluate(m, *f.children[0], env, near) == want) {
                        result = want;
                        break;
                    }
                }
            }
            env[slot] = saved;
            return result;
        }
    }
    return false;
}

}  // namespace slpfo
