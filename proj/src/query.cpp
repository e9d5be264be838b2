#include "slpfo/query.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_map>

#include "slpfo/errors.hpp"
#include "slpfo/text.hpp"

namespace slpfo {

namespace {

struct SExpr {
    bool atom = false;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
    std::vector<SExpr> items;
};

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip();
        while (pos_ < text_.size()) {
            out.push_back(read());
            skip();
        }
        return out;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';' || c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip();
        if (pos_ >= text_.size()) throw ParseError(line_, column_, "unexpected end of query");
        SExpr e;
        e.line = line_;
        e.column = column_;
        char c = text_[pos_];
        if (c == ')') throw ParseError(line_, column_, "unexpected ')'");
        if (c == '(') {
            advance();
            skip();
            while (pos_ < text_.size() && text_[pos_] != ')') {
                e.items.push_back(read());
                skip();
            }
            if (pos_ >= text_.size()) throw ParseError(e.line, e.column, "unclosed '('");
            advance();
            return e;
        }
        e.atom = true;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' || d == '#') break;
            e.text.push_back(d);
            advance();
        }
        return e;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

[[noreturn]] void fail(const SExpr& e, const std::string& what) { throw ParseError(e.line, e.column, what); }

unsigned parse_number(const SExpr& e) {
    if (!e.atom) fail(e, "expected a natural number");
    Token t{e.text, e.column};
    unsigned long long v = parse_unsigned(t, e.line);
    if (v > 64) fail(e, "parameter too large: " + e.text);
    return static_cast<unsigned>(v);
}

class QueryParser {
public:
    QueryParser(const Signature& sig) : sig_(sig) {}

    Query run(const std::string& text) {
        std::vector<SExpr> exprs = Reader(text).read_all();
        if (exprs.empty()) throw ParseError(1, 1, "empty query");
        if (exprs.size() > 1) fail(exprs[1], "trailing input after the query");
        Query q;
        q.root = parse_query_node(exprs[0]);
        q.slot_names = names_;
        if (output_) q.free = *output_;
        q.oracle_only = oracle_only_;
        return q;
    }

private:
    std::uint32_t fresh(const std::string& name) {
        names_.push_back(name);
        return static_cast<std::uint32_t>(names_.size() - 1);
    }

    std::uint32_t free_slot(const std::string& name) {
        auto it = free_.find(name);
        if (it != free_.end()) return it->second;
        std::uint32_t s = fresh(name);
        free_.emplace(name, s);
        return s;
    }

    // Keyword arguments followed by exactly one body expression.
    std::map<std::string, const SExpr*> keywords(const SExpr& e, std::size_t& body) {
        std::map<std::string, const SExpr*> kw;
        std::size_t i = 1;
        while (i < e.items.size() && e.items[i].atom && !e.items[i].text.empty() && e.items[i].text[0] == ':') {
            if (i + 1 >= e.items.size()) fail(e.items[i], "missing value for " + e.items[i].text);
            if (kw.count(e.items[i].text)) fail(e.items[i], "duplicate keyword " + e.items[i].text);
            kw[e.items[i].text] = &e.items[i + 1];
            i += 2;
        }
        if (i + 1 != e.items.size()) fail(e, "expected exactly one formula after the keywords");
        body = i;
        return kw;
    }

    std::vector<std::string> var_list(const SExpr& e) {
        if (e.atom) fail(e, "expected a variable list");
        std::vector<std::string> out;
        for (const auto& v : e.items) {
            if (!v.atom) fail(v, "expected a variable name");
            if (std::find(out.begin(), out.end(), v.text) != out.end()) fail(v, "repeated variable " + v.text);
            out.push_back(v.text);
        }
        return out;
    }

    void set_output(const SExpr& at, const std::vector<std::string>& vars) {
        std::vector<std::uint32_t> slots;
        for (const auto& v : vars) slots.push_back(free_slot(v));
        if (output_ && *output_ != slots) fail(at, "free variables differ from those of another local formula");
        output_ = slots;
    }

    std::shared_ptr<const QueryNode> parse_query_node(const SExpr& e) {
        auto node = std::make_shared<QueryNode>();
        if (e.atom) {
            if (e.text == "true") {
                node->kind = QueryKind::True;
                return node;
            }
            if (e.text == "false") {
                node->kind = QueryKind::False;
                return node;
            }
            fail(e, "expected a query, got " + e.text);
        }
        if (e.items.empty() || !e.items[0].atom) fail(e, "expected a query form");
        const std::string& head = e.items[0].text;
        if (head == "and" || head == "or") {
            node->kind = head == "and" ? QueryKind::And : QueryKind::Or;
            for (std::size_t i = 1; i < e.items.size(); ++i) node->children.push_back(parse_query_node(e.items[i]));
            return node;
        }
        if (head == "not") {
            if (e.items.size() != 2) fail(e, "not takes one argument");
            node->kind = QueryKind::Not;
            node->children.push_back(parse_query_node(e.items[1]));
            return node;
        }
        if (head == "local") {
            std::size_t body = 0;
            auto kw = keywords(e, body);
            for (const auto& [k, v] : kw)
                if (k != ":r" && k != ":vars") fail(*v, "unknown keyword " + k);
            if (!kw.count(":r")) fail(e, "local requires :r");
            if (!kw.count(":vars")) fail(e, "local requires :vars");
            node->kind = QueryKind::Local;
            node->r = parse_number(*kw[":r"]);
            std::vector<std::string> vars = var_list(*kw[":vars"]);
            if (vars.empty()) fail(*kw[":vars"], "local requires at least one variable");
            set_output(e, vars);
            std::map<std::string, std::uint32_t> allowed;
            for (const auto& v : vars) allowed[v] = free_slot(v);
            node->vars = *output_;
            node->raw = parse_formula(e.items[body], [&](const SExpr& at) -> std::uint32_t {
                auto it = allowed.find(at.text);
                if (it == allowed.end()) fail(at, "variable " + at.text + " is not among :vars");
                return it->second;
            });
            node->formula = relativize(node->raw, node->r);
            return node;
        }
        if (head == "scattered") {
            std::size_t body = 0;
            auto kw = keywords(e, body);
            for (const auto& [k, v] : kw)
                if (k != ":r" && k != ":q") fail(*v, "unknown keyword " + k);
            if (!kw.count(":r") || !kw.count(":q")) fail(e, "scattered requires :q and :r");
            node->kind = QueryKind::Scattered;
            node->q = parse_number(*kw[":q"]);
            node->r = parse_number(*kw[":r"]);
            if (node->q == 0) fail(*kw[":q"], ":q must be at least 1");
            std::optional<std::pair<std::string, std::uint32_t>> var;
            node->raw = parse_formula(e.items[body], [&](const SExpr& at) -> std::uint32_t {
                if (var && var->first != at.text)
                    fail(at, "a scattered formula has at most one free variable");
                if (!var) var = std::make_pair(at.text, fresh(at.text));
                return var->second;
            });
            if (var) node->vars = {var->second};
            node->formula = relativize(node->raw, node->r);
            return node;
        }
        if (head == "fo") {
            std::size_t body = 0;
            auto kw = keywords(e, body);
            for (const auto& [k, v] : kw)
                if (k != ":vars") fail(*v, "unknown keyword " + k);
            node->kind = QueryKind::Fo;
            oracle_only_ = true;
            if (kw.count(":vars")) {
                std::vector<std::string> vars = var_list(*kw[":vars"]);
                set_output(e, vars);
                std::map<std::string, std::uint32_t> allowed;
                for (const auto& v : vars) allowed[v] = free_slot(v);
                node->raw = parse_formula(e.items[body], [&](const SExpr& at) -> std::uint32_t {
                    auto it = allowed.find(at.text);
                    if (it == allowed.end()) fail(at, "variable " + at.text + " is not among :vars");
                    return it->second;
                });
                node->vars = *output_;
            } else {
                std::vector<std::string> seen;
                node->raw = parse_formula(e.items[body], [&](const SExpr& at) -> std::uint32_t {
                    if (std::find(seen.begin(), seen.end(), at.text) == seen.end()) seen.push_back(at.text);
                    return free_slot(at.text);
                });
                set_output(e, seen);
                node->vars = *output_;
            }
            node->formula = node->raw;
            return node;
        }
        fail(e.items[0], "expected local, scattered, and, or, not or fo; got " + head);
    }

    using FreeHandler = std::function<std::uint32_t(const SExpr&)>;

    std::uint32_t lookup(const SExpr& at, const FreeHandler& on_free) {
        if (!at.atom) fail(at, "expected a variable");
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == at.text) return it->second;
        return on_free(at);
    }

    FormulaPtr parse_formula(const SExpr& e, const FreeHandler& on_free) {
        if (e.atom) {
            if (e.text == "true") return make_true();
            if (e.text == "false") return make_false();
            fail(e, "expected a formula, got " + e.text);
        }
        if (e.items.empty() || !e.items[0].atom) fail(e, "expected a formula");
        const std::string& head = e.items[0].text;
        const std::size_t n = e.items.size() - 1;
        if (head == "=" || head == "!=") {
            if (n != 2) fail(e, head + " takes two variables");
            FormulaPtr eq = make_equal(lookup(e.items[1], on_free), lookup(e.items[2], on_free));
            return head == "=" ? eq : make_not(eq);
        }
        if (head == "not") {
            if (n != 1) fail(e, "not takes one formula");
            return make_not(parse_formula(e.items[1], on_free));
        }
        if (head == "and" || head == "or") {
            std::vector<FormulaPtr> parts;
            for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(parse_formula(e.items[i], on_free));
            return head == "and" ? make_and(std::move(parts)) : make_or(std::move(parts));
        }
        if (head == "implies") {
            if (n != 2) fail(e, "implies takes two formulas");
            return make_or({make_not(parse_formula(e.items[1], on_free)), parse_formula(e.items[2], on_free)});
        }
        if (head == "exists" || head == "forall") {
            if (n != 2) fail(e, head + " takes a variable (or list) and a formula");
            std::vector<std::string> vars;
            if (e.items[1].atom)
                vars.push_back(e.items[1].text);
            else
                vars = var_list(e.items[1]);
            if (vars.empty()) fail(e.items[1], "no variable to bind");
            std::vector<std::uint32_t> slots;
            for (const auto& v : vars) {
                slots.push_back(fresh(v));
                scope_.push_back({v, slots.back()});
            }
            FormulaPtr body = parse_formula(e.items[2], on_free);
            for (std::size_t i = 0; i < vars.size(); ++i) scope_.pop_back();
            for (auto it = slots.rbegin(); it != slots.rend(); ++it)
                body = head == "exists" ? make_exists(*it, body) : make_forall(*it, body);
            return body;
        }
        int rel = sig_.find(head);
        if (rel < 0) fail(e.items[0], "unknown relation or connective " + head);
        unsigned arity = sig_.relations[static_cast<std::size_t>(rel)].arity;
        if (n != arity)
            fail(e, "relation " + head + " has arity " + std::to_string(arity) + ", got " + std::to_string(n) +
                        " argument" + (n == 1 ? "" : "s"));
        std::vector<std::uint32_t> args;
        for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(lookup(e.items[i], on_free));
        return make_atom(static_cast<std::uint32_t>(rel), std::move(args));
    }

    const Signature& sig_;
    std::vector<std::string> names_;
    std::map<std::string, std::uint32_t> free_;
    std::vector<std::pair<std::string, std::uint32_t>> scope_;
    std::optional<std::vector<std::uint32_t>> output_;
    bool oracle_only_ = false;
};

void collect(const QueryNode& n, QueryKind kind, std::vector<const QueryNode*>& out) {
    if (n.kind == kind) out.push_back(&n);
    for (const auto& c : n.children) collect(*c, kind, out);
}

std::string format_node(const Query& q, const QueryNode& n, const Signature& sig) {
    auto vars = [&](const std::vector<std::uint32_t>& vs) {
        std::string s = "(";
        for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? " " : "") + q.slot_names[vs[i]];
        return s + ")";
    };
    switch (n.kind) {
        case QueryKind::True:
            return "true";
        case QueryKind::False:
            return "false";
        case QueryKind::Local:
            return "(local :r " + std::to_string(n.r) + " :vars " + vars(n.vars) + " " +
                   format_formula(*n.raw, sig, q.slot_names) + ")";
        case QueryKind::Scattered:
            return "(scattered :q " + std::to_string(n.q) + " :r " + std::to_string(n.r) + " " +
                   format_formula(*n.raw, sig, q.slot_names) + ")";
        case QueryKind::Fo:
            return "(fo :vars " + vars(n.vars) + " " + format_formula(*n.raw, sig, q.slot_names) + ")";
        default: {
            std::string s = n.kind == QueryKind::And ? "(and" : n.kind == QueryKind::Or ? "(or" : "(not";
            for (const auto& c : n.children) s += " " + format_node(q, *c, sig);
            return s + ")";
        }
    }
}

}  // namespace

unsigned Query::radius() const {
    unsigned r = 0;
    for (const QueryNode* n : leaves(QueryKind::Local)) r = std::max(r, n->r);
    return r;
}

std::vector<const QueryNode*> Query::leaves(QueryKind kind) const {
    std::vector<const QueryNode*> out;
    if (root) collect(*root, kind, out);
    return out;
}

Query parse_query(const std::string& text, const Signature& sig) { return QueryParser(sig).run(text); }

std::string format_query(const Query& q, const Signature& sig) { return format_node(q, *q.root, sig); }

bool evaluate_combination(const QueryNode& node, const std::function<bool(const QueryNode&)>& leaf) {
    switch (node.kind) {
        case QueryKind::True:
            return true;
        case QueryKind::False:
            return false;
        case QueryKind::And:
            for (const auto& c : node.children)
                if (!evaluate_combination(*c, leaf)) return false;
            return true;
        case QueryKind::Or:
            for (const auto& c : node.children)
                if (evaluate_combination(*c, leaf)) return true;
            return false;
        case QueryKind::Not:
            return !evaluate_combination(*node.children[0], leaf);
        default:
            return leaf(node);
    }
}

std::vector<DedupPlan> dedup_plan(unsigned k) {
    std::vector<DedupPlan> out;
    std::vector<std::uint32_t> cls(k, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned used) {
        if (i == k) {
            out.push_back(DedupPlan{cls, used});
            return;
        }
        for (unsigned c = 0; c <= used; ++c) {
            cls[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    rec(0, 0);
    return out;
}

TypeModel::TypeModel(const NeighborhoodType& t) : type(&t), model(t.structure) {
    std::vector<NodeId> centers;
    for (const auto& c : t.centers)
        if (c) centers.push_back(*c);
    near = near_nodes(model.adjacency(), centers, t.r);
}

bool eval_local_on_type(const Query& q, const QueryNode& leaf, const TypeModel& tm, const DedupPlan& plan) {
    const NeighborhoodType& t = *tm.type;
    if (leaf.kind != QueryKind::Local) throw InvalidArgument("not a local formula");
    if (t.k != plan.classes || plan.class_of.size() != leaf.vars.size())
        throw InvalidArgument("type arity does not match the formula");
    if (t.r < leaf.r) throw InvalidArgument("type radius below the formula radius");
    std::vector<NodeId> env(q.slot_count(), 0);
    for (std::size_t i = 0; i < leaf.vars.size(); ++i) env[leaf.vars[i]] = *t.centers[plan.class_of[i]];
    return evaluate(tm.model, *leaf.formula, env, &tm.near);
}

bool eval_local_on_type(const Query& q, const QueryNode& leaf, const NeighborhoodType& type, const DedupPlan& plan) {
    TypeModel tm(type);
    return eval_local_on_type(q, leaf, tm, plan);
}

bool eval_theta_on_type(const Query& q, const QueryNode& sentence, const TypeModel& tm) {
    const NeighborhoodType& t = *tm.type;
    if (t.k != 1 || t.r < sentence.r) throw InvalidArgument("theta needs a (1, r)-type");
    std::vector<NodeId> env(q.slot_count(), 0);
    for (std::uint32_t v : sentence.vars) env[v] = *t.centers[0];
    return evaluate(tm.model, *sentence.formula, env, &tm.near);
}

std::optional<NeighborhoodType> component_of(const NeighborhoodType& rho_type, const PartialTuple& t, unsigned r) {
    PointedNeighborhood n = neighborhood(rho_type.structure, t, r);
    if (components(n.structure).parts.size() != 1) return std::nullopt;
    return canonical_type(n).type;
}

Factorization CandidateSet::factorization(const CandidateType& c, const std::vector<std::uint32_t>& digits) const {
    Factorization f;
    for (std::size_t i = 0; i < c.groups.size(); ++i) {
        const ComponentGroup& g = groups[c.groups[i]];
        f.blocks.push_back(g.block);
        f.parts.push_back(&g.options.at(digits.at(i)));
    }
    return f;
}

std::vector<Factorization> CandidateSet::factorizations(const CandidateType& c) const {
    std::vector<Factorization> out;
    std::vector<std::uint32_t> digits(c.groups.size(), 0);
    while (true) {
        out.push_back(factorization(c, digits));
        std::size_t i = 0;
        for (; i < digits.size(); ++i) {
            if (++digits[i] < groups[c.groups[i]].options.size()) break;
            digits[i] = 0;
        }
        if (i == digits.size()) break;
    }
    return out;
}

namespace {

// Ordered set partitions of [k] with blocks sorted by their least element.
std::vector<std::vector<std::vector<std::uint32_t>>> set_partitions(unsigned k) {
    std::vector<std::vector<std::vector<std::uint32_t>>> out;
    for (const DedupPlan& p : dedup_plan(k)) {
        std::vector<std::vector<std::uint32_t>> blocks(p.classes);
        for (std::uint32_t i = 0; i < k; ++i) blocks[p.class_of[i]].push_back(i);
        out.push_back(std::move(blocks));
    }
    return out;
}

Structure disjoint_union(const std::vector<const NeighborhoodType*>& parts, PartialTuple& centers, unsigned k) {
    Structure s(parts.front()->structure.signature);
    centers.assign(k, std::nullopt);
    for (const NeighborhoodType* p : parts) {
        NodeId offset = static_cast<NodeId>(s.universe_size);
        for (std::size_t v = 0; v < p->structure.universe_size; ++v) s.add_node();
        for (std::size_t rel = 0; rel < p->structure.tuples.size(); ++rel)
            for (const auto& t : p->structure.tuples[rel]) {
                std::vector<NodeId> shifted;
                for (NodeId x : t) shifted.push_back(x + offset);
                s.add_tuple(rel, shifted);
            }
        for (std::size_t i = 0; i < p->centers.size(); ++i)
            if (p->centers[i]) centers[i] = *p->centers[i] + offset;
    }
    s.normalize();
    return s;
}

}  // namespace

CandidateSet candidate_types(const TypeCatalog& catalog, unsigned k, unsigned r) {
    CandidateSet set;
    set.k = k;
    set.r = r;
    set.rho = rho(r, k);
    if (catalog.rho != set.rho) throw InvalidArgument("catalog radius does not match rho(r, k)");
    const TypeTable& table = catalog.table;

    // Groups per block, keyed by the block and the component encoding.
    std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> groups_of_block;
    auto build_block = [&](const std::vector<std::uint32_t>& block) {
        if (groups_of_block.count(block)) return;
        std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VectorHash> by_encoding;
        std::vector<std::uint32_t>& ids = groups_of_block[block];
        const unsigned reach = (2 * r + 1) * static_cast<unsigned>(block.size() - 1);
        for (TypeId t = 0; t < table.size(); ++t) {
            const NeighborhoodType& bt = table.get(t);
            const NodeId center = *bt.centers[0];
            Adjacency adj = gaifman_adjacency(bt.structure);
            std::vector<Distance> dist = bfs_distances(adj, {center}, reach);
            std::vector<NodeId> pool;
            for (NodeId v = 0; v < dist.size(); ++v)
                if (dist[v]) pool.push_back(v);
            std::vector<NodeId> chosen{center};
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == block.size()) {
                    PartialTuple pt(k);
                    for (std::size_t j = 0; j < block.size(); ++j) pt[block[j]] = chosen[j];
                    std::optional<NeighborhoodType> comp = component_of(bt, pt, r);
                    if (!comp) return;
                    ComponentOption opt;
                    opt.rho_type = t;
                    for (std::size_t j = 0; j < block.size(); ++j) opt.sigma.push_back({block[j], chosen[j]});
                    auto it = by_encoding.find(comp->encoding);
                    if (it == by_encoding.end()) {
                        ComponentGroup g;
                        g.block = block;
                        g.component = std::move(*comp);
                        it = by_encoding.emplace(g.component.encoding, static_cast<std::uint32_t>(set.groups.size())).first;
                        ids.push_back(it->second);
                        set.groups.push_back(std::move(g));
                    }
                    set.groups[it->second].options.push_back(std::move(opt));
                    return;
                }
                for (NodeId v : pool) {
                    if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
                    chosen.push_back(v);
                    rec(i + 1);
                    chosen.pop_back();
                }
            };
            rec(1);
        }
    };

    for (const auto& blocks : set_partitions(k)) {
        for (const auto& b : blocks) build_block(b);
        std::vector<std::uint32_t> digits(blocks.size(), 0);
        bool empty = false;
        for (const auto& b : blocks)
            if (groups_of_block[b].empty()) empty = true;
        if (empty) continue;
        while (true) {
            CandidateType c;
            std::vector<const NeighborhoodType*> parts;
            c.factorization_count = 1;
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                std::uint32_t g = groups_of_block[blocks[i]][digits[i]];
                c.groups.push_back(g);
                parts.push_back(&set.groups[g].component);
                c.factorization_count *= set.groups[g].options.size();
            }
            PartialTuple centers;
            Structure u = disjoint_union(parts, centers, k);
            c.type = canonical_type(u, centers, r).type;
            set.types.push_back(std::move(c));
            std::size_t i = 0;
            for (; i < digits.size(); ++i) {
                if (++digits[i] < groups_of_block[blocks[i]].size()) break;
                digits[i] = 0;
            }
            if (i == digits.size()) break;
        }
    }
    return set;
}

}  // namespace slpfo
