#include "slpfo/engine.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_map>

#include "slpfo/errors.hpp"

namespace slpfo {

RhoContext::RhoContext(const SlpIndex& index, const WeightedDag& w, unsigned rho, std::uint64_t* steps)
    : w_(&w), catalog_(build_catalog(index, rho)), steps_(steps) {
    if (steps_) *steps_ += catalog_.steps;
    dags_.resize(catalog_.type_count());
    betas_.resize(catalog_.type_count());
}

const DagI& RhoContext::dag(TypeId type) {
    if (type >= dags_.size()) throw InvalidArgument("unknown type id");
    if (!dags_[type]) {
        std::vector<bool> useful(catalog_.lists[type].size(), false);
        for (Nonterminal a = 0; a < useful.size(); ++a) useful[a] = !catalog_.lists[type][a].empty();
        dags_[type] = std::make_unique<DagI>(*w_, useful, steps_);
    }
    return *dags_[type];
}

const Nat& RhoContext::beta(TypeId type) {
    if (type >= betas_.size()) throw InvalidArgument("unknown type id");
    if (!betas_[type]) {
        Nat sum = 0;
        for (Nonterminal a = 0; a < catalog_.lists[type].size(); ++a) {
            const auto& list = catalog_.lists[type][a];
            if (!list.empty()) sum += w_->paths_to[a] * list.size();
            if (steps_) ++*steps_;
        }
        betas_[type] = std::move(sum);
    }
    return *betas_[type];
}

Engine::Engine(const Slp& slp) : slp_(&slp), index_((require_valid(slp, true), slp)) {
    if (slp.signature.max_arity() > 2) throw ArityError("enumeration requires arity <= 2; reduce the SLP first");
    weighted_ = extend_and_weight(build_dag(slp), &preprocessing_steps);
    degree_ = val_degree(slp);
}

RhoContext& Engine::context(unsigned rho) {
    auto it = contexts_.find(rho);
    if (it == contexts_.end())
        it = contexts_.emplace(rho, std::make_unique<RhoContext>(index_, weighted_, rho, &preprocessing_steps)).first;
    return *it->second;
}

Nat count_type_nodes(RhoContext& ctx, TypeId type) { return ctx.beta(type); }

TypeStream::TypeStream(RhoContext& ctx, TypeId type, std::uint64_t* steps)
    : ctx_(&ctx), type_(type), dag_(&ctx.dag(type)), path_(*dag_), steps_(steps) {}

void TypeStream::restart() {
    started_ = false;
    done_ = false;
}

const ValidNodeEntry& TypeStream::entry() const { return ctx_->catalog().valid[a_][entry_index()]; }

bool TypeStream::next() {
    if (steps_) ++*steps_;
    if (done_) return false;
    if (!started_) {
        started_ = true;
        if (!path_.first()) {
            done_ = true;
            return false;
        }
    } else if (++pos_ < list_->size()) {
        return true;
    } else if (!path_.next()) {
        done_ = true;
        return false;
    }
    a_ = path_.end_nonterminal();
    list_ = &ctx_->catalog().lists[type_][a_];
    if (list_->empty()) throw InternalError("type stream reached a nonterminal without valid nodes");
    pos_ = 0;
    return true;
}

std::vector<std::uint32_t> item_nodes(const ValidNodeEntry& entry, const ComponentOption* option) {
    if (!option) return {entry.node};
    std::vector<std::uint32_t> out;
    out.reserve(option->sigma.size());
    for (const auto& [pos, node] : option->sigma) out.push_back(entry.pi.at(node));
    return out;
}

bool local_near(const Engine& engine, Nonterminal a_lo, const std::vector<LocalNode>& lo, Nonterminal a_hi,
                const std::vector<LocalNode>& hi, const std::vector<std::uint32_t>& q, unsigned bound,
                std::uint64_t* steps) {
    LocalBall ball = local_ball(engine.index(), a_lo, lo, bound, steps);
    for (const LocalNode& c : hi) {
        ARep e = embed(engine.slp(), a_lo, q, ARep{a_hi, c.path, c.local});
        if (steps) ++*steps;
        if (ball.find(e.path, e.local)) return true;
    }
    return false;
}

namespace {

std::vector<LocalNode> local_nodes(RhoContext& ctx, const ItemRef& x) {
    std::vector<LocalNode> out;
    out.reserve(x.nodes.size());
    for (std::uint32_t n : x.nodes) out.push_back(ctx.node(x.a, n));
    return out;
}

}  // namespace

bool distance_leq(const Engine& engine, RhoContext& ctx, ItemRef& x, ItemRef& y, unsigned bound, unsigned max_ext,
                  std::uint64_t* steps) {
    const Nat wx = x.path->weight();
    const Nat wy = y.path->weight();
    if (wx == wy) {
        if (x.a != y.a) throw InternalError("equal path weights with different end nonterminals");
        return local_near(engine, x.a, local_nodes(ctx, x), y.a, local_nodes(ctx, y), {}, bound, steps);
    }
    ItemRef& lo = wx < wy ? x : y;
    ItemRef& hi = wx < wy ? y : x;
    const Nat& target = lo.path->weight();
    MinMaxPath& p = *hi.path;
    std::vector<std::uint32_t> removed;
    std::size_t shortened = 0;
    bool prefix = false;
    p.shorten();
    ++shortened;
    if (steps) ++*steps;
    for (unsigned t = 0;; ++t) {
        if (p.weight() == target) {
            prefix = true;
            break;
        }
        if (p.weight() < target || t == max_ext || p.path_empty()) break;
        removed.push_back(p.shorten().index);
        ++shortened;
        if (steps) ++*steps;
    }
    for (std::size_t i = 0; i < shortened; ++i) p.restore();
    if (steps) *steps += shortened;
    if (!prefix) return false;
    std::vector<std::uint32_t> q(removed.rbegin(), removed.rend());
    return local_near(engine, lo.a, local_nodes(ctx, lo), hi.a, local_nodes(ctx, hi), q, bound, steps);
}

FactorizationSession::FactorizationSession(Engine& engine, RhoContext& ctx, const Factorization& f, unsigned k,
                                           unsigned r)
    : engine_(&engine), ctx_(&ctx), k_(k), r_(r) {
    const unsigned rh = ctx.rho();
    max_ext_ = 3 * rh - r;
    const std::size_t m = f.parts.size();
    const Nat threshold = Nat(k) * nat_pow(Nat(std::max<std::size_t>(engine.degree(), 1)), 2 * rh + 2 * r + 2);
    std::vector<Level> raw(m);
    std::vector<LevelInfo> raw_info(m);
    for (std::size_t i = 0; i < m; ++i) {
        raw[i].option = f.parts[i];
        raw[i].type = f.parts[i]->rho_type;
        raw_info[i].type = raw[i].type;
        raw_info[i].beta = ctx.beta(raw[i].type);
        raw_info[i].short_level = raw_info[i].beta <= threshold;
    }
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return raw_info[i].short_level; });
    for (std::size_t i : order) {
        Level l = std::move(raw[i]);
        LevelInfo info = raw_info[i];
        if (info.short_level && m >= 2) {
            TypeStream s(ctx, l.type, &engine.enumeration_steps);
            while (s.next()) l.items.push_back(Stored{s.path(), s.nonterminal(), s.entry_index()});
            l.materialized = true;
            info.materialized = true;
        } else {
            l.stream = std::make_unique<TypeStream>(ctx, l.type, &engine.enumeration_steps);
        }
        levels_.push_back(std::move(l));
        info_.push_back(std::move(info));
    }
}

void FactorizationSession::reset(std::size_t l) {
    Level& lv = levels_[l];
    if (lv.materialized)
        lv.cursor = 0;
    else
        lv.stream->restart();
}

bool FactorizationSession::advance(std::size_t l) {
    Level& lv = levels_[l];
    if (lv.materialized) {
        ++engine_->enumeration_steps;
        if (lv.cursor >= lv.items.size()) return false;
        ++lv.cursor;
        return true;
    }
    return lv.stream->next();
}

ItemRef FactorizationSession::item(std::size_t l) {
    Level& lv = levels_[l];
    ItemRef it;
    if (lv.materialized) {
        Stored& s = lv.items[lv.cursor - 1];
        it.path = &s.path;
        it.a = s.a;
        it.entry = &ctx_->catalog().valid[s.a][s.entry];
    } else {
        it.path = &lv.stream->path();
        it.a = lv.stream->nonterminal();
        it.entry = &lv.stream->entry();
    }
    it.nodes = item_nodes(*it.entry, lv.option);
    return it;
}

void FactorizationSession::assemble(std::vector<LexRep>& out) {
    out.assign(k_, LexRep{});
    const WeightedDag& w = engine_->weighted();
    for (std::size_t l = 0; l < levels_.size(); ++l) {
        ItemRef it = item(l);
        const Nat& base = it.path->weight();
        const auto& sigma = levels_[l].option->sigma;
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            const LocalNode& n = ctx_->node(it.a, it.nodes[j]);
            out[sigma[j].first] = LexRep{base + lex_of_local(w, it.a, n.path), n.local, n.end};
            ++engine_->enumeration_steps;
        }
    }
}

bool FactorizationSession::next(std::vector<LexRep>& out) {
    if (finished_) return false;
    const std::size_t m = levels_.size();
    if (!started_) {
        started_ = true;
        if (m == 0) {
            finished_ = true;
            return false;
        }
        depth_ = 1;
        reset(0);
    }
    while (depth_ > 0) {
        ++engine_->enumeration_steps;
        const std::size_t l = depth_ - 1;
        if (!advance(l)) {
            --depth_;
            continue;
        }
        bool admissible = true;
        if (l > 0) {
            ItemRef top = item(l);
            for (std::size_t i = 0; i < l && admissible; ++i) {
                ItemRef below = item(i);
                if (distance_leq(*engine_, *ctx_, below, top, 2 * r_ + 1, max_ext_, &engine_->enumeration_steps))
                    admissible = false;
            }
        }
        if (!admissible) {
            ++skipped_;
            max_run_ = std::max(max_run_, ++run_);
            continue;
        }
        run_ = 0;
        if (l + 1 == m) {
            assemble(out);
            return true;
        }
        ++depth_;
        reset(depth_ - 1);
    }
    finished_ = true;
    return false;
}

bool eval_sentence(Engine& engine, const Query& q, const QueryNode& s) {
    if (s.kind != QueryKind::Scattered) throw InvalidArgument("not a basic local sentence");
    std::uint64_t* steps = &engine.preprocessing_steps;
    const unsigned r = s.r;
    RhoContext& ctx = engine.context(rho(r, 1));
    const TypeCatalog& cat = ctx.catalog();
    std::vector<TypeId> sat;
    for (TypeId t = 0; t < cat.table.size(); ++t) {
        TypeModel tm(cat.table.get(t));
        if (eval_theta_on_type(q, s, tm)) sat.push_back(t);
    }
    const std::uint64_t d = std::max<std::uint64_t>(engine.degree(), 2);
    std::uint64_t threshold = s.q;
    for (unsigned i = 0; i < 2 * r + 1 && threshold < (1ull << 40); ++i) threshold *= d;

    struct Item {
        MinMaxPath path;
        Nonterminal a;
        std::uint32_t node;
    };
    std::vector<Item> items;
    for (TypeId t : sat) {
        TypeStream st(ctx, t, steps);
        while (st.next()) {
            items.push_back(Item{st.path(), st.nonterminal(), st.entry().node});
            if (items.size() >= threshold) return true;
        }
    }
    if (items.size() < s.q) return false;
    if (s.q == 1) return true;

    // Conflict graph: pairs within distance 2r, found through prefix chains.
    const unsigned bound = 2 * r;
    const unsigned max_ext = 2 * ctx.rho() + bound;
    std::unordered_map<std::string, std::vector<std::size_t>> by_weight;
    for (std::size_t i = 0; i < items.size(); ++i) by_weight[items[i].path.weight().str()].push_back(i);
    std::vector<std::vector<bool>> conflict(items.size(), std::vector<bool>(items.size(), false));
    for (std::size_t j = 0; j < items.size(); ++j) {
        MinMaxPath p = items[j].path;
        std::vector<LocalNode> hi{ctx.node(items[j].a, items[j].node)};
        std::vector<std::uint32_t> removed;
        p.shorten();
        for (unsigned t = 0;; ++t) {
            auto it = by_weight.find(p.weight().str());
            if (it != by_weight.end()) {
                std::vector<std::uint32_t> qpath(removed.rbegin(), removed.rend());
                for (std::size_t i : it->second) {
                    if (i == j || (t == 0 && i > j)) continue;
                    if (conflict[i][j]) continue;
                    std::vector<LocalNode> lo{ctx.node(items[i].a, items[i].node)};
                    if (local_near(engine, items[i].a, lo, items[j].a, hi, qpath, bound, steps))
                        conflict[i][j] = conflict[j][i] = true;
                }
            }
            if (t == max_ext || p.path_empty()) break;
            removed.push_back(p.shorten().index);
            if (steps) ++*steps;
        }
    }
    std::vector<std::size_t> chosen;
    std::function<bool(std::size_t)> search = [&](std::size_t from) {
        if (chosen.size() == s.q) return true;
        for (std::size_t i = from; i + (s.q - chosen.size()) <= items.size(); ++i) {
            bool ok = true;
            for (std::size_t c : chosen)
                if (conflict[c][i]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(i);
            if (search(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return search(0);
}

QueryEnumerator::QueryEnumerator(Engine& engine, const Query& q, bool record_delays)
    : engine_(&engine), query_(&q), record_(record_delays) {
    if (q.oracle_only) throw InvalidArgument("(fo ...) queries are evaluated by the oracle only");
    std::map<const QueryNode*, bool> sentences;
    for (const QueryNode* s : q.leaves(QueryKind::Scattered)) sentences[s] = eval_sentence(engine, q, *s);
    if (q.k() == 0) {
        sentence_mode_ = true;
        sentence_value_ = evaluate_combination(*q.root, [&](const QueryNode& n) { return sentences.at(&n); });
        last_output_steps_ = engine.enumeration_steps;
        return;
    }
    r_ = q.radius();
    for (const DedupPlan& plan : dedup_plan(q.k())) {
        PlanState ps;
        ps.plan = plan;
        ps.ctx = &engine.context(rho(r_, plan.classes));
        auto it = candidate_sets_.find(plan.classes);
        if (it == candidate_sets_.end())
            it = candidate_sets_.emplace(plan.classes, candidate_types(ps.ctx->catalog(), plan.classes, r_)).first;
        ps.candidates = &it->second;
        stats_.candidates += ps.candidates->types.size();
        for (std::size_t c = 0; c < ps.candidates->types.size(); ++c) {
            const CandidateType& ct = ps.candidates->types[c];
            TypeModel tm(ct.type);
            ++engine.preprocessing_steps;
            bool sat = evaluate_combination(*q.root, [&](const QueryNode& n) {
                if (n.kind == QueryKind::Local) return eval_local_on_type(q, n, tm, plan);
                return sentences.at(&n);
            });
            if (!sat) continue;
            ps.satisfying.push_back(c);
            for (std::uint32_t g : ct.groups)
                for (const ComponentOption& o : ps.candidates->groups[g].options) {
                    ps.ctx->dag(o.rho_type);
                    ps.ctx->beta(o.rho_type);
                }
        }
        stats_.satisfying_candidates += ps.satisfying.size();
        plans_.push_back(std::move(ps));
    }
    stats_.plans = plans_.size();
    last_output_steps_ = engine.enumeration_steps;
}

bool QueryEnumerator::open_next_session() {
    while (plan_ < plans_.size()) {
        PlanState& ps = plans_[plan_];
        if (candidate_ < ps.satisfying.size()) {
            const CandidateType& c = ps.candidates->types[ps.satisfying[candidate_]];
            if (digits_fresh_) {
                digits_.assign(c.groups.size(), 0);
                digits_fresh_ = false;
            } else {
                std::size_t i = 0;
                for (; i < digits_.size(); ++i) {
                    if (++digits_[i] < ps.candidates->groups[c.groups[i]].options.size()) break;
                    digits_[i] = 0;
                }
                if (i == digits_.size()) {
                    ++candidate_;
                    digits_fresh_ = true;
                    continue;
                }
            }
            Factorization f = ps.candidates->factorization(c, digits_);
            session_ = std::make_unique<FactorizationSession>(*engine_, *ps.ctx, f, ps.plan.classes, r_);
            ++stats_.sessions;
            if (record_)
                for (const LevelInfo& li : session_->levels()) stats_.levels.push_back(li);
            return true;
        }
        ++plan_;
        candidate_ = 0;
        digits_fresh_ = true;
    }
    session_.reset();
    return false;
}

bool QueryEnumerator::next(std::vector<LexRep>& out) {
    auto record = [&]() {
        std::uint64_t now = engine_->enumeration_steps;
        std::uint64_t delay = now - last_output_steps_;
        last_output_steps_ = now;
        stats_.max_delay = std::max(stats_.max_delay, delay);
        if (record_) stats_.delays.push_back(delay);
        ++stats_.outputs;
    };
    if (done_) return false;
    if (sentence_mode_) {
        done_ = true;
        if (!sentence_value_) return false;
        out.clear();
        record();
        return true;
    }
    while (true) {
        if (session_ && session_->next(scratch_)) {
            out = plans_[plan_].plan.inflate(scratch_);
            record();
            return true;
        }
        if (!open_next_session()) {
            done_ = true;
            return false;
        }
    }
}

ARep resolve_rep(const Engine& engine, const LexRep& rep) {
    return ARep{engine.weighted().initial, resolve_lex(engine.weighted(), rep.lex), rep.local};
}

}  // namespace slpfo
