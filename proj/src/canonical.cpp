#include "slpfo/canonical.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <utility>

#include "slpfo/errors.hpp"

namespace slpfo {

CompactStructure to_compact(const Structure& s) {
    if (s.signature.max_arity() > 2) throw ArityError("canonicalization requires arity <= 2");
    CompactStructure c;
    c.node_count = static_cast<std::uint32_t>(s.universe_size);
    c.relation_count = static_cast<std::uint32_t>(s.signature.size());
    for (std::size_t i = 0; i < s.tuples.size(); ++i) {
        for (const auto& t : s.tuples[i]) {
            if (t.size() == 1)
                c.unary.push_back({static_cast<std::uint32_t>(i), t[0]});
            else
                c.binary.push_back({static_cast<std::uint32_t>(i), t[0], t[1]});
        }
    }
    return c;
}

Structure from_compact(const CompactStructure& c, const Signature& sig) {
    Structure s(sig);
    for (std::uint32_t v = 0; v < c.node_count; ++v) s.add_node();
    for (const auto& u : c.unary) s.add_tuple(u[0], {u[1]});
    for (const auto& b : c.binary) s.add_tuple(b[0], {b[1], b[2]});
    s.normalize();
    return s;
}

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

class Canonicalizer {
public:
    Canonicalizer(const CompactStructure& s, const PartialTuple& centers) : s_(s), centers_(centers) {
        n_ = s.node_count;
        for (const auto& c : centers)
            if (c && *c >= n_) throw InvalidArgument("center outside the structure");
        adj_.resize(n_);
        for (const auto& b : s.binary) {
            if (b[1] >= n_ || b[2] >= n_) throw InvalidArgument("tuple outside the structure");
            if (b[1] == b[2]) continue;
            adj_[b[1]].push_back({b[2], b[0] * 2});
            adj_[b[2]].push_back({b[1], b[0] * 2 + 1});
        }
        for (auto& list : adj_) std::sort(list.begin(), list.end());
    }

    CanonicalForm run() {
        std::vector<std::uint32_t> color = initial_coloring();
        refine(color);
        root_color_ = color;
        search(color, 0);
        CanonicalForm form;
        form.encoding = best_;
        build_canonical(form);
        form.pi = least_isomorphism(form.canonical);
        return form;
    }

private:
    std::vector<std::uint32_t> initial_coloring() {
        std::vector<std::uint32_t> dist(n_, kNone);
        std::vector<std::uint32_t> mask(n_, 0);
        std::deque<std::uint32_t> queue;
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            if (!centers_[i]) continue;
            std::uint32_t c = *centers_[i];
            mask[c] |= (i < 32) ? (1u << i) : 0u;
            if (dist[c] == kNone) {
                dist[c] = 0;
                queue.push_back(c);
            }
        }
        while (!queue.empty()) {
            std::uint32_t v = queue.front();
            queue.pop_front();
            for (const auto& [w, code] : adj_[v]) {
                (void)code;
                if (dist[w] != kNone) continue;
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
        std::vector<std::vector<std::uint32_t>> unary(n_), loops(n_);
        for (const auto& u : s_.unary) {
            if (u[1] >= n_) throw InvalidArgument("tuple outside the structure");
            unary[u[1]].push_back(u[0]);
        }
        for (const auto& b : s_.binary)
            if (b[1] == b[2]) loops[b[1]].push_back(b[0]);
        std::vector<std::vector<std::uint32_t>> key(n_);
        for (std::uint32_t v = 0; v < n_; ++v) {
            std::sort(unary[v].begin(), unary[v].end());
            std::sort(loops[v].begin(), loops[v].end());
            key[v].push_back(dist[v]);
            std::uint32_t first_center = kNone;
            for (std::size_t i = 0; i < centers_.size(); ++i)
                if (centers_[i] && *centers_[i] == v) {
                    first_center = static_cast<std::uint32_t>(i);
                    break;
                }
            key[v].push_back(first_center);
            key[v].push_back(mask[v]);
            key[v].push_back(static_cast<std::uint32_t>(unary[v].size()));
            key[v].insert(key[v].end(), unary[v].begin(), unary[v].end());
            key[v].push_back(static_cast<std::uint32_t>(loops[v].size()));
            key[v].insert(key[v].end(), loops[v].begin(), loops[v].end());
        }
        return colors_from_keys(key);
    }

    template <class Key>
    std::vector<std::uint32_t> colors_from_keys(const std::vector<Key>& key) {
        std::vector<std::uint32_t> order(n_);
        for (std::uint32_t v = 0; v < n_; ++v) order[v] = v;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });
        std::vector<std::uint32_t> color(n_);
        std::uint32_t start = 0;
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (i > 0 && key[order[i]] != key[order[i - 1]]) start = i;
            color[order[i]] = start;
        }
        return color;
    }

    static std::size_t cell_count(const std::vector<std::uint32_t>& color) {
        std::vector<std::uint32_t> sorted = color;
        std::sort(sorted.begin(), sorted.end());
        return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }

    void refine(std::vector<std::uint32_t>& color) {
        std::size_t cells = cell_count(color);
        std::vector<std::vector<std::uint64_t>> sig(n_);
        while (cells < n_) {
            for (std::uint32_t v = 0; v < n_; ++v) {
                auto& sv = sig[v];
                sv.clear();
                sv.push_back(color[v]);
                for (const auto& [w, code] : adj_[v])
                    sv.push_back((static_cast<std::uint64_t>(code) << 32) | color[w]);
                std::sort(sv.begin() + 1, sv.end());
            }
            color = colors_from_keys(sig);
            std::size_t next = cell_count(color);
            if (next == cells) break;
            cells = next;
        }
    }

    std::vector<std::uint32_t> encode(const std::vector<std::uint32_t>& pos) const {
        std::vector<std::uint32_t> enc;
        enc.push_back(n_);
        enc.push_back(static_cast<std::uint32_t>(centers_.size()));
        for (const auto& c : centers_) enc.push_back(c ? pos[*c] : kNone);
        std::vector<std::array<std::uint32_t, 2>> un;
        un.reserve(s_.unary.size());
        for (const auto& u : s_.unary) un.push_back({u[0], pos[u[1]]});
        std::sort(un.begin(), un.end());
        un.erase(std::unique(un.begin(), un.end()), un.end());
        std::vector<std::array<std::uint32_t, 3>> bin;
        bin.reserve(s_.binary.size());
        for (const auto& b : s_.binary) bin.push_back({b[0], pos[b[1]], pos[b[2]]});
        std::sort(bin.begin(), bin.end());
        bin.erase(std::unique(bin.begin(), bin.end()), bin.end());
        enc.push_back(static_cast<std::uint32_t>(un.size()));
        for (const auto& u : un) enc.insert(enc.end(), u.begin(), u.end());
        enc.push_back(static_cast<std::uint32_t>(bin.size()));
        for (const auto& b : bin) enc.insert(enc.end(), b.begin(), b.end());
        return enc;
    }

    static std::size_t common_prefix(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        std::size_t i = 0;
        while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
        return i;
    }

    // Returns the depth to jump back to, if an automorphism prunes the remaining siblings.
    std::optional<std::size_t> leaf(const std::vector<std::uint32_t>& color) {
        std::vector<std::uint32_t> enc = encode(color);
        if (!have_first_) {
            have_first_ = true;
            first_ = enc;
            first_path_ = path_;
            best_ = std::move(enc);
            best_path_ = path_;
            best_pos_ = color;
            return std::nullopt;
        }
        if (enc == first_) return common_prefix(path_, first_path_);
        if (enc < best_) {
            best_ = std::move(enc);
            best_path_ = path_;
            best_pos_ = color;
            return std::nullopt;
        }
        if (enc == best_) return common_prefix(path_, best_path_);
        return std::nullopt;
    }

    std::optional<std::size_t> search(std::vector<std::uint32_t> color, std::size_t depth) {
        if (depth > 0) refine(color);
        std::vector<std::uint32_t> size(n_, 0);
        for (std::uint32_t c : color) ++size[c];
        std::uint32_t target = kNone;
        for (std::uint32_t c = 0; c < n_; ++c)
            if (size[c] > 1) {
                target = c;
                break;
            }
        if (target == kNone) return leaf(color);
        std::vector<std::uint32_t> members;
        for (std::uint32_t v = 0; v < n_; ++v)
            if (color[v] == target) members.push_back(v);
        for (std::uint32_t v : members) {
            std::vector<std::uint32_t> child = color;
            for (std::uint32_t u : members) child[u] = target + 1;
            child[v] = target;
            path_.push_back(v);
            std::optional<std::size_t> jump = search(std::move(child), depth + 1);
            path_.pop_back();
            if (jump && *jump < depth) return jump;
        }
        return std::nullopt;
    }

    void build_canonical(CanonicalForm& form) {
        CompactStructure& c = form.canonical;
        c.node_count = n_;
        c.relation_count = s_.relation_count;
        for (const auto& u : s_.unary) c.unary.push_back({u[0], best_pos_[u[1]]});
        for (const auto& b : s_.binary) c.binary.push_back({b[0], best_pos_[b[1]], best_pos_[b[2]]});
        std::sort(c.unary.begin(), c.unary.end());
        c.unary.erase(std::unique(c.unary.begin(), c.unary.end()), c.unary.end());
        std::sort(c.binary.begin(), c.binary.end());
        c.binary.erase(std::unique(c.binary.begin(), c.binary.end()), c.binary.end());
        form.centers.resize(centers_.size());
        for (std::size_t i = 0; i < centers_.size(); ++i)
            if (centers_[i]) form.centers[i] = best_pos_[*centers_[i]];
    }

    // Lexicographically least isomorphism canonical -> input, trying targets in ascending id order.
    std::vector<NodeId> least_isomorphism(const CompactStructure& canon) {
        std::vector<std::uint32_t> inverse(n_);
        for (std::uint32_t v = 0; v < n_; ++v) inverse[best_pos_[v]] = v;
        cand_.assign(n_, {});
        for (std::uint32_t p = 0; p < n_; ++p) {
            std::uint32_t cell = root_color_[inverse[p]];
            for (std::uint32_t v = 0; v < n_; ++v)
                if (root_color_[v] == cell) cand_[p].push_back(v);
        }
        canon_adj_.assign(n_, {});
        for (const auto& b : canon.binary) {
            if (b[1] == b[2]) continue;
            canon_adj_[b[1]].push_back({b[2], b[0] * 2});
            canon_adj_[b[2]].push_back({b[1], b[0] * 2 + 1});
        }
        for (auto& list : canon_adj_) std::sort(list.begin(), list.end());
        assign_.assign(n_, kNone);
        used_by_.assign(n_, kNone);
        if (!extend(0)) throw InternalError("canonical isomorphism search failed");
        return std::vector<NodeId>(assign_.begin(), assign_.end());
    }

    bool consistent(std::uint32_t p, std::uint32_t v) const {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> want, have;
        for (const auto& [q, code] : canon_adj_[p])
            if (q < p) want.push_back({q, code});
        for (const auto& [w, code] : adj_[v])
            if (used_by_[w] != kNone) have.push_back({used_by_[w], code});
        std::sort(want.begin(), want.end());
        std::sort(have.begin(), have.end());
        return want == have;
    }

    bool extend(std::uint32_t p) {
        if (p == n_) return true;
        for (std::uint32_t v : cand_[p]) {
            if (used_by_[v] != kNone) continue;
            if (!consistent(p, v)) continue;
            assign_[p] = v;
            used_by_[v] = p;
            if (extend(p + 1)) return true;
            used_by_[v] = kNone;
            assign_[p] = kNone;
        }
        return false;
    }

    const CompactStructure& s_;
    const PartialTuple& centers_;
    std::uint32_t n_ = 0;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj_;
    std::vector<std::uint32_t> root_color_;
    std::vector<std::uint32_t> path_;
    bool have_first_ = false;
    std::vector<std::uint32_t> first_, best_, first_path_, best_path_, best_pos_;
    std::vector<std::vector<std::uint32_t>> cand_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> canon_adj_;
    std::vector<std::uint32_t> assign_, used_by_;
};

void check_radius(const Structure& s, const PartialTuple& centers, unsigned r) {
    Adjacency adj = gaifman_adjacency(s);
    std::vector<NodeId> sources;
    for (const auto& c : centers)
        if (c) sources.push_back(*c);
    if (sources.empty()) {
        if (s.universe_size == 0) return;
        throw InvalidArgument("neighborhood without centers");
    }
    std::vector<Distance> dist = bfs_distances(adj, sources, r);
    for (NodeId v = 0; v < s.universe_size; ++v)
        if (!dist[v]) throw InvalidArgument("node " + s.label(v) + " lies beyond radius " + std::to_string(r) + " of every center");
}

}  // namespace

CanonicalForm canonical_form(const CompactStructure& s, const PartialTuple& centers) {
    Canonicalizer c(s, centers);
    return c.run();
}

CanonicalResult canonical_type(const PointedNeighborhood& n) {
    return canonical_type(n.structure, n.centers, n.radius);
}

CanonicalResult canonical_type(const Structure& s, const PartialTuple& centers, unsigned r) {
    check_radius(s, centers, r);
    CanonicalForm form = canonical_form(to_compact(s), centers);
    CanonicalResult result;
    result.type.structure = from_compact(form.canonical, s.signature);
    result.type.centers = form.centers;
    result.type.k = static_cast<unsigned>(centers.size());
    result.type.r = r;
    result.type.encoding = form.encoding;
    result.type.encoding.push_back(r);
    result.pi = std::move(form.pi);
    return result;
}

std::optional<std::vector<NodeId>> find_isomorphism(const Structure& a, const PartialTuple& centers_a,
                                                    const Structure& b, const PartialTuple& centers_b,
                                                    std::size_t cap) {
    if (a.universe_size > cap || b.universe_size > cap)
        throw CapExceeded("structure exceeds the isomorphism size cap",
                          std::to_string(std::max(a.universe_size, b.universe_size)));
    if (a.universe_size != b.universe_size || centers_a.size() != centers_b.size()) return std::nullopt;
    if (!(a.signature == b.signature)) return std::nullopt;
    CanonicalForm fa = canonical_form(to_compact(a), centers_a);
    CanonicalForm fb = canonical_form(to_compact(b), centers_b);
    if (fa.encoding != fb.encoding) return std::nullopt;
    std::vector<NodeId> map(a.universe_size);
    for (std::size_t p = 0; p < fa.pi.size(); ++p) map[fa.pi[p]] = fb.pi[p];
    return map;
}

TypeId TypeTable::intern(NeighborhoodType type) {
    auto it = index_.find(type.encoding);
    if (it != index_.end()) return it->second;
    TypeId id = static_cast<TypeId>(types_.size());
    index_.emplace(type.encoding, id);
    types_.push_back(std::make_unique<NeighborhoodType>(std::move(type)));
    return id;
}

TypeId TypeTable::intern(const CanonicalForm& form, unsigned k, unsigned r) {
    std::vector<std::uint32_t> key = form.encoding;
    key.push_back(r);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    NeighborhoodType t;
    t.structure = from_compact(form.canonical, signature_);
    t.centers = form.centers;
    t.k = k;
    t.r = r;
    t.encoding = std::move(key);
    return intern(std::move(t));
}

}  // namespace slpfo
