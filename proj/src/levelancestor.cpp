#include "slpfo/levelancestor.hpp"

#include <algorithm>

#include "slpfo/errors.hpp"

namespace slpfo {

LevelAncestor::LevelAncestor(const std::vector<std::uint32_t>& parent, const std::vector<bool>& active) {
    const std::size_t n = parent.size();
    auto on = [&](std::uint32_t v) { return active.empty() || active[v]; };
    depth_.assign(n, 0);
    leaf_.assign(n, kNone);
    path_of_.assign(n, kNone);
    jump_index_.assign(n, kNone);

    std::vector<std::vector<std::uint32_t>> children(n);
    std::vector<std::uint32_t> roots;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (!on(v)) continue;
        if (parent[v] == kNone)
            roots.push_back(v);
        else
            children[parent[v]].push_back(v);
    }

    // Preorder by explicit stack, then heights bottom-up in reverse preorder.
    std::vector<std::uint32_t> order;
    std::vector<std::uint32_t> stack(roots.rbegin(), roots.rend());
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) {
            depth_[*it] = depth_[v] + 1;
            stack.push_back(*it);
        }
    }
    std::vector<std::uint32_t> height(n, 0), tall(n, kNone);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::uint32_t v = *it;
        for (std::uint32_t c : children[v])
            if (tall[v] == kNone || height[c] + 1 > height[v]) {
                height[v] = height[c] + 1;
                tall[v] = c;
            }
    }

    // Long paths start at roots and at children that are not the tallest child.
    for (std::uint32_t v : order) {
        bool head = parent[v] == kNone || tall[parent[v]] != v;
        if (!head) continue;
        std::vector<std::uint32_t> path;
        for (std::uint32_t x = v; x != kNone; x = tall[x]) path.push_back(x);
        std::uint32_t id = static_cast<std::uint32_t>(ladders_.size());
        std::uint32_t bottom = path.back();
        for (std::uint32_t x : path) {
            path_of_[x] = id;
            leaf_[x] = bottom;
        }
        std::vector<std::uint32_t> up;
        std::uint32_t x = parent[v];
        while (x != kNone && up.size() < path.size()) {
            up.push_back(x);
            x = parent[x];
        }
        std::vector<std::uint32_t> ladder(up.rbegin(), up.rend());
        ladder.insert(ladder.end(), path.begin(), path.end());
        ladder_top_.push_back(depth_[v] - static_cast<std::uint32_t>(up.size()));
        ladders_.push_back(std::move(ladder));
    }

    // Jump pointers for leaves, computed with the ancestor stack of a DFS.
    std::vector<std::uint32_t> ancestors;
    std::vector<std::pair<std::uint32_t, bool>> dfs;
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) dfs.push_back({*it, false});
    while (!dfs.empty()) {
        auto [v, done] = dfs.back();
        dfs.pop_back();
        if (done) {
            ancestors.pop_back();
            continue;
        }
        ancestors.push_back(v);
        dfs.push_back({v, true});
        if (children[v].empty()) {
            std::vector<std::uint32_t> row;
            std::uint32_t d = depth_[v];
            for (std::uint32_t step = 1; step <= d; step <<= 1) row.push_back(ancestors[d - step]);
            jump_index_[v] = static_cast<std::uint32_t>(jumps_.size());
            jumps_.push_back(std::move(row));
        }
        for (auto c = children[v].rbegin(); c != children[v].rend(); ++c) dfs.push_back({*c, false});
    }
}

std::uint32_t LevelAncestor::ancestor_at(std::uint32_t v, std::uint32_t d) const {
    if (d > depth_[v]) throw InvalidArgument("level ancestor: depth below the node");
    if (d == depth_[v]) return v;
    std::uint32_t leaf = leaf_[v];
    std::uint32_t k = depth_[leaf] - d;
    std::uint32_t h = 31u - static_cast<std::uint32_t>(__builtin_clz(k));
    std::uint32_t x = jumps_[jump_index_[leaf]][h];
    std::uint32_t id = path_of_[x];
    return ladders_[id][d - ladder_top_[id]];
}

std::uint32_t LevelAncestor::next_link(std::uint32_t u, std::uint32_t v) const {
    if (depth_[v] <= depth_[u]) throw InvalidArgument("next link: target is not a proper descendant");
    std::uint32_t c = ancestor_at(v, depth_[u] + 1);
    return c;
}

std::size_t LevelAncestor::memory_words() const {
    std::size_t w = depth_.size() * 4 + ladder_top_.size();
    for (const auto& l : ladders_) w += l.size();
    for (const auto& j : jumps_) w += j.size();
    return w;
}

}  // namespace slpfo
