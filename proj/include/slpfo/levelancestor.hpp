#ifndef SLPFO_LEVELANCESTOR_HPP
#define SLPFO_LEVELANCESTOR_HPP

#include <cstdint>
#include <vector>

namespace slpfo {

// Constant-time level-ancestor queries on a rooted forest given by parent pointers.
// Uses the long-path decomposition with doubled ladders and jump pointers stored at
// tree leaves only.
class LevelAncestor {
public:
    static constexpr std::uint32_t kNone = 0xffffffffu;

    LevelAncestor() = default;
    // parent[v] == kNone marks a root; nodes with active[v] == false are ignored.
    explicit LevelAncestor(const std::vector<std::uint32_t>& parent, const std::vector<bool>& active = {});

    std::uint32_t depth(std::uint32_t v) const { return depth_[v]; }
    // Ancestor of v at depth d (d <= depth(v)).
    std::uint32_t ancestor_at(std::uint32_t v, std::uint32_t d) const;
    // Child of u on the path from u down to its descendant v (u != v).
    std::uint32_t next_link(std::uint32_t u, std::uint32_t v) const;
    // Number of words allocated by the structure.
    std::size_t memory_words() const;

private:
    std::vector<std::uint32_t> depth_;
    std::vector<std::uint32_t> leaf_;         // bottom of the long path through v
    std::vector<std::uint32_t> path_of_;      // long path id of v
    std::vector<std::uint32_t> ladder_top_;   // depth of the first ladder entry per path
    std::vector<std::vector<std::uint32_t>> ladders_;
    std::vector<std::uint32_t> jump_index_;   // leaf -> row in jumps_
    std::vector<std::vector<std::uint32_t>> jumps_;
};

}  // namespace slpfo

#endif
