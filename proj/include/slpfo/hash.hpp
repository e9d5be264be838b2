#ifndef SLPFO_HASH_HPP
#define SLPFO_HASH_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace slpfo {

// FNV-1a over a vector of 32-bit words.
struct VectorHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint32_t x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace slpfo

#endif
