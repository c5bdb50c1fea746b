#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qbsc {

// Derives independent seeded streams from one root seed. Stream identity is
// (task name, index), so parallel sweeps stay reproducible regardless of
// scheduling order.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view task, std::uint64_t index) {
    // FNV-1a over the task name, then splitmix64 finalization.
    std::uint64_t h = 14695981039346656037ull ^ root;
    for (char c : task) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ull;
    }
    h ^= index + 0x9e3779b97f4a7c15ull;
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::string_view task, std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(root, task, index));
}

}  // namespace qbsc
