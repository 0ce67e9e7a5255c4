#pragma once

#include <cstdint>
#include <vector>

#include "sixv/rng.hpp"
#include "sixv/vertex.hpp"

namespace sixv::testutil {

inline Vertex random_vertex(std::int64_t k, RandomStream& rng) {
  Vertex v(k);
  for (std::int64_t i = 1; i <= k; ++i) v.set_digit(i, rng.fair_sign());
  return v;
}

// Block vector with count in [1, max_blocks] and lengths in [1, max_len].
inline std::vector<std::int64_t> random_blocks(RandomStream& rng, std::int64_t max_blocks,
                                               std::int64_t max_len) {
  auto n = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(max_blocks))) + 1;
  std::vector<std::int64_t> m(static_cast<std::size_t>(n));
  for (auto& b : m)
    b = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(max_len))) + 1;
  return m;
}

}  // namespace sixv::testutil
