#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "sixv/rng.hpp"
#include "sixv/vertex.hpp"

namespace sixv {

// The independent primitives behind one uniform edge draw: a fair sign
// eps0, K Bernoulli(1/3) change indicators alpha, K fair signs beta.
struct PrimitiveDraws {
  int eps0 = 1;
  std::vector<std::uint8_t> alpha;
  std::vector<int> beta;
};

// Consumption order: eps0 first, then alpha_k, beta_k per coordinate
// (beta_k is drawn even where alpha_k = 1 so the finite record and the lazy
// infinite stream consume identically).
PrimitiveDraws draw_primitives(std::int64_t k, RandomStream& rng);

struct BuiltEdge {
  Vertex a;
  Vertex b;
  std::optional<int> loop_sign;  // set exactly when a == b
};

// Deterministic map from a draw record to an edge:
//   gamma_k = eps0 * (-1)^{sum_{i<k} alpha_i}
//   A_k = (1-alpha_k) beta_k + alpha_k gamma_k
//   B_k = (1-alpha_k) beta_k - alpha_k gamma_k
// B - A automatically satisfies the alternating-sign rule, and the edge is
// uniform on the 2*3^K edges of E_K.
BuiltEdge build_edge(const PrimitiveDraws& p);

// Uniform edge of E_K with its label (each edge has probability 3^{-K}/2).
std::tuple<Vertex, Vertex, EdgeLabel> sample_uniform_edge(std::int64_t k, RandomStream& rng);

// A-marginal of the uniform edge: the stationary law
// pi(a) = deg_K(a) / (2*3^K).
Vertex sample_stationary_vertex(std::int64_t k, RandomStream& rng);

// K = infinity variant: lazily generates (A_k, B_k) one coordinate at a
// time from the same primitives. Owns no stream; the caller's stream must
// not be used elsewhere while the cursor advances.
class InfiniteEdgeStream {
 public:
  explicit InfiniteEdgeStream(RandomStream& rng);

  struct Coordinate {
    int a;
    int b;
  };
  Coordinate next();

  // Sign of the base walk's increment for this edge (eps0).
  int step_sign() const { return eps0_; }
  std::int64_t position() const { return position_; }

 private:
  RandomStream& rng_;
  int eps0_;
  int gamma_;
  std::int64_t position_ = 0;
};

}  // namespace sixv
