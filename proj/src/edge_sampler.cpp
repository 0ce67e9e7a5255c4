#include "sixv/edge_sampler.hpp"

#include <stdexcept>

namespace sixv {

PrimitiveDraws draw_primitives(std::int64_t k, RandomStream& rng) {
  if (k < 1) throw std::invalid_argument("draw_primitives: K must be >= 1");
  PrimitiveDraws p;
  p.eps0 = rng.fair_sign();
  p.alpha.resize(static_cast<std::size_t>(k));
  p.beta.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < p.alpha.size(); ++i) {
    p.alpha[i] = rng.bernoulli_third() ? 1 : 0;
    p.beta[i] = rng.fair_sign();
  }
  return p;
}

BuiltEdge build_edge(const PrimitiveDraws& p) {
  auto k = static_cast<std::int64_t>(p.alpha.size());
  if (k < 1 || p.beta.size() != p.alpha.size())
    throw std::invalid_argument("build_edge: malformed draw record");
  if (p.eps0 != 1 && p.eps0 != -1) throw std::invalid_argument("build_edge: eps0 must be +-1");

  BuiltEdge e{Vertex(k), Vertex(k), std::nullopt};
  int gamma = p.eps0;
  bool any_change = false;
  for (std::int64_t j = 1; j <= k; ++j) {
    auto i = static_cast<std::size_t>(j - 1);
    if (p.beta[i] != 1 && p.beta[i] != -1)
      throw std::invalid_argument("build_edge: beta entries must be +-1");
    if (p.alpha[i]) {
      e.a.set_digit(j, gamma);
      e.b.set_digit(j, -gamma);
      gamma = -gamma;
      any_change = true;
    } else {
      e.a.set_digit(j, p.beta[i]);
      e.b.set_digit(j, p.beta[i]);
    }
  }
  if (!any_change) e.loop_sign = p.eps0;
  return e;
}

std::tuple<Vertex, Vertex, EdgeLabel> sample_uniform_edge(std::int64_t k, RandomStream& rng) {
  BuiltEdge e = build_edge(draw_primitives(k, rng));
  EdgeLabel label;
  if (e.loop_sign) {
    label = *e.loop_sign == 1 ? EdgeLabel::PositiveLoop : EdgeLabel::NegativeLoop;
  } else {
    // first changed coordinate carries a-digit gamma_1 = eps0, so the first
    // diff sign is -eps0 and the edge is positive exactly when eps0 = +1
    auto cls = classify_move(e.a, e.b);
    if (!cls) throw std::logic_error("sample_uniform_edge: built a non-edge");
    label = *cls;
  }
  return {std::move(e.a), std::move(e.b), label};
}

Vertex sample_stationary_vertex(std::int64_t k, RandomStream& rng) {
  return build_edge(draw_primitives(k, rng)).a;
}

InfiniteEdgeStream::InfiniteEdgeStream(RandomStream& rng) : rng_(rng) {
  eps0_ = rng_.fair_sign();
  gamma_ = eps0_;
}

InfiniteEdgeStream::Coordinate InfiniteEdgeStream::next() {
  ++position_;
  bool change = rng_.bernoulli_third();
  int beta = rng_.fair_sign();
  if (change) {
    Coordinate c{gamma_, -gamma_};
    gamma_ = -gamma_;
    return c;
  }
  return {beta, beta};
}

}  // namespace sixv
