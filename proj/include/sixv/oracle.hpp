#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sixv/rational.hpp"
#include "sixv/vertex.hpp"

// Brute-force ground truth and statistical test utilities. Everything here
// deliberately avoids the block/pattern machinery it is used to validate:
// neighbors come from a full 2^K scan driven by classify_move alone.
namespace sixv::oracle {

struct NeighborSet {
  Vertex source;
  std::vector<std::pair<Vertex, EdgeLabel>> moves;
  int loop_count = 2;

  std::int64_t degree() const { return static_cast<std::int64_t>(moves.size()) + loop_count; }
};

// Scans all 2^K - 1 candidate targets. Throws when K exceeds scan_bound.
NeighborSet brute_neighbors(const Vertex& a, std::int64_t scan_bound = 20);

struct LabeledEdge {
  Vertex a;
  Vertex b;
  EdgeLabel label;

  bool operator<(const LabeledEdge& o) const;
};

// All 2*3^K edges of G_K, loops included. K <= bound.
std::vector<LabeledEdge> enumerate_edges(std::int64_t k, std::int64_t bound = 12);

// Exact distribution of the primitive-draw edge sampler: sums the weight
// 2^{-1} * prod(1/3 or 2/3) * 2^{-#(alpha=0)} of every primitive outcome
// into the edge it builds. Total mass is exactly 1.
std::map<LabeledEdge, Rational> exact_sampler_pmf(std::int64_t k, std::int64_t bound = 6);

// Pearson goodness-of-fit. Cells with expected count below min_expected are
// pooled (ascending by expected count) before computing the statistic;
// df = cells - 1 after pooling. Throws when fewer than two cells remain.
struct ChiSquareResult {
  double statistic = 0.0;
  std::int64_t df = 0;
  double p_value = 1.0;
  std::int64_t cells = 0;  // after pooling
};

ChiSquareResult chi_square(std::span<const std::int64_t> observed,
                           std::span<const double> expected_probs, std::int64_t n,
                           double min_expected = 5.0);

// Regularized upper incomplete gamma Q(s,x) (series / Lentz continued
// fraction), absolute error well below 1e-10 over the chi-square range.
double gamma_q(double s, double x);

}  // namespace sixv::oracle
