#include "sixv/oracle.hpp"

#include "sixv/edge_sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sixv::oracle {

NeighborSet brute_neighbors(const Vertex& a, std::int64_t scan_bound) {
  auto k = a.size();
  if (k > scan_bound) throw std::invalid_argument("brute_neighbors: K exceeds scan bound");
  NeighborSet out{a, {}, 2};

  // Gray-code walk over all of {-1,+1}^K: one digit flip per candidate.
  Vertex b(k);
  std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t i = 0;;) {
    if (b != a) {
      auto label = classify_move(a, b);
      if (label) out.moves.emplace_back(b, *label);
    }
    if (++i == total) break;
    b.flip_digit(std::countr_zero(i) + 1);
  }
  return out;
}

bool LabeledEdge::operator<(const LabeledEdge& o) const {
  if (a != o.a) return a < o.a;
  if (b != o.b) return b < o.b;
  return static_cast<int>(label) < static_cast<int>(o.label);
}

std::vector<LabeledEdge> enumerate_edges(std::int64_t k, std::int64_t bound) {
  if (k < 1) throw std::invalid_argument("enumerate_edges: K must be >= 1");
  if (k > bound) throw std::invalid_argument("enumerate_edges: K exceeds bound");
  std::vector<LabeledEdge> edges;
  Vertex a(k);
  std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t i = 0;;) {
    NeighborSet nb = brute_neighbors(a, bound);
    for (auto& [b, label] : nb.moves) edges.push_back({a, b, label});
    edges.push_back({a, a, EdgeLabel::PositiveLoop});
    edges.push_back({a, a, EdgeLabel::NegativeLoop});
    if (++i == total) break;
    a.flip_digit(std::countr_zero(i) + 1);
  }
  return edges;
}

std::map<LabeledEdge, Rational> exact_sampler_pmf(std::int64_t k, std::int64_t bound) {
  if (k < 1) throw std::invalid_argument("exact_sampler_pmf: K must be >= 1");
  if (k > bound) throw std::invalid_argument("exact_sampler_pmf: K exceeds bound");

  std::map<LabeledEdge, Rational> pmf;
  // Marginalizing the beta draws at alpha=1 coordinates leaves every
  // remaining outcome with the same weight: 1/2 * (1/3)^#ones * (2/3 * 1/2)^#zeros.
  Rational weight(BigInt(1), 2 * pow3(k));

  PrimitiveDraws p;
  p.alpha.assign(static_cast<std::size_t>(k), 0);
  p.beta.assign(static_cast<std::size_t>(k), 1);
  for (int eps0 : {1, -1}) {
    p.eps0 = eps0;
    std::uint64_t amask_total = std::uint64_t{1} << k;
    for (std::uint64_t amask = 0; amask < amask_total; ++amask) {
      std::vector<std::size_t> zeros;
      for (std::int64_t j = 0; j < k; ++j) {
        bool on = (amask >> j) & 1;
        p.alpha[static_cast<std::size_t>(j)] = on ? 1 : 0;
        if (!on) zeros.push_back(static_cast<std::size_t>(j));
        p.beta[static_cast<std::size_t>(j)] = 1;
      }
      std::uint64_t bmask_total = std::uint64_t{1} << zeros.size();
      for (std::uint64_t bmask = 0; bmask < bmask_total; ++bmask) {
        for (std::size_t z = 0; z < zeros.size(); ++z)
          p.beta[zeros[z]] = (bmask >> z) & 1 ? 1 : -1;
        BuiltEdge e = build_edge(p);
        EdgeLabel label;
        if (e.loop_sign) {
          label = *e.loop_sign == 1 ? EdgeLabel::PositiveLoop : EdgeLabel::NegativeLoop;
        } else {
          label = classify_move(e.a, e.b).value();
        }
        pmf[LabeledEdge{std::move(e.a), std::move(e.b), label}] += weight;
      }
    }
  }
  return pmf;
}

ChiSquareResult chi_square(std::span<const std::int64_t> observed,
                           std::span<const double> expected_probs, std::int64_t n,
                           double min_expected) {
  if (observed.size() != expected_probs.size())
    throw std::invalid_argument("chi_square: observed/expected size mismatch");
  if (observed.empty()) throw std::invalid_argument("chi_square: no cells");
  if (n < 1) throw std::invalid_argument("chi_square: n must be >= 1");
  std::int64_t total = std::accumulate(observed.begin(), observed.end(), std::int64_t{0});
  if (total != n) throw std::invalid_argument("chi_square: observed counts do not sum to n");

  std::vector<std::size_t> order(observed.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return expected_probs[i] < expected_probs[j];
  });

  // Pool from the smallest expected count upward until each pooled cell
  // reaches min_expected; a short leftover merges into the last cell.
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t idx : order) {
    obs_acc += static_cast<double>(observed[idx]);
    exp_acc += expected_probs[idx] * static_cast<double>(n);
    if (exp_acc >= min_expected) {
      cells.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (cells.empty()) throw std::invalid_argument("chi_square: expected counts too small");
    cells.back().first += obs_acc;
    cells.back().second += exp_acc;
  }
  if (cells.size() < 2) throw std::invalid_argument("chi_square: fewer than two cells after pooling");

  ChiSquareResult r;
  r.cells = static_cast<std::int64_t>(cells.size());
  for (auto& [obs, exp] : cells) {
    double d = obs - exp;
    r.statistic += d * d / exp;
  }
  r.df = r.cells - 1;
  r.p_value = gamma_q(static_cast<double>(r.df) / 2.0, r.statistic / 2.0);
  return r;
}

namespace {

double gamma_q_series(double s, double x) {
  // P(s,x) by series, returned as Q = 1 - P
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return 1.0 - sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_q_contfrac(double s, double x) {
  // modified Lentz on the standard continued fraction for Q(s,x)
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double gamma_q(double s, double x) {
  if (!(s > 0) || !(x >= 0)) throw std::invalid_argument("gamma_q: need s > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  return x < s + 1.0 ? gamma_q_series(s, x) : gamma_q_contfrac(s, x);
}

}  // namespace sixv::oracle
