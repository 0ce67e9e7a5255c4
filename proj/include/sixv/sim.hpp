#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sixv/vertex.hpp"

namespace sixv {

// One chain: states Y(0..n), edge labels of the n steps, and the base
// walk's heights Z^(1)(0..n) with z1[0] = 0.
struct Trajectory {
  std::int64_t k = 0;
  std::vector<Vertex> y;
  std::vector<EdgeLabel> labels;
  std::vector<std::int64_t> z1;

  std::int64_t steps() const { return static_cast<std::int64_t>(labels.size()); }
};

// Throws when consecutive states are not adjacent in G_K (or equal
// with a loop label) or the z1 increments disagree with the labels.
void check_trajectory(const Trajectory& t);

// h(t,i) = Z^(i)_t for 0 <= t <= steps, 1 <= i <= K+1. Both unit-step
// invariants hold: |h(t,i+1)-h(t,i)| = 1 and |h(t+1,i)-h(t,i)| = 1.
struct HeightField {
  std::int64_t steps = 0;
  std::int64_t walks = 0;  // K+1
  std::vector<std::int64_t> data;

  std::int64_t at(std::int64_t t, std::int64_t i) const { return data[t * walks + (i - 1)]; }
  std::int64_t& at(std::int64_t t, std::int64_t i) { return data[t * walks + (i - 1)]; }
};

// z0 must satisfy |z0[i+1]-z0[i]| = 1 with increments equal to Y(0).
HeightField reconstruct_walk(std::span<const std::int64_t> z0, const Trajectory& traj);

// z0 with Z^(1) = 0 and the rest forced by Y(0).
std::vector<std::int64_t> default_z0(const Vertex& y0);

// Pluggable per-edge weight for the additive functional. Built-ins cover
// the default (base increment), a constant, and a per-label table.
struct FieldSpec {
  enum class Kind { BaseIncrement, Constant, LabelTable };
  Kind kind = Kind::BaseIncrement;
  std::int64_t constant = 0;
  std::array<std::int64_t, 4> table{};  // indexed by EdgeLabel

  std::int64_t value(const Vertex& from, const Vertex& to, EdgeLabel label) const;

  // "base-increment" | "constant:<c>" | "table:E+=1,E-=-1,L+=1,L-=-1"
  static FieldSpec parse(const std::string& text);
  std::string to_text() const;
};

using EdgeField = std::function<std::int64_t(const Vertex&, const Vertex&, EdgeLabel)>;

// Partial sums Z_t = sum_{s<t} field(edge_s), Z_0 = 0; length steps+1.
std::vector<std::int64_t> additive_functional(const Trajectory& traj, const EdgeField& field);
std::vector<std::int64_t> additive_functional(const Trajectory& traj, const FieldSpec& field);

struct InfiniteSpec {
  std::vector<std::int64_t> prefix_blocks;
  std::vector<std::int64_t> period_blocks;
};

struct SimConfig {
  std::int64_t k = 1;
  std::optional<InfiniteSpec> infinite;  // rejected by run_chain (one-step only)
  std::int64_t steps = 1;
  std::int64_t chains = 1;
  std::uint64_t seed = 0;
  std::optional<Vertex> start;  // stationary start when absent
  FieldSpec field;
  std::string out;
};

// One chain, deterministic per (seed, chain_index): stationary (or fixed)
// start, then sequential kernel steps.
Trajectory run_chain(const SimConfig& cfg, std::int64_t chain_index = 0);

// Empirical Var(z1_n - z1_0) across chains with the normalization
// Var * (2+K) / (2n) and a bootstrap percentile CI. Exploratory: the
// normalization constant comes from prior work on this model family, and
// the mapping onto this statistic is not verified here.
struct VarianceReport {
  std::int64_t k = 0;
  std::int64_t steps = 0;
  std::int64_t chains = 0;
  std::uint64_t seed = 0;
  double variance = 0.0;
  double ratio = 0.0;  // variance * (2+K) / (2*steps)
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::int64_t bootstrap_resamples = 0;
};

// Requires cfg.chains >= 100. threads = 0 picks the hardware count; chains
// are deterministic per (seed, chain) regardless of the thread layout.
VarianceReport variance_report(const SimConfig& cfg, int threads = 0);

// Per-step wall time of the continued-fraction sampler vs the naive
// brute-enumeration sampler (only run where the 2^K scan is feasible).
struct BenchRow {
  std::int64_t k = 0;
  double cf_ns_per_step = 0.0;
  std::optional<double> naive_ns_per_step;
  std::optional<double> ratio;  // naive / cf
};

std::vector<BenchRow> bench_samplers(std::span<const std::int64_t> ks, std::int64_t cf_steps,
                                     std::int64_t naive_steps, std::uint64_t seed,
                                     std::int64_t naive_bound = 20);

// Log-log regression slope of cf_ns_per_step against K (for the linear
// growth check).
double bench_loglog_slope(std::span<const BenchRow> rows);

}  // namespace sixv
