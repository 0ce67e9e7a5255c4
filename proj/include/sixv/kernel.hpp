#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sixv/contfrac.hpp"
#include "sixv/rational.hpp"
#include "sixv/rng.hpp"
#include "sixv/vertex.hpp"

namespace sixv {

// What happened in blocks 1..m-1 when block m is decided.
struct HistoryState {
  std::optional<std::int64_t> last_change;

  static HistoryState no_change() { return {}; }
  static HistoryState last_change_at(std::int64_t j) { return {j}; }
};

// Conditional flip probability for block m:
//   no change yet            -> M_m / (M_m + 1 + x_{m+1}^N)
//   last change at odd gap   -> M_m * x_m^N
//   last change at even gap  -> exactly 0 (forced by the alternating rule)
// with the convention x_{N+1}^N = 1. tails must be the table for bd's
// block vector.
Rational eps_probability(const BlockDecomposition& bd, std::int64_t m, HistoryState h,
                         const TailTable& tails);

// Float fast path; tails as produced by tail_values_double (tails[j-1] =
// x_j^N, tails[N] = 1).
double eps_probability_float(const BlockDecomposition& bd, std::int64_t m, HistoryState h,
                             std::span<const double> tails);

// Full one-step distribution from a: every valid change pattern times its
// digit choices, plus the two signed loops sharing the all-zero mass.
// Probabilities are exact; each entry equals 1/deg_K(a).
struct TransitionPmf {
  struct Entry {
    Vertex target;
    EdgeLabel label;
    Rational prob;
  };

  Vertex source;
  std::vector<Entry> entries;

  Rational total_mass() const;
};

TransitionPmf transition_pmf(const Vertex& a);

// Sequential sampler, float fast path: one pass over the blocks, one
// uniform per non-forced epsilon decision, one per flip position, one for
// the loop sign. Reusable scratch keeps the hot loop allocation-free.
class StepSampler {
 public:
  // Mutates a into the step target and returns the edge label.
  EdgeLabel step(Vertex& a, RandomStream& rng);

 private:
  std::vector<std::int64_t> m_, s_;
  std::vector<double> tails_;
  std::vector<std::int64_t> flips_;
};

std::pair<EdgeLabel, Vertex> sample_step(const Vertex& a, RandomStream& rng);

// Probability enclosures for one epsilon decision at K = infinity, given a
// bracket on the next tail x_{m+1}^inf. Both conditional forms are
// decreasing in that tail:
//   no change yet:          M / (M + 1 + x)
//   after change (odd gap): M * x_m = M / (M + x)
struct ProbBracket {
  Rational lower;
  Rational upper;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& v) const { return lower <= v && v <= upper; }
};

ProbBracket eps_bracket_no_change(std::int64_t block_length, const TailBracket& next_tail);
ProbBracket eps_bracket_after_change(std::int64_t block_length, const TailBracket& next_tail);

// One step of the K = infinity kernel, resolved on the first W blocks.
// eps/pos describe the flips inside the window (all-zero is a valid,
// incomplete outcome: loops do not exist in G_inf). consumed_depth counts
// blocks pulled from the tail stream as the decision certificate.
struct InfiniteStepOutcome {
  std::vector<std::uint8_t> eps;
  std::vector<std::int64_t> pos;
  std::int64_t consumed_depth = 0;
};

// Each epsilon decision draws one uniform, lazily extended dyadically when
// a tie with the bracket cannot be resolved at the current precision, and
// deepens the bracket (consuming the stream) until decidable, so the
// comparison against the exact conditional probability is unbiased.
// Brackets start at width <= tol. Throws DepthLimitExceeded when a decision
// would need more than max_depth consumed blocks (near-tie draw; the draw
// is never retried) and StreamExhausted on a finite stream.
InfiniteStepOutcome sample_step_infinite(const BlockDecomposition& prefix,
                                         BlockStream& tail_stream, double tol,
                                         RandomStream& rng,
                                         std::int64_t max_depth = 100'000);

}  // namespace sixv
