#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sixv/rational.hpp"

namespace sixv {

struct StreamExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DepthLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact tails x_m^N = [M_m, ..., M_N, 1] for one block vector, computed by
// the backward recursion x_m = 1/(M_m + x_{m+1}) from the convention slot
// x_{N+1}^N = 1. Every tail lies in (0,1].
class TailTable {
 public:
  explicit TailTable(std::vector<std::int64_t> blocks);

  std::int64_t count() const { return static_cast<std::int64_t>(blocks_.size()); }
  const std::vector<std::int64_t>& blocks() const { return blocks_; }

  // x_m^N for 1 <= m <= N+1; x(N+1) is the convention value 1.
  const Rational& x(std::int64_t m) const;

 private:
  std::vector<std::int64_t> blocks_;
  std::vector<Rational> tails_;  // index m-1 holds x_m^N; index N holds 1
};

inline TailTable tail_table(std::vector<std::int64_t> blocks) {
  return TailTable(std::move(blocks));
}

// Double-precision tails for the simulation fast path: fills out[m-1] with
// x_m^N for m=1..N and out[N] with the convention value 1. One backward
// pass, no rational allocation. The recursion is contractive, so the result
// stays within a few ulp of the exact value.
void tail_values_double(std::span<const std::int64_t> blocks, std::vector<double>& out);

// Transfer pair (u_m^n, v_m^n): base u_n^n = (1+M_n)/(2*3^{M_n}),
// v_n^n = 1/(2*3^{M_n}), then (u,v) <- 3^{-M_m} [[M_m,1],[1,0]] (u,v).
// The ratio v_m^n / u_m^n equals x_m^n exactly.
std::pair<Rational, Rational> uv_vector(std::span<const std::int64_t> blocks,
                                        std::int64_t m, std::int64_t n);

// Vertex degree from its block profile:
//   deg = (M_1 + 1 + x_2^N) * prod_{k=2..N} (M_k + x_{k+1}^N).
// The rational product must reduce to an integer; anything else signals an
// arithmetic bug and throws std::logic_error.
BigInt degree_from_blocks(std::span<const std::int64_t> blocks);

// On-demand source of block lengths M_1, M_2, ... for infinite vertices.
// Stateful cursor; not shareable across concurrent consumers.
class BlockStream {
 public:
  virtual ~BlockStream() = default;
  // Next block length, or nullopt when a finite stream is exhausted.
  virtual std::optional<std::int64_t> next() = 0;
};

// Finite prefix followed by a repeating period. An empty period makes the
// stream finite (it exhausts after the prefix).
class PeriodicBlockStream final : public BlockStream {
 public:
  PeriodicBlockStream(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period);
  std::optional<std::int64_t> next() override;

 private:
  std::vector<std::int64_t> prefix_;
  std::vector<std::int64_t> period_;
  std::size_t idx_ = 0;
};

// Exact enclosure of an infinite tail x_m^inf. Endpoints come from the
// depth-d truncation evaluated with appended tail values 0 and 1, which
// bracket every continuation; width is nonincreasing in depth.
struct TailBracket {
  Rational lower;
  Rational upper;
  std::int64_t depth = 0;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& v) const { return lower <= v && v <= upper; }
};

// Incremental bracket construction, one consumed block at a time. Keeps the
// convergent matrix exactly, so endpoints are exact rationals.
class TailBracketBuilder {
 public:
  void push_block(std::int64_t m);
  std::int64_t depth() const { return depth_; }
  TailBracket bracket() const;  // requires depth >= 1

 private:
  // value(t) = (t00*t + t01)/(t10*t + t11); starts as identity
  BigInt t00_ = 1, t01_ = 0, t10_ = 0, t11_ = 1;
  std::int64_t depth_ = 0;
};

// Consumes blocks from the stream (skipping the m-1 leading ones, so the
// stream is the full sequence M_1, M_2, ...) until the bracket around
// x_m^inf is no wider than tol. Throws StreamExhausted if a finite stream
// runs out first and DepthLimitExceeded past max_depth consumed blocks.
TailBracket tail_bracket_infinite(BlockStream& blocks, std::int64_t m, const Rational& tol,
                                  std::int64_t max_depth = 1'000'000);
TailBracket tail_bracket_infinite(BlockStream& blocks, std::int64_t m, double tol,
                                  std::int64_t max_depth = 1'000'000);

}  // namespace sixv
