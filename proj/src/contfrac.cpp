#include "sixv/contfrac.hpp"

#include <utility>

namespace sixv {

namespace {

void check_block_lengths(std::span<const std::int64_t> blocks) {
  if (blocks.empty()) throw std::invalid_argument("block vector must be nonempty");
  for (auto b : blocks)
    if (b < 1) throw std::invalid_argument("block lengths must be >= 1");
}

}  // namespace

TailTable::TailTable(std::vector<std::int64_t> blocks) : blocks_(std::move(blocks)) {
  check_block_lengths(blocks_);
  auto n = blocks_.size();
  tails_.resize(n + 1);
  tails_[n] = 1;
  // x_m = q_{m+1} / (M_m q_{m+1} + p_{m+1}) keeps numerator and denominator
  // coprime, so the backward pass needs no gcd reduction until the end.
  BigInt p = 1, q = 1;
  for (std::size_t m = n; m-- > 0;) {
    BigInt nq = blocks_[m] * q + p;
    p = std::move(q);
    q = std::move(nq);
    tails_[m] = Rational(p, q);
  }
}

const Rational& TailTable::x(std::int64_t m) const {
  if (m < 1 || m > count() + 1) throw std::out_of_range("TailTable::x: m out of range");
  return tails_[static_cast<std::size_t>(m - 1)];
}

void tail_values_double(std::span<const std::int64_t> blocks, std::vector<double>& out) {
  check_block_lengths(blocks);
  auto n = blocks.size();
  out.resize(n + 1);
  out[n] = 1.0;
  for (std::size_t m = n; m-- > 0;)
    out[m] = 1.0 / (static_cast<double>(blocks[m]) + out[m + 1]);
}

std::pair<Rational, Rational> uv_vector(std::span<const std::int64_t> blocks, std::int64_t m,
                                        std::int64_t n) {
  check_block_lengths(blocks);
  if (m < 1 || n > static_cast<std::int64_t>(blocks.size()) || m > n)
    throw std::out_of_range("uv_vector: need 1 <= m <= n <= block count");
  Rational scale(BigInt(1), 2 * pow3(blocks[static_cast<std::size_t>(n - 1)]));
  Rational u = Rational(1 + blocks[static_cast<std::size_t>(n - 1)]) * scale;
  Rational v = scale;
  for (std::int64_t k = n - 1; k >= m; --k) {
    auto mk = blocks[static_cast<std::size_t>(k - 1)];
    Rational inv3(BigInt(1), pow3(mk));
    Rational nu = (Rational(mk) * u + v) * inv3;
    Rational nv = u * inv3;
    u = std::move(nu);
    v = std::move(nv);
  }
  return {u, v};
}

BigInt degree_from_blocks(std::span<const std::int64_t> blocks) {
  TailTable t(std::vector<std::int64_t>(blocks.begin(), blocks.end()));
  Rational deg = Rational(blocks[0] + 1) + t.x(2);
  for (std::int64_t k = 2; k <= t.count(); ++k)
    deg *= Rational(blocks[static_cast<std::size_t>(k - 1)]) + t.x(k + 1);
  if (denominator(deg) != 1)
    throw std::logic_error("degree_from_blocks: product did not reduce to an integer");
  return numerator(deg);
}

PeriodicBlockStream::PeriodicBlockStream(std::vector<std::int64_t> prefix,
                                         std::vector<std::int64_t> period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
  for (auto b : prefix_)
    if (b < 1) throw std::invalid_argument("block lengths must be >= 1");
  for (auto b : period_)
    if (b < 1) throw std::invalid_argument("block lengths must be >= 1");
}

std::optional<std::int64_t> PeriodicBlockStream::next() {
  if (idx_ < prefix_.size()) return prefix_[idx_++];
  if (period_.empty()) return std::nullopt;
  auto off = (idx_++ - prefix_.size()) % period_.size();
  return period_[off];
}

void TailBracketBuilder::push_block(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("block lengths must be >= 1");
  // T <- T * [[0,1],[1,m]]
  BigInt n01 = t00_ + m * t01_;
  BigInt n11 = t10_ + m * t11_;
  t00_ = std::move(t01_);
  t01_ = std::move(n01);
  t10_ = std::move(t11_);
  t11_ = std::move(n11);
  ++depth_;
}

TailBracket TailBracketBuilder::bracket() const {
  if (depth_ < 1) throw std::logic_error("TailBracketBuilder: bracket before any block");
  Rational at0(t01_, t11_);
  Rational at1(t00_ + t01_, t10_ + t11_);
  TailBracket b;
  b.depth = depth_;
  if (at0 <= at1) {
    b.lower = std::move(at0);
    b.upper = std::move(at1);
  } else {
    b.lower = std::move(at1);
    b.upper = std::move(at0);
  }
  return b;
}

TailBracket tail_bracket_infinite(BlockStream& blocks, std::int64_t m, const Rational& tol,
                                  std::int64_t max_depth) {
  if (m < 1) throw std::out_of_range("tail_bracket_infinite: m must be >= 1");
  if (tol <= 0) throw std::invalid_argument("tail_bracket_infinite: tol must be positive");
  for (std::int64_t skip = 1; skip < m; ++skip) {
    if (!blocks.next()) throw StreamExhausted("block stream ended before block m");
  }
  TailBracketBuilder builder;
  while (builder.depth() < max_depth) {
    auto b = blocks.next();
    if (!b) throw StreamExhausted("block stream ended before the bracket converged");
    builder.push_block(*b);
    TailBracket br = builder.bracket();
    if (br.width() <= tol) return br;
  }
  throw DepthLimitExceeded("bracket still wider than tol at max_depth");
}

TailBracket tail_bracket_infinite(BlockStream& blocks, std::int64_t m, double tol,
                                  std::int64_t max_depth) {
  return tail_bracket_infinite(blocks, m, rational_from_double(tol), max_depth);
}

}  // namespace sixv
