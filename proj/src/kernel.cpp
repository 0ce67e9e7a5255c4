#include "sixv/kernel.hpp"

#include <functional>
#include <stdexcept>
#include <utility>

namespace sixv {

namespace {

void check_block_index(const BlockDecomposition& bd, std::int64_t m) {
  if (m < 1 || m > bd.count()) throw std::out_of_range("block index out of range");
}

}  // namespace

Rational eps_probability(const BlockDecomposition& bd, std::int64_t m, HistoryState h,
                         const TailTable& tails) {
  check_block_index(bd, m);
  if (tails.blocks() != bd.m)
    throw std::invalid_argument("eps_probability: tail table built for different blocks");
  Rational mm(bd.length(m));
  if (!h.last_change) return mm / (mm + 1 + tails.x(m + 1));
  std::int64_t gap = m - *h.last_change;
  if (gap < 1) throw std::out_of_range("eps_probability: last change not before m");
  if (gap % 2 == 0) return Rational(0);
  return mm * tails.x(m);
}

double eps_probability_float(const BlockDecomposition& bd, std::int64_t m, HistoryState h,
                             std::span<const double> tails) {
  check_block_index(bd, m);
  auto mm = static_cast<double>(bd.length(m));
  if (!h.last_change) return mm / (mm + 1.0 + tails[static_cast<std::size_t>(m)]);
  std::int64_t gap = m - *h.last_change;
  if (gap < 1) throw std::out_of_range("eps_probability_float: last change not before m");
  if (gap % 2 == 0) return 0.0;
  return mm * tails[static_cast<std::size_t>(m - 1)];
}

Rational TransitionPmf::total_mass() const {
  Rational sum(0);
  for (const auto& e : entries) sum += e.prob;
  return sum;
}

TransitionPmf transition_pmf(const Vertex& a) {
  BlockDecomposition bd = block_decomposition(a);
  TailTable tails(bd.m);
  auto n = bd.count();

  TransitionPmf pmf{a, {}};

  ChangePattern pattern;
  pattern.eps.assign(static_cast<std::size_t>(n), 0);
  pattern.pos.assign(static_cast<std::size_t>(n), 0);

  // Depth-first walk over the sequential decisions; the probability of a
  // leaf is the product of its branch probabilities.
  std::function<void(std::int64_t, HistoryState, Rational)> walk =
      [&](std::int64_t m, HistoryState h, Rational prob) {
        if (m > n) {
          if (pattern.any_change()) {
            pattern.loop_sign.reset();
            auto [target, label] = apply_pattern(a, pattern);
            pmf.entries.push_back({std::move(target), label, std::move(prob)});
          } else {
            Rational half = prob / 2;
            pattern.loop_sign = 1;
            pmf.entries.push_back({a, EdgeLabel::PositiveLoop, half});
            pattern.loop_sign = -1;
            pmf.entries.push_back({a, EdgeLabel::NegativeLoop, half});
          }
          return;
        }
        Rational p = eps_probability(bd, m, h, tails);
        auto i = static_cast<std::size_t>(m - 1);
        if (p != 1) {
          pattern.eps[i] = 0;
          pattern.pos[i] = 0;
          walk(m + 1, h, prob * (Rational(1) - p));
        }
        if (p != 0) {
          Rational per_digit = prob * p / Rational(bd.m[i]);
          pattern.eps[i] = 1;
          for (std::int64_t e = 1; e <= bd.m[i]; ++e) {
            pattern.pos[i] = e;
            walk(m + 1, HistoryState::last_change_at(m), per_digit);
          }
          pattern.eps[i] = 0;
          pattern.pos[i] = 0;
        }
      };
  walk(1, HistoryState::no_change(), Rational(1));
  return pmf;
}

EdgeLabel StepSampler::step(Vertex& a, RandomStream& rng) {
  int first_sign = 1;
  block_decomposition_into(a, m_, s_, first_sign);
  tail_values_double(m_, tails_);
  flips_.clear();

  auto n = static_cast<std::int64_t>(m_.size());
  std::int64_t last_change = -1;
  int first_flipped_sign = 0;
  for (std::int64_t m = 1; m <= n; ++m) {
    if (last_change >= 0 && (m - last_change) % 2 == 0) continue;  // forced zero
    auto i = static_cast<std::size_t>(m - 1);
    auto mm = static_cast<double>(m_[i]);
    double p = last_change < 0 ? mm / (mm + 1.0 + tails_[i + 1]) : mm * tails_[i];
    if (!rng.bernoulli(p)) continue;
    auto e = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(m_[i]))) + 1;
    flips_.push_back(s_[i] + e);
    if (last_change < 0) first_flipped_sign = (m % 2 == 1) ? first_sign : -first_sign;
    last_change = m;
  }

  if (flips_.empty()) {
    return rng.fair_sign() == 1 ? EdgeLabel::PositiveLoop : EdgeLabel::NegativeLoop;
  }
  for (auto k : flips_) a.flip_digit(k);
  return first_flipped_sign == 1 ? EdgeLabel::PositiveMove : EdgeLabel::NegativeMove;
}

std::pair<EdgeLabel, Vertex> sample_step(const Vertex& a, RandomStream& rng) {
  StepSampler sampler;
  Vertex b = a;
  EdgeLabel label = sampler.step(b, rng);
  return {label, std::move(b)};
}

namespace {

void check_tail_bracket(const TailBracket& t) {
  if (t.lower < 0 || t.upper < t.lower || t.upper > 1)
    throw std::invalid_argument("tail bracket outside [0,1]");
}

}  // namespace

ProbBracket eps_bracket_no_change(std::int64_t block_length, const TailBracket& next_tail) {
  if (block_length < 1) throw std::invalid_argument("block length must be >= 1");
  check_tail_bracket(next_tail);
  Rational mm(block_length);
  return {mm / (mm + 1 + next_tail.upper), mm / (mm + 1 + next_tail.lower)};
}

ProbBracket eps_bracket_after_change(std::int64_t block_length, const TailBracket& next_tail) {
  if (block_length < 1) throw std::invalid_argument("block length must be >= 1");
  check_tail_bracket(next_tail);
  Rational mm(block_length);
  return {mm / (mm + next_tail.upper), mm / (mm + next_tail.lower)};
}

namespace {

// Uniform on [0,1) revealed 64 bits at a time; [lo, hi) always contains it.
class LazyUniform {
 public:
  void refine(RandomStream& rng) {
    bits_ <<= 64;
    bits_ += rng.next_u64();
    tbits_ += 64;
  }
  Rational lo() const { return Rational(bits_, BigInt(1) << tbits_); }
  Rational hi() const { return Rational(bits_ + 1, BigInt(1) << tbits_); }
  Rational width() const { return Rational(BigInt(1), BigInt(1) << tbits_); }

 private:
  BigInt bits_ = 0;
  std::int64_t tbits_ = 0;
};

}  // namespace

InfiniteStepOutcome sample_step_infinite(const BlockDecomposition& prefix,
                                         BlockStream& tail_stream, double tol, RandomStream& rng,
                                         std::int64_t max_depth) {
  auto w = prefix.count();
  if (w < 1) throw std::invalid_argument("sample_step_infinite: empty window");
  if (!(tol > 0)) throw std::invalid_argument("sample_step_infinite: tol must be positive");
  Rational rtol = rational_from_double(tol);

  InfiniteStepOutcome out;
  out.eps.assign(static_cast<std::size_t>(w), 0);
  out.pos.assign(static_cast<std::size_t>(w), 0);

  // Blocks seen so far: the window, then whatever the stream has yielded.
  std::vector<std::int64_t> known = prefix.m;
  auto pull = [&]() {
    if (out.consumed_depth >= max_depth)
      throw DepthLimitExceeded("epsilon decision needs more than max_depth blocks");
    auto b = tail_stream.next();
    if (!b) throw StreamExhausted("tail stream ended during an epsilon decision");
    known.push_back(*b);
    ++out.consumed_depth;
  };

  std::int64_t last_change = -1;
  for (std::int64_t m = 1; m <= w; ++m) {
    if (last_change >= 0 && (m - last_change) % 2 == 0) continue;  // forced zero

    // Bracket x_{m+1}^inf from blocks M_{m+1}, M_{m+2}, ...
    TailBracketBuilder builder;
    auto cursor = static_cast<std::size_t>(m);
    auto deepen = [&]() {
      if (cursor == known.size()) pull();
      builder.push_block(known[cursor++]);
    };
    deepen();
    while (builder.bracket().width() > rtol) deepen();

    LazyUniform u;
    u.refine(rng);
    std::uint8_t decided = 0;
    for (;;) {
      TailBracket tail = builder.bracket();
      ProbBracket p = last_change < 0 ? eps_bracket_no_change(prefix.m[static_cast<std::size_t>(m - 1)], tail)
                                      : eps_bracket_after_change(prefix.m[static_cast<std::size_t>(m - 1)], tail);
      if (u.hi() <= p.lower) {
        decided = 1;
        break;
      }
      if (u.lo() >= p.upper) {
        decided = 0;
        break;
      }
      // Tie at current precision: sharpen whichever enclosure is wider.
      if (p.width() > u.width()) {
        deepen();
      } else {
        u.refine(rng);
      }
    }
    if (!decided) continue;
    auto i = static_cast<std::size_t>(m - 1);
    out.eps[i] = 1;
    out.pos[i] =
        static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(prefix.m[i]))) + 1;
    last_change = m;
  }
  return out;
}

}  // namespace sixv
