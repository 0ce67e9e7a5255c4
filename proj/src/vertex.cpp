#include "sixv/vertex.hpp"

#include <bit>
#include <stdexcept>

namespace sixv {

namespace {

// Digit k lives in word (k-1)/64 at bit 63 - (k-1)%64, so lexicographic
// digit order equals MSB-first integer order on the words.
inline std::size_t word_of(std::int64_t k) { return static_cast<std::size_t>((k - 1) >> 6); }
inline int bit_of(std::int64_t k) { return 63 - static_cast<int>((k - 1) & 63); }

}  // namespace

std::string label_text(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::PositiveMove: return "E+";
    case EdgeLabel::NegativeMove: return "E-";
    case EdgeLabel::PositiveLoop: return "L+";
    case EdgeLabel::NegativeLoop: return "L-";
  }
  throw std::logic_error("label_text: bad label");
}

EdgeLabel label_from_text(std::string_view s) {
  if (s == "E+") return EdgeLabel::PositiveMove;
  if (s == "E-") return EdgeLabel::NegativeMove;
  if (s == "L+") return EdgeLabel::PositiveLoop;
  if (s == "L-") return EdgeLabel::NegativeLoop;
  throw std::invalid_argument("label_from_text: expected E+/E-/L+/L-, got '" + std::string(s) + "'");
}

Vertex::Vertex(std::int64_t k) : k_(k) {
  if (k < 1) throw std::invalid_argument("Vertex: K must be >= 1");
  bits_.assign(static_cast<std::size_t>((k + 63) / 64), 0);
}

Vertex Vertex::from_string(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("Vertex: empty digit string");
  Vertex v(static_cast<std::int64_t>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '+') {
      v.bits_[word_of(static_cast<std::int64_t>(i) + 1)] |=
          std::uint64_t{1} << bit_of(static_cast<std::int64_t>(i) + 1);
    } else if (c != '-') {
      throw std::invalid_argument("Vertex: digit characters must be '+' or '-'");
    }
  }
  return v;
}

int Vertex::digit(std::int64_t k) const {
  if (k < 1 || k > k_) throw std::out_of_range("Vertex::digit: index out of range");
  return (bits_[word_of(k)] >> bit_of(k)) & 1 ? 1 : -1;
}

void Vertex::set_digit(std::int64_t k, int value) {
  if (k < 1 || k > k_) throw std::out_of_range("Vertex::set_digit: index out of range");
  if (value != 1 && value != -1) throw std::invalid_argument("Vertex::set_digit: value must be +-1");
  std::uint64_t mask = std::uint64_t{1} << bit_of(k);
  if (value == 1) {
    bits_[word_of(k)] |= mask;
  } else {
    bits_[word_of(k)] &= ~mask;
  }
}

void Vertex::flip_digit(std::int64_t k) {
  if (k < 1 || k > k_) throw std::out_of_range("Vertex::flip_digit: index out of range");
  bits_[word_of(k)] ^= std::uint64_t{1} << bit_of(k);
}

Vertex Vertex::negated() const {
  Vertex out(k_);
  for (std::size_t w = 0; w < bits_.size(); ++w) out.bits_[w] = ~bits_[w];
  // clear padding past digit K
  int used = static_cast<int>(((k_ - 1) & 63) + 1);
  if (used < 64) out.bits_.back() &= ~std::uint64_t{0} << (64 - used);
  return out;
}

std::string Vertex::to_string() const {
  std::string s(static_cast<std::size_t>(k_), '-');
  for (std::int64_t k = 1; k <= k_; ++k) {
    if (((bits_[word_of(k)] >> bit_of(k)) & 1) != 0) s[static_cast<std::size_t>(k - 1)] = '+';
  }
  return s;
}

std::uint64_t Vertex::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(k_);
  for (std::uint64_t w : bits_) {
    h ^= w;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool Vertex::operator<(const Vertex& o) const {
  if (k_ != o.k_) return k_ < o.k_;
  return bits_ < o.bits_;  // MSB-first packing makes this lexicographic
}

std::vector<int> BlockDecomposition::signs() const {
  std::vector<int> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = (i % 2 == 0) ? first_sign : -first_sign;
  return out;
}

Vertex BlockDecomposition::reconstruct() const {
  Vertex v(s.back());
  int sgn = first_sign;
  for (std::size_t b = 0; b < m.size(); ++b) {
    if (sgn == 1) {
      for (std::int64_t k = s[b] + 1; k <= s[b + 1]; ++k) v.set_digit(k, 1);
    }
    sgn = -sgn;
  }
  return v;
}

void block_decomposition_into(const Vertex& a, std::vector<std::int64_t>& m,
                              std::vector<std::int64_t>& s, int& first_sign) {
  m.clear();
  s.clear();
  s.push_back(0);
  first_sign = a.digit(1);
  int current = first_sign;
  std::int64_t run = 0;
  for (std::int64_t k = 1; k <= a.size(); ++k) {
    int d = a.digit(k);
    if (d == current) {
      ++run;
    } else {
      m.push_back(run);
      s.push_back(s.back() + run);
      current = d;
      run = 1;
    }
  }
  m.push_back(run);
  s.push_back(s.back() + run);
}

BlockDecomposition block_decomposition(const Vertex& a) {
  BlockDecomposition bd;
  block_decomposition_into(a, bd.m, bd.s, bd.first_sign);
  return bd;
}

std::optional<EdgeLabel> classify_move(const Vertex& a, const Vertex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("classify_move: dimension mismatch");
  if (a == b)
    throw std::invalid_argument("classify_move: a == b (loop signs are never inferred)");

  // b_k - a_k = -2 a_k at every differing k, so the diff signs alternate
  // exactly when a's digits at the differing positions alternate.
  int first = 0;
  int prev = 0;
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (std::size_t w = 0; w < wa.size(); ++w) {
    std::uint64_t diff = wa[w] ^ wb[w];
    while (diff != 0) {
      int lead = std::countl_zero(diff);
      diff &= ~(std::uint64_t{1} << (63 - lead));
      int ad = (wa[w] >> (63 - lead)) & 1 ? 1 : -1;
      if (first == 0) {
        first = ad;
      } else if (ad == prev) {
        return std::nullopt;
      }
      prev = ad;
    }
  }
  return first == 1 ? EdgeLabel::PositiveMove : EdgeLabel::NegativeMove;
}

bool ChangePattern::any_change() const {
  for (auto e : eps)
    if (e) return true;
  return false;
}

void validate_pattern(const ChangePattern& p, const BlockDecomposition& bd) {
  auto n = static_cast<std::size_t>(bd.count());
  if (p.eps.size() != n)
    throw std::invalid_argument("pattern: eps length does not match block count");
  if (p.pos.size() != n)
    throw std::invalid_argument("pattern: pos length does not match block count");
  std::int64_t last = -1;
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.eps[i] > 1) throw std::invalid_argument("pattern: eps entries must be 0 or 1");
    if (!p.eps[i]) continue;
    any = true;
    auto block = static_cast<std::int64_t>(i) + 1;
    if (last >= 0 && (block - last) % 2 == 0)
      throw std::invalid_argument("pattern: flips in blocks with an even index gap");
    if (p.pos[i] < 1 || p.pos[i] > bd.m[i])
      throw std::invalid_argument("pattern: flip position outside the block");
    last = block;
  }
  if (any && p.loop_sign)
    throw std::invalid_argument("pattern: loop_sign set on a non-loop pattern");
  if (!any) {
    if (!p.loop_sign) throw std::invalid_argument("pattern: all-zero pattern needs a loop sign");
    if (*p.loop_sign != 1 && *p.loop_sign != -1)
      throw std::invalid_argument("pattern: loop sign must be +-1");
  }
}

std::pair<Vertex, EdgeLabel> apply_pattern(const Vertex& a, const ChangePattern& p) {
  BlockDecomposition bd = block_decomposition(a);
  validate_pattern(p, bd);
  if (!p.any_change()) {
    return {a, *p.loop_sign == 1 ? EdgeLabel::PositiveLoop : EdgeLabel::NegativeLoop};
  }
  Vertex b = a;
  int first_block_sign = 0;
  for (std::size_t i = 0; i < p.eps.size(); ++i) {
    if (!p.eps[i]) continue;
    if (first_block_sign == 0) first_block_sign = bd.sign(static_cast<std::int64_t>(i) + 1);
    b.flip_digit(bd.s[i] + p.pos[i]);
  }
  // flipping a +1 block first makes the first diff coordinate -2
  EdgeLabel label = first_block_sign == 1 ? EdgeLabel::PositiveMove : EdgeLabel::NegativeMove;
  return {b, label};
}

}  // namespace sixv
