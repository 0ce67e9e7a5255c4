#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sixv {

// Edge classification. A non-loop step is positive when the first changed
// coordinate of (b-a) is -2, negative when it is +2. Loops carry an explicit
// sign: (a,a)+ and (a,a)- are distinct edges.
enum class EdgeLabel : std::uint8_t {
  PositiveMove,
  NegativeMove,
  PositiveLoop,
  NegativeLoop,
};

inline bool is_loop(EdgeLabel l) {
  return l == EdgeLabel::PositiveLoop || l == EdgeLabel::NegativeLoop;
}

// Step of the first coupled walk: +1 on positive edges and loops, -1
// otherwise. For non-loop edges this is the only increment compatible with
// the unit-gap shape constraint once the changed coordinates are fixed.
inline int base_increment(EdgeLabel l) {
  return (l == EdgeLabel::PositiveMove || l == EdgeLabel::PositiveLoop) ? 1 : -1;
}

// Text codec: "E+", "E-", "L+", "L-".
std::string label_text(EdgeLabel l);
EdgeLabel label_from_text(std::string_view s);

// Element of {-1,+1}^K, bit-packed MSB-first (set bit = +1) so that
// word-wise comparison orders vertices lexicographically by digit. Digits
// are indexed 1..K, matching the leftmost-first text form over {'+','-'}.
class Vertex {
 public:
  explicit Vertex(std::int64_t k);  // all digits -1
  static Vertex from_string(std::string_view s);

  std::int64_t size() const { return k_; }
  int digit(std::int64_t k) const;            // 1-based, returns -1 or +1
  void set_digit(std::int64_t k, int value);  // value must be -1 or +1
  void flip_digit(std::int64_t k);
  Vertex negated() const;

  std::string to_string() const;
  std::uint64_t hash() const;

  bool operator==(const Vertex& o) const { return k_ == o.k_ && bits_ == o.bits_; }
  bool operator!=(const Vertex& o) const { return !(*this == o); }
  bool operator<(const Vertex& o) const;  // K first, then lexicographic

  const std::vector<std::uint64_t>& words() const { return bits_; }

 private:
  std::int64_t k_;
  std::vector<std::uint64_t> bits_;
};

// Constancy blocks of a vertex: lengths m[0..N-1] (= M_1..M_N), cumulative
// boundaries s[0..N] with s[0]=0 and s[N]=K, and alternating signs starting
// from the first digit.
struct BlockDecomposition {
  std::vector<std::int64_t> m;
  std::vector<std::int64_t> s;
  int first_sign = 1;

  std::int64_t count() const { return static_cast<std::int64_t>(m.size()); }
  std::int64_t length(std::int64_t block) const { return m[block - 1]; }
  std::int64_t boundary(std::int64_t idx) const { return s[idx]; }
  // i_m = i_1 * (-1)^(m-1)
  int sign(std::int64_t block) const { return (block % 2 == 1) ? first_sign : -first_sign; }
  std::vector<int> signs() const;
  Vertex reconstruct() const;
};

BlockDecomposition block_decomposition(const Vertex& a);

// Allocation-free variant for hot loops; fills the caller's scratch.
void block_decomposition_into(const Vertex& a, std::vector<std::int64_t>& m,
                              std::vector<std::int64_t>& s, int& first_sign);

// Adjacency test: returns the move label iff (b-a) has nonvanishing
// coordinates of alternating sign (PositiveMove when the first is -2).
// Throws on K mismatch and on a==b: loop signs are extra information that
// cannot be recovered from the endpoints.
std::optional<EdgeLabel> classify_move(const Vertex& a, const Vertex& b);

// Which digit flips in which block: eps[m-1]=1 means one flip in block m at
// in-block position pos[m-1] (1..M_m). loop_sign is set exactly when no
// block flips. Consecutive flipped blocks must be an odd index gap apart.
struct ChangePattern {
  std::vector<std::uint8_t> eps;
  std::vector<std::int64_t> pos;
  std::optional<int> loop_sign;

  bool any_change() const;
};

// Throws std::invalid_argument when p violates the pattern invariants
// against this decomposition.
void validate_pattern(const ChangePattern& p, const BlockDecomposition& bd);

// Applies a valid pattern to a, returning the target vertex and the edge
// label (the loop with p.loop_sign when the pattern is all-zero).
std::pair<Vertex, EdgeLabel> apply_pattern(const Vertex& a, const ChangePattern& p);

}  // namespace sixv

template <>
struct std::hash<sixv::Vertex> {
  std::size_t operator()(const sixv::Vertex& v) const noexcept {
    return static_cast<std::size_t>(v.hash());
  }
};
