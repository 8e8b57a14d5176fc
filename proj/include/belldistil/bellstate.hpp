#pragma once

// Bell-diagonal states: single-pair coefficient vectors, their sign
// transform, products across pairs, and descending reordering by local
// relabeling.
//
// Coefficients are indexed by two-bit labels in the order 00, 01, 10, 11;
// the first bit is the phase bit, the second the flip bit, and the 00
// entry is the fidelity.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "belldistil/gf2.hpp"

namespace belldistil {

struct BellDiagonal {
  std::array<double, 4> p;

  explicit BellDiagonal(std::array<double, 4> coeffs) : p(coeffs) {
    double sum = 0.0;
    for (double v : p) {
      if (!(v >= -1e-12) || !(v <= 1.0 + 1e-12))
        throw std::invalid_argument("coefficients must lie in [0, 1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("coefficients must sum to 1");
  }

  BellDiagonal(double p00, double p01, double p10, double p11)
      : BellDiagonal(std::array<double, 4>{p00, p01, p10, p11}) {}

  // Fidelity f on the 00 state, the rest spread evenly.
  static BellDiagonal werner(double f) {
    if (!(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("fidelity must lie in [0, 1]");
    double rest = (1.0 - f) / 3.0;
    return {f, rest, rest, rest};
  }

  double operator[](int label) const { return p.at(static_cast<std::size_t>(label)); }
  double fidelity() const { return p[0]; }

  friend bool operator==(const BellDiagonal& a, const BellDiagonal& b) {
    return a.p == b.p;
  }
};

// Character sums s_v = sum_x (-1)^(<v,x>) p_x; s_00 is 1 for a normalized
// input and the transform is an involution up to a factor 4.
struct SVector {
  std::array<double, 4> s;
  double operator[](int label) const { return s.at(static_cast<std::size_t>(label)); }
};

inline SVector s_of_p(const BellDiagonal& p) {
  return {{p.p[0] + p.p[1] + p.p[2] + p.p[3],
           p.p[0] + p.p[1] - p.p[2] - p.p[3],
           p.p[0] - p.p[1] + p.p[2] - p.p[3],
           p.p[0] - p.p[1] - p.p[2] + p.p[3]}};
}

inline BellDiagonal p_of_s(const SVector& v) {
  return {(v.s[0] + v.s[1] + v.s[2] + v.s[3]) / 4.0,
          (v.s[0] + v.s[1] - v.s[2] - v.s[3]) / 4.0,
          (v.s[0] - v.s[1] + v.s[2] - v.s[3]) / 4.0,
          (v.s[0] - v.s[1] - v.s[2] + v.s[3]) / 4.0};
}

// Product of the per-pair coefficients picked out by x's pair labels.
inline double product_weight(const BellDiagonal& p, const PauliVector& x) {
  double w = 1.0;
  for (int j = 0; j < x.pairs(); ++j) w *= p.p[static_cast<std::size_t>(x.pair_label(j))];
  return w;
}

inline double product_s_weight(const SVector& s, const PauliVector& x) {
  double w = 1.0;
  for (int j = 0; j < x.pairs(); ++j) w *= s.s[static_cast<std::size_t>(x.pair_label(j))];
  return w;
}

// A distribution over joint labels of several pairs, indexed by the label
// bitstring read as a number.
class JointBellState {
 public:
  JointBellState(int pairs, std::vector<double> coeffs)
      : pairs_(pairs), q_(std::move(coeffs)) {
    if (pairs < 1 || pairs > 10) throw std::invalid_argument("pairs must be in [1, 10]");
    if (q_.size() != (std::size_t{1} << (2 * pairs)))
      throw std::invalid_argument("need one coefficient per joint label");
    double sum = 0.0;
    for (double v : q_) {
      if (!(v >= -1e-9)) throw std::invalid_argument("coefficients must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("coefficients must sum to 1");
  }

  static JointBellState product_of(const BellDiagonal& p, int pairs) {
    if (pairs < 1 || pairs > 10) throw std::invalid_argument("pairs must be in [1, 10]");
    std::vector<double> q(std::size_t{1} << (2 * pairs));
    for (std::size_t i = 0; i < q.size(); ++i)
      q[i] = product_weight(p, PauliVector{u128{i}, 2 * pairs});
    return {pairs, std::move(q)};
  }

  int pairs() const { return pairs_; }
  const std::vector<double>& coeffs() const { return q_; }
  double coeff(const PauliVector& label) const {
    if (label.width() != 2 * pairs_) throw std::invalid_argument("label width mismatch");
    return q_[label.index()];
  }
  double fidelity() const { return q_[0]; }

  BellDiagonal to_single() const {
    if (pairs_ != 1) throw std::domain_error("not a single-pair state");
    return {q_[0], q_[1], q_[2], q_[3]};
  }

 private:
  int pairs_;
  std::vector<double> q_;
};

inline double fidelity(const JointBellState& q) { return q.fidelity(); }

inline double shannon_entropy(const JointBellState& q) {
  double h = 0.0;
  for (double v : q.coeffs())
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

inline double shannon_entropy(const BellDiagonal& p) {
  double h = 0.0;
  for (double v : p.p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// Invertible affine relabeling of one pair, label -> A label + b over
// GF(2); realized by local operations, so it permutes coefficients
// without changing what the pair is worth.
struct SinglePairAffineMap {
  std::uint8_t a;  // 2x2 matrix bits row-major: a_zz a_zx a_xz a_xx
  std::uint8_t b;  // shift bits: b_z b_x

  int apply(int label) const {
    int z = (label >> 1) & 1, x = label & 1;
    int z2 = ((((a >> 3) & 1) & z) ^ (((a >> 2) & 1) & x) ^ ((b >> 1) & 1));
    int x2 = ((((a >> 1) & 1) & z) ^ ((a & 1) & x) ^ (b & 1));
    return (z2 << 1) | x2;
  }

  bool is_identity() const { return a == 0b1001 && b == 0; }

  // All 24 maps, ascending by (a, b).
  static const std::vector<SinglePairAffineMap>& all() {
    static const std::vector<SinglePairAffineMap> maps = [] {
      std::vector<SinglePairAffineMap> out;
      for (std::uint8_t a = 0; a < 16; ++a) {
        int det = (((a >> 3) & 1) & (a & 1)) ^ (((a >> 2) & 1) & ((a >> 1) & 1));
        if (!det) continue;
        for (std::uint8_t b = 0; b < 4; ++b) out.push_back({a, b});
      }
      return out;
    }();
    return maps;
  }
};

// Reorders coefficients into descending order and reports the relabeling
// used; the identity map is preferred, then the first fitting map in
// (a, b) order.
inline std::pair<BellDiagonal, SinglePairAffineMap> sort_descending(
    const BellDiagonal& p) {
  std::array<double, 4> target = p.p;
  std::sort(target.begin(), target.end(), std::greater<double>());
  if (p.p == target) return {p, SinglePairAffineMap{0b1001, 0}};
  for (const auto& map : SinglePairAffineMap::all()) {
    std::array<double, 4> q{};
    for (int l = 0; l < 4; ++l) q[static_cast<std::size_t>(map.apply(l))] = p.p[static_cast<std::size_t>(l)];
    if (q == target) return {BellDiagonal(q), map};
  }
  throw std::logic_error("no relabeling sorts the coefficients");
}

}  // namespace belldistil
