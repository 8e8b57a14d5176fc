#pragma once

// Exact linear algebra over GF(2) for phase-space vectors of Bell-pair
// products.
//
// A product of n Bell pairs is labelled by a bitstring of width 2n.  Pair j
// (0-indexed) owns text positions 2j (phase bit) and 2j+1 (flip bit), where
// position 0 is the leftmost character of the textual form.  Vectors are
// stored as unsigned 128-bit integers holding the bitstring read as a
// big-endian binary number, so position i corresponds to integer bit
// width-1-i and lexicographic order on bitstrings is numeric order on
// values.
//
// The symplectic form is the block-diagonal pair swap P: inner products are
// computed as <v,w> = parity(v & pairswap(w)), and multiplying by P swaps
// the two bits of every pair.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace belldistil {

using u128 = unsigned __int128;

inline constexpr int kMaxWidth = 128;

constexpr u128 u128_halves(std::uint64_t hi, std::uint64_t lo) {
  return (u128{hi} << 64) | lo;
}

// Phase bits sit at odd integer offsets, flip bits at even offsets, for
// every even width.
inline constexpr u128 kOddOffsetBits =
    u128_halves(0xAAAA'AAAA'AAAA'AAAAull, 0xAAAA'AAAA'AAAA'AAAAull);
inline constexpr u128 kEvenOffsetBits =
    u128_halves(0x5555'5555'5555'5555ull, 0x5555'5555'5555'5555ull);

constexpr int popcount128(u128 v) {
  return std::popcount(static_cast<std::uint64_t>(v)) +
         std::popcount(static_cast<std::uint64_t>(v >> 64));
}

constexpr bool parity128(u128 v) { return popcount128(v) & 1; }

// Index of the highest set bit; v must be nonzero.
constexpr int top_bit128(u128 v) {
  auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi) return 127 - std::countl_zero(hi);
  return 63 - std::countl_zero(static_cast<std::uint64_t>(v));
}

// Multiplication by the symplectic form: swap the two bits of every pair.
constexpr u128 pair_swapped_bits(u128 v) {
  return ((v & kOddOffsetBits) >> 1) | ((v & kEvenOffsetBits) << 1);
}

// A phase-space vector: 2n bits, n >= 1 pairs.
class PauliVector {
 public:
  PauliVector(u128 value, int width) : value_(value), width_(width) {
    if (width < 2 || width > kMaxWidth || width % 2 != 0)
      throw std::invalid_argument("PauliVector width must be even, in [2, 128]");
    if (width < kMaxWidth && (value >> width) != 0)
      throw std::invalid_argument("PauliVector value exceeds width");
  }

  static PauliVector zero(int width) { return {u128{0}, width}; }

  // Unit vector with a single 1 at text position pos (0-indexed from the
  // left).
  static PauliVector unit(int width, int pos) {
    PauliVector v = zero(width);
    v.set_bit(pos, true);
    return v;
  }

  // Parses a bitstring such as "10111110".
  static PauliVector from_string(std::string_view bits) {
    u128 value = 0;
    int width = 0;
    for (char c : bits) {
      if (c == '0' || c == '1') {
        if (width == kMaxWidth)
          throw std::invalid_argument("bitstring longer than 128 bits");
        value = (value << 1) | u128(c == '1');
        ++width;
      } else if (c != ' ') {
        throw std::invalid_argument("bitstring may contain only 0, 1, space");
      }
    }
    return {value, width};
  }

  int width() const { return width_; }
  int pairs() const { return width_ / 2; }
  u128 value() const { return value_; }

  // Value as uint64, for use as an array index; requires width <= 64.
  std::uint64_t index() const {
    if (width_ > 64) throw std::domain_error("vector too wide for index()");
    return static_cast<std::uint64_t>(value_);
  }

  bool is_zero() const { return value_ == 0; }

  bool bit(int pos) const {
    check_pos(pos);
    return (value_ >> (width_ - 1 - pos)) & 1;
  }

  void set_bit(int pos, bool b) {
    check_pos(pos);
    u128 mask = u128{1} << (width_ - 1 - pos);
    value_ = b ? (value_ | mask) : (value_ & ~mask);
  }

  // Two-bit label of pair j: phase bit high, flip bit low; 0..3 in the
  // order 00, 01, 10, 11.
  int pair_label(int j) const {
    if (j < 0 || 2 * j >= width_) throw std::out_of_range("pair index");
    return static_cast<int>((value_ >> (width_ - 2 - 2 * j)) & 3);
  }

  // Text position of the leading 1; vector must be nonzero.
  int leading_position() const {
    if (value_ == 0) throw std::domain_error("zero vector has no leading 1");
    return width_ - 1 - top_bit128(value_);
  }

  // P * v.
  PauliVector pair_swapped() const {
    return {pair_swapped_bits(value_), width_};
  }

  friend PauliVector operator^(const PauliVector& a, const PauliVector& b) {
    if (a.width_ != b.width_) throw std::invalid_argument("width mismatch");
    return {a.value_ ^ b.value_, a.width_};
  }
  PauliVector& operator^=(const PauliVector& o) { return *this = *this ^ o; }

  friend bool operator==(const PauliVector& a, const PauliVector& b) {
    return a.width_ == b.width_ && a.value_ == b.value_;
  }
  friend bool operator<(const PauliVector& a, const PauliVector& b) {
    if (a.width_ != b.width_) return a.width_ < b.width_;
    return a.value_ < b.value_;
  }

  std::string str() const {
    std::string s(width_, '0');
    for (int i = 0; i < width_; ++i)
      if (bit(i)) s[i] = '1';
    return s;
  }

 private:
  void check_pos(int pos) const {
    if (pos < 0 || pos >= width_) throw std::out_of_range("bit position");
  }

  u128 value_;
  int width_;
};

// <v,w> with respect to the pair-swap form.
inline int symplectic_inner(const PauliVector& v, const PauliVector& w) {
  if (v.width() != w.width()) throw std::invalid_argument("width mismatch");
  return parity128(v.value() & pair_swapped_bits(w.value())) ? 1 : 0;
}

// Square bit matrix with even dimension; rows stored as packed bit rows.
class BitMatrix {
 public:
  BitMatrix(int rows, int cols) : rows_(rows, u128{0}), cols_(cols) {
    if (rows < 1 || cols < 2 || cols > kMaxWidth || cols % 2 != 0)
      throw std::invalid_argument("BitMatrix needs rows >= 1 and even cols in [2, 128]");
  }

  static BitMatrix identity(int dim) {
    BitMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m.set_bit(i, i, true);
    return m;
  }

  // The symplectic form P: block diagonal pair swaps.
  static BitMatrix symplectic_form(int dim) {
    BitMatrix m(dim, dim);
    for (int j = 0; 2 * j < dim; ++j) {
      m.set_bit(2 * j, 2 * j + 1, true);
      m.set_bit(2 * j + 1, 2 * j, true);
    }
    return m;
  }

  static BitMatrix from_rows(const std::vector<PauliVector>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows");
    BitMatrix m(static_cast<int>(rows.size()), rows[0].width());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].width() != m.cols_) throw std::invalid_argument("ragged rows");
      m.rows_[i] = rows[i].value();
    }
    return m;
  }

  static BitMatrix from_columns(const std::vector<PauliVector>& cols) {
    if (cols.empty()) throw std::invalid_argument("no columns");
    BitMatrix m(cols[0].width(), static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].width() != m.rows()) throw std::invalid_argument("ragged columns");
      for (int i = 0; i < m.rows(); ++i)
        m.set_bit(i, static_cast<int>(j), cols[j].bit(i));
    }
    return m;
  }

  // Parses one row bitstring per line; blank lines are skipped.
  static BitMatrix parse(std::string_view text) {
    std::vector<PauliVector> rows;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.remove_suffix(1);
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      if (!line.empty()) rows.push_back(PauliVector::from_string(line));
      start = end + 1;
    }
    return from_rows(rows);
  }

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }

  bool bit(int r, int c) const {
    check(r, c);
    return (rows_[r] >> (cols_ - 1 - c)) & 1;
  }

  void set_bit(int r, int c, bool b) {
    check(r, c);
    u128 mask = u128{1} << (cols_ - 1 - c);
    rows_[r] = b ? (rows_[r] | mask) : (rows_[r] & ~mask);
  }

  PauliVector row(int r) const {
    if (r < 0 || r >= rows()) throw std::out_of_range("row index");
    return {rows_[r], cols_};
  }

  void set_row(int r, const PauliVector& v) {
    if (r < 0 || r >= rows()) throw std::out_of_range("row index");
    if (v.width() != cols_) throw std::invalid_argument("width mismatch");
    rows_[r] = v.value();
  }

  PauliVector column(int c) const {
    if (c < 0 || c >= cols_) throw std::out_of_range("column index");
    PauliVector v = PauliVector::zero(rows());
    for (int i = 0; i < rows(); ++i) v.set_bit(i, bit(i, c));
    return v;
  }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows());
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols_; ++j)
        if (bit(i, j)) t.set_bit(j, i, true);
    return t;
  }

  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols_ != b.rows()) throw std::invalid_argument("shape mismatch");
    BitMatrix c(a.rows(), b.cols_);
    for (int i = 0; i < a.rows(); ++i) {
      u128 acc = 0;
      u128 arow = a.rows_[i];
      for (int k = a.cols_ - 1; k >= 0 && arow; --k, arow >>= 1)
        if (arow & 1) acc ^= b.rows_[k];
      c.rows_[i] = acc;
    }
    return c;
  }

  friend PauliVector operator*(const BitMatrix& a, const PauliVector& v) {
    if (a.cols_ != v.width()) throw std::invalid_argument("width mismatch");
    PauliVector out = PauliVector::zero(a.rows());
    for (int i = 0; i < a.rows(); ++i)
      if (parity128(a.rows_[i] & v.value())) out.set_bit(i, true);
    return out;
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < rows(); ++i) {
      if (i) s += '\n';
      s += row(i).str();
    }
    return s;
  }

 private:
  void check(int r, int c) const {
    if (r < 0 || r >= rows() || c < 0 || c >= cols_)
      throw std::out_of_range("matrix index");
  }

  std::vector<u128> rows_;
  int cols_;
};

inline bool is_symplectic(const BitMatrix& a) {
  if (a.rows() != a.cols()) return false;
  BitMatrix p = BitMatrix::symplectic_form(a.cols());
  return a.transposed() * p * a == p;
}

// A validated element of the symplectic group over GF(2).
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(BitMatrix m) : m_(std::move(m)) {
    if (!is_symplectic(m_))
      throw std::invalid_argument("matrix does not preserve the symplectic form");
  }

  static SymplecticMatrix identity(int dim) {
    return SymplecticMatrix(BitMatrix::identity(dim));
  }

  const BitMatrix& matrix() const { return m_; }
  int dim() const { return m_.cols(); }
  int pairs() const { return m_.cols() / 2; }
  PauliVector row(int r) const { return m_.row(r); }

  // A^-1 = P A^T P.
  SymplecticMatrix inverse() const {
    BitMatrix p = BitMatrix::symplectic_form(dim());
    return SymplecticMatrix(p * m_.transposed() * p);
  }

  PauliVector apply(const PauliVector& v) const { return m_ * v; }

  friend SymplecticMatrix operator*(const SymplecticMatrix& a,
                                    const SymplecticMatrix& b) {
    return SymplecticMatrix(a.m_ * b.m_);
  }

  friend bool operator==(const SymplecticMatrix& a, const SymplecticMatrix& b) {
    return a.m_ == b.m_;
  }

  std::string str() const { return m_.str(); }

 private:
  BitMatrix m_;
};

// A GF(2) subspace held in reduced row echelon form: pivot positions
// strictly increase and every pivot column is clear in the other rows, so
// equal subspaces compare equal row by row.
class Subspace {
 public:
  explicit Subspace(int width) : width_(width) {
    if (width < 2 || width > kMaxWidth || width % 2 != 0)
      throw std::invalid_argument("Subspace width must be even, in [2, 128]");
  }

  static Subspace span(const std::vector<PauliVector>& vectors, int width) {
    Subspace s(width);
    for (const auto& v : vectors) s.insert(v);
    return s;
  }

  // Accepts a basis that is already in reduced row echelon form.
  static Subspace from_rref(const std::vector<PauliVector>& basis, int width) {
    Subspace s = span(basis, width);
    if (s.basis_ != basis)
      throw std::invalid_argument("basis is not in reduced row echelon form");
    return s;
  }

  int width() const { return width_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<PauliVector>& basis() const { return basis_; }

  // Remainder of v after elimination by the basis; zero iff v is a member.
  PauliVector reduce(PauliVector v) const {
    if (v.width() != width_) throw std::invalid_argument("width mismatch");
    for (const auto& b : basis_)
      if (v.bit(b.leading_position())) v ^= b;
    return v;
  }

  bool contains(const PauliVector& v) const { return reduce(v).is_zero(); }

  // Grows the span by v; returns false if v was already a member.
  bool insert(const PauliVector& v) {
    PauliVector r = reduce(v);
    if (r.is_zero()) return false;
    int pivot = r.leading_position();
    for (auto& b : basis_)
      if (b.bit(pivot)) b ^= r;
    auto it = std::upper_bound(
        basis_.begin(), basis_.end(), pivot,
        [](int p, const PauliVector& b) { return p < b.leading_position(); });
    basis_.insert(it, r);
    return true;
  }

  // All pairwise inner products vanish.
  bool is_isotropic() const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t j = i + 1; j < basis_.size(); ++j)
        if (symplectic_inner(basis_[i], basis_[j])) return false;
    return true;
  }

  // The 2^dim elements of S + shift, in subset-mask order over the basis.
  std::vector<PauliVector> coset(const PauliVector& shift) const {
    if (shift.width() != width_) throw std::invalid_argument("width mismatch");
    if (dim() > 24) throw std::length_error("coset too large to enumerate");
    std::vector<PauliVector> out;
    out.reserve(std::size_t{1} << dim());
    out.push_back(shift);
    for (const auto& b : basis_) {
      std::size_t n = out.size();
      for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] ^ b);
    }
    return out;
  }

  std::vector<PauliVector> elements() const {
    return coset(PauliVector::zero(width_));
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.width_ == b.width_ && a.basis_ == b.basis_;
  }

 private:
  std::vector<PauliVector> basis_;
  int width_;
};

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s += static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline Subspace rref(const std::vector<PauliVector>& vectors, int width) {
  return Subspace::span(vectors, width);
}

inline Subspace rref(const std::vector<PauliVector>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("cannot infer width");
  return Subspace::span(vectors, vectors[0].width());
}

}  // namespace belldistil
