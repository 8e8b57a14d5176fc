#pragma once

// Structure of the binary symplectic group: transvections, the full
// enumeration of the two-pair group (720 elements), its identification with
// permutations of six letters, completion of partial symplectic matrices,
// and factorization of group elements into two-pair operations.
//
// Composition convention used throughout: in a matrix product written
// left to right, the rightmost factor acts on a vector first.  The
// factor lists returned by decompose_two_qubit and
// generator_sequence_search follow the same convention.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "belldistil/gf2.hpp"

namespace belldistil {

// x -> x + u <u,x>; an involution for any nonzero u.
inline PauliVector apply_transvection(const PauliVector& u, const PauliVector& x) {
  if (u.is_zero()) throw std::invalid_argument("transvection needs nonzero u");
  return symplectic_inner(u, x) ? (x ^ u) : x;
}

// I + u (Pu)^T as an explicit matrix.
inline SymplecticMatrix transvection_matrix(const PauliVector& u) {
  if (u.is_zero()) throw std::invalid_argument("transvection needs nonzero u");
  int dim = u.width();
  BitMatrix m = BitMatrix::identity(dim);
  u128 swapped = u.pair_swapped().value();
  for (int i = 0; i < dim; ++i)
    if (u.bit(i)) m.set_row(i, m.row(i) ^ PauliVector{swapped, dim});
  return SymplecticMatrix(std::move(m));
}

namespace detail {

inline std::uint16_t pack4(const BitMatrix& m) {
  std::uint16_t key = 0;
  for (int i = 0; i < 4; ++i)
    key = static_cast<std::uint16_t>((key << 4) |
                                     static_cast<std::uint16_t>(m.row(i).value()));
  return key;
}

struct Sp4Data {
  std::vector<SymplecticMatrix> elements;
  std::vector<bool> member = std::vector<bool>(1 << 16, false);
};

// Enumerates all 720 two-pair symplectic matrices by scanning columns in
// ascending value order: 15 choices pair with 8, then 3, then 2.
inline const Sp4Data& sp4_data() {
  static const Sp4Data data = [] {
    Sp4Data d;
    d.elements.reserve(720);
    auto vec = [](u128 v) { return PauliVector{v, 4}; };
    for (u128 a1 = 1; a1 < 16; ++a1)
      for (u128 a2 = 1; a2 < 16; ++a2) {
        if (symplectic_inner(vec(a1), vec(a2)) != 1) continue;
        for (u128 a3 = 1; a3 < 16; ++a3) {
          if (symplectic_inner(vec(a1), vec(a3)) != 0) continue;
          if (symplectic_inner(vec(a2), vec(a3)) != 0) continue;
          for (u128 a4 = 1; a4 < 16; ++a4) {
            if (symplectic_inner(vec(a1), vec(a4)) != 0) continue;
            if (symplectic_inner(vec(a2), vec(a4)) != 0) continue;
            if (symplectic_inner(vec(a3), vec(a4)) != 1) continue;
            BitMatrix m = BitMatrix::from_columns(
                {vec(a1), vec(a2), vec(a3), vec(a4)});
            d.member[pack4(m)] = true;
            d.elements.emplace_back(std::move(m));
          }
        }
      }
    return d;
  }();
  return data;
}

}  // namespace detail

inline const std::vector<SymplecticMatrix>& sp4_group() {
  return detail::sp4_data().elements;
}

inline bool sp4_contains(const BitMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) return false;
  return detail::sp4_data().member[detail::pack4(m)];
}

// First element, in enumeration order, mapping every src to its dst.
inline std::optional<SymplecticMatrix> sp4_find_mapping(
    const std::vector<std::pair<PauliVector, PauliVector>>& constraints) {
  for (const auto& g : sp4_group()) {
    bool ok = true;
    for (const auto& [src, dst] : constraints)
      if (!(g.apply(src) == dst)) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return std::nullopt;
}

// |Sp(2n, 2)| = 2^(n^2) * prod_{i=1..n} (4^i - 1); exact up to n = 7.
inline u128 symplectic_group_order(int n) {
  if (n < 1 || n > 7) throw std::domain_error("group order supported for 1 <= n <= 7");
  u128 order = u128{1} << (n * n);
  for (int i = 1; i <= n; ++i) order *= (u128{1} << (2 * i)) - 1;
  return order;
}

// A transposition of two of the letters 1..6.
struct Transposition {
  int i, j;

  Transposition(int a, int b) : i(a < b ? a : b), j(a < b ? b : a) {
    if (i < 1 || j > 6 || i == j)
      throw std::invalid_argument("transposition letters must be distinct, in 1..6");
  }

  friend bool operator==(const Transposition& a, const Transposition& b) {
    return a.i == b.i && a.j == b.j;
  }

  std::string str() const {
    return "(" + std::to_string(i) + " " + std::to_string(j) + ")";
  }
};

// q p q^-1: relabels p's letters by the swap q.
inline Transposition s6_conjugate(const Transposition& q, const Transposition& p) {
  auto relabel = [&](int x) { return x == q.i ? q.j : x == q.j ? q.i : x; };
  return {relabel(p.i), relabel(p.j)};
}

// The pairing of nonzero two-pair vectors with transpositions of six
// letters; index by vector value minus one.
inline const std::array<Transposition, 15>& s6_gamma_table() {
  static const std::array<Transposition, 15> table = {{
      {5, 6},  // 0001
      {4, 6},  // 0010
      {4, 5},  // 0011
      {2, 3},  // 0100
      {1, 4},  // 0101
      {1, 5},  // 0110
      {1, 6},  // 0111
      {1, 3},  // 1000
      {2, 4},  // 1001
      {2, 5},  // 1010
      {2, 6},  // 1011
      {1, 2},  // 1100
      {3, 4},  // 1101
      {3, 5},  // 1110
      {3, 6},  // 1111
  }};
  return table;
}

inline Transposition s6_gamma(const PauliVector& u) {
  if (u.width() != 4 || u.is_zero())
    throw std::invalid_argument("gamma is defined on nonzero two-pair vectors");
  return s6_gamma_table()[static_cast<std::size_t>(u.value()) - 1];
}

// Checks that a candidate table is a bijection onto the 15 transpositions
// and intertwines transvections with conjugation: for all nonzero u, x,
// table(T_u(x)) == table(u) table(x) table(u)^-1.
inline bool s6_check_table(const std::array<Transposition, 15>& table) {
  for (std::size_t a = 0; a < 15; ++a)
    for (std::size_t b = a + 1; b < 15; ++b)
      if (table[a] == table[b]) return false;
  for (u128 u = 1; u < 16; ++u)
    for (u128 x = 1; x < 16; ++x) {
      PauliVector pu{u, 4}, px{x, 4};
      PauliVector mapped = apply_transvection(pu, px);
      Transposition expect =
          s6_conjugate(table[static_cast<std::size_t>(u) - 1],
                       table[static_cast<std::size_t>(x) - 1]);
      if (!(table[static_cast<std::size_t>(mapped.value()) - 1] == expect))
        return false;
    }
  return true;
}

inline bool s6_verify() { return s6_check_table(s6_gamma_table()); }

// Greedy completion of prescribed rows to a full symplectic matrix.  The
// prescribed rows must satisfy the form's row relations <row_r, row_s> =
// P[r][s]; remaining rows are filled in increasing index order with the
// lexicographically smallest vector that fits.  That scan always succeeds
// for consistent input (partial isometries extend), but it is a linear
// scan over 2^dim candidates, so the dimension is capped.
inline SymplecticMatrix complete_symplectic_rows(
    int dim, const std::vector<std::pair<int, PauliVector>>& prescribed) {
  if (dim < 2 || dim % 2 != 0) throw std::invalid_argument("dim must be even, >= 2");
  if (dim > 24) throw std::length_error("completion scan capped at dim 24");

  std::vector<std::optional<PauliVector>> fixed(dim);
  for (const auto& [r, v] : prescribed) {
    if (r < 0 || r >= dim) throw std::invalid_argument("row index out of range");
    if (v.width() != dim) throw std::invalid_argument("row width mismatch");
    if (fixed[r]) throw std::invalid_argument("duplicate row index");
    fixed[r] = v;
  }
  auto form = [](int r, int s) { return (r ^ 1) == s ? 1 : 0; };
  Subspace span(dim);
  for (const auto& [r, v] : prescribed) {
    for (const auto& [s, w] : prescribed)
      if (r != s && symplectic_inner(v, w) != form(r, s))
        throw std::invalid_argument("prescribed rows violate the form's row relations");
    if (!span.insert(v))
      throw std::invalid_argument("prescribed rows are linearly dependent");
  }

  for (int r = 0; r < dim; ++r) {
    if (fixed[r]) continue;
    bool placed = false;
    for (u128 c = 1; c < (u128{1} << dim) && !placed; ++c) {
      PauliVector v{c, dim};
      if (span.contains(v)) continue;
      bool ok = true;
      for (int s = 0; s < dim && ok; ++s)
        if (fixed[s] && symplectic_inner(v, *fixed[s]) != form(r, s)) ok = false;
      if (!ok) continue;
      fixed[r] = v;
      span.insert(v);
      placed = true;
    }
    if (!placed) throw std::logic_error("symplectic completion scan exhausted");
  }

  std::vector<PauliVector> rows;
  rows.reserve(dim);
  for (int r = 0; r < dim; ++r) rows.push_back(*fixed[r]);
  return SymplecticMatrix(BitMatrix::from_rows(rows));
}

// Places the canonical basis of an isotropic subspace at the given row
// indices and completes the rest greedily.
inline SymplecticMatrix complete_isotropic(const Subspace& s,
                                           const std::vector<int>& row_positions) {
  if (!s.is_isotropic()) throw std::invalid_argument("subspace is not isotropic");
  if (static_cast<int>(row_positions.size()) != s.dim())
    throw std::invalid_argument("need one row position per basis vector");
  std::vector<std::pair<int, PauliVector>> prescribed;
  prescribed.reserve(row_positions.size());
  for (std::size_t i = 0; i < row_positions.size(); ++i)
    prescribed.emplace_back(row_positions[i], s.basis()[i]);
  return complete_symplectic_rows(s.width(), prescribed);
}

// A symplectic operation supported on at most two pairs.  For a one-pair
// system the factor is formal: l is -1 and op4 is blockdiag(M2, I2).
struct TwoQubitOp {
  int pairs;
  int k, l;
  SymplecticMatrix op4;

  // The operation as an element of the full 2n-dimensional group; for the
  // formal one-pair case this is the 2x2 block itself.
  SymplecticMatrix embedded() const {
    if (l < 0) {
      BitMatrix m(2, 2);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m.set_bit(r, c, op4.matrix().bit(r, c));
      return SymplecticMatrix(std::move(m));
    }
    BitMatrix m = BitMatrix::identity(2 * pairs);
    std::array<int, 4> at = {2 * k, 2 * k + 1, 2 * l, 2 * l + 1};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m.set_bit(at[r], at[c], op4.matrix().bit(r, c));
    return SymplecticMatrix(std::move(m));
  }
};

namespace detail {

inline int column_block(const BitMatrix& m, int col, int pair) {
  return (m.bit(2 * pair, col) ? 2 : 0) | (m.bit(2 * pair + 1, col) ? 1 : 0);
}

inline PauliVector restrict_column(const BitMatrix& m, int col, int k, int l) {
  return {u128((column_block(m, col, k) << 2) | column_block(m, col, l)), 4};
}

inline SymplecticMatrix sp4_map_or_throw(
    const std::vector<std::pair<PauliVector, PauliVector>>& constraints) {
  auto g = sp4_find_mapping(constraints);
  if (!g) throw std::logic_error("no two-pair element satisfies the constraints");
  return *g;
}

}  // namespace detail

// Factors a symplectic matrix into operations on at most two pairs:
// the returned list satisfies op[0] * op[1] * ... * op[t-1] == A as
// embedded matrices.  Columns are cleared pair by pair; each elimination
// step merges the support of the working column two pairs at a time.
inline std::vector<TwoQubitOp> decompose_two_qubit(const SymplecticMatrix& a) {
  const int dim = a.dim();
  const int pairs = dim / 2;
  const PauliVector e1{u128{8}, 4}, e2{u128{4}, 4};

  if (pairs == 1) {
    if (a == SymplecticMatrix::identity(2)) return {};
    BitMatrix m4 = BitMatrix::identity(4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m4.set_bit(r, c, a.matrix().bit(r, c));
    return {TwoQubitOp{1, 0, -1, SymplecticMatrix(std::move(m4))}};
  }

  BitMatrix m = a.matrix();
  std::vector<TwoQubitOp> ops;
  auto eliminate = [&](const SymplecticMatrix& g, int k, int l) {
    TwoQubitOp step{pairs, k, l, g};
    m = step.embedded().matrix() * m;
    ops.push_back(TwoQubitOp{pairs, k, l, g.inverse()});
  };

  for (int j = 0; j + 1 < pairs; ++j) {
    for (;;) {
      std::vector<int> supp;
      for (int p = j; p < pairs; ++p)
        if (detail::column_block(m, 2 * j, p) != 0) supp.push_back(p);
      if (supp.empty())
        throw std::logic_error("working column lost its support");
      if (supp.size() == 1 && supp[0] == j &&
          detail::column_block(m, 2 * j, j) == 2)
        break;
      int k, l;
      if (supp.size() >= 2) {
        k = supp[0];
        l = supp[1];
      } else if (supp[0] == j) {
        k = j;
        l = j + 1;
      } else {
        k = j;
        l = supp[0];
      }
      auto v = detail::restrict_column(m, 2 * j, k, l);
      eliminate(detail::sp4_map_or_throw({{v, e1}}), k, l);
    }
    for (;;) {
      std::vector<int> supp;
      for (int p = j + 1; p < pairs; ++p)
        if (detail::column_block(m, 2 * j + 1, p) != 0) supp.push_back(p);
      if (supp.empty() && detail::column_block(m, 2 * j + 1, j) == 1) break;
      int l = supp.empty() ? j + 1 : supp[0];
      auto k2 = detail::restrict_column(m, 2 * j + 1, j, l);
      eliminate(detail::sp4_map_or_throw({{e1, e1}, {k2, e2}}), j, l);
    }
  }

  int last = pairs - 1;
  BitMatrix m2(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m2.set_bit(r, c, m.bit(2 * last + r, 2 * last + c));
  if (!(m2 == BitMatrix::identity(2))) {
    SymplecticMatrix tail(std::move(m2));
    BitMatrix g4 = BitMatrix::identity(4);
    auto inv = tail.inverse();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) g4.set_bit(2 + r, 2 + c, inv.matrix().bit(r, c));
    eliminate(SymplecticMatrix(std::move(g4)), pairs - 2, last);
  }

  if (!(m == BitMatrix::identity(dim)))
    throw std::logic_error("two-pair elimination did not reach the identity");
  return ops;
}

// Transvection factors of the controlled-not action, leftmost first; the
// rightmost factor acts on a vector first.
inline const std::array<PauliVector, 3>& cnot_transvection_factors() {
  static const std::array<PauliVector, 3> factors = {
      PauliVector::from_string("1000"),
      PauliVector::from_string("1001"),
      PauliVector::from_string("0001"),
  };
  return factors;
}

// Action of controlled-not (first pair controls) on phase-space labels,
// verified against its transvection factorization.
inline const SymplecticMatrix& cnot_symplectic() {
  static const SymplecticMatrix m = [] {
    SymplecticMatrix explicit_form(BitMatrix::parse("1010\n0100\n0010\n0101"));
    SymplecticMatrix composed = SymplecticMatrix::identity(4);
    for (const auto& u : cnot_transvection_factors())
      composed = composed * transvection_matrix(u);
    if (!(composed == explicit_form))
      throw std::logic_error("controlled-not factorization mismatch");
    return explicit_form;
  }();
  return m;
}

namespace detail {

inline std::string matrix_key(const std::vector<u128>& rows, int dim) {
  const int bytes = (dim + 7) / 8;
  std::string key;
  key.reserve(rows.size() * static_cast<std::size_t>(bytes));
  for (u128 r : rows)
    for (int b = 0; b < bytes; ++b)
      key.push_back(static_cast<char>(static_cast<unsigned char>(r >> (8 * b))));
  return key;
}

}  // namespace detail

// Product of `factors` transvections drawn from the engine; a cheap source
// of arbitrary group elements.
inline SymplecticMatrix random_symplectic(std::mt19937_64& rng, int pairs,
                                          int factors) {
  int dim = 2 * pairs;
  u128 mask = dim == kMaxWidth ? ~u128{0} : (u128{1} << dim) - 1;
  SymplecticMatrix m = SymplecticMatrix::identity(dim);
  for (int t = 0; t < factors; ++t) {
    u128 v = 0;
    while (v == 0) v = ((u128{rng()} << 64) | rng()) & mask;
    m = m * transvection_matrix(PauliVector{v, dim});
  }
  return m;
}

// Breadth-first search for the shortest factorization of A into
// transvections whose vectors touch at most two pairs.  Generators are
// tried in ascending vector order, so the first sequence found is the
// lexicographically smallest among the shortest.  Returns nullopt when no
// factorization of length <= max_len exists.
inline std::optional<std::vector<PauliVector>> generator_sequence_search(
    const SymplecticMatrix& a, int max_len) {
  const int dim = a.dim();
  const int pairs = dim / 2;
  if (max_len < 0) throw std::invalid_argument("max_len must be nonnegative");

  std::vector<u128> target(dim);
  for (int i = 0; i < dim; ++i) target[i] = a.row(i).value();
  std::vector<u128> ident(dim);
  for (int i = 0; i < dim; ++i) ident[i] = u128{1} << (dim - 1 - i);
  if (target == ident) return std::vector<PauliVector>{};

  std::vector<u128> gens;
  for (int p = 0; p < pairs; ++p)
    for (u128 b = 1; b < 4; ++b) gens.push_back(b << (dim - 2 - 2 * p));
  for (int p = 0; p < pairs; ++p)
    for (int q = p + 1; q < pairs; ++q)
      for (u128 bp = 1; bp < 4; ++bp)
        for (u128 bq = 1; bq < 4; ++bq)
          gens.push_back((bp << (dim - 2 - 2 * p)) | (bq << (dim - 2 - 2 * q)));
  std::sort(gens.begin(), gens.end());

  struct Node {
    std::vector<u128> rows;
    std::int64_t parent;
    int gen;
  };
  std::vector<Node> arena;
  arena.push_back({ident, -1, -1});
  std::unordered_set<std::string> seen;
  seen.insert(detail::matrix_key(ident, dim));

  auto sequence_of = [&](std::int64_t node, u128 final_gen) {
    std::vector<PauliVector> seq;
    seq.emplace_back(final_gen, dim);
    while (node > 0) {
      seq.emplace_back(gens[static_cast<std::size_t>(arena[node].gen)], dim);
      node = arena[node].parent;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  std::size_t level_begin = 0, level_end = arena.size();
  for (int depth = 1; depth <= max_len; ++depth) {
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (std::size_t g = 0; g < gens.size(); ++g) {
        u128 u = gens[g];
        u128 swapped = pair_swapped_bits(u);
        std::vector<u128> child = arena[i].rows;
        for (auto& row : child)
          if (parity128(row & u)) row ^= swapped;
        if (child == target)
          return sequence_of(static_cast<std::int64_t>(i), u);
        if (depth < max_len &&
            seen.insert(detail::matrix_key(child, dim)).second)
          arena.push_back({std::move(child), static_cast<std::int64_t>(i),
                           static_cast<int>(g)});
      }
    }
    level_begin = level_end;
    level_end = arena.size();
    if (level_begin == level_end) break;
  }
  return std::nullopt;
}

}  // namespace belldistil
