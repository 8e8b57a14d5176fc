#pragma once

// Dense complex matrices, just large enough to check phase-space actions
// against the corresponding unitaries on up to four qubits.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "belldistil/gf2.hpp"
#include "belldistil/symplectic.hpp"

namespace belldistil {

class ComplexMatrix {
 public:
  explicit ComplexMatrix(int dim) : dim_(dim), a_(dim * dim) {
    if (dim < 1 || dim > 16) throw std::invalid_argument("dim must be in [1, 16]");
  }

  static ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }

  // The 2x2 matrix for a two-bit label: 00 identity, 01 bit flip,
  // 10 phase flip, 11 both.
  static ComplexMatrix pauli(int label) {
    ComplexMatrix m(2);
    const std::complex<double> i1(0.0, 1.0);
    switch (label) {
      case 0: m.at(0, 0) = 1; m.at(1, 1) = 1; break;
      case 1: m.at(0, 1) = 1; m.at(1, 0) = 1; break;
      case 2: m.at(0, 0) = 1; m.at(1, 1) = -1; break;
      case 3: m.at(0, 1) = -i1; m.at(1, 0) = i1; break;
      default: throw std::invalid_argument("pauli label must be 0..3");
    }
    return m;
  }

  // Tensor product over pairs, leftmost pair as the leading factor.
  static ComplexMatrix pauli_product(const PauliVector& u) {
    if (u.pairs() > 4) throw std::invalid_argument("pauli product capped at 4 pairs");
    ComplexMatrix m = pauli(u.pair_label(0));
    for (int j = 1; j < u.pairs(); ++j) m = kron(m, pauli(u.pair_label(j)));
    return m;
  }

  static ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.dim_ * b.dim_);
    for (int i = 0; i < a.dim_; ++i)
      for (int j = 0; j < a.dim_; ++j)
        for (int k = 0; k < b.dim_; ++k)
          for (int l = 0; l < b.dim_; ++l)
            m.at(i * b.dim_ + k, j * b.dim_ + l) = a.at(i, j) * b.at(k, l);
    return m;
  }

  int dim() const { return dim_; }
  std::complex<double>& at(int r, int c) { return a_[r * dim_ + c]; }
  const std::complex<double>& at(int r, int c) const { return a_[r * dim_ + c]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) m.at(i, j) = std::conj(at(j, i));
    return m;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("dim mismatch");
    ComplexMatrix m(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
      for (int k = 0; k < a.dim_; ++k) {
        auto aik = a.at(i, k);
        if (aik == std::complex<double>{}) continue;
        for (int j = 0; j < a.dim_; ++j) m.at(i, j) += aik * b.at(k, j);
      }
    return m;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("dim mismatch");
    ComplexMatrix m(a.dim_);
    for (int i = 0; i < a.dim_ * a.dim_; ++i) m.a_[i] = a.a_[i] + b.a_[i];
    return m;
  }

  friend ComplexMatrix operator*(std::complex<double> s, const ComplexMatrix& a) {
    ComplexMatrix m(a.dim_);
    for (int i = 0; i < a.dim_ * a.dim_; ++i) m.a_[i] = s * a.a_[i];
    return m;
  }

  static double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("dim mismatch");
    double worst = 0.0;
    for (int i = 0; i < a.dim_ * a.dim_; ++i)
      worst = std::max(worst, std::abs(a.a_[i] - b.a_[i]));
    return worst;
  }

 private:
  int dim_;
  std::vector<std::complex<double>> a_;
};

// U_u = (I + i sigma_u) / sqrt(2).
inline ComplexMatrix transvection_unitary(const PauliVector& u) {
  if (u.is_zero()) throw std::invalid_argument("transvection needs nonzero u");
  int dim = 1 << u.pairs();
  const std::complex<double> i1(0.0, 1.0);
  return std::complex<double>(1.0 / std::sqrt(2.0)) *
         (ComplexMatrix::identity(dim) + i1 * ComplexMatrix::pauli_product(u));
}

// Largest deviation, over all labels x, between U_u sigma_x U_u^dagger and
// sigma at the transvected label, allowing either overall sign.
inline double unitary_cross_check_deviation(const PauliVector& u) {
  if (u.pairs() > 4) throw std::invalid_argument("cross-check capped at 4 pairs");
  ComplexMatrix uu = transvection_unitary(u);
  ComplexMatrix ud = uu.adjoint();
  int dim = 1 << u.pairs();
  double worst = ComplexMatrix::max_abs_diff(uu * ud, ComplexMatrix::identity(dim));
  for (u128 x = 0; x < (u128{1} << u.width()); ++x) {
    PauliVector px{x, u.width()};
    PauliVector mapped = apply_transvection(u, px);
    ComplexMatrix conj = uu * ComplexMatrix::pauli_product(px) * ud;
    ComplexMatrix tgt = ComplexMatrix::pauli_product(mapped);
    double plus = ComplexMatrix::max_abs_diff(conj, tgt);
    double minus = ComplexMatrix::max_abs_diff(conj, std::complex<double>(-1.0) * tgt);
    worst = std::max(worst, std::min(plus, minus));
  }
  return worst;
}

inline bool unitary_cross_check(const PauliVector& u, double tol = 1e-10) {
  return unitary_cross_check_deviation(u) <= tol;
}

}  // namespace belldistil
