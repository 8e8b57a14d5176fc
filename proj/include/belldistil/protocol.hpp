#pragma once

// Distillation steps over n noisy pairs keeping m.  A step is described by
// a symplectic matrix: its rows at the odd indices 2m+1, 2m+3, ..., 2n-1
// (0-indexed) span the measured directions S, acceptance keeps the runs
// where every measured direction reads even, and the rows 0 .. 2m-1
// translate kept joint labels into output labels.  The closed-form output
// uses character sums over S; the oracle enumerates all 4^n joint labels
// directly.

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "belldistil/bellstate.hpp"
#include "belldistil/gf2.hpp"
#include "belldistil/symplectic.hpp"

namespace belldistil {

struct DistillationStep {
  int n = 0, m = 0;
  SymplecticMatrix b;
  Subspace s;

  std::vector<int> s_row_positions() const {
    std::vector<int> pos;
    for (int r = 2 * m + 1; r < 2 * n; r += 2) pos.push_back(r);
    return pos;
  }
};

namespace detail {

inline void check_step_shape(int n, int m) {
  if (n < 2 || n > 10) throw std::invalid_argument("n must be in [2, 10]");
  if (m < 1 || m >= n) throw std::invalid_argument("m must be in [1, n)");
}

}  // namespace detail

// Builds a step from a validated matrix: S is read off the measured rows.
inline DistillationStep step_from_matrix(int n, int m, SymplecticMatrix b) {
  detail::check_step_shape(n, m);
  if (b.dim() != 2 * n) throw std::invalid_argument("matrix dimension must be 2n");
  Subspace s(2 * n);
  for (int r = 2 * m + 1; r < 2 * n; r += 2) s.insert(b.row(r));
  return {n, m, std::move(b), std::move(s)};
}

// Builds a step from the measured directions alone; the rest of the
// matrix is completed greedily.
inline DistillationStep make_step(int n, int m,
                                  const std::vector<PauliVector>& s_rows) {
  detail::check_step_shape(n, m);
  if (static_cast<int>(s_rows.size()) != n - m)
    throw std::invalid_argument("need n - m measured directions");
  std::vector<std::pair<int, PauliVector>> prescribed;
  for (int i = 0; i < n - m; ++i) prescribed.emplace_back(2 * m + 1 + 2 * i, s_rows[i]);
  return step_from_matrix(n, m, complete_symplectic_rows(2 * n, prescribed));
}

// As above but with the output-translation rows pinned as well.
inline DistillationStep make_step(int n, int m,
                                  const std::vector<PauliVector>& s_rows,
                                  const std::vector<PauliVector>& output_rows) {
  detail::check_step_shape(n, m);
  if (static_cast<int>(s_rows.size()) != n - m)
    throw std::invalid_argument("need n - m measured directions");
  if (static_cast<int>(output_rows.size()) != 2 * m)
    throw std::invalid_argument("need 2m output rows");
  std::vector<std::pair<int, PauliVector>> prescribed;
  for (int i = 0; i < 2 * m; ++i) prescribed.emplace_back(i, output_rows[i]);
  for (int i = 0; i < n - m; ++i) prescribed.emplace_back(2 * m + 1 + 2 * i, s_rows[i]);
  return step_from_matrix(n, m, complete_symplectic_rows(2 * n, prescribed));
}

struct StepOutcome {
  JointBellState state;
  double success;
};

inline constexpr double kMinStepSuccess = 1e-15;

// Closed-form application: success from the character sum over S, output
// coefficients from coset sums of product weights.
inline StepOutcome apply_step(const BellDiagonal& p, const DistillationStep& step) {
  const int n = step.n, m = step.m;
  SVector s = s_of_p(p);
  const auto elems = step.s.elements();

  double d = 0.0;
  for (const auto& x : elems) d += product_s_weight(s, x);
  double success = std::ldexp(d, -(n - m));
  if (!(success > kMinStepSuccess))
    throw std::domain_error("step accepts with probability 0 on this input");

  std::vector<double> coeffs(std::size_t{1} << (2 * m));
  for (std::size_t y = 0; y < coeffs.size(); ++y) {
    PauliVector ybar{u128{y} << (2 * (n - m)), 2 * n};
    PauliVector z = ybar.pair_swapped();
    PauliVector shift = PauliVector::zero(2 * n);
    for (int r = 0; r < 2 * m; ++r)
      if (z.bit(r)) shift ^= step.b.row(r);
    double num = 0.0;
    for (const auto& x : elems) num += product_weight(p, x ^ shift);
    coeffs[y] = std::ldexp(num, n - m) / d;
  }
  return {JointBellState(m, std::move(coeffs)), success};
}

// Direct enumeration over all 4^n joint labels: transform each label,
// keep it when the discarded pairs' flip bits all read zero.
inline StepOutcome brute_force_oracle(const BellDiagonal& p,
                                      const DistillationStep& step) {
  const int n = step.n, m = step.m;
  BitMatrix a = step.b.matrix() * BitMatrix::symplectic_form(2 * n);
  std::vector<double> coeffs(std::size_t{1} << (2 * m));
  double kept = 0.0;
  for (u128 x = 0; x < (u128{1} << (2 * n)); ++x) {
    PauliVector px{x, 2 * n};
    PauliVector z = a * px;
    bool keep = true;
    for (int k = m; k < n && keep; ++k)
      if (z.bit(2 * k + 1)) keep = false;
    if (!keep) continue;
    double w = product_weight(p, px);
    coeffs[static_cast<std::size_t>(z.value() >> (2 * (n - m)))] += w;
    kept += w;
  }
  if (!(kept > kMinStepSuccess))
    throw std::domain_error("step accepts with probability 0 on this input");
  for (double& c : coeffs) c /= kept;
  return {JointBellState(m, std::move(coeffs)), kept};
}

// The classic 2-to-1 step: measure along the all-ones direction.
inline const DistillationStep& dej_step() {
  static const DistillationStep step =
      make_step(2, 1, {PauliVector::from_string("1111")});
  return step;
}

// Transvection factors of the 4-to-1 step, leftmost first.
inline const std::array<PauliVector, 4>& proposed_step_factors() {
  static const std::array<PauliVector, 4> factors = {
      PauliVector::from_string("10010000"),
      PauliVector::from_string("01000001"),
      PauliVector::from_string("10001100"),
      PauliVector::from_string("00011000"),
  };
  return factors;
}

// The 4-to-1 step given by the product of the four transvection factors.
inline const DistillationStep& proposed_step() {
  static const DistillationStep step = step_from_matrix(
      4, 1,
      SymplecticMatrix(BitMatrix::parse("01100010\n"
                                        "10101010\n"
                                        "00100000\n"
                                        "10111110\n"
                                        "01000100\n"
                                        "01101100\n"
                                        "00000010\n"
                                        "11101011")));
  return step;
}

// Textual form: a header line "n m", the n - m measured rows, and
// optionally the 2m output rows.
inline std::string step_to_string(const DistillationStep& step,
                                  bool include_output_rows = true) {
  std::string out = std::to_string(step.n) + " " + std::to_string(step.m) + "\n";
  for (int r : step.s_row_positions()) out += step.b.row(r).str() + "\n";
  if (include_output_rows)
    for (int r = 0; r < 2 * step.m; ++r) out += step.b.row(r).str() + "\n";
  return out;
}

inline DistillationStep step_from_string(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw std::invalid_argument("empty step description");

  int n = 0, m = 0;
  {
    std::string_view header = lines[0];
    auto first_end = header.find(' ');
    if (first_end == std::string_view::npos)
      throw std::invalid_argument("step header must be \"n m\"");
    auto r1 = std::from_chars(header.data(), header.data() + first_end, n);
    std::string_view rest = header.substr(first_end + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    auto r2 = std::from_chars(rest.data(), rest.data() + rest.size(), m);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} ||
        r2.ptr != rest.data() + rest.size())
      throw std::invalid_argument("step header must be \"n m\"");
  }
  detail::check_step_shape(n, m);

  std::vector<PauliVector> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto v = PauliVector::from_string(lines[i]);
    if (v.width() != 2 * n) throw std::invalid_argument("row width must be 2n");
    rows.push_back(v);
  }
  if (static_cast<int>(rows.size()) == n - m) return make_step(n, m, rows);
  if (static_cast<int>(rows.size()) == n + m) {
    std::vector<PauliVector> s_rows(rows.begin(), rows.begin() + (n - m));
    std::vector<PauliVector> output_rows(rows.begin() + (n - m), rows.end());
    return make_step(n, m, s_rows, output_rows);
  }
  throw std::invalid_argument("expected n - m measured rows, optionally 2m output rows");
}

}  // namespace belldistil
