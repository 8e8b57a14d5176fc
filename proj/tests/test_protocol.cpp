#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "belldistil/protocol.hpp"

using namespace belldistil;
using Catch::Matchers::WithinAbs;

namespace {

PauliVector pv(const char* s) { return PauliVector::from_string(s); }

BellDiagonal random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::array<double, 4> p = {u(rng), u(rng), u(rng), u(rng)};
  double sum = p[0] + p[1] + p[2] + p[3];
  for (double& v : p) v /= sum;
  return BellDiagonal(p);
}

std::vector<PauliVector> random_isotropic_rows(std::mt19937_64& rng, int n, int k) {
  Subspace span(2 * n);
  std::vector<PauliVector> rows;
  u128 mask = (u128{1} << (2 * n)) - 1;
  int guard = 0;
  while (static_cast<int>(rows.size()) < k) {
    if (++guard > 100000) throw std::runtime_error("sampling stuck");
    PauliVector v{rng() & mask, 2 * n};
    if (v.is_zero() || span.contains(v)) continue;
    bool commutes = true;
    for (const auto& r : rows)
      if (symplectic_inner(v, r)) commutes = false;
    if (!commutes) continue;
    rows.push_back(v);
    span.insert(v);
  }
  return rows;
}

void check_same_outcome(const StepOutcome& a, const StepOutcome& b, double tol) {
  CHECK_THAT(a.success, WithinAbs(b.success, tol));
  REQUIRE(a.state.coeffs().size() == b.state.coeffs().size());
  for (std::size_t i = 0; i < a.state.coeffs().size(); ++i)
    CHECK_THAT(a.state.coeffs()[i], WithinAbs(b.state.coeffs()[i], tol));
}

}  // namespace

TEST_CASE("classic 2-to-1 step matrix", "[protocol]") {
  const auto& step = dej_step();
  CHECK(step.n == 2);
  CHECK(step.m == 1);
  CHECK(step.b.matrix().str() == "0011\n0101\n0100\n1111");
  CHECK(step.s.basis().size() == 1);
  CHECK(step.s.basis()[0] == pv("1111"));
}

TEST_CASE("classic step desk numbers at fidelity 0.8", "[protocol]") {
  auto closed = apply_step(BellDiagonal::werner(0.8), dej_step());
  CHECK_THAT(closed.success, WithinAbs(173.0 / 225, 1e-12));
  CHECK_THAT(closed.state.coeffs()[0], WithinAbs(145.0 / 173, 1e-12));
  CHECK_THAT(closed.state.coeffs()[1], WithinAbs(24.0 / 173, 1e-12));
  CHECK_THAT(closed.state.coeffs()[2], WithinAbs(2.0 / 173, 1e-12));
  CHECK_THAT(closed.state.coeffs()[3], WithinAbs(2.0 / 173, 1e-12));

  auto oracle = brute_force_oracle(BellDiagonal::werner(0.8), dej_step());
  check_same_outcome(closed, oracle, 1e-12);
}

TEST_CASE("perfect input passes the classic step untouched", "[protocol]") {
  auto out = apply_step(BellDiagonal::werner(1.0), dej_step());
  CHECK_THAT(out.success, WithinAbs(1.0, 1e-12));
  CHECK_THAT(out.state.fidelity(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("4-to-1 step recomposes from its transvection factors", "[protocol]") {
  SymplecticMatrix prod = SymplecticMatrix::identity(8);
  for (const auto& u : proposed_step_factors())
    prod = prod * transvection_matrix(u);
  CHECK(prod == proposed_step().b);

  CHECK(proposed_step().b.row(0) == pv("01100010"));
  CHECK(proposed_step().b.row(1) == pv("10101010"));

  auto listed = rref({pv("10111110"), pv("01101100"), pv("11101011")});
  CHECK(proposed_step().s == listed);

  // Reading the product as the plan times the form instead does not
  // reproduce the measured directions.
  auto alt = prod.matrix() * BitMatrix::symplectic_form(8);
  auto alt_span = rref({alt.row(3), alt.row(5), alt.row(7)});
  CHECK_FALSE(alt_span == listed);
}

TEST_CASE("4-to-1 step desk numbers", "[protocol]") {
  auto at = [](double f) { return apply_step(BellDiagonal::werner(f), proposed_step()); };

  auto o8 = at(0.8);
  CHECK_THAT(o8.success, WithinAbs(7267.0 / 16875, 1e-12));
  CHECK_THAT(o8.state.coeffs()[0], WithinAbs(41.0 / 43, 1e-12));
  CHECK_THAT(o8.state.coeffs()[1], WithinAbs(2.0 / 129, 1e-12));
  CHECK_THAT(o8.state.coeffs()[2], WithinAbs(2.0 / 129, 1e-12));
  CHECK_THAT(o8.state.coeffs()[3], WithinAbs(2.0 / 129, 1e-12));
  check_same_outcome(o8, brute_force_oracle(BellDiagonal::werner(0.8), proposed_step()),
                     1e-12);

  auto o55 = at(0.55);
  CHECK_THAT(o55.success, WithinAbs(833.0 / 5000, 1e-12));
  CHECK_THAT(o55.state.coeffs()[0], WithinAbs(41.0 / 68, 1e-12));

  auto o95 = at(0.95);
  CHECK_THAT(o95.success, WithinAbs(110171.0 / 135000, 1e-12));
  CHECK_THAT(o95.state.coeffs()[0], WithinAbs(523.0 / 524, 1e-12));
}

TEST_CASE("closed form agrees with enumeration on random steps", "[protocol]") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    int n = 2 + static_cast<int>(rng() % 3);
    int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    auto step = make_step(n, m, random_isotropic_rows(rng, n, n - m));
    auto p = random_state(rng);
    auto closed = apply_step(p, step);
    auto oracle = brute_force_oracle(p, step);
    check_same_outcome(closed, oracle, 1e-12);
  }
}

TEST_CASE("acceptance probability is never negative in exact arithmetic",
          "[protocol]") {
  auto step = make_step(2, 1, {pv("0100")});
  BellDiagonal p(0.0, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(apply_step(p, step), std::domain_error);
  CHECK_THROWS_AS(brute_force_oracle(p, step), std::domain_error);
}

TEST_CASE("outcome depends only on the measured span and output rows",
          "[protocol]") {
  auto a = make_step(3, 1, {pv("110000"), pv("001111")});
  auto b = make_step(3, 1, {pv("111111"), pv("001111")});
  CHECK(a.s == b.s);
  std::mt19937_64 rng(55);
  for (int t = 0; t < 10; ++t) {
    auto p = random_state(rng);
    check_same_outcome(apply_step(p, a), apply_step(p, b), 1e-12);
  }
}

TEST_CASE("step serialization round trip", "[protocol]") {
  auto text = step_to_string(proposed_step());
  auto parsed = step_from_string(text);
  CHECK(parsed.n == 4);
  CHECK(parsed.m == 1);
  CHECK(parsed.s == proposed_step().s);
  CHECK(step_to_string(parsed) == text);
  std::mt19937_64 rng(61);
  for (int t = 0; t < 5; ++t) {
    auto p = random_state(rng);
    check_same_outcome(apply_step(p, parsed), apply_step(p, proposed_step()), 0.0);
  }

  auto bare = step_from_string("2 1\n1111\n");
  CHECK(bare.b == dej_step().b);

  CHECK_THROWS_AS(step_from_string(""), std::invalid_argument);
  CHECK_THROWS_AS(step_from_string("2\n1111\n"), std::invalid_argument);
  CHECK_THROWS_AS(step_from_string("2 1\n1111\n0011\n"), std::invalid_argument);
  CHECK_THROWS_AS(step_from_string("2 1\n111\n"), std::invalid_argument);
  CHECK_THROWS_AS(step_from_string("1 0\n11\n"), std::invalid_argument);
}

TEST_CASE("step construction rejects bad shapes", "[protocol]") {
  CHECK_THROWS_AS(make_step(2, 1, {pv("1000"), pv("0100")}), std::invalid_argument);
  CHECK_THROWS_AS(make_step(3, 1, {pv("100000"), pv("010000")}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_step(2, 2, {}), std::invalid_argument);
  CHECK_THROWS_AS(step_from_matrix(2, 1, SymplecticMatrix::identity(6)),
                  std::invalid_argument);
}
