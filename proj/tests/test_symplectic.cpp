#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "belldistil/symplectic.hpp"
#include "belldistil/unitary.hpp"

using namespace belldistil;

namespace {
PauliVector pv(const char* s) { return PauliVector::from_string(s); }
}  // namespace

TEST_CASE("transvections are involutions matching their matrices", "[symplectic]") {
  CHECK(apply_transvection(pv("1100"), pv("1000")) == pv("0100"));
  for (u128 u = 1; u < 16; ++u) {
    auto mat = transvection_matrix(PauliVector{u, 4});
    for (u128 x = 0; x < 16; ++x) {
      PauliVector px{x, 4};
      auto once = apply_transvection(PauliVector{u, 4}, px);
      CHECK(mat.apply(px) == once);
      CHECK(apply_transvection(PauliVector{u, 4}, once) == px);
    }
  }
  CHECK_THROWS_AS(apply_transvection(PauliVector::zero(4), pv("1000")),
                  std::invalid_argument);
}

TEST_CASE("two-pair group enumeration", "[symplectic]") {
  const auto& group = sp4_group();
  REQUIRE(group.size() == 720);
  CHECK(symplectic_group_order(2) == 720);
  CHECK(symplectic_group_order(1) == 6);
  CHECK(symplectic_group_order(3) == 1451520);

  bool has_identity = false;
  for (const auto& g : group)
    if (g == SymplecticMatrix::identity(4)) has_identity = true;
  CHECK(has_identity);

  for (const auto& g : group) {
    CHECK(sp4_contains(g.matrix()));
    CHECK(sp4_contains(g.inverse().matrix()));
  }
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    const auto& a = group[rng() % group.size()];
    const auto& b = group[rng() % group.size()];
    CHECK(sp4_contains((a * b).matrix()));
  }
}

TEST_CASE("two-pair transitive mapping lookup", "[symplectic]") {
  PauliVector e1{u128{8}, 4};
  for (u128 v = 1; v < 16; ++v) {
    auto g = sp4_find_mapping({{PauliVector{v, 4}, e1}});
    REQUIRE(g.has_value());
    CHECK(g->apply(PauliVector{v, 4}) == e1);
  }
  CHECK_FALSE(sp4_find_mapping({{pv("1000"), PauliVector::zero(4)}}).has_value());
}

TEST_CASE("six-letter conjugation identity", "[symplectic]") {
  CHECK(s6_gamma(pv("0001")) == Transposition(5, 6));
  CHECK(s6_gamma(pv("0100")) == Transposition(2, 3));
  CHECK(s6_gamma(pv("1100")) == Transposition(1, 2));
  CHECK(s6_gamma(pv("1111")) == Transposition(3, 6));
  CHECK(s6_verify());

  auto broken = s6_gamma_table();
  std::swap(broken[0], broken[1]);
  CHECK_FALSE(s6_check_table(broken));
  auto duplicated = s6_gamma_table();
  duplicated[2] = duplicated[3];
  CHECK_FALSE(s6_check_table(duplicated));
}

TEST_CASE("conjugating a transposition relabels its letters", "[symplectic]") {
  CHECK(s6_conjugate(Transposition(1, 2), Transposition(2, 3)) == Transposition(1, 3));
  CHECK(s6_conjugate(Transposition(1, 2), Transposition(3, 4)) == Transposition(3, 4));
  CHECK(s6_conjugate(Transposition(1, 2), Transposition(1, 2)) == Transposition(1, 2));
}

TEST_CASE("greedy symplectic completion", "[symplectic]") {
  auto single = complete_isotropic(rref({pv("1111")}), {3});
  CHECK(single.row(0) == pv("0011"));
  CHECK(single.row(1) == pv("0101"));
  CHECK(single.row(2) == pv("0100"));
  CHECK(single.row(3) == pv("1111"));

  auto s = rref({pv("10111110"), pv("01101100"), pv("11101011")});
  auto full = complete_isotropic(s, {3, 5, 7});
  auto span = rref({full.row(3), full.row(5), full.row(7)});
  CHECK(span == s);

  CHECK_THROWS_AS(
      complete_symplectic_rows(4, {{0, pv("1000")}, {1, pv("0010")}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      complete_symplectic_rows(4, {{0, pv("1000")}, {2, pv("1000")}}),
      std::invalid_argument);
  CHECK_THROWS_AS(complete_isotropic(rref({pv("1000"), pv("0100")}), {0, 2}),
                  std::invalid_argument);
}

TEST_CASE("controlled-not phase-space action", "[symplectic]") {
  const auto& cnot = cnot_symplectic();
  CHECK(cnot.matrix().str() == "1010\n0100\n0010\n0101");
  CHECK(cnot.apply(pv("0100")) == pv("0101"));
  CHECK(cnot.apply(pv("0010")) == pv("1010"));
  CHECK(cnot.apply(pv("1000")) == pv("1000"));
  CHECK(cnot.apply(pv("0001")) == pv("0001"));

  SymplecticMatrix composed = SymplecticMatrix::identity(4);
  for (const auto& u : cnot_transvection_factors())
    composed = composed * transvection_matrix(u);
  CHECK(composed == cnot);
}

TEST_CASE("two-pair embedding places blocks at the right pairs", "[symplectic]") {
  TwoQubitOp op{3, 0, 2, cnot_symplectic()};
  auto e = op.embedded();
  CHECK(e.dim() == 6);
  CHECK(e.apply(pv("010000")) == pv("010001"));
  CHECK(e.apply(pv("000010")) == pv("100010"));
  CHECK(e.apply(pv("001000")) == pv("001000"));
  CHECK(e.apply(pv("000100")) == pv("000100"));
}

TEST_CASE("two-pair factorization recomposes", "[symplectic]") {
  CHECK(decompose_two_qubit(SymplecticMatrix::identity(8)).empty());

  std::mt19937_64 rng(17);
  for (int pairs = 2; pairs <= 4; ++pairs) {
    for (int t = 0; t < 20; ++t) {
      auto a = random_symplectic(rng, pairs, 3 + static_cast<int>(rng() % 8));
      auto ops = decompose_two_qubit(a);
      auto prod = SymplecticMatrix::identity(2 * pairs);
      for (const auto& op : ops) {
        CHECK(op.pairs == pairs);
        CHECK(op.k >= 0);
        CHECK(op.k < op.l);
        CHECK(op.l < pairs);
        prod = prod * op.embedded();
      }
      CHECK(prod == a);
    }
  }

  SymplecticMatrix shear(BitMatrix::parse("11\n01"));
  auto ops = decompose_two_qubit(shear);
  REQUIRE(ops.size() == 1);
  CHECK(ops[0].l == -1);
  CHECK(ops[0].embedded() == shear);
}

TEST_CASE("shortest generator sequences", "[symplectic]") {
  CHECK(generator_sequence_search(SymplecticMatrix::identity(4), 2)->empty());

  auto single = generator_sequence_search(transvection_matrix(pv("0111")), 2);
  REQUIRE(single.has_value());
  REQUIRE(single->size() == 1);
  CHECK((*single)[0] == pv("0111"));

  auto seq = generator_sequence_search(cnot_symplectic(), 3);
  REQUIRE(seq.has_value());
  CHECK(seq->size() <= 3);
  SymplecticMatrix prod = SymplecticMatrix::identity(4);
  for (const auto& u : *seq) prod = prod * transvection_matrix(u);
  CHECK(prod == cnot_symplectic());

  CHECK_FALSE(generator_sequence_search(cnot_symplectic(), 0).has_value());

  TwoQubitOp far{3, 0, 2, cnot_symplectic()};
  auto wide = generator_sequence_search(far.embedded(), 3);
  REQUIRE(wide.has_value());
  SymplecticMatrix wprod = SymplecticMatrix::identity(6);
  for (const auto& u : *wide) wprod = wprod * transvection_matrix(u);
  CHECK(wprod == far.embedded());
}

TEST_CASE("phase-space action matches the unitary conjugation", "[symplectic]") {
  for (u128 u = 1; u < 4; ++u)
    CHECK(unitary_cross_check(PauliVector{u, 2}));
  for (u128 u = 1; u < 16; ++u)
    CHECK(unitary_cross_check_deviation(PauliVector{u, 4}) <= 1e-10);

  auto uu = transvection_unitary(pv("1100"));
  auto conj = uu * ComplexMatrix::pauli_product(pv("1000")) * uu.adjoint();
  auto unmoved = ComplexMatrix::pauli_product(pv("1000"));
  double plus = ComplexMatrix::max_abs_diff(conj, unmoved);
  double minus = ComplexMatrix::max_abs_diff(
      conj, std::complex<double>(-1.0) * unmoved);
  CHECK(std::min(plus, minus) > 0.5);
}
