#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "belldistil/gf2.hpp"

using namespace belldistil;

TEST_CASE("bitstring round trip", "[gf2]") {
  auto v = PauliVector::from_string("10111110");
  CHECK(v.width() == 8);
  CHECK(v.pairs() == 4);
  CHECK(v.str() == "10111110");
  CHECK(v.index() == 0xBEu);

  CHECK(PauliVector::from_string("0001").value() == 1);
  CHECK(PauliVector::from_string("10 11 11 10").str() == "10111110");
  CHECK(PauliVector::unit(4, 0).str() == "1000");
  CHECK(PauliVector::unit(4, 3).str() == "0001");
  CHECK(PauliVector::from_string("0010").leading_position() == 2);

  CHECK_THROWS_AS(PauliVector::from_string("012"), std::invalid_argument);
  CHECK_THROWS_AS(PauliVector::from_string("101"), std::invalid_argument);
  CHECK_THROWS_AS(PauliVector::from_string(""), std::invalid_argument);
  CHECK_THROWS_AS(PauliVector(u128{4}, 2), std::invalid_argument);
}

TEST_CASE("pair labels follow phase-then-flip order", "[gf2]") {
  auto v = PauliVector::from_string("100111");
  CHECK(v.pair_label(0) == 2);
  CHECK(v.pair_label(1) == 1);
  CHECK(v.pair_label(2) == 3);
  CHECK_THROWS_AS(v.pair_label(3), std::out_of_range);
}

TEST_CASE("pair swap acts per pair", "[gf2]") {
  CHECK(PauliVector::from_string("10111110").pair_swapped().str() == "01111101");
  CHECK(PauliVector::from_string("01").pair_swapped().str() == "10");
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    PauliVector v{u128{rng() & 0xFF}, 8};
    CHECK(v.pair_swapped().pair_swapped() == v);
  }
}

TEST_CASE("symplectic inner product", "[gf2]") {
  auto phase = PauliVector::from_string("1000");
  auto flip = PauliVector::from_string("0100");
  CHECK(symplectic_inner(phase, flip) == 1);
  CHECK(symplectic_inner(phase, PauliVector::from_string("0010")) == 0);
  CHECK(symplectic_inner(phase, PauliVector::from_string("0001")) == 0);

  for (u128 v = 0; v < 16; ++v) {
    PauliVector pv{v, 4};
    CHECK(symplectic_inner(pv, pv) == 0);
    for (u128 w = 0; w < 16; ++w) {
      PauliVector pw{w, 4};
      CHECK(symplectic_inner(pv, pw) == symplectic_inner(pw, pv));
    }
  }

  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    PauliVector a{u128{rng() & 0x3F}, 6}, b{u128{rng() & 0x3F}, 6},
        c{u128{rng() & 0x3F}, 6};
    CHECK(symplectic_inner(a ^ b, c) ==
          (symplectic_inner(a, c) ^ symplectic_inner(b, c)));
  }

  CHECK_THROWS_AS(symplectic_inner(phase, PauliVector::from_string("100000")),
                  std::invalid_argument);
}

TEST_CASE("bit matrix basics", "[gf2]") {
  auto p = BitMatrix::symplectic_form(4);
  CHECK(p.str() == "0100\n1000\n0001\n0010");
  CHECK(p == p.transposed());
  CHECK(p * p == BitMatrix::identity(4));

  auto v = PauliVector::from_string("1011");
  CHECK(p * v == v.pair_swapped());

  auto parsed = BitMatrix::parse("0100\r\n1000\n\n0001\n0010\n");
  CHECK(parsed == p);
  CHECK(BitMatrix::parse(p.str()) == p);

  CHECK(p.row(1).str() == "1000");
  CHECK(p.column(1).str() == "1000");
  CHECK_THROWS_AS(BitMatrix(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(BitMatrix(4, 3), std::invalid_argument);
}

TEST_CASE("matrix algebra over random inputs", "[gf2]") {
  std::mt19937_64 rng(23);
  auto random_matrix = [&](int r, int c) {
    BitMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.set_bit(i, j, rng() & 1);
    return m;
  };
  for (int t = 0; t < 20; ++t) {
    auto a = random_matrix(6, 6), b = random_matrix(6, 6), c = random_matrix(6, 6);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * b).transposed() == b.transposed() * a.transposed());
    PauliVector v{u128{rng() & 0x3F}, 6};
    CHECK((a * b) * v == a * (b * v));
  }
}

TEST_CASE("symplectic matrix validation and inverse", "[gf2]") {
  CHECK(is_symplectic(BitMatrix::identity(6)));
  CHECK(is_symplectic(BitMatrix::symplectic_form(8)));
  CHECK(is_symplectic(BitMatrix::parse("1100\n0100\n0010\n0001")));
  CHECK_FALSE(is_symplectic(BitMatrix::parse("1010\n0100\n0010\n0001")));
  CHECK_THROWS_AS(SymplecticMatrix(BitMatrix::parse("1010\n0100\n0010\n0001")),
                  std::invalid_argument);

  SymplecticMatrix a(BitMatrix::parse("1100\n0100\n0010\n0001"));
  SymplecticMatrix p(BitMatrix::symplectic_form(4));
  CHECK(a * a.inverse() == SymplecticMatrix::identity(4));
  CHECK(p.inverse() == p);
  auto ap = a * p;
  CHECK(ap.inverse() * ap == SymplecticMatrix::identity(4));
  CHECK(ap.apply(PauliVector::from_string("0101")) ==
        ap.matrix() * PauliVector::from_string("0101"));
}

TEST_CASE("subspace spans reduce to canonical form", "[gf2]") {
  auto s = rref({PauliVector::from_string("1110"), PauliVector::from_string("0011")});
  auto t = rref({PauliVector::from_string("1101"), PauliVector::from_string("0011")});
  CHECK(s == t);
  CHECK(s.dim() == 2);
  CHECK(s.basis()[0].str() == "1101");
  CHECK(s.basis()[1].str() == "0011");

  CHECK(s.contains(PauliVector::from_string("1110")));
  CHECK_FALSE(s.contains(PauliVector::from_string("1000")));

  Subspace grow(4);
  CHECK(grow.insert(PauliVector::from_string("1111")));
  CHECK_FALSE(grow.insert(PauliVector::from_string("1111")));
  CHECK_FALSE(grow.insert(PauliVector::zero(4)));
  CHECK(grow.dim() == 1);

  CHECK(rref({PauliVector::from_string("1111")}).is_isotropic());
  CHECK_FALSE(rref({PauliVector::from_string("1000"),
                    PauliVector::from_string("0100")})
                  .is_isotropic());
}

TEST_CASE("coset enumeration in subset-mask order", "[gf2]") {
  auto s = rref({PauliVector::from_string("1111")});
  auto coset = s.coset(PauliVector::from_string("0100"));
  REQUIRE(coset.size() == 2);
  CHECK(coset[0].str() == "0100");
  CHECK(coset[1].str() == "1011");

  auto two = rref({PauliVector::from_string("1100"), PauliVector::from_string("0011")});
  auto elems = two.elements();
  REQUIRE(elems.size() == 4);
  CHECK(elems[0].str() == "0000");
  CHECK(elems[1].str() == "1100");
  CHECK(elems[2].str() == "0011");
  CHECK(elems[3].str() == "1111");
}

TEST_CASE("rref basis acceptance", "[gf2]") {
  std::vector<PauliVector> good = {PauliVector::from_string("1100"),
                                   PauliVector::from_string("0011")};
  CHECK(Subspace::from_rref(good, 4).dim() == 2);
  std::vector<PauliVector> bad = {PauliVector::from_string("1111"),
                                  PauliVector::from_string("0011")};
  CHECK_THROWS_AS(Subspace::from_rref(bad, 4), std::invalid_argument);
}
