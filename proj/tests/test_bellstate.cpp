#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "belldistil/bellstate.hpp"

using namespace belldistil;
using Catch::Matchers::WithinAbs;

namespace {
BellDiagonal random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::array<double, 4> p = {u(rng), u(rng), u(rng), u(rng)};
  double sum = p[0] + p[1] + p[2] + p[3];
  for (double& v : p) v /= sum;
  return BellDiagonal(p);
}
}  // namespace

TEST_CASE("state construction and validation", "[bellstate]") {
  auto w = BellDiagonal::werner(0.8);
  CHECK_THAT(w.fidelity(), WithinAbs(0.8, 1e-15));
  CHECK_THAT(w[1], WithinAbs(1.0 / 15, 1e-15));
  CHECK_THROWS_AS(BellDiagonal(0.5, 0.5, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BellDiagonal(1.2, -0.2, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BellDiagonal::werner(1.5), std::invalid_argument);
}

TEST_CASE("sign transform", "[bellstate]") {
  auto s = s_of_p(BellDiagonal::werner(0.8));
  CHECK_THAT(s[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(s[1], WithinAbs(11.0 / 15, 1e-15));
  CHECK_THAT(s[2], WithinAbs(11.0 / 15, 1e-15));
  CHECK_THAT(s[3], WithinAbs(11.0 / 15, 1e-15));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    auto p = random_state(rng);
    auto back = p_of_s(s_of_p(p));
    for (int l = 0; l < 4; ++l) CHECK_THAT(back[l], WithinAbs(p[l], 1e-14));
  }
}

TEST_CASE("sign transform matches its character-sum definition", "[bellstate]") {
  std::mt19937_64 rng(9);
  for (int width : {4, 6}) {
    for (int t = 0; t < 10; ++t) {
      auto p = random_state(rng);
      auto s = s_of_p(p);
      for (u128 v = 0; v < (u128{1} << width); ++v) {
        PauliVector pv{v, width};
        double direct = 0.0;
        for (u128 x = 0; x < (u128{1} << width); ++x) {
          PauliVector px{x, width};
          double sign = symplectic_inner(pv, px) ? -1.0 : 1.0;
          direct += sign * product_weight(p, px);
        }
        CHECK_THAT(product_s_weight(s, pv), WithinAbs(direct, 1e-12));
      }
    }
  }
}

TEST_CASE("product weights tile the joint distribution", "[bellstate]") {
  std::mt19937_64 rng(13);
  auto p = random_state(rng);
  double total = 0.0;
  for (u128 x = 0; x < (u128{1} << 6); ++x) total += product_weight(p, PauliVector{x, 6});
  CHECK_THAT(total, WithinAbs(1.0, 1e-12));

  auto joint = JointBellState::product_of(p, 3);
  CHECK(joint.pairs() == 3);
  CHECK_THAT(joint.fidelity(), WithinAbs(p[0] * p[0] * p[0], 1e-15));
  auto label = PauliVector::from_string("011011");
  CHECK_THAT(joint.coeff(label), WithinAbs(p[1] * p[2] * p[3], 1e-15));

  auto single = JointBellState::product_of(p, 1);
  CHECK(single.to_single() == p);
}

TEST_CASE("entropy", "[bellstate]") {
  CHECK_THAT(shannon_entropy(BellDiagonal::werner(1.0)), WithinAbs(0.0, 1e-12));
  CHECK_THAT(shannon_entropy(BellDiagonal(0.25, 0.25, 0.25, 0.25)),
             WithinAbs(2.0, 1e-12));
  std::mt19937_64 rng(21);
  auto p = random_state(rng);
  CHECK_THAT(shannon_entropy(JointBellState::product_of(p, 3)),
             WithinAbs(3.0 * shannon_entropy(p), 1e-9));
}

TEST_CASE("affine relabelings are the 24 label permutations", "[bellstate]") {
  const auto& maps = SinglePairAffineMap::all();
  REQUIRE(maps.size() == 24);
  for (const auto& map : maps) {
    std::array<bool, 4> hit{};
    for (int l = 0; l < 4; ++l) hit[static_cast<std::size_t>(map.apply(l))] = true;
    CHECK((hit[0] && hit[1] && hit[2] && hit[3]));
  }
}

TEST_CASE("descending reorder", "[bellstate]") {
  auto [sorted, map] = sort_descending(BellDiagonal(0.1, 0.6, 0.2, 0.1));
  CHECK(sorted == BellDiagonal(0.6, 0.2, 0.1, 0.1));
  CHECK(map.apply(1) == 0);

  auto [same, id] = sort_descending(BellDiagonal(0.6, 0.2, 0.1, 0.1));
  CHECK(same == BellDiagonal(0.6, 0.2, 0.1, 0.1));
  CHECK(id.is_identity());

  std::mt19937_64 rng(33);
  for (int t = 0; t < 50; ++t) {
    auto p = random_state(rng);
    auto [q, phi] = sort_descending(p);
    CHECK(q.p[0] >= q.p[1]);
    CHECK(q.p[1] >= q.p[2]);
    CHECK(q.p[2] >= q.p[3]);
    for (int l = 0; l < 4; ++l)
      CHECK(q.p[static_cast<std::size_t>(phi.apply(l))] == p.p[static_cast<std::size_t>(l)]);
    auto [q2, phi2] = sort_descending(p);
    CHECK(q2 == q);
    CHECK(phi2.a == phi.a);
    CHECK(phi2.b == phi.b);
  }
}
