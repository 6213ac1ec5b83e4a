#include <random>

#include "doctest.h"
#include "tateforge/errors.hpp"
#include "tateforge/resolve.hpp"

using namespace tateforge;

namespace {

AlgebraPtr ring(const std::string& vars, const std::vector<std::string>& rels, int D = 8, unsigned p = 0) {
  return make_algebra(p ? Field(p) : Field(), degree_one_variables(vars), rels, D);
}

std::vector<Polynomial> polys(const AlgebraPtr& R, const std::vector<std::string>& s) {
  std::vector<Polynomial> out;
  for (const auto& t : s) out.push_back(parse_polynomial(R->field(), t, R->variables()));
  return out;
}

}  // namespace

TEST_CASE("koszul complexes") {
  auto P = ring("x", {});
  auto K = koszul(P, polys(P, {"x"}), 8);
  CHECK(K.ext->num_variables() == 1);
  CHECK(koszul(P, std::vector<Polynomial>{}, 8).ext->num_variables() == 0);
  auto P2 = ring("x,y", {});
  CHECK(koszul(P2, polys(P2, {"x^2", "x*y", "y^2"}), 8).ext->num_variables() == 3);
  CHECK_THROWS_AS(koszul(P2, polys(P2, {"x^2+y"}), 8), InhomogeneousElement);
}

TEST_CASE("regular sequences") {
  auto P2 = ring("x,y", {});
  CHECK(is_regular_sequence(P2, polys(P2, {"x^2", "y^2"}), 8).status == Regularity::Regular);
  auto v = is_regular_sequence(P2, polys(P2, {"x^2", "x*y", "y^2"}), 8);
  CHECK(v.status == Regularity::NotRegular);
  // canonical representative of the syzygy y*(x^2) - x*(x*y), up to sign
  CHECK(v.witness == "(-y)*(x^2) + (x)*(x*y) = 0");
  auto P1 = ring("x", {});
  CHECK(is_regular_sequence(P1, polys(P1, {"x^2"}), 8).status == Regularity::Regular);
  // non-monomial sequence certified through an Artinian quotient
  auto P3 = ring("x,y,z", {});
  auto r = is_regular_sequence(P3, polys(P3, {"x^2+y^2", "x*y+z^2"}), 8);
  CHECK(r.status == Regularity::Regular);
  CHECK(is_regular_sequence(P3, polys(P3, {"x*y+z^2", "x^2+y^2"}), 8).status == Regularity::Regular);
  // y^2 is a zero divisor modulo x*y; over a quotient ring nothing is claimed without a witness
  auto Q = ring("x,y", {"x*y"});
  CHECK(is_regular_sequence(Q, polys(Q, {"x^2"}), 8).status == Regularity::NotRegular);
  auto T = ring("x", {"x^2"});
  auto a = is_regular_sequence(T, polys(T, {"x"}), 8);
  CHECK(a.status == Regularity::NotRegular);
}

TEST_CASE("betti numbers") {
  auto R = ring("x,y", {"x^2", "x*y", "y^2"});
  auto t = betti_numbers(R, 6, 8);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 8; ++j) {
      std::size_t expected = (i == 0 && j == 0) ? 1 : (i == 1 && j == 2) ? 3 : (i == 2 && j == 3) ? 2 : 0;
      CHECK(t.at(i, j) == expected);
    }
  auto T = betti_numbers(ring("x", {"x^2"}), 6, 8);
  CHECK(T.at(0, 0) == 1);
  CHECK(T.at(1, 2) == 1);
  CHECK(T.total(1) == 1);
  auto F = betti_numbers(ring("x,y", {}), 6, 8);
  CHECK(F.total(0) == 1);
  CHECK(F.total(1) + F.total(2) == 0);
}

TEST_CASE("depth and polreg") {
  CHECK(depth(ring("x,y", {"x^2", "x*y", "y^2"}), 6, 8) == 0);
  CHECK(depth(ring("x", {"x^2"}), 6, 8) == 0);
  CHECK(depth(ring("x,y", {}), 6, 8) == 2);
  auto a = polreg(ring("x,y", {"x^2", "x*y", "y^2"}), 6, 8);
  CHECK(a.polreg == 1);
  CHECK(a.small_threshold == 3);
  CHECK(polreg(ring("x", {"x^2"}), 6, 8).small_threshold == 3);
  auto c = polreg(ring("x,y", {}), 6, 8);
  CHECK(c.polreg == 0);
  CHECK(c.small_threshold == 2);
}

TEST_CASE("Euler characteristic matches the Hilbert series") {
  std::vector<AlgebraPtr> rings = {ring("x,y", {"x^2", "x*y", "y^2"}), ring("x,y,z", {"x*y-z^2", "x^3"}),
                                   ring("x,y", {"x^2+y^2", "x*y"}), ring("x,y,z", {"x^2", "y^2", "z^2"}, 8, 2)};
  for (const auto& R : rings) {
    auto t = betti_numbers(R, 3, 8);
    auto e = euler_series(*R, 8);
    for (int j = 0; j <= 8; ++j) {
      long s = 0;
      for (int i = 0; i <= 3; ++i) s += (i % 2 ? -1 : 1) * static_cast<long>(t.at(i, j));
      CHECK(s == e[j]);
    }
  }
}

TEST_CASE("complete intersections have exterior Betti numbers") {
  auto R = ring("x,y,z", {"x^2", "y^2+x*z", "z^3"});
  auto t = betti_numbers(R, 3, 8);
  CHECK(t.total(0) == 1);
  CHECK(t.total(1) == 3);
  CHECK(t.total(2) == 3);
  CHECK(t.total(3) == 1);
}

TEST_CASE("regularity is permutation independent and depth is bounded") {
  auto P = ring("x,y,z", {});
  std::vector<std::string> f = {"x^2", "y^3", "z^2"};
  std::sort(f.begin(), f.end());
  do {
    CHECK(is_regular_sequence(P, polys(P, f), 8).status == Regularity::Regular);
  } while (std::next_permutation(f.begin(), f.end()));
  for (auto R : {ring("x,y,z", {"x*y"}), ring("x,y,z", {"x*y", "y*z"}), ring("x,y,z", {})}) {
    int d = depth(R, 3, 8);
    CHECK(d <= 3);
    CHECK((d == 3) == !R->has_relations());
  }
}
