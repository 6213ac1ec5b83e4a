#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tateforge/errors.hpp"
#include "tateforge/torgamma.hpp"

using namespace tateforge;

namespace {

AlgebraPtr ring(const std::string& vars, const std::vector<std::string>& rels, int D = 8, unsigned p = 0) {
  return make_algebra(p ? Field(p) : Field(), degree_one_variables(vars), rels, D);
}

MapPtr map(AlgebraPtr s, AlgebraPtr t, const std::vector<std::string>& im) {
  return std::make_shared<const GradedMap>(make_map(std::move(s), std::move(t), im));
}

MapPtr augmentation(AlgebraPtr A) { return std::make_shared<const GradedMap>(GradedMap::augmentation(std::move(A))); }

int sign(int a, int b) { return (a * b) % 2 ? -1 : 1; }

void check_commutative_associative(const TorAlgebra& T) {
  const Field& F = T.field();
  auto bl = T.blocks();
  for (const auto& a : bl)
    for (const auto& b : bl) {
      if (!T.in_range(a + b)) continue;
      for (Index i = 0; i < T.dim(a); ++i)
        for (Index j = 0; j < T.dim(b); ++j) {
          SparseVec ab = T.multiply(a, unit_vector(i), b, unit_vector(j));
          SparseVec ba = T.multiply(b, unit_vector(j), a, unit_vector(i));
          REQUIRE(ab == scaled(F, F.from_int(sign(a.hom, b.hom)), ba));
          for (const auto& c : bl) {
            if (!T.in_range(a + b + c)) continue;
            for (Index k = 0; k < T.dim(c); ++k) {
              SparseVec l = T.multiply(a + b, ab, c, unit_vector(k));
              SparseVec r = T.multiply(a, unit_vector(i), b + c, T.multiply(b, unit_vector(j), c, unit_vector(k)));
              REQUIRE(l == r);
            }
          }
        }
    }
}

}  // namespace

TEST_CASE("tor_kk ranks") {
  CHECK(tor_kk(ring("x", {"x^2"}), 6, 8).ranks() == std::vector<std::size_t>{1, 1, 1, 1, 1, 1, 1});
  CHECK(tor_kk(ring("x,y", {"x^2", "x*y", "y^2"}), 6, 8).ranks() ==
        std::vector<std::size_t>{1, 2, 4, 8, 16, 32, 64});
  CHECK(tor_kk(ring("x,y", {}), 4, 8).ranks() == std::vector<std::size_t>{1, 2, 1, 0, 0});
  CHECK(poincare_series(tor_kk(ring("", {}), 3, 8)) == std::vector<std::size_t>{1, 0, 0, 0});
}

TEST_CASE("tor_kk agrees with the resolution oracle bigraded") {
  std::mt19937 rng(7);
  const char* names[] = {"x", "y", "z"};
  for (int trial = 0; trial < 8; ++trial) {
    int nv = 2 + static_cast<int>(rng() % 2);
    std::string vars;
    for (int i = 0; i < nv; ++i) vars += std::string(i ? "," : "") + names[i];
    std::vector<std::string> rels;
    int nr = 1 + static_cast<int>(rng() % 3);
    for (int r = 0; r < nr; ++r) {
      int deg = 2 + static_cast<int>(rng() % 2);
      std::string m;
      for (int k = 0; k < deg; ++k) m += std::string(k ? "*" : "") + names[rng() % nv];
      rels.push_back(m);
    }
    auto R = ring(vars, rels, 6);
    auto T = tor_kk(R, 4, 6);
    auto b = oracle::resolution_betti_bigraded(*R, 4, 6);
    for (int n = 0; n <= 4; ++n)
      for (int d = 0; d <= 6; ++d) CHECK(T.dim({n, d}) == b[n][d]);
  }
}

TEST_CASE("Tor tables are graded commutative and associative") {
  check_commutative_associative(tor_kk(ring("x,y", {"x^2", "x*y", "y^2"}), 4, 6));
  check_commutative_associative(tor_kk(ring("x", {"x^3"}, 8, 2), 5, 8));
  check_commutative_associative(tor_of_surjection(map(ring("x,y", {"x^2"}), ring("y", {}), {"0", "y"}), 4, 5));
}

TEST_CASE("divided powers in Tor") {
  auto T = tor_kk(ring("x", {"x^2"}), 6, 8);
  Bidegree two{2, 2};
  REQUIRE(T.dim(two) == 1);
  SparseVec e = unit_vector(0);
  // e^2 = 2 gamma_2(e), gamma_2 gamma_1 = 3 gamma_3
  CHECK(T.multiply(two, e, two, e) == scaled(T.field(), 2, T.gamma(two, e, 2)));
  CHECK(T.multiply({4, 4}, T.gamma(two, e, 2), two, e) == scaled(T.field(), 3, T.gamma(two, e, 3)));
  // gamma_2(3e) = 9 gamma_2(e)
  CHECK(T.gamma(two, scaled(T.field(), 3, e), 2) == scaled(T.field(), 9, T.gamma(two, e, 2)));
  CHECK_THROWS_AS(T.gamma(two, e, 4), TruncationExceeded);
  auto T2 = tor_kk(ring("x", {"x^2"}, 8, 2), 6, 8);
  CHECK(T2.multiply(two, e, two, e).empty());
  CHECK(!T2.gamma(two, e, 2).empty());
}

TEST_CASE("Tor of a surjection") {
  auto Q = ring("", {});
  CHECK(tor_of_surjection(augmentation(ring("x", {"x^2"})), 5, 8).ranks() ==
        std::vector<std::size_t>{1, 1, 1, 1, 1, 1});
  CHECK(tor_of_surjection(augmentation(ring("x,y", {"x^2", "x*y", "y^2"})), 4, 8).ranks() ==
        std::vector<std::size_t>{1, 2, 4, 8, 16});
  // S = Q[y] flat base: Tor^{S[x]/(x^2)}(S,S) is free over S of rank 1 in each degree
  auto T = tor_of_surjection(map(ring("y,x", {"x^2"}), ring("y", {}), {"y", "0"}), 4, 6);
  CHECK(T.ranks() == std::vector<std::size_t>{1, 1, 1, 1, 1});
  CHECK(T.total_dim(0) == 7);
}

TEST_CASE("retract presentations") {
  Field Q;
  auto k = GradedAlgebra::residue_field(Q, 8);
  auto ret = make_retract("T", k, degree_one_variables("x"), {"x^2"}, 8);
  CHECK(ret.R->hilbert_function() == std::vector<std::size_t>{1, 1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(tor_ss_retract(ret, 5, 8).ranks() == std::vector<std::size_t>{1, 1, 1, 1, 1, 1});
  auto same = make_retract("S", k, {}, {}, 8);
  CHECK(tor_ss_retract(same, 3, 8).ranks() == std::vector<std::size_t>{1, 0, 0, 0});
  auto S = ring("y", {}, 6);
  CHECK_THROWS_AS(make_retract("bad", S, degree_one_variables("x"), {"x*y + y^2"}, 6), InvalidInput);
  CHECK_THROWS_AS(make_retract("bad", S, degree_one_variables("x"), {"x"}, 6), InvalidInput);
  CHECK_NOTHROW(make_retract("ok", S, degree_one_variables("x"), {"x*y"}, 6));
}

TEST_CASE("induced Tor maps") {
  auto R = ring("x,y", {"x^2", "x*y", "y^2"}, 6);
  auto T = ring("x", {"x^2"}, 6);
  auto id = induced_tor_map(std::make_shared<const GradedMap>(GradedMap::identity(R)), 4, 6);
  for (const auto& bd : id.source().blocks()) {
    std::vector<SparseVec> cols;
    for (Index i = 0; i < id.source().dim(bd); ++i) cols.push_back(unit_vector(i));
    CHECK(id.matrix(bd) == SparseMatrix::from_columns(id.source().dim(bd), cols));
  }
  auto phi = map(R, T, {"x", "0"});
  auto f = induced_tor_map(phi, 4, 6);
  const auto& m1 = f.matrix({1, 1});
  CHECK(m1.rows() == 1);
  CHECK(m1.cols() == 2);
  CHECK(m1.row_vectors()[0] == SparseVec{{0, 1}});

  auto P = ring("x,y", {}, 6);
  auto a = induced_tor_map(augmentation(P), 3, 6);
  for (const auto& bd : a.source().blocks())
    if (bd.hom > 0) CHECK(a.matrix(bd).nonzeros() == 0);

  SUBCASE("lift choices do not matter") {
    auto g = induced_tor_map(phi, 4, 6, true);
    CHECK(f == g);
    auto P2 = ring("x,y,z", {}, 6);
    auto R3 = ring("x,y,z", {"x^2", "y^2", "x*z", "z^2"}, 6);
    auto pz = map(P2, R3, {"x", "y", "x+y+z"});
    CHECK(induced_tor_map(pz, 4, 6) == induced_tor_map(pz, 4, 6, true));
  }
  SUBCASE("multiplicative") {
    for (const auto& a1 : f.source().blocks())
      for (const auto& b1 : f.source().blocks()) {
        if (!f.source().in_range(a1 + b1)) continue;
        for (Index i = 0; i < f.source().dim(a1); ++i)
          for (Index j = 0; j < f.source().dim(b1); ++j) {
            SparseVec l = f.apply(a1 + b1, f.source().multiply(a1, unit_vector(i), b1, unit_vector(j)));
            SparseVec r = f.target().dim(a1 + b1) == 0
                              ? SparseVec{}
                              : f.target().multiply(a1, f.apply(a1, unit_vector(i)), b1, f.apply(b1, unit_vector(j)));
            CHECK(l == r);
          }
      }
  }
  SUBCASE("functorial") {
    auto A = ring("x,y", {"x^2", "y^2"}, 6);
    auto psi = map(A, R, {"x", "y"});
    auto comp = std::make_shared<const GradedMap>(psi->then(*phi));
    auto lhs = induced_tor_map(comp, 4, 6);
    auto rhs = induced_tor_map(psi, 4, 6).then(induced_tor_map(phi, 4, 6));
    CHECK(lhs == rhs);
    auto k = augmentation(T);
    auto lhs2 = induced_tor_map(std::make_shared<const GradedMap>(phi->then(*k)), 4, 6);
    CHECK(lhs2 == f.then(induced_tor_map(k, 4, 6)));
  }
}

TEST_CASE("reduced Tor") {
  auto E = tor_kk(ring("x,y", {}), 3, 6);
  CHECK(reduced_tor(E).ranks() == std::vector<std::size_t>{1, 0, 0, 0});
  auto T = tor_kk(ring("x", {"x^2"}), 6, 8);
  auto RT = reduced_tor(T);
  CHECK(RT.ranks() == std::vector<std::size_t>{1, 0, 1, 0, 1, 0, 1});
  auto k = tor_kk(ring("", {}), 3, 8);
  CHECK(reduced_tor(k).ranks() == k.ranks());
  SUBCASE("pi in degrees >= 2 survives") {
    for (auto R : {ring("x", {"x^2"}), ring("x,y", {"x^2", "x*y", "y^2"}), ring("x,y", {"x^3", "x*y^2"})}) {
      auto full = std::make_shared<const TorAlgebra>(tor_kk(R, 5, 8));
      auto red = std::make_shared<const TorAlgebra>(reduced_tor(*full));
      auto p = pi(full).ranks(), q = pi(red).ranks();
      for (int n = 2; n <= 5; ++n) CHECK(p[n] == q[n]);
      CHECK(q[1] == 0);
    }
  }
}

TEST_CASE("pi ranks equal deviations") {
  auto T = std::make_shared<const TorAlgebra>(tor_kk(ring("x", {"x^2"}), 6, 8));
  auto p = pi(T).ranks();
  CHECK(std::vector<std::size_t>(p.begin() + 1, p.end()) == std::vector<std::size_t>{1, 1, 0, 0, 0, 0});
  auto Q = std::make_shared<const TorAlgebra>(tor_kk(ring("x,y", {"x^2", "x*y", "y^2"}), 5, 8));
  auto q = pi(Q).ranks();
  CHECK(q[2] == 3);
  CHECK(q[3] == 2);
  auto E = std::make_shared<const TorAlgebra>(tor_kk(ring("x,y", {}), 3, 8));
  CHECK(pi(E).ranks() == std::vector<std::size_t>{0, 2, 0, 0});
  for (auto R : {ring("x,y", {"x^2", "y^3"}), ring("x,y,z", {"x*y", "y*z", "z^2"}, 6), ring("x", {"x^3"}, 8, 3),
                 ring("x,y", {"x^2", "x*y"}, 8, 2)}) {
    auto Tr = std::make_shared<const TorAlgebra>(tor_kk(R, 5, R->max_degree()));
    auto dev = deviations_ring(R, 5, R->max_degree());
    auto pr = pi(Tr).ranks();
    for (int n = 1; n <= 5; ++n) CHECK(static_cast<long>(pr[n]) == *dev.at(n));
  }
  CHECK_THROWS_AS(pi(std::make_shared<const TorAlgebra>(tor_of_surjection(augmentation(ring("x", {"x^2"})), 2, 4))),
                  InvalidInput);
}

TEST_CASE("pi of maps and smallness") {
  auto T = ring("x", {"x^2"});
  auto id = std::make_shared<const GradedMap>(GradedMap::identity(T));
  auto v = is_small(id, 5, 8);
  CHECK(v.status == SmallnessStatus::Small);
  CHECK(v.summary() == "SmallUpTo(5)");
  auto aug = is_small(augmentation(T), 5, 8);
  CHECK(aug.status == SmallnessStatus::NotSmall);
  auto almost = is_almost_small(augmentation(T), 6, 8);
  CHECK(almost.status == SmallnessStatus::NotSmall);
  REQUIRE(almost.witness_degree.has_value());
  CHECK(almost.witness_degree->hom == 2);
  CHECK(almost.summary().rfind("NotAlmostSmall", 0) == 0);

  auto P = ring("x,y", {});
  CHECK(is_almost_small(map(P, ring("x,y", {"x^2", "x*y", "y^2"}), {"x", "y"}), 6, 8).status ==
        SmallnessStatus::Small);
  auto ci = map(ring("x,y", {"x^2"}), ring("x,y", {"x^2", "y^2"}), {"x", "y"});
  auto c = is_almost_small(ci, 6, 8);
  CHECK(c.status == SmallnessStatus::Small);
  CHECK(c.summary() == "AlmostSmallUpTo(6)");
  CHECK(is_small(ci, 4, 8).status == SmallnessStatus::Small);
  auto sq = is_small(map(P, ring("x,y", {"x^2", "x*y", "y^2"}), {"x", "y"}), 4, 8);
  CHECK(sq.status == SmallnessStatus::Small);
}

TEST_CASE("algebra generators") {
  auto Q = tor_kk(ring("x", {"x^2"}), 6, 8);
  CHECK(algebra_generators(Q, 6) == std::vector<std::size_t>{0, 1, 1, 0, 0, 0, 0});
  auto F2 = tor_kk(ring("x", {"x^2"}, 8, 2), 6, 8);
  auto g = algebra_generators(F2, 6);
  CHECK(g[1] == 1);
  CHECK(g[2] == 1);
  CHECK(g[3] == 0);
  CHECK(g[4] == 1);
  auto E = tor_kk(ring("x,y", {}), 2, 8);
  CHECK(algebra_generators(E, 2) == std::vector<std::size_t>{0, 2, 0});
}

TEST_CASE("fiber indecomposables match pi") {
  for (auto [vars, rels] : std::vector<std::pair<std::string, std::vector<std::string>>>{
           {"x", {"x^2"}}, {"x,y", {"x^2", "x*y", "y^2"}}}) {
    auto P = ring(vars, {});
    auto R = ring(vars, rels);
    std::vector<std::string> im;
    for (const auto& v : R->variables()) im.push_back(v.name);
    auto M = minimal_model(map(P, R, im), 5, 8);
    Extension fiber = closed_fiber(M);
    auto T = std::make_shared<const TorAlgebra>(tor_kk(R, 5, 8));
    auto p = pi(T).ranks();
    for (int n = 2; n <= 5; ++n) CHECK(indecomposable_rank(fiber, n - 1) == p[n]);
  }
}
