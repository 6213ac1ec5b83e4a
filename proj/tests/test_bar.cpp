#include "doctest.h"
#include "tateforge/bar.hpp"
#include "tateforge/errors.hpp"
#include "tateforge/tate.hpp"

using namespace tateforge;

namespace {

AlgebraPtr ring(const std::string& vars, const std::vector<std::string>& rels, int D = 8) {
  return make_algebra(Field(), degree_one_variables(vars), rels, D);
}

MapPtr map(AlgebraPtr s, AlgebraPtr t, const std::vector<std::string>& im) {
  return std::make_shared<const GradedMap>(make_map(std::move(s), std::move(t), im));
}

std::shared_ptr<const Extension> exterior(int max_hom, int D) {
  auto E = std::make_shared<Extension>(GradedAlgebra::residue_field(Field(), D), max_hom, D);
  E->adjoin(AdjoinedVariable{"e", 1, 1, Flavor::Polynomial}, E->zero({0, 1}));
  return E;
}

std::shared_ptr<const Extension> polynomial_t(int max_hom, int D) {
  auto E = std::make_shared<Extension>(GradedAlgebra::residue_field(Field(), D), max_hom, D);
  E->adjoin(AdjoinedVariable{"t", 2, 2, Flavor::Polynomial}, E->zero({1, 2}));
  return E;
}

MinimalModel flagship_model(const std::string& vars, const std::vector<std::string>& rels, int N, int D) {
  auto P = ring(vars, {}, D);
  auto R = ring(vars, rels, D);
  std::vector<std::string> im;
  for (const auto& v : R->variables()) im.push_back(v.name);
  return minimal_model(map(P, R, im), N, D);
}

std::shared_ptr<const Extension> fiber(const MinimalModel& M) {
  return std::make_shared<const Extension>(M.ext->base_change(GradedMap::augmentation(M.map->source())));
}

std::size_t ind_count(const Extension& C, int q) {
  std::size_t s = 0;
  for (const auto& [d, Q] : algebra_indecomposables(C, q)) s += Q.dim();
  return s;
}

int sign(int a, int b) { return (a * b) % 2 ? -1 : 1; }

std::vector<BarElement> all_basis(const BarComplex& B, int n_max) {
  std::vector<BarElement> out;
  for (int n = 0; n <= n_max; ++n)
    for (int d = 0; d <= B.max_int(); ++d)
      for (Index i = 0; i < B.dim(n, d); ++i) out.push_back(BarElement{n, d, unit_vector(i)});
  return out;
}

}  // namespace

TEST_CASE("bar bases") {
  BarComplex L(exterior(6, 8), 6);
  for (int p = 0; p <= 3; ++p) {
    CHECK(L.dim(2 * p, p) == 1);
    CHECK(L.format_symbol(L.basis(2 * p, p)[0]).size() == (p ? 2 * p + 1 : 1));
  }
  CHECK(L.dim(3, 1) == 0);
  auto k = std::make_shared<Extension>(GradedAlgebra::residue_field(Field(), 4), 3, 4);
  BarComplex K(k, 3);
  CHECK(K.dim(0, 0) == 1);
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 4; ++d) CHECK(K.dim(n, d) == 0);
  auto R = ring("x", {"x^2"});
  CHECK_THROWS_AS(BarComplex(std::make_shared<Extension>(R, 3, 4), 3), NotConnected);
  CHECK_THROWS_AS(BarComplex(exterior(2, 4), 3), TruncationExceeded);
}

TEST_CASE("bar basis counts against enumeration") {
  auto C = fiber(flagship_model("x,y", {"x^2", "x*y", "y^2"}, 5, 8));
  BarComplex B(C, 4);
  // words of letters with sum (|c|+1) = n and sum internal = d
  for (int n = 0; n <= 5; ++n)
    for (int d = 0; d <= 8; ++d) {
      std::vector<std::vector<std::size_t>> count(n + 1, std::vector<std::size_t>(d + 1, 0));
      count[0][0] = 1;
      for (int m = 1; m <= n; ++m)
        for (int e = 0; e <= d; ++e)
          for (int h = 1; h <= m - 1; ++h)
            for (int f = 0; f <= e; ++f) count[m][e] += C->dim({h, f}) * count[m - h - 1][e - f];
      CHECK(B.dim(n, d) == count[n][d]);
    }
}

TEST_CASE("bar differential squares to zero and respects the filtration") {
  for (auto C : {exterior(5, 6), polynomial_t(5, 8), fiber(flagship_model("x,y", {"x^2", "x*y", "y^2"}, 5, 8)),
                 fiber(flagship_model("x,y", {"x^3", "x^2*y"}, 5, 7))}) {
    BarComplex B(C, 4);
    for (int n = 2; n <= 5; ++n)
      for (int d = 0; d <= B.max_int(); ++d)
        for (Index i = 0; i < B.dim(n, d); ++i) {
          BarElement x{n, d, unit_vector(i)};
          REQUIRE(B.differential(B.differential(x)).is_zero());
          // d' lowers the weight by one, d'' keeps it
          int p = B.weight(B.basis(n, d)[i]);
          for (const auto& [j, c] : B.d_prime(n, d)[i]) CHECK(B.weight(B.basis(n - 1, d)[j]) == p - 1);
          for (const auto& [j, c] : B.d_second(n, d)[i]) CHECK(B.weight(B.basis(n - 1, d)[j]) == p);
        }
  }
}

TEST_CASE("shuffle products") {
  BarComplex L(exterior(6, 8), 6);
  BarElement e = L.symbol(2, 1, L.basis(2, 1)[0]);
  BarElement ee = L.shuffle_product(e, e);
  CHECK(ee == L.scale(2, L.symbol(4, 2, L.basis(4, 2)[0])));
  CHECK(L.divided_power(e, 2) == L.symbol(4, 2, L.basis(4, 2)[0]));
  CHECK(L.shuffle_product(e, L.one()) == e);
  CHECK(L.weight(L.basis(4, 2)[0]) == 2);

  auto C = fiber(flagship_model("x,y", {"x^2", "x*y", "y^2"}, 4, 8));
  BarComplex B(C, 4);
  const Field& F = B.field();
  auto basis = all_basis(B, 3);
  for (const auto& x : basis)
    for (const auto& y : basis) {
      if (x.n + y.n > 5 || x.d + y.d > 8) continue;
      BarElement xy = B.shuffle_product(x, y);
      REQUIRE(xy == B.scale(F.from_int(sign(x.n, y.n)), B.shuffle_product(y, x)));
      // Leibniz
      if (x.n + y.n >= 1) {
        BarElement l = B.differential(xy);
        BarElement r1 = x.n ? B.shuffle_product(B.differential(x), y) : BarElement{x.n + y.n - 1, x.d + y.d, {}};
        BarElement r2 = y.n ? B.scale(F.from_int(sign(x.n, 1)), B.shuffle_product(x, B.differential(y)))
                            : BarElement{x.n + y.n - 1, x.d + y.d, {}};
        REQUIRE(l == B.add(r1, r2));
      }
      for (const auto& z : basis) {
        if (x.n + y.n + z.n > 5 || x.d + y.d + z.d > 8) continue;
        REQUIRE(B.shuffle_product(xy, z) == B.shuffle_product(x, B.shuffle_product(y, z)));
      }
    }
  // gamma identities on even symbols
  for (const auto& x : basis) {
    if (x.n == 0 || x.n % 2 || 2 * x.n > 5 || 2 * x.d > 8) continue;
    CHECK(B.shuffle_product(x, x) == B.scale(2, B.divided_power(x, 2)));
    BarElement y = B.add(x, x);
    CHECK(B.divided_power(y, 2) == B.scale(4, B.divided_power(x, 2)));
  }
  CHECK_THROWS_AS(B.shuffle_product(basis.back(), basis.back()), TruncationExceeded);
}

TEST_CASE("bar homology") {
  BarComplex L(exterior(6, 8), 6);
  for (int n = 0; n <= 6; ++n) CHECK(bar_homology(L, n) == (n % 2 == 0 ? 1u : 0u));
  auto k = std::make_shared<Extension>(GradedAlgebra::residue_field(Field(), 4), 3, 4);
  BarComplex K(k, 3);
  CHECK(bar_homology(K, 0) == 1);
  for (int n = 1; n <= 3; ++n) CHECK(bar_homology(K, n) == 0);
  BarComplex T(polynomial_t(6, 8), 6);
  for (int n = 0; n <= 6; ++n) CHECK(bar_homology(T, n) == (n == 0 || n == 3 ? 1u : 0u));
  CHECK_THROWS_AS(bar_homology(T, 7), TruncationExceeded);
}

TEST_CASE("E1 page") {
  BarComplex L(exterior(5, 8), 5);
  auto E = e1_page(L);
  for (int p = 0; p <= 5; ++p)
    for (int q = 0; p + q <= 5; ++q) CHECK(E.at(p, q) == (p == q ? 1u : 0u));
  auto k = std::make_shared<Extension>(GradedAlgebra::residue_field(Field(), 4), 3, 4);
  auto Ek = e1_page(BarComplex(k, 3));
  CHECK(Ek.ranks.size() == 1);
  CHECK(Ek.at(0, 0) == 1);
  auto C = fiber(flagship_model("x,y", {"x^2", "x*y", "y^2"}, 5, 8));
  BarComplex B(C, 4);
  auto E1 = e1_page(B);
  CHECK(E1.ranks == e1_page_from_bar(B).ranks);
  for (int q = 1; q <= 3; ++q) CHECK(E1.at(1, q) == ind_count(*C, q));
}

TEST_CASE("degeneration and edge maps") {
  BarComplex L(exterior(5, 8), 5);
  auto r = degeneration_check(L, 4);
  CHECK(r.holds);
  auto nu = edge_map(L, 2);
  CHECK(nu.source_dim == 1);
  CHECK(nu.is_isomorphism());
  CHECK(edge_map(L, 1).target_dim == 0);
  CHECK(edge_map(L, 0).source_dim == 0);
  auto k = std::make_shared<Extension>(GradedAlgebra::residue_field(Field(), 4), 3, 4);
  CHECK(degeneration_check(BarComplex(k, 3), 3).holds);

  struct Case {
    std::string vars;
    std::vector<std::string> rels;
    std::vector<long> eps;  // eps_2..eps_4
  };
  for (const auto& c : {Case{"x", {"x^2"}, {1, 0, 0}}, Case{"x,y", {"x^2", "x*y", "y^2"}, {3, 2, 3}}}) {
    auto M = flagship_model(c.vars, c.rels, 5, 8);
    BarComplex B(fiber(M), 4);
    CHECK(degeneration_check(B, 4).holds);
    for (int n = 2; n <= 4; ++n) {
      auto G = gamma_indecomposables(B, n);
      CHECK(static_cast<long>(G.rank()) == c.eps[n - 2]);
      auto e = edge_map(B, n);
      CHECK(e.is_isomorphism());
      CHECK(static_cast<long>(e.source_dim) == c.eps[n - 2]);
    }
  }
  auto M = flagship_model("x,y", {"x^2", "x*y", "y^2"}, 5, 8);
  auto nu2 = edge_map(BarComplex(fiber(M), 4), 2);
  CHECK(nu2.source_dim == 3);
  CHECK(nu2.target_dim == 3);
  CHECK(nu2.rank == 3);
}

TEST_CASE("edge maps are natural") {
  auto P = ring("x,y", {});
  auto P1 = ring("x", {});
  auto R = ring("x,y", {"x^2", "x*y", "y^2"});
  auto T = ring("x", {"x^2"});
  auto M = minimal_model(map(P, R, {"x", "y"}), 5, 8);
  auto M1 = minimal_model(map(P1, T, {"x"}), 5, 8);
  GradedMap beta = make_map(P, P1, {"x", "0"});
  ExtensionMorphism G(*M.ext, *M1.ext, &beta);
  for (std::size_t v = 0; v < M.ext->num_variables(); ++v) {
    Element target = G.apply(M.ext->variable_differential(v));
    auto lift = M1.ext->solve_boundary(target);
    REQUIRE(lift.has_value());
    G.set_image(v, *lift);
  }
  auto C = fiber(M), C1 = fiber(M1);
  ExtensionMorphism g(*C, *C1, nullptr);
  GradedMap aug1 = GradedMap::augmentation(P1);
  for (std::size_t v = 0; v < C->num_variables(); ++v)
    g.set_image(v, M1.ext->transport_base_change(aug1, *C1, G.image(v)));
  BarComplex B(C, 4), B1(C1, 4);
  const Field& F = B.field();
  for (int n = 2; n <= 4; ++n) {
    auto nu = edge_map(B, n), nu1 = edge_map(B1, n);
    auto G0 = gamma_indecomposables(B, n), G1 = gamma_indecomposables(B1, n);
    auto ind = algebra_indecomposables(*C, n - 1), ind1 = algebra_indecomposables(*C1, n - 1);
    for (const auto& [d, q] : G0.blocks) {
      const auto& reps = B.homology(n, d).representatives();
      for (std::size_t c = 0; c < q.dim(); ++c) {
        Accumulator acc;
        for (const auto& [i, x] : q.representatives()[c]) acc.add(F, x, reps[i]);
        BarElement z{n, d, acc.take(F)};
        // around through the bar of the target
        BarElement w = apply_bar_map(B, B1, g, z);
        REQUIRE(B1.differential(w).is_zero());
        SparseVec lhs;
        if (G1.blocks.count(d)) {
          SparseVec hc = B1.homology(n, d).quotient.coordinates(w.coeffs);
          lhs = nu1.blocks.at(d).apply(F, G1.blocks.at(d).coordinates(hc));
        }
        // around through Ind
        SparseVec rhs;
        SparseVec col = nu.blocks.at(d).apply(F, unit_vector(static_cast<Index>(c)));
        if (!col.empty()) {
          Accumulator lift;
          for (const auto& [i, x] : col) lift.add(F, x, ind.at(d).representatives()[i]);
          Element image = g.apply(Element{{n - 1, d}, lift.take(F)});
          if (ind1.count(d)) rhs = ind1.at(d).coordinates(image.coeffs);
        }
        CHECK(lhs == rhs);
      }
    }
  }
}
