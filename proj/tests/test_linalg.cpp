#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tateforge/errors.hpp"
#include "tateforge/linalg.hpp"

using namespace tateforge;

namespace {

SparseMatrix random_matrix(const Field& F, std::mt19937& rng, std::size_t rows, std::size_t cols,
                           std::vector<std::vector<Scalar>>& dense) {
  std::uniform_int_distribution<int> coin(0, 3), val(-5, 5);
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> entries;
  dense.assign(rows, std::vector<Scalar>(cols, Scalar(0)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (coin(rng) == 0) {
        Scalar v = F.from_int(val(rng));
        entries.emplace_back(i, j, v);
        dense[i][j] = v;
      }
  return SparseMatrix::from_entries(F, rows, cols, entries);
}

}  // namespace

TEST_CASE("rank of small matrices") {
  Field Q;
  CHECK(rank(Q, SparseMatrix(0, 0)) == 0);
  CHECK(rank(Q, SparseMatrix::from_entries(Q, 2, 2, {{0, 0, 1}, {1, 1, 1}})) == 2);
  CHECK(rank(Q, SparseMatrix::from_entries(Q, 2, 2, {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 4}})) == 1);
}

TEST_CASE("kernel basis examples") {
  Field Q, F2(2);
  auto I3 = SparseMatrix::from_entries(Q, 3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
  CHECK(kernel_basis(Q, I3).dim() == 0);
  CHECK(kernel_basis(Q, SparseMatrix(2, 3)).dim() == 3);
  auto K = kernel_basis(F2, SparseMatrix::from_entries(F2, 1, 2, {{0, 0, 1}, {0, 1, 1}}));
  REQUIRE(K.dim() == 1);
  CHECK(K.basis()[0] == SparseVec{{0, Scalar(1)}, {1, Scalar(1)}});
}

TEST_CASE("quotient basis examples") {
  Field Q;
  auto full2 = Subspace::full(Q, 2);
  CHECK(quotient_basis(full2, Subspace(Q, 2)).size() == 2);
  CHECK(quotient_basis(full2, full2).empty());
  auto sub = Subspace::span(Q, 3, {SparseVec{{0, Scalar(1)}, {1, Scalar(1)}}});
  auto reps = quotient_basis(Subspace::full(Q, 3), sub);
  REQUIRE(reps.size() == 2);
  // complement of e1+e2 by brute force: the reps with e1+e2 span k^3
  std::vector<SparseVec> all = reps;
  all.push_back(sub.basis()[0]);
  CHECK(Subspace::span(Q, 3, all).dim() == 3);
  CHECK_THROWS_AS(QuotientSpace(Subspace::span(Q, 3, {unit_vector(0)}), sub), SubNotContained);
}

TEST_CASE("rank-nullity and dense oracle over Q and F_p") {
  std::mt19937 rng(12345);
  for (unsigned p : {0u, 2u, 3u, 7u}) {
    Field F = p ? Field(p) : Field();
    for (int t = 0; t < 25; ++t) {
      std::uniform_int_distribution<int> sz(1, 50);
      std::size_t r = sz(rng), c = sz(rng);
      std::vector<std::vector<Scalar>> dense;
      auto M = random_matrix(F, rng, r, c, dense);
      std::size_t rk = rank(F, M);
      CHECK(rk == oracle::dense_rank(F, dense));
      auto K = kernel_basis(F, M);
      CHECK(rk + K.dim() == c);
      for (const auto& v : K.basis()) CHECK(M.apply(F, v).empty());
    }
  }
}

TEST_CASE("echelon bases are canonical under row permutation") {
  Field F(5);
  std::mt19937 rng(7);
  std::vector<std::vector<Scalar>> dense;
  auto M = random_matrix(F, rng, 12, 9, dense);
  auto rows = M.row_vectors();
  auto S1 = Subspace::span(F, 9, rows);
  std::shuffle(rows.begin(), rows.end(), rng);
  auto S2 = Subspace::span(F, 9, rows);
  CHECK(S1 == S2);
}

TEST_CASE("linear solver finds preimages") {
  Field Q;
  std::vector<SparseVec> cols = {{{0, Scalar(1)}}, {{0, Scalar(1)}, {1, Scalar(1)}}, {{1, Scalar(2)}}};
  for (bool rev : {false, true}) {
    LinearSolver S(Q, 2, cols, rev);
    SparseVec b{{0, Scalar(3)}, {1, Scalar(4)}};
    auto x = S.solve(b);
    REQUIRE(x.has_value());
    Accumulator acc;
    for (auto& [i, c] : *x) acc.add(Q, c, cols[i]);
    CHECK(acc.take(Q) == b);
  }
  LinearSolver S(Q, 3, cols);
  CHECK_FALSE(S.solve(SparseVec{{2, Scalar(1)}}).has_value());
}
