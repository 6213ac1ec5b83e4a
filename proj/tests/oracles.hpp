#pragma once

// Independent reference computations used to validate the engine. They use
// only the ring and linalg layers, never the DG algebra code.

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "tateforge/linalg.hpp"
#include "tateforge/ring.hpp"

namespace oracle {

using namespace tateforge;

// Betti numbers b_0..b_N of a minimal graded free resolution of k over R,
// built degree by degree: generators of each syzygy module are counted as
// dim M_d - dim (m M)_d. Exact for generators in internal degree <= D.
inline std::vector<std::vector<std::size_t>> resolution_betti_bigraded(const GradedAlgebra& R, int N, int D) {
  const Field& F = R.field();
  // shifts of the current free module F_n and the syzygy module M inside it
  std::vector<int> shifts = {0};
  auto offsets = [&](const std::vector<int>& sh, int d) {
    std::vector<std::size_t> off(sh.size() + 1, 0);
    for (std::size_t j = 0; j < sh.size(); ++j) off[j + 1] = off[j] + (d >= sh[j] ? R.dim(d - sh[j]) : 0);
    return off;
  };
  // multiplication by a base vector of degree e on F_n in degree d
  auto mult = [&](const std::vector<int>& sh, int e, const SparseVec& r, int d, const SparseVec& v) {
    auto off = offsets(sh, d), off2 = offsets(sh, d + e);
    Accumulator acc;
    for (const auto& [i, c] : v) {
      std::size_t j = std::upper_bound(off.begin(), off.end(), static_cast<std::size_t>(i)) - off.begin() - 1;
      SparseVec p = R.multiply(d - sh[j], unit_vector(static_cast<Index>(i - off[j])), e, r);
      for (const auto& [k, x] : p) acc.add(static_cast<Index>(off2[j] + k), F.mul(c, x));
    }
    return acc.take(F);
  };
  std::vector<Subspace> M(D + 1);
  // M_0 = maximal ideal of R inside F_0 = R
  for (int d = 0; d <= D; ++d) M[d] = d == 0 ? Subspace(F, 1) : Subspace::full(F, R.dim(d));
  std::vector<std::vector<std::size_t>> betti(1, std::vector<std::size_t>(D + 1, 0));
  betti[0][0] = 1;
  for (int n = 1; n <= N; ++n) {
    // minimal generators of M
    std::vector<int> gens_deg;
    std::vector<SparseVec> gens;
    for (int d = 0; d <= D; ++d) {
      std::vector<SparseVec> mm;
      for (std::size_t v = 0; v < R.num_variables(); ++v) {
        int w = R.variables()[v].degree;
        if (d - w < 0) continue;
        for (const auto& b : M[d - w].basis()) mm.push_back(mult(shifts, w, R.variable_element(v), d - w, b));
      }
      Subspace mM = Subspace::span(F, M[d].ambient(), mm);
      for (const auto& g : quotient_basis(M[d], mM)) {
        gens_deg.push_back(d);
        gens.push_back(g);
      }
    }
    betti.emplace_back(D + 1, 0);
    for (int d : gens_deg) ++betti.back()[d];
    if (n == N) break;
    // syzygies of the generators: kernel of F_n -> F_{n-1} degreewise
    std::vector<Subspace> K(D + 1);
    for (int d = 0; d <= D; ++d) {
      auto off = offsets(gens_deg, d);
      std::vector<SparseVec> cols;
      for (std::size_t j = 0; j < gens.size(); ++j) {
        if (d < gens_deg[j]) continue;
        for (std::size_t b = 0; b < R.dim(d - gens_deg[j]); ++b)
          cols.push_back(mult(shifts, d - gens_deg[j], unit_vector(static_cast<Index>(b)), gens_deg[j], gens[j]));
      }
      std::size_t rows = offsets(shifts, d).back();
      K[d] = kernel_basis(F, SparseMatrix::from_columns(rows, cols));
      (void)off;
    }
    shifts = gens_deg;
    M = std::move(K);
  }
  return betti;
}

inline std::vector<std::size_t> resolution_betti(const GradedAlgebra& R, int N, int D) {
  std::vector<std::size_t> out;
  for (const auto& row : resolution_betti_bigraded(R, N, D)) {
    std::size_t s = 0;
    for (auto x : row) s += x;
    out.push_back(s);
  }
  return out;
}

// Bigraded version of product_series: e[n][d] variables of bidegree (n, d);
// coefficient [n][d] of the product, for n <= N and d <= D.
inline std::vector<std::vector<mpz_class>> product_series_bigraded(const std::vector<std::vector<std::size_t>>& e, int N,
                                                                   int D) {
  std::vector<std::vector<mpz_class>> s(N + 1, std::vector<mpz_class>(D + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i < static_cast<int>(e.size()) && i <= N; ++i)
    for (int j = 0; j < static_cast<int>(e[i].size()) && j <= D; ++j)
      for (std::size_t k = 0; k < e[i][j]; ++k) {
        if (i % 2) {
          for (int n = N; n >= i; --n)
            for (int d = D; d >= j; --d) s[n][d] += s[n - i][d - j];
        } else {
          for (int n = i; n <= N; ++n)
            for (int d = j; d <= D; ++d) s[n][d] += s[n - i][d - j];
        }
      }
  return s;
}

// Coefficients of prod_{i odd} (1 + t^i)^{e_i} * prod_{i even} (1 - t^i)^{-e_i}
// up to t^N, where e[i-1] = e_i.
inline std::vector<mpz_class> product_series(const std::vector<long>& e, int N) {
  std::vector<mpz_class> s(N + 1, 0);
  s[0] = 1;
  for (int i = 1; i <= static_cast<int>(e.size()); ++i) {
    for (long k = 0; k < e[i - 1]; ++k) {
      if (i % 2) {
        for (int d = N; d >= i; --d) s[d] += s[d - i];
      } else {
        for (int d = i; d <= N; ++d) s[d] += s[d - i];
      }
    }
  }
  return s;
}

// Inverse of product_series: the deviations forced by Betti numbers b_0..b_N.
inline std::vector<long> deviations_from_betti(const std::vector<std::size_t>& b) {
  const int N = static_cast<int>(b.size()) - 1;
  std::vector<long> e;
  for (int n = 1; n <= N; ++n) {
    e.push_back(0);
    auto s = product_series(e, N);
    // the factor for e_n contributes e_n * t^n at order n
    mpz_class diff = mpz_class(static_cast<unsigned long>(b[n])) - s[n];
    e.back() = diff.get_si();
  }
  return e;
}

// Textbook dense elimination, independent of the sparse kernels.
inline std::size_t dense_rank(const Field& F, std::vector<std::vector<Scalar>> a) {
  std::size_t r = 0;
  const std::size_t n = a.size(), m = n ? a[0].size() : 0;
  for (std::size_t c = 0; c < m && r < n; ++c) {
    std::size_t p = r;
    while (p < n && Field::is_zero(a[p][c])) ++p;
    if (p == n) continue;
    std::swap(a[p], a[r]);
    Scalar inv = F.inv(a[r][c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || Field::is_zero(a[i][c])) continue;
      Scalar f = F.mul(a[i][c], inv);
      for (std::size_t j = 0; j < m; ++j) a[i][j] = F.sub(a[i][j], F.mul(f, a[r][j]));
    }
    ++r;
  }
  return r;
}

}  // namespace oracle
