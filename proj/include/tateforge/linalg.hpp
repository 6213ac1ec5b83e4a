#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "tateforge/field.hpp"

namespace tateforge {

using Index = std::uint32_t;

// Sorted by index, no zero values.
using SparseVec = std::vector<std::pair<Index, Scalar>>;

Scalar coefficient(const SparseVec& v, Index i);
SparseVec unit_vector(Index i);
SparseVec scaled(const Field& F, const Scalar& a, const SparseVec& v);
// x + a*y
SparseVec axpy(const Field& F, const SparseVec& x, const Scalar& a, const SparseVec& y);
SparseVec negated(const Field& F, const SparseVec& v);

// Collects (index, value) terms in any order and sums duplicates.
class Accumulator {
 public:
  void add(Index i, const Scalar& v) {
    if (sgn(v) != 0) terms_.emplace_back(i, v);
  }
  void add(const Field& F, const Scalar& a, const SparseVec& v);
  SparseVec take(const Field& F);
  bool empty() const { return terms_.empty(); }

 private:
  SparseVec terms_;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  // Duplicate (row, col) pairs are summed; zero results are dropped.
  static SparseMatrix from_entries(const Field& F, std::size_t rows, std::size_t cols,
                                   const std::vector<std::tuple<std::size_t, std::size_t, Scalar>>& entries);
  static SparseMatrix from_rows(std::size_t cols, std::vector<SparseVec> rows);
  static SparseMatrix from_columns(std::size_t rows, const std::vector<SparseVec>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<SparseVec>& row_vectors() const { return data_; }
  std::vector<SparseVec> column_vectors() const;
  SparseMatrix transpose() const;
  SparseVec apply(const Field& F, const SparseVec& v) const;
  std::size_t nonzeros() const;
  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<SparseVec> data_;
};

// Row space in reduced row echelon form; the basis is canonical.
class Subspace {
 public:
  Subspace() = default;
  Subspace(const Field& F, std::size_t ambient);

  static Subspace span(const Field& F, std::size_t ambient, const std::vector<SparseVec>& vectors);
  static Subspace full(const Field& F, std::size_t ambient);

  const Field& field() const { return F_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<SparseVec>& basis() const { return basis_; }
  const std::vector<Index>& pivots() const { return pivots_; }

  // Remainder of v modulo the subspace: the unique vector congruent to v
  // that vanishes on every pivot column.
  SparseVec reduce(const SparseVec& v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  bool contains(const Subspace& s) const;
  // coordinates of v in the echelon basis; v must lie in the subspace
  SparseVec coordinates(const SparseVec& v) const;
  Subspace sum(const Subspace& o) const;

  bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

 private:
  Field F_;
  std::size_t ambient_ = 0;
  std::vector<SparseVec> basis_;
  std::vector<Index> pivots_;
  std::vector<std::int32_t> pivot_row_;
};

// Canonical complement data for amb/sub: representatives are the echelon
// basis of the vectors of amb reduced modulo sub.
class QuotientSpace {
 public:
  QuotientSpace() = default;
  QuotientSpace(const Subspace& amb, const Subspace& sub);

  std::size_t dim() const { return reps_.dim(); }
  const std::vector<SparseVec>& representatives() const { return reps_.basis(); }
  const Subspace& sub() const { return sub_; }
  // coordinates of the coset of v (v in amb) in the representative basis
  SparseVec coordinates(const SparseVec& v) const;
  bool is_zero_class(const SparseVec& v) const { return sub_.contains(v); }

 private:
  Subspace sub_;
  Subspace reps_;
};

std::size_t rank(const Field& F, const SparseMatrix& M);
Subspace kernel_basis(const Field& F, const SparseMatrix& M);
Subspace image(const Field& F, const SparseMatrix& M);
std::vector<SparseVec> quotient_basis(const Subspace& amb, const Subspace& sub);

// Solves sum_i x_i cols[i] = b. The particular solution is determined by
// the column order; reverse = true scans columns from the end, which gives a
// different (equally valid) solution when the system is underdetermined.
class LinearSolver {
 public:
  LinearSolver(const Field& F, std::size_t ambient, const std::vector<SparseVec>& cols,
               bool reverse = false);
  std::optional<SparseVec> solve(const SparseVec& b) const;
  std::size_t rank() const { return rows_.size(); }

 private:
  Field F_;
  std::vector<SparseVec> rows_;
  std::vector<SparseVec> combos_;
  std::vector<std::int32_t> pivot_row_;
};

}  // namespace tateforge
