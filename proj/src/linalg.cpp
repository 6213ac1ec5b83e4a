#include "tateforge/linalg.hpp"

#include <algorithm>

#include "tateforge/errors.hpp"

namespace tateforge {

Scalar coefficient(const SparseVec& v, Index i) {
  auto it = std::lower_bound(v.begin(), v.end(), i,
                             [](const auto& e, Index k) { return e.first < k; });
  if (it != v.end() && it->first == i) return it->second;
  return Scalar(0);
}

SparseVec unit_vector(Index i) { return SparseVec{{i, Scalar(1)}}; }

SparseVec scaled(const Field& F, const Scalar& a, const SparseVec& v) {
  SparseVec r;
  if (Field::is_zero(a)) return r;
  r.reserve(v.size());
  for (const auto& [i, x] : v) {
    Scalar y = F.mul(a, x);
    if (!Field::is_zero(y)) r.emplace_back(i, std::move(y));
  }
  return r;
}

SparseVec axpy(const Field& F, const SparseVec& x, const Scalar& a, const SparseVec& y) {
  if (Field::is_zero(a)) return x;
  SparseVec r;
  r.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      r.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      Scalar v = F.mul(a, y[j].second);
      if (!Field::is_zero(v)) r.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      Scalar v = x[i].second;
      F.addmul(v, a, y[j].second);
      if (!Field::is_zero(v)) r.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return r;
}

SparseVec negated(const Field& F, const SparseVec& v) {
  SparseVec r;
  r.reserve(v.size());
  for (const auto& [i, x] : v) r.emplace_back(i, F.neg(x));
  return r;
}

void Accumulator::add(const Field& F, const Scalar& a, const SparseVec& v) {
  if (Field::is_zero(a)) return;
  for (const auto& [i, x] : v) {
    Scalar y = F.mul(a, x);
    if (!Field::is_zero(y)) terms_.emplace_back(i, std::move(y));
  }
}

SparseVec Accumulator::take(const Field& F) {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  for (std::size_t k = 0; k < terms_.size();) {
    Index i = terms_[k].first;
    Scalar s = terms_[k].second;
    std::size_t l = k + 1;
    for (; l < terms_.size() && terms_[l].first == i; ++l) s = F.add(s, terms_[l].second);
    if (!Field::is_zero(s)) out.emplace_back(i, std::move(s));
    k = l;
  }
  terms_.clear();
  return out;
}

// ---------------------------------------------------------------- matrices

SparseMatrix SparseMatrix::from_entries(
    const Field& F, std::size_t rows, std::size_t cols,
    const std::vector<std::tuple<std::size_t, std::size_t, Scalar>>& entries) {
  std::vector<Accumulator> acc(rows);
  for (const auto& [r, c, v] : entries) {
    if (r >= rows || c >= cols) throw InvalidInput("matrix entry out of range");
    acc[r].add(static_cast<Index>(c), F.from_rational(v));
  }
  SparseMatrix M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) M.data_[r] = acc[r].take(F);
  return M;
}

SparseMatrix SparseMatrix::from_rows(std::size_t cols, std::vector<SparseVec> rows) {
  SparseMatrix M(rows.size(), cols);
  M.data_ = std::move(rows);
  return M;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, const std::vector<SparseVec>& cols) {
  SparseMatrix M(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : cols[c]) M.data_[r].emplace_back(static_cast<Index>(c), v);
  return M;
}

std::vector<SparseVec> SparseMatrix::column_vectors() const {
  std::vector<SparseVec> cols(cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) cols[c].emplace_back(static_cast<Index>(r), v);
  return cols;
}

SparseMatrix SparseMatrix::transpose() const { return from_rows(rows_, column_vectors()); }

SparseVec SparseMatrix::apply(const Field& F, const SparseVec& v) const {
  SparseVec out;
  for (std::size_t r = 0; r < rows_; ++r) {
    Scalar s(0);
    std::size_t i = 0, j = 0;
    const auto& row = data_[r];
    while (i < row.size() && j < v.size()) {
      if (row[i].first < v[j].first) ++i;
      else if (v[j].first < row[i].first) ++j;
      else {
        F.addmul(s, row[i].second, v[j].second);
        ++i;
        ++j;
      }
    }
    if (!Field::is_zero(s)) out.emplace_back(static_cast<Index>(r), std::move(s));
  }
  return out;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

// ---------------------------------------------------------------- echelon

namespace {

// Rows with unit leading entries and distinct pivots; other rows may still
// have entries in a row's pivot column until back-substitution.
struct SemiEchelon {
  Field F;
  std::vector<SparseVec> rows;
  std::vector<SparseVec> combos;  // only used when tracking
  std::vector<std::int32_t> pivot_row;
  bool track;

  SemiEchelon(const Field& f, std::size_t ambient, bool tracking)
      : F(f), pivot_row(ambient, -1), track(tracking) {}

  void reduce(SparseVec& v, SparseVec* combo) const {
    std::size_t pos = 0;
    while (pos < v.size()) {
      Index c = v[pos].first;
      if (c >= pivot_row.size()) throw InvalidInput("vector index exceeds ambient dimension");
      std::int32_t r = pivot_row[c];
      if (r < 0) {
        ++pos;
        continue;
      }
      Scalar a = F.neg(v[pos].second);
      v = axpy(F, v, a, rows[r]);
      if (combo) *combo = axpy(F, *combo, a, combos[r]);
    }
  }

  bool insert(SparseVec v, SparseVec combo = {}) {
    reduce(v, track ? &combo : nullptr);
    if (v.empty()) return false;
    Scalar lead_inv = F.inv(v.front().second);
    v = scaled(F, lead_inv, v);
    if (track) combo = scaled(F, lead_inv, combo);
    pivot_row[v.front().first] = static_cast<std::int32_t>(rows.size());
    rows.push_back(std::move(v));
    if (track) combos.push_back(std::move(combo));
    return true;
  }

  std::vector<SparseVec> rref() const {
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows[a].front().first < rows[b].front().first; });
    std::vector<SparseVec> out(rows.size());
    std::vector<std::int32_t> final_row(pivot_row.size(), -1);
    for (std::size_t k = order.size(); k-- > 0;) {
      const SparseVec& r = rows[order[k]];
      Accumulator acc;
      for (const auto& [c, v] : r) acc.add(c, v);
      for (std::size_t t = 1; t < r.size(); ++t) {
        std::int32_t f = final_row[r[t].first];
        if (f >= 0) acc.add(F, F.neg(r[t].second), out[f]);
      }
      out[k] = acc.take(F);
      final_row[r.front().first] = static_cast<std::int32_t>(k);
    }
    return out;
  }
};

}  // namespace

// ---------------------------------------------------------------- subspaces

Subspace::Subspace(const Field& F, std::size_t ambient) : F_(F), ambient_(ambient) {}

Subspace Subspace::span(const Field& F, std::size_t ambient, const std::vector<SparseVec>& vectors) {
  SemiEchelon E(F, ambient, false);
  for (const auto& v : vectors) E.insert(v);
  Subspace S(F, ambient);
  S.basis_ = E.rref();
  S.pivot_row_.assign(ambient, -1);
  for (std::size_t i = 0; i < S.basis_.size(); ++i) {
    S.pivots_.push_back(S.basis_[i].front().first);
    S.pivot_row_[S.pivots_.back()] = static_cast<std::int32_t>(i);
  }
  return S;
}

Subspace Subspace::full(const Field& F, std::size_t ambient) {
  std::vector<SparseVec> e;
  e.reserve(ambient);
  for (std::size_t i = 0; i < ambient; ++i) e.push_back(unit_vector(static_cast<Index>(i)));
  return span(F, ambient, e);
}

SparseVec Subspace::reduce(const SparseVec& v) const {
  if (basis_.empty()) return v;
  Accumulator acc;
  bool touched = false;
  for (const auto& [c, x] : v) {
    if (c >= ambient_) throw InvalidInput("vector index exceeds ambient dimension");
    std::int32_t r = pivot_row_[c];
    if (r >= 0) {
      acc.add(F_, F_.neg(x), basis_[r]);
      touched = true;
    }
  }
  if (!touched) return v;
  for (const auto& [c, x] : v) acc.add(c, x);
  return acc.take(F_);
}

bool Subspace::contains(const Subspace& s) const {
  for (const auto& b : s.basis()) {
    if (!contains(b)) return false;
  }
  return true;
}

SparseVec Subspace::coordinates(const SparseVec& v) const {
  SparseVec out;
  for (const auto& [c, x] : v) {
    std::int32_t r = c < pivot_row_.size() ? pivot_row_[c] : -1;
    if (r >= 0) out.emplace_back(static_cast<Index>(r), x);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Subspace Subspace::sum(const Subspace& o) const {
  std::vector<SparseVec> all = basis_;
  all.insert(all.end(), o.basis_.begin(), o.basis_.end());
  return span(F_, ambient_, all);
}

QuotientSpace::QuotientSpace(const Subspace& amb, const Subspace& sub) : sub_(sub) {
  if (amb.ambient() != sub.ambient()) throw SubNotContained("ambient dimensions differ");
  if (!amb.contains(sub)) throw SubNotContained("subspace is not contained in the ambient space");
  std::vector<SparseVec> reduced;
  reduced.reserve(amb.dim());
  for (const auto& b : amb.basis()) {
    SparseVec r = sub.reduce(b);
    if (!r.empty()) reduced.push_back(std::move(r));
  }
  reps_ = Subspace::span(amb.field(), amb.ambient(), reduced);
}

SparseVec QuotientSpace::coordinates(const SparseVec& v) const {
  return reps_.coordinates(sub_.reduce(v));
}

std::size_t rank(const Field& F, const SparseMatrix& M) {
  SemiEchelon E(F, M.cols(), false);
  for (const auto& r : M.row_vectors()) E.insert(r);
  return E.rows.size();
}

Subspace kernel_basis(const Field& F, const SparseMatrix& M) {
  Subspace R = Subspace::span(F, M.cols(), M.row_vectors());
  std::vector<bool> is_pivot(M.cols(), false);
  for (Index p : R.pivots()) is_pivot[p] = true;
  std::vector<SparseVec> ker(M.cols());
  for (std::size_t i = 0; i < R.dim(); ++i) {
    for (const auto& [c, v] : R.basis()[i]) {
      if (!is_pivot[c]) ker[c].emplace_back(R.pivots()[i], F.neg(v));
    }
  }
  std::vector<SparseVec> vecs;
  for (std::size_t f = 0; f < M.cols(); ++f) {
    if (is_pivot[f]) continue;
    SparseVec k = std::move(ker[f]);
    k.emplace_back(static_cast<Index>(f), Scalar(1));
    std::sort(k.begin(), k.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    vecs.push_back(std::move(k));
  }
  return Subspace::span(F, M.cols(), vecs);
}

Subspace image(const Field& F, const SparseMatrix& M) {
  return Subspace::span(F, M.rows(), M.column_vectors());
}

std::vector<SparseVec> quotient_basis(const Subspace& amb, const Subspace& sub) {
  return QuotientSpace(amb, sub).representatives();
}

// ---------------------------------------------------------------- solver

LinearSolver::LinearSolver(const Field& F, std::size_t ambient, const std::vector<SparseVec>& cols,
                           bool reverse)
    : F_(F) {
  SemiEchelon E(F, ambient, true);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::size_t i = reverse ? cols.size() - 1 - k : k;
    E.insert(cols[i], unit_vector(static_cast<Index>(i)));
  }
  rows_ = std::move(E.rows);
  combos_ = std::move(E.combos);
  pivot_row_ = std::move(E.pivot_row);
}

std::optional<SparseVec> LinearSolver::solve(const SparseVec& b) const {
  SparseVec v = b;
  SparseVec x;
  std::size_t pos = 0;
  while (pos < v.size()) {
    Index c = v[pos].first;
    if (c >= pivot_row_.size()) return std::nullopt;
    std::int32_t r = pivot_row_[c];
    if (r < 0) {
      ++pos;
      continue;
    }
    Scalar a = v[pos].second;
    v = axpy(F_, v, F_.neg(a), rows_[r]);
    x = axpy(F_, x, a, combos_[r]);
  }
  if (!v.empty()) return std::nullopt;
  return x;
}

}  // namespace tateforge
