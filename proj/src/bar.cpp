#include "tateforge/bar.hpp"

#include <algorithm>
#include <functional>

#include "tateforge/errors.hpp"
#include "tateforge/parallel.hpp"

namespace tateforge {

namespace {

const std::vector<BarComplex::Symbol> kNoSymbols;
const std::vector<SparseVec> kNoColumns;

int parity_sign(long e) { return e % 2 ? -1 : 1; }

// Emits every shuffle of the given words with its Koszul sign, where letter
// u has degree deg(u). With ordered_first, word k may only start after word
// k-1 has started (one representative per orbit of identical copies).
void shuffles(const std::vector<std::vector<std::uint32_t>>& words, const std::function<int(std::uint32_t)>& deg,
              bool ordered_first, const std::function<void(const std::vector<std::uint32_t>&, int)>& emit) {
  const std::size_t k = words.size();
  std::vector<std::size_t> pos(k, 0);
  std::vector<long> remaining(k, 0);
  std::size_t total = 0;
  for (std::size_t w = 0; w < k; ++w) {
    for (auto u : words[w]) remaining[w] += deg(u);
    total += words[w].size();
  }
  std::vector<std::uint32_t> out;
  out.reserve(total);
  std::function<void(int)> rec = [&](int sign) {
    if (out.size() == total) {
      emit(out, sign);
      return;
    }
    long before = 0;
    for (std::size_t w = 0; w < k; ++w) {
      if (pos[w] < words[w].size() && !(ordered_first && pos[w] == 0 && w > 0 && pos[w - 1] == 0)) {
        std::uint32_t u = words[w][pos[w]];
        int s = sign * parity_sign(static_cast<long>(deg(u)) * before);
        out.push_back(u);
        ++pos[w];
        remaining[w] -= deg(u);
        rec(s);
        remaining[w] += deg(u);
        --pos[w];
        out.pop_back();
      }
      before += remaining[w];
    }
  };
  rec(1);
}

}  // namespace

BarComplex::BarComplex(std::shared_ptr<const Extension> C, int deg_max) : C_(std::move(C)), deg_max_(deg_max) {
  if (!C_->base().is_field()) throw NotConnected("bar construction needs an algebra over the residue field");
  if (deg_max < 0) throw InvalidInput("negative bar truncation");
  if (C_->max_hom() < deg_max)
    throw TruncationExceeded("algebra is carried to homological degree " + std::to_string(C_->max_hom()) +
                             " but the bar needs " + std::to_string(deg_max));
  D_ = C_->max_int();
  for (int h = 1; h <= deg_max_; ++h)
    for (int e = 0; e <= D_; ++e) {
      Bidegree bd{h, e};
      for (Index i = 0; i < C_->dim(bd); ++i) {
        letter_id_.emplace(std::make_pair(bd, i), static_cast<std::uint32_t>(letters_.size()));
        letters_.push_back(Letter{bd, i});
      }
    }
  const int top = deg_max_ + 1;
  for (int n = 0; n <= top; ++n)
    for (int d = 0; d <= D_; ++d) cells_[{n, d}];
  for (int n = 0; n <= top; ++n) {
    parallel_for(static_cast<std::size_t>(D_ + 1), [&](std::size_t dd) {
      const int d = static_cast<int>(dd);
      Cell& c = cells_.at({n, d});
      if (n == 0) {
        if (d == 0) c.symbols.push_back({});
      } else {
        for (std::uint32_t id = 0; id < letters_.size(); ++id) {
          const Letter& L = letters_[id];
          int rn = n - L.bd.hom - 1, rd = d - L.bd.internal;
          if (rn < 0 || rd < 0) continue;
          for (const auto& s : cells_.at({rn, rd}).symbols) {
            Symbol t;
            t.reserve(s.size() + 1);
            t.push_back(id);
            t.insert(t.end(), s.begin(), s.end());
            c.symbols.push_back(std::move(t));
          }
        }
        std::stable_sort(c.symbols.begin(), c.symbols.end(),
                         [](const Symbol& a, const Symbol& b) { return a.size() < b.size(); });
      }
      c.weight_offset.assign(top + 2, 0);
      for (const auto& s : c.symbols) ++c.weight_offset[s.size() + 1];
      for (int p = 1; p <= top + 1; ++p) c.weight_offset[p] += c.weight_offset[p - 1];
      for (std::size_t i = 0; i < c.symbols.size(); ++i) c.index.emplace(key(c.symbols[i]), static_cast<Index>(i));
    });
  }
  const Field& F = field();
  for (int n = 1; n <= top; ++n) {
    parallel_for(static_cast<std::size_t>(D_ + 1), [&](std::size_t dd) {
      const int d = static_cast<int>(dd);
      Cell& c = cells_.at({n, d});
      for (const auto& s : c.symbols) {
        const int p = static_cast<int>(s.size());
        std::vector<Element> xs;
        for (auto u : s) xs.push_back(letter_element(u));
        Accumulator a1, a2;
        long prefix = 0;
        for (int j = 1; j <= p; ++j) {
          const Element& cj = xs[j - 1];
          // d'': (-1)^(|c_1|+...+|c_{j-1}| + j) [.. d(c_j) ..]
          if (cj.bd.hom >= 2) {
            Element dc = C_->differential(cj);
            if (!dc.is_zero()) {
              std::vector<Element> w = xs;
              w[j - 1] = dc;
              add_word(a2, n - 1, d, F.from_int(parity_sign(prefix + j)), w);
            }
          }
          prefix += cj.bd.hom;
          // d': (-1)^(|c_1|+...+|c_j| + j) [.. c_j c_{j+1} ..]
          if (j < p) {
            Element prod = C_->multiply(cj, xs[j]);
            if (!prod.is_zero()) {
              std::vector<Element> w;
              for (int i = 0; i < p; ++i) {
                if (i == j - 1)
                  w.push_back(prod);
                else if (i != j)
                  w.push_back(xs[i]);
              }
              add_word(a1, n - 1, d, F.from_int(parity_sign(prefix + j)), w);
            }
          }
        }
        c.dp.push_back(a1.take(F));
        c.ds.push_back(a2.take(F));
      }
    });
  }
}

std::string BarComplex::key(const Symbol& s) {
  std::string k;
  k.reserve(s.size() * 4);
  for (auto u : s) k.append(reinterpret_cast<const char*>(&u), sizeof(u));
  return k;
}

const BarComplex::Cell& BarComplex::cell(int n, int d) const {
  auto it = cells_.find({n, d});
  if (it == cells_.end())
    throw TruncationExceeded("bar cell (" + std::to_string(n) + "," + std::to_string(d) + ") is out of range");
  return it->second;
}

Element BarComplex::letter_element(std::uint32_t id) const { return C_->monomial(letters_[id].bd, letters_[id].idx); }

std::size_t BarComplex::dim(int n, int d) const {
  auto it = cells_.find({n, d});
  return it == cells_.end() ? 0 : it->second.symbols.size();
}

std::size_t BarComplex::dim(int n, int p, int d) const {
  auto [b, e] = weight_range(n, p, d);
  return e - b;
}

const std::vector<BarComplex::Symbol>& BarComplex::basis(int n, int d) const {
  auto it = cells_.find({n, d});
  return it == cells_.end() ? kNoSymbols : it->second.symbols;
}

std::pair<std::size_t, std::size_t> BarComplex::weight_range(int n, int p, int d) const {
  auto it = cells_.find({n, d});
  if (it == cells_.end() || p < 0 || p + 1 >= static_cast<int>(it->second.weight_offset.size())) return {0, 0};
  return {it->second.weight_offset[p], it->second.weight_offset[p + 1]};
}

std::optional<Index> BarComplex::index_of(int n, int d, const Symbol& s) const {
  auto it = cells_.find({n, d});
  if (it == cells_.end()) return std::nullopt;
  auto jt = it->second.index.find(key(s));
  if (jt == it->second.index.end()) return std::nullopt;
  return jt->second;
}

std::string BarComplex::format_symbol(const Symbol& s) const {
  if (s.empty()) return "1";
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "|";
    out += C_->monomial_name(letters_[s[i]].bd, letters_[s[i]].idx);
  }
  return out + "]";
}

std::string BarComplex::format(const BarElement& x) const {
  if (x.coeffs.empty()) return "0";
  const auto& b = basis(x.n, x.d);
  std::string s;
  bool first = true;
  for (const auto& [i, c] : x.coeffs) {
    std::string cs = field().format(c);
    bool neg = cs[0] == '-';
    if (neg) cs = cs.substr(1);
    s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    s += (cs == "1" ? "" : cs + "*") + format_symbol(b.at(i));
  }
  return s;
}

void BarComplex::add_word(Accumulator& acc, int n, int d, const Scalar& c, const std::vector<Element>& xs) const {
  const Field& F = field();
  const Cell& target = cell(n, d);
  Symbol s(xs.size());
  std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t i, const Scalar& coef) {
    if (i == xs.size()) {
      auto it = target.index.find(key(s));
      if (it == target.index.end()) throw TruncationExceeded("bar word outside the enumerated cell");
      acc.add(it->second, coef);
      return;
    }
    for (const auto& [idx, v] : xs[i].coeffs) {
      s[i] = letter_id_.at({xs[i].bd, idx});
      rec(i + 1, F.mul(coef, v));
    }
  };
  rec(0, c);
}

const std::vector<SparseVec>& BarComplex::d_prime(int n, int d) const {
  auto it = cells_.find({n, d});
  return it == cells_.end() ? kNoColumns : it->second.dp;
}

const std::vector<SparseVec>& BarComplex::d_second(int n, int d) const {
  auto it = cells_.find({n, d});
  return it == cells_.end() ? kNoColumns : it->second.ds;
}

BarElement BarComplex::differential(const BarElement& x) const {
  const Field& F = field();
  const Cell& c = cell(x.n, x.d);
  BarElement out{x.n - 1, x.d, {}};
  if (x.n == 0) return BarElement{0, x.d, {}};
  Accumulator acc;
  for (const auto& [i, v] : x.coeffs) {
    acc.add(F, v, c.dp.at(i));
    acc.add(F, v, c.ds.at(i));
  }
  out.coeffs = acc.take(F);
  return out;
}

BarElement BarComplex::symbol(int n, int d, const Symbol& s) const {
  auto i = index_of(n, d, s);
  if (!i) throw InvalidInput("symbol " + format_symbol(s) + " is not in cell (" + std::to_string(n) + "," + std::to_string(d) + ")");
  return BarElement{n, d, unit_vector(*i)};
}

BarElement BarComplex::add(const BarElement& a, const BarElement& b) const {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.n != b.n || a.d != b.d) throw InhomogeneousElement("adding bar elements of different degrees");
  return BarElement{a.n, a.d, axpy(field(), a.coeffs, 1, b.coeffs)};
}

BarElement BarComplex::scale(const Scalar& c, const BarElement& a) const {
  return BarElement{a.n, a.d, scaled(field(), c, a.coeffs)};
}

BarElement BarComplex::word(const std::vector<Element>& xs) const {
  int n = 0, d = 0;
  for (const auto& x : xs) {
    if (x.bd.hom < 1) throw InvalidInput("bar letters need positive degree");
    n += x.bd.hom + 1;
    d += x.bd.internal;
  }
  Accumulator acc;
  add_word(acc, n, d, 1, xs);
  return BarElement{n, d, acc.take(field())};
}

BarElement BarComplex::shuffle_product(const BarElement& a, const BarElement& b) const {
  const int n = a.n + b.n, d = a.d + b.d;
  const Cell& target = cell(n, d);
  const Field& F = field();
  const auto& ba = basis(a.n, a.d);
  const auto& bb = basis(b.n, b.d);
  auto deg = [this](std::uint32_t u) { return letter_degree(u) + 1; };
  Accumulator acc;
  for (const auto& [i, x] : a.coeffs)
    for (const auto& [j, y] : b.coeffs) {
      const Scalar c = F.mul(x, y);
      shuffles({ba.at(i), bb.at(j)}, deg, false, [&](const std::vector<std::uint32_t>& s, int sign) {
        acc.add(target.index.at(key(s)), sign > 0 ? c : F.neg(c));
      });
    }
  return BarElement{n, d, acc.take(F)};
}

BarElement BarComplex::divided_power(const BarElement& x, int j) const {
  if (x.n <= 0 || x.n % 2 != 0) throw InvalidInput("divided powers need even positive bar degree");
  if (j < 0) throw InvalidInput("negative divided power");
  if (j == 0) return one();
  if (j == 1) return x;
  cell(j * x.n, j * x.d);
  const Field& F = field();
  const auto& bx = basis(x.n, x.d);
  auto deg = [this](std::uint32_t u) { return letter_degree(u) + 1; };
  // gamma_m of a single symbol: shuffles of m copies, one per orbit
  auto gamma_symbol = [&](Index i, int m) {
    if (m == 0) return one();
    const Cell& target = cell(m * x.n, m * x.d);
    Accumulator acc;
    std::vector<std::vector<std::uint32_t>> copies(m, bx.at(i));
    shuffles(copies, deg, true, [&](const std::vector<std::uint32_t>& s, int sign) {
      acc.add(target.index.at(key(s)), F.from_int(sign));
    });
    return BarElement{m * x.n, m * x.d, acc.take(F)};
  };
  std::vector<BarElement> g(j + 1);
  g[0] = one();
  for (int k = 1; k <= j; ++k) g[k] = BarElement{k * x.n, k * x.d, {}};
  for (const auto& [i, c] : x.coeffs) {
    std::vector<BarElement> term(j + 1);
    for (int m = 0; m <= j; ++m) term[m] = scale(F.pow(c, m), gamma_symbol(i, m));
    std::vector<BarElement> next(j + 1);
    for (int k = 0; k <= j; ++k) {
      BarElement sum{k * x.n, k * x.d, {}};
      for (int m = 0; m <= k; ++m) {
        if (g[k - m].is_zero() || term[m].is_zero()) continue;
        sum = add(sum, shuffle_product(g[k - m], term[m]));
      }
      next[k] = sum;
    }
    g = std::move(next);
  }
  return g[j];
}

const HomologyData& BarComplex::homology(int n, int d) const {
  if (n < 0 || n > deg_max_) throw TruncationExceeded("bar homology in degree " + std::to_string(n));
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = homology_.find({n, d});
    if (it != homology_.end()) return *it->second;
  }
  const Field& F = field();
  const std::size_t dim_nd = dim(n, d);
  auto h = std::make_unique<HomologyData>();
  if (n == 0) {
    h->cycles = Subspace::full(F, dim_nd);
  } else {
    std::vector<SparseVec> cols;
    const Cell& c = cell(n, d);
    for (std::size_t i = 0; i < c.symbols.size(); ++i) cols.push_back(axpy(F, c.dp[i], 1, c.ds[i]));
    h->cycles = kernel_basis(F, SparseMatrix::from_columns(dim(n - 1, d), cols));
  }
  {
    std::vector<SparseVec> cols;
    const Cell& c = cell(n + 1, d);
    for (std::size_t i = 0; i < c.symbols.size(); ++i) cols.push_back(axpy(F, c.dp[i], 1, c.ds[i]));
    h->boundaries = Subspace::span(F, dim_nd, cols);
  }
  h->quotient = QuotientSpace(h->cycles, h->boundaries);
  std::lock_guard<std::mutex> lk(mu_);
  auto [it, fresh] = homology_.emplace(std::make_pair(n, d), std::move(h));
  return *it->second;
}

std::size_t SpectralPage::at(int p, int q) const {
  auto it = ranks.find({p, q});
  return it == ranks.end() ? 0 : it->second;
}

std::size_t SpectralPage::total(int n) const {
  std::size_t s = 0;
  for (int p = 0; p <= n; ++p) s += at(p, n - p);
  return s;
}

namespace {

// The weight-p to weight-(p-1) part of a map given by columns on cell (n, d),
// restricted and reindexed to the weight ranges.
SparseMatrix weight_block(const BarComplex& B, int n, int p, int d, const std::vector<SparseVec>& cols) {
  auto [b0, b1] = B.weight_range(n, p, d);
  auto [t0, t1] = B.weight_range(n - 1, p - 1, d);
  std::vector<SparseVec> out;
  for (std::size_t i = b0; i < b1; ++i) {
    SparseVec v;
    for (const auto& [r, x] : cols.at(i))
      if (r >= t0 && r < t1) v.emplace_back(static_cast<Index>(r - t0), x);
    out.push_back(std::move(v));
  }
  return SparseMatrix::from_columns(t1 - t0, out);
}

// columns of the standard-resolution differential on cell (n, d):
// sum_{j=1}^{p-1} (-1)^j [.. c_j c_{j+1} ..]
std::vector<SparseVec> standard_columns(const BarComplex& B, int n, int d) {
  const Field& F = B.field();
  const Extension& C = B.algebra();
  std::vector<SparseVec> cols;
  for (const auto& s : B.basis(n, d)) {
    const int p = static_cast<int>(s.size());
    Accumulator acc;
    for (int j = 1; j < p; ++j) {
      std::vector<Element> w;
      Element prod;
      for (int i = 0; i < p; ++i) {
        const auto& L = B.letters()[s[i]];
        Element e = C.monomial(L.bd, L.idx);
        if (i == j - 1) {
          const auto& M = B.letters()[s[i + 1]];
          prod = C.multiply(e, C.monomial(M.bd, M.idx));
          w.push_back(prod);
        } else if (i != j) {
          w.push_back(e);
        }
      }
      if (prod.is_zero()) continue;
      BarElement t = B.word(w);
      acc.add(F, F.from_int(j % 2 ? -1 : 1), t.coeffs);
    }
    cols.push_back(acc.take(F));
  }
  return cols;
}

SpectralPage page_from(const BarComplex& B, const std::function<std::vector<SparseVec>(int, int)>& columns) {
  SpectralPage E;
  E.deg_max = B.deg_max();
  const Field& F = B.field();
  const int top = B.deg_max() + 1;
  std::map<std::pair<int, int>, std::vector<SparseVec>> cols;
  std::vector<std::pair<int, int>> cells;
  for (int n = 1; n <= top; ++n)
    for (int d = 0; d <= B.max_int(); ++d) cells.emplace_back(n, d);
  std::vector<std::vector<SparseVec>> computed(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) { computed[i] = columns(cells[i].first, cells[i].second); });
  for (std::size_t i = 0; i < cells.size(); ++i) cols.emplace(cells[i], std::move(computed[i]));
  auto rank_of = [&](int n, int p, int d) -> std::size_t {
    if (n < 1 || p < 1 || n > top) return 0;
    return rank(F, weight_block(B, n, p, d, cols.at({n, d})));
  };
  for (int n = 0; n <= B.deg_max(); ++n)
    for (int p = 0; p <= n; ++p) {
      std::size_t total = 0;
      for (int d = 0; d <= B.max_int(); ++d) {
        std::size_t dimc = B.dim(n, p, d);
        if (dimc == 0) continue;
        total += dimc - rank_of(n, p, d) - rank_of(n + 1, p + 1, d);
      }
      if (total) E.ranks[{p, n - p}] = total;
    }
  return E;
}

}  // namespace

SpectralPage e1_page(const BarComplex& B) {
  return page_from(B, [&](int n, int d) { return standard_columns(B, n, d); });
}

SpectralPage e1_page_from_bar(const BarComplex& B) {
  return page_from(B, [&](int n, int d) { return B.d_prime(n, d); });
}

std::size_t bar_homology(const BarComplex& B, int n) {
  std::size_t s = 0;
  for (int d = 0; d <= B.max_int(); ++d) s += B.homology(n, d).rank();
  return s;
}

std::string DegenerationReport::summary() const {
  std::string s = holds ? "degenerates at E1" : "does not degenerate at E1";
  s += " for n <= " + std::to_string(n_max) + ": E1 totals";
  for (auto v : e1_totals) s += " " + std::to_string(v);
  s += "; H(bar)";
  for (auto v : homology_ranks) s += " " + std::to_string(v);
  return s;
}

DegenerationReport degeneration_check(const BarComplex& B, int n_max) {
  if (n_max > B.deg_max()) throw TruncationExceeded("degeneration check beyond the bar truncation");
  DegenerationReport r;
  r.n_max = n_max;
  SpectralPage E = e1_page(B);
  for (int n = 0; n <= n_max; ++n) {
    r.e1_totals.push_back(E.total(n));
    r.homology_ranks.push_back(bar_homology(B, n));
    if (r.e1_totals.back() != r.homology_ranks.back()) r.holds = false;
  }
  return r;
}

std::size_t BarIndecomposables::rank() const {
  std::size_t s = 0;
  for (const auto& [d, q] : blocks) s += q.dim();
  return s;
}

BarIndecomposables gamma_indecomposables(const BarComplex& B, int n) {
  const Field& F = B.field();
  BarIndecomposables out;
  out.n = n;
  if (n <= 0) return out;
  auto cycle = [&](int m, int e, const SparseVec& coords) {
    const auto& reps = B.homology(m, e).representatives();
    Accumulator acc;
    for (const auto& [i, c] : coords) acc.add(F, c, reps[i]);
    return BarElement{m, e, acc.take(F)};
  };
  for (int d = 0; d <= B.max_int(); ++d) {
    const HomologyData& H = B.homology(n, d);
    if (H.rank() == 0) continue;
    std::vector<SparseVec> span;
    for (int a = 1; a < n; ++a)
      for (int e = 0; e <= d; ++e) {
        const auto& ha = B.homology(a, e).representatives();
        const auto& hb = B.homology(n - a, d - e).representatives();
        for (const auto& x : ha)
          for (const auto& y : hb) {
            BarElement p = B.shuffle_product(BarElement{a, e, x}, BarElement{n - a, d - e, y});
            span.push_back(H.quotient.coordinates(p.coeffs));
          }
      }
    for (int j = 2; j <= n; ++j) {
      if (n % j || d % j || (n / j) % 2) continue;
      const int m = n / j, e = d / j;
      const auto& hm = B.homology(m, e);
      for (std::size_t i = 0; i < hm.rank(); ++i) {
        BarElement g = B.divided_power(cycle(m, e, unit_vector(static_cast<Index>(i))), j);
        if (!B.differential(g).is_zero())
          throw InvalidInput("divided power of a bar cycle is not a cycle; the algebra lacks divided powers");
        span.push_back(H.quotient.coordinates(g.coeffs));
      }
    }
    out.blocks.emplace(d, QuotientSpace(Subspace::full(F, H.rank()), Subspace::span(F, H.rank(), span)));
  }
  return out;
}

EdgeMap edge_map(const BarComplex& B, int n) {
  if (n > B.deg_max()) throw TruncationExceeded("edge map beyond the bar truncation");
  EdgeMap m;
  m.n = n;
  if (n <= 1) return m;
  SpectralPage E = e1_page(B);
  if (E.total(n) != bar_homology(B, n))
    throw InvalidInput("the spectral sequence does not stop at E1 in degree " + std::to_string(n) +
                       "; the edge map is only evaluated where it does");
  const Field& F = B.field();
  const Extension& C = B.algebra();
  BarIndecomposables G = gamma_indecomposables(B, n);
  auto ind = algebra_indecomposables(C, n - 1);
  for (const auto& [d, q] : ind) m.target_dim += q.dim();
  for (const auto& [d, q] : G.blocks) {
    m.source_dim += q.dim();
    const auto& reps = B.homology(n, d).representatives();
    auto [w0, w1] = B.weight_range(n, 1, d);
    auto it = ind.find(d);
    std::vector<SparseVec> cols;
    for (const auto& r : q.representatives()) {
      Accumulator acc;
      for (const auto& [i, c] : r) acc.add(F, c, reps[i]);
      SparseVec z = acc.take(F);
      SparseVec letter;
      for (const auto& [i, c] : z) {
        if (i < w0 || i >= w1) continue;
        const auto& L = B.letters()[B.basis(n, d)[i][0]];
        letter.emplace_back(L.idx, c);
      }
      std::sort(letter.begin(), letter.end());
      cols.push_back(it == ind.end() ? SparseVec{} : it->second.coordinates(letter));
    }
    SparseMatrix M = SparseMatrix::from_columns(it == ind.end() ? 0 : it->second.dim(), cols);
    m.rank += rank(F, M);
    m.blocks.emplace(d, std::move(M));
  }
  return m;
}

BarElement apply_bar_map(const BarComplex& source, const BarComplex& target, const ExtensionMorphism& gamma,
                         const BarElement& x) {
  const Field& F = source.field();
  Accumulator acc;
  for (const auto& [i, c] : x.coeffs) {
    const auto& s = source.basis(x.n, x.d).at(i);
    if (s.empty()) {
      acc.add(0, c);
      continue;
    }
    std::vector<Element> w;
    bool zero = false;
    for (auto u : s) {
      const auto& L = source.letters()[u];
      w.push_back(gamma.apply(source.algebra().monomial(L.bd, L.idx)));
      if (w.back().is_zero()) zero = true;
    }
    if (zero) continue;
    acc.add(F, c, target.word(w).coeffs);
  }
  return BarElement{x.n, x.d, acc.take(F)};
}

std::map<std::pair<int, int>, SparseMatrix> bar_map(const BarComplex& source, const BarComplex& target,
                                                    const ExtensionMorphism& gamma) {
  std::map<std::pair<int, int>, SparseMatrix> out;
  for (int n = 0; n <= source.deg_max() + 1; ++n)
    for (int d = 0; d <= source.max_int(); ++d) {
      const std::size_t k = source.dim(n, d);
      if (k == 0) continue;
      std::vector<SparseVec> cols;
      for (std::size_t i = 0; i < k; ++i)
        cols.push_back(apply_bar_map(source, target, gamma, BarElement{n, d, unit_vector(static_cast<Index>(i))}).coeffs);
      out.emplace(std::make_pair(n, d), SparseMatrix::from_columns(target.dim(n, d), cols));
    }
  return out;
}

}  // namespace tateforge
