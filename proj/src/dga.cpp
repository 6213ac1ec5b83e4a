#include "tateforge/dga.hpp"

#include <algorithm>

#include "tateforge/errors.hpp"
#include "tateforge/parallel.hpp"

namespace tateforge {

std::string to_string(const Bidegree& bd) {
  return "(" + std::to_string(bd.hom) + "," + std::to_string(bd.internal) + ")";
}

namespace {

mpz_class factorial_z(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

}  // namespace

Extension::Extension(AlgebraPtr base, int max_hom, int max_int)
    : base_(std::move(base)), max_hom_(max_hom), max_int_(max_int) {
  if (max_int_ > base_->max_degree())
    throw TruncationExceeded("extension internal truncation " + std::to_string(max_int_) +
                             " exceeds base truncation " + std::to_string(base_->max_degree()));
  if (max_hom_ < 0 || max_int_ < 0) throw InvalidInput("negative truncation");
}

Extension::Extension(const Extension& o)
    : base_(o.base_), max_hom_(o.max_hom_), max_int_(o.max_int_), vars_(o.vars_), diffs_(o.diffs_) {}

void Extension::set_max_hom(int n) {
  if (n < 0) throw InvalidInput("negative truncation");
  max_hom_ = n;
}

std::vector<std::size_t> Extension::variables_of_hom(int n) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].hom == n) out.push_back(i);
  return out;
}

bool Extension::in_range(const Bidegree& bd) const {
  return bd.hom >= 0 && bd.internal >= 0 && bd.hom <= max_hom_ + 1 && bd.internal <= max_int_;
}

void Extension::check_range(const Bidegree& bd) const {
  if (!in_range(bd))
    throw TruncationExceeded("bidegree " + to_string(bd) + " outside truncation (hom <= " +
                             std::to_string(max_hom_ + 1) + ", internal <= " + std::to_string(max_int_) + ")");
}

void Extension::invalidate_from(int hom) {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto it = var_parts_.begin(); it != var_parts_.end();)
    it = it->first.first >= hom ? var_parts_.erase(it) : std::next(it);
  for (auto it = layouts_.begin(); it != layouts_.end();)
    it = it->first.hom >= hom ? layouts_.erase(it) : std::next(it);
  for (auto it = dcols_.begin(); it != dcols_.end();)
    it = it->first.hom >= hom ? dcols_.erase(it) : std::next(it);
  for (auto it = homology_.begin(); it != homology_.end();)
    it = it->first.hom >= hom - 1 ? homology_.erase(it) : std::next(it);
  for (auto it = solvers_.begin(); it != solvers_.end();)
    it = it->first.first.hom >= hom - 1 ? solvers_.erase(it) : std::next(it);
}

std::size_t Extension::adjoin(const AdjoinedVariable& v, const Element& differential) {
  if (v.hom < 1) throw InvalidInput("adjoined variables need homological degree >= 1");
  if (v.internal < 1) throw InvalidInput("adjoined variables need internal degree >= 1");
  if (!vars_.empty() && v.hom < vars_.back().hom)
    throw InvalidInput("variables must be adjoined in nondecreasing homological degree");
  if (v.internal > max_int_) throw TruncationExceeded("variable " + v.name + " beyond internal truncation");
  if (differential.bd != Bidegree{v.hom - 1, v.internal})
    throw InvalidInput("differential of " + v.name + " has bidegree " + to_string(differential.bd));
  if (v.hom > max_hom_ + 1) throw TruncationExceeded("variable " + v.name + " beyond homological truncation");
  if (v.hom >= 2 && !this->differential(differential).is_zero())
    throw InvalidInput("differential of " + v.name + " is not a cycle");
  invalidate_from(v.hom);
  vars_.push_back(v);
  diffs_.push_back(differential);
  return vars_.size() - 1;
}

Bidegree Extension::var_bidegree(const VarMonomial& v) const {
  Bidegree bd;
  for (auto [i, e] : v) {
    bd.hom += static_cast<int>(e) * vars_[i].hom;
    bd.internal += static_cast<int>(e) * vars_[i].internal;
  }
  return bd;
}

const Extension::VarPartCache& Extension::var_part(int hom, int internal) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = var_parts_.find({hom, internal});
    if (it != var_parts_.end()) return *it->second;
  }
  auto cache = std::make_unique<VarPartCache>();
  if (hom >= 0 && internal >= 0) {
    VarMonomial cur;
    const std::size_t m = vars_.size();
    auto rec = [&](auto&& self, std::size_t i, int h, int d) -> void {
      if (h == 0 && d == 0) {
        cache->list.push_back(cur);
        return;
      }
      if (i == m || h <= 0 || d <= 0) return;
      const auto& x = vars_[i];
      int max_e = std::min(h / x.hom, d / x.internal);
      if (x.odd()) max_e = std::min(max_e, 1);
      for (int e = max_e; e >= 1; --e) {
        cur.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(e));
        self(self, i + 1, h - e * x.hom, d - e * x.internal);
        cur.pop_back();
      }
      self(self, i + 1, h, d);
    };
    rec(rec, 0, hom, internal);
    for (std::size_t k = 0; k < cache->list.size(); ++k)
      cache->index.emplace(cache->list[k], static_cast<Index>(k));
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = var_parts_.emplace(std::make_pair(hom, internal), std::move(cache));
  return *it->second;
}

const std::vector<VarMonomial>& Extension::var_monomials(int hom, int internal) const {
  return var_part(hom, internal).list;
}

const Extension::Layout& Extension::layout(const Bidegree& bd) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = layouts_.find(bd);
    if (it != layouts_.end()) return *it->second;
  }
  check_range(bd);
  auto L = std::make_unique<Layout>();
  int top = std::min(bd.internal, base_->max_degree());
  L->offset.assign(top + 2, 0);
  L->parts.assign(top + 1, nullptr);
  for (int j = 0; j <= top; ++j) {
    L->parts[j] = &var_part(bd.hom, bd.internal - j).list;
    L->offset[j + 1] = L->offset[j] + base_->dim(j) * L->parts[j]->size();
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = layouts_.emplace(bd, std::move(L));
  return *it->second;
}

std::size_t Extension::dim(const Bidegree& bd) const {
  if (!in_range(bd)) {
    if (bd.hom < 0 || bd.internal < 0) return 0;
    check_range(bd);
  }
  return layout(bd).offset.back();
}

Extension::Decoded Extension::decode(const Bidegree& bd, Index idx) const {
  const Layout& L = layout(bd);
  auto it = std::upper_bound(L.offset.begin(), L.offset.end(), static_cast<std::size_t>(idx));
  int j = static_cast<int>(it - L.offset.begin()) - 1;
  std::size_t rel = idx - L.offset[j];
  std::size_t np = L.parts[j]->size();
  return Decoded{j, static_cast<std::uint32_t>(rel / np), &(*L.parts[j])[rel % np]};
}

std::optional<Index> Extension::encode(const Bidegree& bd, int base_deg, std::uint32_t base_idx,
                                       const VarMonomial& vm) const {
  const Layout& L = layout(bd);
  if (base_deg < 0 || base_deg + 1 >= static_cast<int>(L.offset.size())) return std::nullopt;
  const VarPartCache& P = var_part(bd.hom, bd.internal - base_deg);
  auto it = P.index.find(vm);
  if (it == P.index.end()) return std::nullopt;
  return static_cast<Index>(L.offset[base_deg] + base_idx * P.list.size() + it->second);
}

std::string Extension::monomial_name(const Bidegree& bd, Index idx) const {
  Decoded d = decode(bd, idx);
  std::string s;
  if (d.base_deg > 0 || d.var->empty()) s = base_->basis_name(d.base_deg, d.base_idx);
  for (auto [i, e] : *d.var) {
    if (!s.empty()) s += "*";
    s += vars_[i].name;
    if (e > 1) {
      if (vars_[i].flavor == Flavor::DividedPower)
        s += "^(" + std::to_string(e) + ")";
      else
        s += "^" + std::to_string(e);
    }
  }
  return s;
}

std::vector<std::string> Extension::monomial_basis(const Bidegree& bd) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < dim(bd); ++i) out.push_back(monomial_name(bd, static_cast<Index>(i)));
  return out;
}

std::string Extension::format(const Element& e) const {
  if (e.is_zero()) return "0";
  const Field& F = field();
  std::string out;
  bool first = true;
  for (const auto& [i, c] : e.coeffs) {
    Scalar v = c;
    bool neg = F.characteristic() == 0 && sgn(v) < 0;
    if (neg) v = -v;
    if (!first) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    first = false;
    std::string name = monomial_name(e.bd, i);
    if (v == 1) out += name;
    else if (name == "1") out += F.format(v);
    else out += F.format(v) + "*" + name;
  }
  return out;
}

Element Extension::base_element(int d, const SparseVec& x) const {
  Bidegree bd{0, d};
  Element e{bd, {}};
  Accumulator acc;
  for (const auto& [b, c] : x) acc.add(*encode(bd, d, b, VarMonomial{}), c);
  e.coeffs = acc.take(field());
  return e;
}

Element Extension::variable(std::size_t i) const {
  const auto& v = vars_.at(i);
  Bidegree bd{v.hom, v.internal};
  return Element{bd, unit_vector(*encode(bd, 0, 0, VarMonomial{{static_cast<std::uint32_t>(i), 1}}))};
}

Element Extension::add(const Element& a, const Element& b) const {
  if (a.is_zero()) return Element{b.bd, b.coeffs};
  if (b.is_zero()) return a;
  if (a.bd != b.bd) throw InvalidInput("adding elements of different bidegrees");
  return Element{a.bd, axpy(field(), a.coeffs, Scalar(1), b.coeffs)};
}

Element Extension::scale(const Scalar& c, const Element& a) const {
  return Element{a.bd, scaled(field(), c, a.coeffs)};
}

bool Extension::multiply_var(const VarMonomial& a, const VarMonomial& b, VarMonomial& out,
                             Scalar& coef) const {
  out.clear();
  out.reserve(a.size() + b.size());
  int sign_swaps = 0;
  // number of odd variables of a with index greater than the current one of b
  int odd_a_total = 0;
  for (auto [i, e] : a)
    if (vars_[i].odd()) ++odd_a_total;
  int odd_a_seen = 0;
  std::size_t p = 0, q = 0;
  coef = 1;
  while (p < a.size() || q < b.size()) {
    if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
      if (vars_[a[p].first].odd()) ++odd_a_seen;
      out.push_back(a[p++]);
    } else if (p == a.size() || b[q].first < a[p].first) {
      if (vars_[b[q].first].odd()) sign_swaps += odd_a_total - odd_a_seen;
      out.push_back(b[q++]);
    } else {
      const auto& x = vars_[a[p].first];
      if (x.odd()) return false;
      std::uint32_t e = a[p].second + b[q].second;
      if (x.flavor == Flavor::DividedPower) {
        coef = field().mul(coef, field().binomial(e, a[p].second));
        if (Field::is_zero(coef)) return false;
      }
      out.emplace_back(a[p].first, e);
      ++p;
      ++q;
    }
  }
  if (sign_swaps % 2) coef = field().neg(coef);
  return true;
}

void Extension::multiply_monomials(Accumulator& acc, const Bidegree& bd, const Scalar& c, int j1,
                                   std::uint32_t b1, const VarMonomial& v1, int j2, std::uint32_t b2,
                                   const VarMonomial& v2) const {
  VarMonomial vm;
  Scalar coef;
  if (!multiply_var(v1, v2, vm, coef)) return;
  coef = field().mul(coef, c);
  const SparseVec& r = base_->multiply_basis(j1, b1, j2, b2);
  for (const auto& [b, x] : r) {
    auto idx = encode(bd, j1 + j2, b, vm);
    acc.add(*idx, field().mul(coef, x));
  }
}

Element Extension::multiply(const Element& a, const Element& b) const {
  Bidegree bd = a.bd + b.bd;
  Element out{bd, {}};
  if (a.is_zero() || b.is_zero()) return out;
  check_range(bd);
  Accumulator acc;
  for (const auto& [i, x] : a.coeffs) {
    Decoded da = decode(a.bd, i);
    for (const auto& [j, y] : b.coeffs) {
      Decoded db = decode(b.bd, j);
      multiply_monomials(acc, bd, field().mul(x, y), da.base_deg, da.base_idx, *da.var, db.base_deg,
                         db.base_idx, *db.var);
    }
  }
  out.coeffs = acc.take(field());
  return out;
}

Element Extension::power(const Element& a, int e) const {
  Element r = one();
  for (int k = 0; k < e; ++k) r = multiply(r, a);
  return r;
}

SparseVec Extension::differential_of_monomial(const Bidegree& bd, Index idx) const {
  Decoded d = decode(bd, idx);
  const VarMonomial& vp = *d.var;
  Bidegree target{bd.hom - 1, bd.internal};
  Accumulator acc;
  int parity = 0;
  for (std::size_t t = 0; t < vp.size(); ++t) {
    auto [i, e] = vp[t];
    const auto& x = vars_[i];
    Scalar coef = (parity % 2) ? field().from_int(-1) : Scalar(1);
    if (!x.odd() && x.flavor == Flavor::Polynomial) coef = field().mul(coef, field().from_int(e));
    parity += static_cast<int>(e) * x.hom;
    if (Field::is_zero(coef)) continue;
    VarMonomial left(vp.begin(), vp.begin() + t);
    if (e > 1) left.emplace_back(i, e - 1);
    VarMonomial right(vp.begin() + t + 1, vp.end());
    const Element& dx = diffs_[i];
    VarMonomial mid, full;
    Scalar c1, c2;
    for (const auto& [k, y] : dx.coeffs) {
      Decoded dd = decode(dx.bd, k);
      if (!multiply_var(left, *dd.var, mid, c1)) continue;
      if (!multiply_var(mid, right, full, c2)) continue;
      Scalar c = field().mul(field().mul(coef, y), field().mul(c1, c2));
      const SparseVec& r = base_->multiply_basis(d.base_deg, d.base_idx, dd.base_deg, dd.base_idx);
      for (const auto& [b, z] : r) acc.add(*encode(target, d.base_deg + dd.base_deg, b, full), field().mul(c, z));
    }
  }
  return acc.take(field());
}

const std::vector<SparseVec>& Extension::differential_columns(const Bidegree& bd) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = dcols_.find(bd);
    if (it != dcols_.end()) return *it->second;
  }
  std::size_t n = dim(bd);
  auto cols = std::make_unique<std::vector<SparseVec>>(n);
  if (bd.hom > 0) {
    dim(Bidegree{bd.hom - 1, bd.internal});
    parallel_for(n, [&](std::size_t i) { (*cols)[i] = differential_of_monomial(bd, static_cast<Index>(i)); });
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = dcols_.emplace(bd, std::move(cols));
  return *it->second;
}

Element Extension::differential(const Element& a) const {
  Element out{Bidegree{a.bd.hom - 1, a.bd.internal}, {}};
  if (a.is_zero() || a.bd.hom == 0) return out;
  const auto& cols = differential_columns(a.bd);
  Accumulator acc;
  for (const auto& [i, c] : a.coeffs) acc.add(field(), c, cols[i]);
  out.coeffs = acc.take(field());
  return out;
}

Element Extension::gamma_term(const Bidegree& bd, Index idx, const Scalar& c, int j) const {
  Bidegree out_bd{bd.hom * j, bd.internal * j};
  Element out{out_bd, {}};
  Decoded d = decode(bd, idx);
  const VarMonomial& vp = *d.var;
  for (auto [i, e] : vp)
    if (vars_[i].odd()) return out;
  if (vp.empty()) throw InvalidInput("divided powers need positive homological degree");
  check_range(out_bd);
  const Field& F = field();
  mpz_class num = 1;  // integer coefficient of the variable part
  Scalar extra(1);
  VarMonomial res;
  for (std::size_t t = 0; t < vp.size(); ++t) {
    auto [i, e] = vp[t];
    bool last = t + 1 == vp.size();
    if (vars_[i].flavor == Flavor::DividedPower) {
      mpz_class m = factorial_z(static_cast<unsigned long>(j) * e);
      mpz_class fe = factorial_z(e);
      mpz_class den;
      mpz_pow_ui(den.get_mpz_t(), fe.get_mpz_t(), static_cast<unsigned long>(j));
      if (last) den *= factorial_z(j);
      num *= m / den;
    } else if (last) {
      Scalar jf = F.factorial(j);
      if (Field::is_zero(jf))
        throw InvalidInput("divided power of a polynomial variable is undefined in characteristic " +
                           std::to_string(F.characteristic()));
      extra = F.inv(jf);
    }
    res.emplace_back(i, e * static_cast<std::uint32_t>(j));
  }
  Scalar coef = F.mul(F.mul(F.pow(c, j), F.from_mpz(num)), extra);
  if (Field::is_zero(coef)) return out;
  // base factor r^j
  SparseVec r = unit_vector(d.base_idx);
  int deg = d.base_deg;
  SparseVec rj = unit_vector(0);
  int degj = 0;
  for (int k = 0; k < j; ++k) {
    rj = base_->multiply(degj, rj, deg, r);
    degj += deg;
  }
  Accumulator acc;
  for (const auto& [b, x] : rj) acc.add(*encode(out_bd, degj, b, res), F.mul(coef, x));
  out.coeffs = acc.take(F);
  return out;
}

Element Extension::divided_power(const Element& a, int j) const {
  if (j < 0) throw InvalidInput("negative divided power");
  if (j == 0) return one();
  if (j == 1) return a;
  if (a.bd.hom <= 0 || a.bd.hom % 2 != 0)
    throw InvalidInput("divided powers are defined on even positive homological degree");
  Bidegree out_bd{a.bd.hom * j, a.bd.internal * j};
  check_range(out_bd);
  const std::size_t n = a.coeffs.size();
  // G[k] = gamma_k(t_i + ... + t_{n-1}), built from the last term backwards
  std::vector<Element> G(j + 1);
  G[0] = one();
  for (int k = 1; k <= j; ++k) G[k] = zero(Bidegree{a.bd.hom * k, a.bd.internal * k});
  for (std::size_t t = n; t-- > 0;) {
    const auto& [idx, c] = a.coeffs[t];
    std::vector<Element> gt(j + 1);
    gt[0] = one();
    gt[1] = Element{a.bd, SparseVec{{idx, c}}};
    for (int k = 2; k <= j; ++k) gt[k] = gamma_term(a.bd, idx, c, k);
    std::vector<Element> NG(j + 1);
    for (int k = 0; k <= j; ++k) {
      Element s = zero(Bidegree{a.bd.hom * k, a.bd.internal * k});
      for (int p = 0; p <= k; ++p) {
        if (gt[p].is_zero() || G[k - p].is_zero()) continue;
        s = add(s, multiply(gt[p], G[k - p]));
      }
      NG[k] = std::move(s);
    }
    G = std::move(NG);
  }
  G[j].bd = out_bd;
  return G[j];
}

const HomologyData& Extension::homology(const Bidegree& bd) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = homology_.find(bd);
    if (it != homology_.end()) return *it->second;
  }
  check_range(bd);
  check_range(Bidegree{bd.hom + 1, bd.internal});
  const std::size_t n = dim(bd);
  const Field& F = field();
  Subspace Z;
  if (bd.hom == 0) {
    Z = Subspace::full(F, n);
  } else {
    std::size_t m = dim(Bidegree{bd.hom - 1, bd.internal});
    Z = kernel_basis(F, SparseMatrix::from_columns(m, differential_columns(bd)));
  }
  Subspace B = Subspace::span(F, n, differential_columns(Bidegree{bd.hom + 1, bd.internal}));
  auto H = std::make_unique<HomologyData>(HomologyData{Z, B, QuotientSpace(Z, B)});
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = homology_.emplace(bd, std::move(H));
  return *it->second;
}

std::optional<Element> Extension::solve_boundary(const Element& target, bool reverse) const {
  Bidegree src{target.bd.hom + 1, target.bd.internal};
  if (target.is_zero()) return zero(src);
  const LinearSolver* solver = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = solvers_.find({target.bd, reverse});
    if (it != solvers_.end()) solver = it->second.get();
  }
  if (!solver) {
    auto s = std::make_unique<LinearSolver>(field(), dim(target.bd), differential_columns(src), reverse);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = solvers_.emplace(std::make_pair(target.bd, reverse), std::move(s));
    solver = it->second.get();
  }
  auto x = solver->solve(target.coeffs);
  if (!x) return std::nullopt;
  return Element{src, *x};
}

bool Extension::is_decomposable() const {
  for (const auto& dx : diffs_) {
    for (const auto& [i, c] : dx.coeffs) {
      Decoded d = decode(dx.bd, i);
      if (d.base_deg == 0 && d.var->size() == 1 && (*d.var)[0].second == 1) return false;
    }
  }
  return true;
}

bool Extension::differential_in_maximal_ideal() const {
  for (const auto& dx : diffs_) {
    for (const auto& [i, c] : dx.coeffs) {
      if (decode(dx.bd, i).base_deg == 0) return false;
    }
  }
  return true;
}

bool Extension::check_d_squared(const Bidegree& bd) const {
  if (bd.hom < 2) return true;
  const auto& cols = differential_columns(bd);
  Bidegree mid{bd.hom - 1, bd.internal};
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (!differential(Element{mid, cols[i]}).is_zero()) return false;
  }
  return true;
}

Element Extension::transport_base_change(const GradedMap& beta, const Extension& target, const Element& e) const {
  Element out{e.bd, {}};
  Accumulator acc;
  std::map<std::pair<int, std::uint32_t>, SparseVec> cache;
  for (const auto& [i, c] : e.coeffs) {
    Decoded d = decode(e.bd, i);
    auto key = std::make_pair(d.base_deg, d.base_idx);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, beta.apply(d.base_deg, unit_vector(d.base_idx))).first;
    for (const auto& [b, x] : it->second)
      acc.add(*target.encode(e.bd, d.base_deg, b, *d.var), field().mul(c, x));
  }
  out.coeffs = acc.take(field());
  return out;
}

Extension Extension::base_change(const GradedMap& beta) const {
  if (beta.source().get() != base_.get() && !(beta.source()->num_variables() == base_->num_variables() &&
                                              beta.source()->max_degree() >= base_->max_degree() &&
                                              beta.source()->hilbert_function() == base_->hilbert_function()))
    throw InvalidInput("base change along a map with a different source");
  Extension E(beta.target(), max_hom_, std::min(max_int_, beta.max_degree()));
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].internal > E.max_int_) continue;
    E.adjoin(vars_[i], transport_base_change(beta, E, diffs_[i]));
  }
  return E;
}

Element Extension::transport_kill(const Extension& target, const std::vector<bool>& keep, const Element& e) const {
  std::vector<std::uint32_t> remap(vars_.size(), 0);
  std::uint32_t k = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (keep[i]) remap[i] = k++;
  }
  Element out{e.bd, {}};
  Accumulator acc;
  for (const auto& [i, c] : e.coeffs) {
    Decoded d = decode(e.bd, i);
    VarMonomial vm;
    bool killed = false;
    for (auto [v, x] : *d.var) {
      if (!keep[v]) {
        killed = true;
        break;
      }
      vm.emplace_back(remap[v], x);
    }
    if (killed) continue;
    acc.add(*target.encode(e.bd, d.base_deg, d.base_idx, vm), c);
  }
  out.coeffs = acc.take(field());
  return out;
}

Extension Extension::kill_variables(const std::vector<bool>& keep) const {
  if (keep.size() != vars_.size()) throw InvalidInput("kill mask has wrong length");
  Extension E(base_, max_hom_, max_int_);
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (!keep[i]) continue;
    // target variable list so far is a prefix of the kept ones
    std::vector<bool> partial(keep);
    for (std::size_t l = i; l < vars_.size(); ++l) partial[l] = false;
    Element d = transport_kill(E, partial, diffs_[i]);
    E.adjoin(vars_[i], d);
  }
  return E;
}

std::size_t Extension::var_monomial_count(int n) const {
  std::size_t s = 0;
  for (int d = 0; d <= max_int_; ++d) s += var_part(n, d).list.size();
  return s;
}

// ---------------------------------------------------------------- morphisms

ExtensionMorphism::ExtensionMorphism(const Extension& source, const Extension& target, const GradedMap* base_map)
    : src_(source), tgt_(target), base_map_(base_map), images_(source.num_variables()) {
  if (!(source.field() == target.field())) throw InvalidInput("morphism between extensions over different fields");
}

void ExtensionMorphism::set_image(std::size_t var, Element image) {
  const auto& v = src_.variables().at(var);
  if (image.bd != Bidegree{v.hom, v.internal})
    throw InvalidInput("image of " + v.name + " has the wrong bidegree");
  std::lock_guard<std::mutex> lock(mu_);
  images_.at(var) = std::move(image);
  factor_cache_.clear();
}

const Element& ExtensionMorphism::factor(std::uint32_t var, std::uint32_t e) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = factor_cache_.find({var, e});
    if (it != factor_cache_.end()) return it->second;
  }
  if (!images_.at(var)) throw LiftFailure("image of variable " + src_.variables()[var].name + " is undefined");
  const Element& y = *images_[var];
  Element r;
  if (e == 1) r = y;
  else if (src_.variables()[var].flavor == Flavor::DividedPower) r = tgt_.divided_power(y, static_cast<int>(e));
  else r = tgt_.power(y, static_cast<int>(e));
  std::lock_guard<std::mutex> lock(mu_);
  return factor_cache_.emplace(std::make_pair(var, e), std::move(r)).first->second;
}

Element ExtensionMorphism::apply(const Element& e) const {
  Element out{e.bd, {}};
  const Field& F = src_.field();
  for (const auto& [i, c] : e.coeffs) {
    auto d = src_.decode(e.bd, i);
    SparseVec base_img = base_map_ ? base_map_->apply(d.base_deg, unit_vector(d.base_idx)) : unit_vector(d.base_idx);
    if (base_img.empty()) continue;
    Element term = tgt_.base_element(d.base_deg, base_img);
    for (auto [v, x] : *d.var) {
      term = tgt_.multiply(term, factor(v, x));
      if (term.is_zero()) break;
    }
    if (term.is_zero()) continue;
    term.bd = e.bd;
    out.coeffs = axpy(F, out.coeffs, c, term.coeffs);
  }
  return out;
}

std::map<int, QuotientSpace> algebra_indecomposables(const Extension& C, int q) {
  if (!C.base().is_field()) throw NotConnected("indecomposables need an extension of the residue field");
  const Field& F = C.field();
  std::map<int, QuotientSpace> out;
  for (int d = 0; d <= C.max_int(); ++d) {
    Bidegree bd{q, d};
    const std::size_t n = C.dim(bd);
    if (n == 0) continue;
    std::vector<SparseVec> span;
    for (int a = 1; a < q; ++a)
      for (int e = 0; e <= d; ++e) {
        Bidegree x{a, e}, y{q - a, d - e};
        for (Index i = 0; i < C.dim(x); ++i)
          for (Index j = 0; j < C.dim(y); ++j) span.push_back(C.multiply(C.monomial(x, i), C.monomial(y, j)).coeffs);
      }
    out.emplace(d, QuotientSpace(Subspace::full(F, n), Subspace::span(F, n, span)));
  }
  return out;
}

}  // namespace tateforge
