#include "tateforge/torgamma.hpp"

#include <algorithm>

#include "tateforge/errors.hpp"
#include "tateforge/parallel.hpp"

namespace tateforge {

namespace {

const std::vector<std::string> kNoLabels;

}  // namespace

TorAlgebra TorAlgebra::tabulate(const Field& F, int N, int D, std::map<Bidegree, std::vector<std::string>> labels,
                                const ProductFn& product, const GammaFn* gamma, std::string provenance) {
  TorAlgebra T;
  T.F_ = F;
  T.N_ = N;
  T.D_ = D;
  T.has_gamma_ = gamma != nullptr;
  T.provenance_ = std::move(provenance);
  for (auto it = labels.begin(); it != labels.end();) {
    if (it->second.empty() || !T.in_range(it->first))
      it = labels.erase(it);
    else
      ++it;
  }
  T.labels_ = std::move(labels);

  std::vector<std::pair<Bidegree, Bidegree>> pairs;
  for (const auto& [a, la] : T.labels_)
    for (const auto& [b, lb] : T.labels_)
      if (T.labels_.count(a + b)) pairs.emplace_back(a, b);
  std::vector<std::vector<SparseVec>> tables(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto& [a, b] = pairs[p];
    const std::size_t da = T.dim(a), db = T.dim(b);
    auto& tab = tables[p];
    tab.resize(da * db);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < db; ++j) tab[i * db + j] = product(a, static_cast<Index>(i), b, static_cast<Index>(j));
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) T.products_.emplace(pairs[p], std::move(tables[p]));

  if (gamma) {
    std::vector<std::pair<Bidegree, int>> jobs;
    for (const auto& [a, la] : T.labels_) {
      if (a.hom < 2 || a.hom % 2 != 0) continue;
      for (int j = 2; T.in_range(Bidegree{j * a.hom, j * a.internal}); ++j) jobs.emplace_back(a, j);
    }
    std::vector<std::vector<SparseVec>> g(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t q) {
      const auto& [a, j] = jobs[q];
      for (std::size_t i = 0; i < T.dim(a); ++i) g[q].push_back((*gamma)(a, static_cast<Index>(i), j));
    });
    for (std::size_t q = 0; q < jobs.size(); ++q) T.gammas_.emplace(jobs[q], std::move(g[q]));
  }
  return T;
}

std::size_t TorAlgebra::dim(const Bidegree& bd) const {
  auto it = labels_.find(bd);
  return it == labels_.end() ? 0 : it->second.size();
}

std::vector<Bidegree> TorAlgebra::blocks() const {
  std::vector<Bidegree> out;
  for (const auto& [bd, l] : labels_) out.push_back(bd);
  return out;
}

std::vector<Bidegree> TorAlgebra::blocks_of_hom(int n) const {
  std::vector<Bidegree> out;
  for (const auto& [bd, l] : labels_)
    if (bd.hom == n) out.push_back(bd);
  return out;
}

const std::vector<std::string>& TorAlgebra::labels(const Bidegree& bd) const {
  auto it = labels_.find(bd);
  return it == labels_.end() ? kNoLabels : it->second;
}

std::string TorAlgebra::format(const Bidegree& bd, const SparseVec& x) const {
  if (x.empty()) return "0";
  const auto& l = labels(bd);
  std::string s;
  bool first = true;
  for (const auto& [i, c] : x) {
    std::string cs = F_.format(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs = cs.substr(1);
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    const std::string& name = i < l.size() ? l[i] : "?";
    if (cs == "1")
      s += name;
    else
      s += cs + "*" + name;
  }
  return s;
}

std::size_t TorAlgebra::total_dim(int n) const {
  std::size_t s = 0;
  for (const auto& bd : blocks_of_hom(n)) s += dim(bd);
  return s;
}

std::size_t TorAlgebra::rank(int n) const {
  std::size_t s = 0;
  for (const auto& bd : blocks_of_hom(n)) {
    std::vector<SparseVec> span;
    for (const auto& a : blocks_of_hom(0)) {
      if (a.internal == 0) continue;
      Bidegree b{bd.hom, bd.internal - a.internal};
      auto it = products_.find({a, b});
      if (it == products_.end()) continue;
      for (const auto& v : it->second) span.push_back(v);
    }
    s += dim(bd) - Subspace::span(F_, dim(bd), span).dim();
  }
  return s;
}

std::vector<std::size_t> TorAlgebra::ranks() const {
  std::vector<std::size_t> r;
  for (int n = 0; n <= N_; ++n) r.push_back(rank(n));
  return r;
}

const SparseVec& TorAlgebra::product_basis(const Bidegree& a, Index i, const Bidegree& b, Index j) const {
  auto it = products_.find({a, b});
  if (it == products_.end()) throw TruncationExceeded("product of blocks " + to_string(a) + " and " + to_string(b) + " is not tabled");
  return it->second.at(static_cast<std::size_t>(i) * dim(b) + j);
}

SparseVec TorAlgebra::multiply(const Bidegree& a, const SparseVec& x, const Bidegree& b, const SparseVec& y) const {
  if (!in_range(a + b)) throw TruncationExceeded("product lands in " + to_string(a + b));
  if (x.empty() || y.empty() || dim(a + b) == 0) return {};
  Accumulator acc;
  for (const auto& [i, c] : x)
    for (const auto& [j, e] : y) acc.add(F_, F_.mul(c, e), product_basis(a, i, b, j));
  return acc.take(F_);
}

const SparseVec& TorAlgebra::gamma_basis(const Bidegree& a, Index i, int j) const {
  auto it = gammas_.find({a, j});
  if (it == gammas_.end()) throw TruncationExceeded("gamma_" + std::to_string(j) + " on block " + to_string(a) + " is not tabled");
  return it->second.at(i);
}

SparseVec TorAlgebra::gamma(const Bidegree& a, const SparseVec& x, int j) const {
  if (!has_gamma_) throw InvalidInput("algebra " + provenance_ + " carries no divided powers");
  if (a.hom < 2 || a.hom % 2 != 0) throw InvalidInput("divided powers need even positive degree");
  if (j == 0) return unit_vector(0);
  if (j == 1) return x;
  auto at = [&](int k) { return Bidegree{k * a.hom, k * a.internal}; };
  if (!in_range(at(j))) throw TruncationExceeded("gamma_" + std::to_string(j) + " lands in " + to_string(at(j)));
  // g[k] = gamma_k of the partial sum; gamma_k(u+v) = sum gamma_m(u) gamma_{k-m}(v)
  std::vector<SparseVec> g(j + 1);
  g[0] = unit_vector(0);
  for (const auto& [i, c] : x) {
    std::vector<SparseVec> term(j + 1);
    term[0] = unit_vector(0);
    for (int m = 1; m <= j; ++m) {
      SparseVec base = m == 1 ? unit_vector(i) : gamma_basis(a, i, m);
      term[m] = scaled(F_, F_.pow(c, m), base);
    }
    std::vector<SparseVec> next(j + 1);
    for (int k = 0; k <= j; ++k) {
      Accumulator acc;
      for (int m = 0; m <= k; ++m) {
        if (g[k - m].empty() || term[m].empty()) continue;
        acc.add(F_, 1, multiply(at(k - m), g[k - m], at(m), term[m]));
      }
      next[k] = acc.take(F_);
    }
    g = std::move(next);
  }
  return g[j];
}

Subspace TorAlgebra::decomposables(const Bidegree& bd, bool with_gamma, bool only_positive_hom) const {
  std::vector<SparseVec> span;
  const std::size_t n = dim(bd);
  for (const auto& [key, tab] : products_) {
    const auto& [a, b] = key;
    if (!(a + b == bd)) continue;
    if (a == Bidegree{0, 0} || b == Bidegree{0, 0}) continue;
    if (only_positive_hom && (a.hom == 0 || b.hom == 0)) continue;
    for (const auto& v : tab)
      if (!v.empty()) span.push_back(v);
  }
  if (with_gamma && has_gamma_) {
    for (const auto& [key, tab] : gammas_) {
      const auto& [a, j] = key;
      if (!(Bidegree{j * a.hom, j * a.internal} == bd)) continue;
      for (const auto& v : tab)
        if (!v.empty()) span.push_back(v);
    }
  }
  return Subspace::span(F_, n, span);
}

TorMap::TorMap(std::shared_ptr<const TorAlgebra> source, std::shared_ptr<const TorAlgebra> target,
               std::map<Bidegree, SparseMatrix> blocks)
    : src_(std::move(source)), tgt_(std::move(target)), blocks_(std::move(blocks)) {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    if (it->second.rows() == 0 || it->second.cols() == 0)
      it = blocks_.erase(it);
    else
      ++it;
  }
}

const SparseMatrix& TorMap::matrix(const Bidegree& bd) const {
  auto it = blocks_.find(bd);
  return it == blocks_.end() ? empty_ : it->second;
}

SparseVec TorMap::apply(const Bidegree& bd, const SparseVec& x) const {
  auto it = blocks_.find(bd);
  if (it == blocks_.end()) return {};
  return it->second.apply(src_->field(), x);
}

TorMap TorMap::then(const TorMap& after) const {
  std::map<Bidegree, SparseMatrix> out;
  for (const auto& bd : src_->blocks()) {
    if (tgt_->dim(bd) != after.src_->dim(bd))
      throw InvalidInput("composing Tor maps through algebras with different block " + to_string(bd));
    const std::size_t n = src_->dim(bd);
    std::vector<SparseVec> cols;
    for (std::size_t i = 0; i < n; ++i) cols.push_back(after.apply(bd, apply(bd, unit_vector(static_cast<Index>(i)))));
    out.emplace(bd, SparseMatrix::from_columns(after.tgt_->dim(bd), cols));
  }
  return TorMap(src_, after.tgt_, std::move(out));
}

TorAlgebra tor_kk(const AcyclicClosure& C, int D) {
  const int N = C.vars.N;
  D = std::min(D, C.vars.D);
  auto kX = std::make_shared<Extension>(C.ext->base_change(GradedMap::augmentation(C.ring)));
  std::map<Bidegree, std::vector<std::string>> labels;
  for (int n = 0; n <= N; ++n)
    for (int d = 0; d <= D; ++d) {
      Bidegree bd{n, d};
      if (kX->dim(bd) > 0) labels.emplace(bd, kX->monomial_basis(bd));
    }
  auto product = [kX](const Bidegree& a, Index i, const Bidegree& b, Index j) {
    return kX->multiply(kX->monomial(a, i), kX->monomial(b, j)).coeffs;
  };
  TorAlgebra::GammaFn gamma = [kX](const Bidegree& a, Index i, int j) {
    return kX->divided_power(kX->monomial(a, i), j).coeffs;
  };
  return TorAlgebra::tabulate(C.ring->field(), N, D, std::move(labels), product, &gamma,
                              "acyclic closure of " + C.ring->name());
}

TorAlgebra tor_kk(const AlgebraPtr& R, int N, int D) { return tor_kk(acyclic_closure(R, N, D), D); }

TorAlgebra tor_of_surjection(const MapPtr& phi, int N, int D) {
  D = std::min(D, phi->max_degree());
  // one extra stage so that the boundaries into degree N are present
  MinimalModel M = minimal_model(phi, N + 1, D);
  auto SU = std::make_shared<Extension>(M.ext->base_change(*phi));
  std::map<Bidegree, std::vector<std::string>> labels;
  for (int n = 0; n <= N; ++n) {
    parallel_for(static_cast<std::size_t>(D + 1), [&](std::size_t d) { SU->homology(Bidegree{n, static_cast<int>(d)}); });
    for (int d = 0; d <= D; ++d) {
      Bidegree bd{n, d};
      const auto& reps = SU->homology(bd).representatives();
      if (reps.empty()) continue;
      std::vector<std::string> l;
      for (const auto& r : reps) l.push_back("[" + SU->format(Element{bd, r}) + "]");
      labels.emplace(bd, std::move(l));
    }
  }
  auto product = [SU](const Bidegree& a, Index i, const Bidegree& b, Index j) {
    Element x{a, SU->homology(a).representatives()[i]};
    Element y{b, SU->homology(b).representatives()[j]};
    Element p = SU->multiply(x, y);
    return SU->homology(a + b).quotient.coordinates(p.coeffs);
  };
  return TorAlgebra::tabulate(phi->source()->field(), N, D, std::move(labels), product, nullptr,
                              "minimal model of " + (phi->name().empty() ? std::string("map") : phi->name()));
}

TorAlgebra tor_ss_retract(const RetractPresentation& ret, int N, int D) {
  return tor_of_surjection(ret.projection, N, D);
}

TorMap induced_tor_map(const MapPtr& phi, int N, int D, bool reverse) {
  const AlgebraPtr& R = phi->source();
  const AlgebraPtr& S = phi->target();
  D = std::min({D, R->max_degree(), S->max_degree()});
  AcyclicClosure CR = acyclic_closure(R, N, D);
  AcyclicClosure CS = acyclic_closure(S, N, D);
  ExtensionMorphism F(*CR.ext, *CS.ext, phi.get());
  for (std::size_t v = 0; v < CR.ext->num_variables(); ++v) {
    Element target = F.apply(CR.ext->variable_differential(v));
    const auto& var = CR.ext->variables()[v];
    Bidegree bd{var.hom, var.internal};
    if (target.is_zero()) {
      F.set_image(v, CS.ext->zero(bd));
      continue;
    }
    auto lift = CS.ext->solve_boundary(target, reverse);
    if (!lift) throw LiftFailure("no lift for " + var.name + " through the closure of " + S->name());
    F.set_image(v, *lift);
  }
  auto TR = std::make_shared<const TorAlgebra>(tor_kk(CR, D));
  auto TS = std::make_shared<const TorAlgebra>(tor_kk(CS, D));
  std::vector<Bidegree> bds = TR->blocks();
  std::vector<SparseMatrix> mats(bds.size());
  parallel_for(bds.size(), [&](std::size_t k) {
    const Bidegree& bd = bds[k];
    std::vector<SparseVec> cols;
    for (std::size_t i = 0; i < TR->dim(bd); ++i) {
      Element img = F.apply(CR.ext->monomial(bd, static_cast<Index>(i)));
      SparseVec col;
      for (const auto& [idx, c] : img.coeffs) {
        auto dec = CS.ext->decode(bd, idx);
        if (dec.base_deg == 0) col.emplace_back(idx, c);
      }
      cols.push_back(std::move(col));
    }
    mats[k] = SparseMatrix::from_columns(TS->dim(bd), cols);
  });
  std::map<Bidegree, SparseMatrix> blocks;
  for (std::size_t k = 0; k < bds.size(); ++k) blocks.emplace(bds[k], std::move(mats[k]));
  return TorMap(TR, TS, std::move(blocks));
}

namespace {

// T / I for a family of subspaces I_bd closed under multiplication by T
TorAlgebra quotient_algebra(const TorAlgebra& T, const std::map<Bidegree, Subspace>& ideal, std::string provenance) {
  const Field& F = T.field();
  auto Q = std::make_shared<std::map<Bidegree, QuotientSpace>>();
  std::map<Bidegree, std::vector<std::string>> labels;
  for (const auto& bd : T.blocks()) {
    Subspace full = Subspace::full(F, T.dim(bd));
    auto it = ideal.find(bd);
    Subspace sub = it == ideal.end() ? Subspace(F, T.dim(bd)) : it->second;
    QuotientSpace q(full, sub);
    if (q.dim() == 0) continue;
    std::vector<std::string> l;
    for (const auto& r : q.representatives()) l.push_back(T.format(bd, r));
    labels.emplace(bd, std::move(l));
    Q->emplace(bd, std::move(q));
  }
  auto shared = std::make_shared<const TorAlgebra>(T);
  auto product = [shared, Q](const Bidegree& a, Index i, const Bidegree& b, Index j) {
    SparseVec p = shared->multiply(a, Q->at(a).representatives()[i], b, Q->at(b).representatives()[j]);
    return Q->at(a + b).coordinates(p);
  };
  TorAlgebra::GammaFn gamma = [shared, Q](const Bidegree& a, Index i, int j) {
    SparseVec g = shared->gamma(a, Q->at(a).representatives()[i], j);
    Bidegree t{j * a.hom, j * a.internal};
    auto it = Q->find(t);
    return it == Q->end() ? SparseVec{} : it->second.coordinates(g);
  };
  return TorAlgebra::tabulate(F, T.max_hom(), T.max_int(), std::move(labels), product,
                              T.has_gamma() ? &gamma : nullptr, std::move(provenance));
}

}  // namespace

TorAlgebra reduced_tor(const TorAlgebra& T) {
  std::map<Bidegree, Subspace> ideal;
  const auto ones = T.blocks_of_hom(1);
  for (const auto& bd : T.blocks()) {
    std::vector<SparseVec> span;
    for (const auto& a : ones) {
      Bidegree b{bd.hom - 1, bd.internal - a.internal};
      if (T.dim(b) == 0) continue;
      for (Index i = 0; i < T.dim(a); ++i)
        for (Index j = 0; j < T.dim(b); ++j) span.push_back(T.product_basis(a, i, b, j));
    }
    ideal.emplace(bd, Subspace::span(T.field(), T.dim(bd), span));
  }
  return quotient_algebra(T, ideal, "reduced " + T.provenance());
}

std::size_t IndecomposableSpace::dim(const Bidegree& bd) const {
  auto it = blocks.find(bd);
  return it == blocks.end() ? 0 : it->second.dim();
}

std::size_t IndecomposableSpace::rank(int n) const {
  std::size_t s = 0;
  for (const auto& [bd, q] : blocks)
    if (bd.hom == n) s += q.dim();
  return s;
}

std::vector<std::size_t> IndecomposableSpace::ranks() const {
  std::vector<std::size_t> r;
  for (int n = 0; n <= algebra->max_hom(); ++n) r.push_back(rank(n));
  return r;
}

SparseVec IndecomposableSpace::project(const Bidegree& bd, const SparseVec& x) const {
  auto it = blocks.find(bd);
  return it == blocks.end() ? SparseVec{} : it->second.coordinates(x);
}

IndecomposableSpace pi(std::shared_ptr<const TorAlgebra> T) {
  if (!T->has_gamma()) throw InvalidInput("indecomposables need divided powers on " + T->provenance());
  IndecomposableSpace I;
  const Field& F = T->field();
  for (const auto& bd : T->blocks()) {
    if (bd.hom == 0) continue;
    QuotientSpace q(Subspace::full(F, T->dim(bd)), T->decomposables(bd, true, false));
    if (q.dim() > 0) I.blocks.emplace(bd, std::move(q));
  }
  I.algebra = std::move(T);
  return I;
}

std::map<Bidegree, SparseMatrix> pi_map(const TorMap& f, const IndecomposableSpace& src,
                                        const IndecomposableSpace& tgt) {
  std::map<Bidegree, SparseMatrix> out;
  for (const auto& [bd, q] : src.blocks) {
    std::vector<SparseVec> cols;
    for (const auto& r : q.representatives()) cols.push_back(tgt.project(bd, f.apply(bd, r)));
    out.emplace(bd, SparseMatrix::from_columns(tgt.dim(bd), cols));
  }
  return out;
}

std::string SmallnessVerdict::summary() const {
  const std::string word = almost ? "AlmostSmall" : "Small";
  if (status == SmallnessStatus::Small) return word + "UpTo(" + std::to_string(N) + ")";
  return "Not" + word + ": pi(phi) kills " + witness + " in degree " + to_string(*witness_degree);
}

namespace {

SmallnessVerdict smallness(const MapPtr& phi, int N, int D, bool almost) {
  SmallnessVerdict v;
  v.almost = almost;
  v.N = N;
  TorMap f = induced_tor_map(phi, N, D);
  IndecomposableSpace ps = pi(f.source_ptr());
  IndecomposableSpace pt = pi(f.target_ptr());
  auto mats = pi_map(f, ps, pt);
  const Field& F = f.source().field();
  for (const auto& [bd, M] : mats) {
    if (almost && bd.hom < 2) continue;
    Subspace ker = kernel_basis(F, M);
    if (ker.dim() == 0) continue;
    const auto& reps = ps.blocks.at(bd).representatives();
    Accumulator acc;
    for (const auto& [i, c] : ker.basis()[0]) acc.add(F, c, reps[i]);
    v.status = SmallnessStatus::NotSmall;
    v.witness_degree = bd;
    v.witness = f.source().format(bd, acc.take(F));
    return v;
  }
  return v;
}

}  // namespace

SmallnessVerdict is_small(const MapPtr& phi, int N, int D) { return smallness(phi, N, D, false); }
SmallnessVerdict is_almost_small(const MapPtr& phi, int N, int D) { return smallness(phi, N, D, true); }

std::vector<std::size_t> poincare_series(const TorAlgebra& T) { return T.ranks(); }

std::map<Bidegree, std::size_t> algebra_generators_bigraded(const TorAlgebra& T, int N) {
  std::map<Bidegree, std::size_t> out;
  for (const auto& bd : T.blocks()) {
    if (bd.hom < 1 || bd.hom > N) continue;
    std::size_t g = T.dim(bd) - T.decomposables(bd, false, false).dim();
    if (g > 0) out.emplace(bd, g);
  }
  return out;
}

std::vector<std::size_t> algebra_generators(const TorAlgebra& T, int N) {
  N = std::min(N, T.max_hom());
  std::vector<std::size_t> g(N + 1, 0);
  for (const auto& [bd, c] : algebra_generators_bigraded(T, N)) g[bd.hom] += c;
  return g;
}

std::size_t indecomposable_rank(const Extension& C, int q) {
  std::size_t total = 0;
  for (const auto& [d, Q] : algebra_indecomposables(C, q)) total += Q.dim();
  return total;
}

Extension closed_fiber(const MinimalModel& M) { return M.ext->base_change(GradedMap::augmentation(M.map->source())); }

}  // namespace tateforge
