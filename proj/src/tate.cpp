#include "tateforge/tate.hpp"

#include <algorithm>

#include "tateforge/errors.hpp"
#include "tateforge/parallel.hpp"

namespace tateforge {

std::size_t VariableCounts::total(int n) const {
  if (n < 0 || n >= static_cast<int>(counts.size())) return 0;
  std::size_t s = 0;
  for (auto c : counts[n]) s += c;
  return s;
}

namespace {

VariableCounts empty_counts(int N, int D) {
  VariableCounts v;
  v.N = N;
  v.D = D;
  v.counts.assign(N + 1, std::vector<std::size_t>(D + 1, 0));
  return v;
}

void prefetch_columns(const Extension& E, int h, int D) {
  if (h < 1) return;
  parallel_for(static_cast<std::size_t>(D + 1),
               [&](std::size_t d) { E.differential_columns(Bidegree{h, static_cast<int>(d)}); });
}

// Adjoins hom-n variables killing H_{n-1} degree by degree. Classes killed in
// lower internal degrees take their R-multiples with them, so what survives
// in degree d is a minimal generating set there.
void kill_homology(Extension& E, int n, int D, Flavor fl, const std::string& prefix, VariableCounts& vc) {
  prefetch_columns(E, n - 1, D);
  int k = 0;
  for (int d = (n == 1 ? 1 : 0); d <= D; ++d) {
    const std::vector<SparseVec> reps = E.homology(Bidegree{n - 1, d}).representatives();
    for (const auto& r : reps)
      E.adjoin(AdjoinedVariable{prefix + std::to_string(n) + "_" + std::to_string(++k), n, d, fl},
               Element{Bidegree{n - 1, d}, r});
    vc.counts[n][d] = reps.size();
  }
}

}  // namespace

AcyclicClosure acyclic_closure(AlgebraPtr R, int N, int D) {
  if (N < 1) throw InvalidInput("closure needs N >= 1");
  D = std::min(D, R->max_degree());
  AcyclicClosure C;
  C.ring = R;
  C.ext = std::make_shared<Extension>(R, N, D);
  C.vars = empty_counts(N, D);
  for (int n = 1; n <= N; ++n) kill_homology(*C.ext, n, D, Flavor::DividedPower, "e", C.vars);
  if (!C.ext->differential_in_maximal_ideal())
    throw MinimalityViolation("a closure differential has a unit coefficient");
  C.minimality_certified = true;
  return C;
}

DeviationSequence deviations_ring(const AcyclicClosure& C) {
  DeviationSequence s;
  s.first = 1;
  s.N = C.vars.N;
  s.D = C.vars.D;
  for (int n = 1; n <= C.vars.N; ++n) s.values.push_back(static_cast<long>(C.vars.total(n)));
  return s;
}

DeviationSequence deviations_ring(const AlgebraPtr& R, int N, int D) { return deviations_ring(acyclic_closure(R, N, D)); }

MinimalModel minimal_model(std::shared_ptr<const GradedMap> phi, int N, int D) {
  if (auto d = phi->first_nonsurjective_degree())
    throw NotSurjective("map " + phi->name() + " is not surjective in degree " + std::to_string(*d));
  if (N < 1) throw InvalidInput("model needs N >= 1");
  const AlgebraPtr& R = phi->source();
  D = std::min(D, phi->max_degree());
  MinimalModel M;
  M.map = phi;
  M.ext = std::make_shared<Extension>(R, N, D);
  M.vars = empty_counts(N, D);
  Extension& E = *M.ext;
  const Field& F = R->field();
  int k = 0;
  for (int d = 1; d <= D; ++d) {
    Subspace ker = kernel_basis(F, phi->matrix(d));
    Subspace bnd = Subspace::span(F, R->dim(d), E.differential_columns(Bidegree{1, d}));
    auto reps = quotient_basis(ker, bnd);
    for (const auto& r : reps)
      E.adjoin(AdjoinedVariable{"u1_" + std::to_string(++k), 1, d, Flavor::Polynomial}, Element{Bidegree{0, d}, r});
    M.vars.counts[1][d] = reps.size();
  }
  for (int n = 2; n <= N; ++n) kill_homology(E, n, D, Flavor::Polynomial, "u", M.vars);
  M.decomposable = E.is_decomposable();
  return M;
}

DeviationSequence deviations_map(const MinimalModel& M) {
  DeviationSequence s;
  s.first = 2;
  s.N = M.vars.N + 1;
  s.D = M.vars.D;
  long e2 = static_cast<long>(M.vars.total(1)) - static_cast<long>(M.map->source()->edim()) +
            static_cast<long>(M.map->target()->edim());
  s.values.push_back(e2);
  for (int n = 3; n <= M.vars.N + 1; ++n) s.values.push_back(static_cast<long>(M.vars.total(n - 1)));
  return s;
}

DeviationSequence deviations_map(std::shared_ptr<const GradedMap> phi, int N, int D) {
  auto s = deviations_map(minimal_model(std::move(phi), std::max(1, N - 1), D));
  return s;
}

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::Regular: return "Regular";
    case MapClass::CompleteIntersection: return "CompleteIntersection";
    default: return "Neither";
  }
}

Classification classify(std::shared_ptr<const GradedMap> phi, int N, int D) {
  Classification c;
  MinimalModel M = minimal_model(phi, std::max(2, N - 1), D);
  c.deviations = deviations_map(M);
  std::vector<RingElement> gens;
  for (auto i : M.ext->variables_of_hom(1)) {
    const Element& dx = M.ext->variable_differential(i);
    // hom-1 differentials are pure base elements
    SparseVec coords;
    for (const auto& [idx, x] : dx.coeffs) coords.emplace_back(M.ext->decode(dx.bd, idx).base_idx, x);
    gens.push_back(RingElement{dx.bd.internal, coords});
  }
  c.kernel_check = is_regular_sequence(phi->source(), gens, D);
  long e2 = *c.deviations.at(2), e3 = *c.deviations.at(3);
  // A surjection is flat only when U_1 is empty. The edim correction in eps_2
  // can vanish on a nonzero kernel of linear forms (R -> k), which is not flat.
  const std::size_t u1 = M.vars.total(1);
  if (u1 == 0) {
    c.kind = MapClass::Regular;
    c.summary = "eps_2 = 0, U_1 empty";
  } else if (e3 == 0 && c.kernel_check.status != Regularity::NotRegular) {
    c.kind = MapClass::CompleteIntersection;
    c.summary = "eps_2 = " + std::to_string(e2) + ", eps_3 = 0, card U_1 = " + std::to_string(u1);
  } else {
    c.kind = MapClass::Neither;
    c.summary = "eps_2 = " + std::to_string(e2) + ", eps_3 = " + std::to_string(e3) + ", card U_1 = " + std::to_string(u1);
  }
  return c;
}

WcatProbe wcat_probe(const MinimalModel& M, std::pair<int, int> n_range, int s_max, int D) {
  WcatProbe out;
  const Extension& E = *M.ext;
  D = std::min(D, E.max_int());
  const int H = E.max_hom();
  Extension K0 = E.base_change(GradedMap::augmentation(E.base_ptr()));
  for (int n = n_range.first; n <= n_range.second; ++n) {
    std::vector<bool> keep(K0.num_variables());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = K0.variables()[i].hom >= n;
    Extension Q = K0.kill_variables(keep);
    struct Cls {
      Element rep;
      std::string name;
    };
    std::vector<Cls> classes;
    for (int h = 1; h <= H; ++h)
      for (int d = 0; d <= D; ++d) {
        const auto& reps = Q.homology(Bidegree{h, d}).representatives();
        for (std::size_t i = 0; i < reps.size(); ++i)
          classes.push_back(Cls{Element{Bidegree{h, d}, reps[i]}, "[" + Q.format(Element{Bidegree{h, d}, reps[i]}) + "]"});
      }
    int best = classes.empty() ? 0 : 1;
    struct Prod {
      Element value;
      std::size_t last;
      std::vector<std::size_t> factors;
    };
    std::vector<Prod> cur;
    for (std::size_t i = 0; i < classes.size(); ++i) cur.push_back(Prod{classes[i].rep, i, {i}});
    std::vector<std::size_t> best_factors = cur.empty() ? std::vector<std::size_t>{} : cur[0].factors;
    Element best_value = cur.empty() ? Element{} : cur[0].value;
    constexpr std::size_t kMaxProducts = 4096;
    for (int s = 2; s <= s_max && !cur.empty(); ++s) {
      std::vector<Prod> next;
      for (const auto& p : cur) {
        for (std::size_t j = p.last; j < classes.size() && next.size() < kMaxProducts; ++j) {
          Bidegree bd = p.value.bd + classes[j].rep.bd;
          if (bd.hom > H || bd.internal > D) continue;
          Element q = Q.multiply(p.value, classes[j].rep);
          if (q.is_zero() || Q.homology(bd).quotient.is_zero_class(q.coeffs)) continue;
          auto f = p.factors;
          f.push_back(j);
          next.push_back(Prod{q, j, f});
        }
      }
      if (!next.empty()) {
        best = s;
        best_factors = next[0].factors;
        best_value = next[0].value;
      }
      cur = std::move(next);
    }
    out.n_values.push_back(n);
    out.per_n.push_back(best);
    if (best > out.lower_bound) {
      out.lower_bound = best;
      out.witness_n = n;
      out.factors.clear();
      for (auto i : best_factors) out.factors.push_back(classes[i].name);
      out.product = Q.format(best_value);
    }
  }
  return out;
}

std::string Root::exact() const {
  if (index == 1) return base.get_str();
  return base.get_str() + "^(1/" + std::to_string(index) + ")";
}

std::string Root::decimal(int digits) const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits) * index);
  mpz_class v = base * scale, r;
  mpz_root(r.get_mpz_t(), v.get_mpz_t(), index);
  std::string s = r.get_str();
  if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  return s.substr(0, s.size() - digits) + "." + s.substr(s.size() - digits);
}

bool operator<(const Root& a, const Root& b) {
  mpz_class x, y;
  mpz_pow_ui(x.get_mpz_t(), a.base.get_mpz_t(), b.index);
  mpz_pow_ui(y.get_mpz_t(), b.base.get_mpz_t(), a.index);
  return x < y;
}

GrowthReport growth_check(const DeviationSequence& dev) {
  GrowthReport g;
  g.lo = std::max(2, dev.first);
  g.hi = dev.last();
  if (g.hi < g.lo) {
    g.status = GrowthStatus::NoData;
    g.summary = "NoData: no deviations with n >= 2";
    return g;
  }
  for (int n = g.lo; n <= g.hi; ++n) {
    if (*dev.at(n) <= 0) {
      g.status = GrowthStatus::ZeroFound;
      g.first_zero = n;
      g.summary = "eps_" + std::to_string(n) + " = 0: complete intersection";
      return g;
    }
  }
  g.status = GrowthStatus::AllPositive;
  g.rate = Root{mpz_class(*dev.at(g.hi)), static_cast<unsigned long>(g.hi)};
  g.uniform = Root{mpz_class(*dev.at(g.lo)), static_cast<unsigned long>(g.lo)};
  for (int n = g.lo + 1; n <= g.hi; ++n) {
    Root r{mpz_class(*dev.at(n)), static_cast<unsigned long>(n)};
    if (r < g.uniform) g.uniform = r;
  }
  g.summary = "all eps_n > 0 for " + std::to_string(g.lo) + " <= n <= " + std::to_string(g.hi) + "; c = " +
              g.rate.exact() + " ~ " + g.rate.decimal() + " (uniform bound " + g.uniform.exact() + " ~ " +
              g.uniform.decimal() + ")";
  return g;
}

WcatInequality wcat_inequality_check(std::shared_ptr<const GradedMap> phi, int N, int D, int s_max) {
  WcatInequality w;
  const AlgebraPtr& S = phi->target();
  MinimalModel M = minimal_model(phi, N, D);
  w.details = wcat_probe(M, {2, N}, s_max, D);
  w.probe = w.details.lower_bound;
  w.bound = static_cast<int>(S->edim()) - depth(S, static_cast<int>(S->edim()), std::min(D, S->max_degree()));
  w.holds = w.probe <= w.bound;
  return w;
}

}  // namespace tateforge
