#include "tateforge/aq.hpp"

#include <algorithm>
#include <sstream>

#include "tateforge/errors.hpp"

namespace tateforge {

std::size_t GradedRank::rank() const {
  std::size_t s = 0;
  for (auto g : generators) s += g;
  return s;
}

std::size_t GradedRank::total_dim() const {
  std::size_t s = 0;
  for (auto g : dims) s += g;
  return s;
}

std::string GradedRank::format() const {
  std::ostringstream os;
  os << "rank " << rank() << " (generators";
  bool any = false;
  for (std::size_t d = 0; d < generators.size(); ++d)
    if (generators[d]) {
      os << " " << generators[d] << "@" << d;
      any = true;
    }
  if (!any) os << " none";
  os << ")";
  return os.str();
}

namespace {

using Gens = std::vector<std::pair<int, SparseVec>>;

Gens to_gens(const GradedAlgebra& A, const std::vector<Polynomial>& ps) {
  Gens g;
  for (const auto& p : ps) {
    RingElement e = ring_element(A, p);
    if (!e.coords.empty()) g.emplace_back(e.degree, std::move(e.coords));
  }
  return g;
}

std::vector<Polynomial> x_polys(const RetractPresentation& ret) {
  std::vector<Polynomial> out;
  const std::size_t nv = ret.P->num_variables();
  for (auto i : ret.x_vars) out.push_back(Polynomial::variable(nv, i));
  return out;
}

std::vector<Polynomial> products(const Field& F, const std::vector<Polynomial>& a, const std::vector<Polynomial>& b,
                                 bool symmetric) {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = symmetric ? i : 0; j < b.size(); ++j) out.push_back(multiply(F, a[i], b[j]));
  return out;
}

std::vector<Polynomial> all_variables(const GradedAlgebra& A) {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < A.num_variables(); ++i) out.push_back(Polynomial::variable(A.num_variables(), i));
  return out;
}

std::vector<Polynomial> base_variables(const RetractPresentation& ret) {
  std::vector<Polynomial> out;
  const std::size_t nv = ret.P->num_variables();
  for (std::size_t i = 0; i < ret.S->num_variables(); ++i) out.push_back(Polynomial::variable(nv, i));
  return out;
}

// a minimal homogeneous generating set of (b) in S[x], keeping input order
// within each degree
std::vector<Polynomial> minimal_generators(const RetractPresentation& ret) {
  const GradedAlgebra& P = *ret.P;
  std::vector<std::pair<int, std::size_t>> order;
  std::vector<RingElement> els;
  for (std::size_t i = 0; i < ret.b.size(); ++i) {
    els.push_back(ring_element(P, ret.b[i]));
    order.emplace_back(els.back().degree, i);
  }
  std::stable_sort(order.begin(), order.end());
  std::vector<Polynomial> out;
  Gens kept;
  for (const auto& [d, i] : order) {
    if (els[i].coords.empty() || d > P.max_degree()) continue;
    if (ideal_span(P, kept, d).contains(els[i].coords)) continue;
    kept.emplace_back(d, els[i].coords);
    out.push_back(ret.b[i]);
  }
  return out;
}

}  // namespace

GradedRank aq1(const RetractPresentation& ret, int D) {
  const GradedAlgebra& R = *ret.R;
  const Field& F = R.field();
  D = std::min(D, R.max_degree());
  auto xs = x_polys(ret);
  Gens a = to_gens(R, xs);
  Gens a2 = to_gens(R, products(F, xs, xs, true));
  Gens ma = to_gens(R, products(F, all_variables(R), xs, false));
  GradedRank out;
  out.dims.assign(D + 1, 0);
  out.generators.assign(D + 1, 0);
  for (int d = 1; d <= D; ++d) {
    std::size_t full = ideal_span(R, a, d).dim();
    out.dims[d] = full - ideal_span(R, a2, d).dim();
    out.generators[d] = full - ideal_span(R, ma, d).dim();
  }
  return out;
}

namespace {

GradedRank hom_block_ranks(const TorAlgebra& T, int n) {
  GradedRank out;
  out.dims.assign(T.max_int() + 1, 0);
  out.generators.assign(T.max_int() + 1, 0);
  for (const auto& bd : T.blocks_of_hom(n)) {
    std::size_t full = T.dim(bd);
    // products with positive homological factors only, then all decomposables
    out.dims[bd.internal] = full - T.decomposables(bd, false, true).dim();
    out.generators[bd.internal] = full - T.decomposables(bd, false, false).dim();
  }
  return out;
}

}  // namespace

GradedRank tor1_ranks(const TorAlgebra& T) { return hom_block_ranks(T, 1); }

GradedRank aq2_from_tor(const TorAlgebra& T) {
  if (T.max_hom() < 2) throw TruncationExceeded("Tor algebra carried below homological degree 2");
  return hom_block_ranks(T, 2);
}

GradedRank aq2(const RetractPresentation& ret, int N, int D) {
  return aq2_from_tor(tor_ss_retract(ret, std::max(N, 2), D));
}

std::string to_string(AQ3Verdict v) {
  switch (v) {
    case AQ3Verdict::Zero: return "Zero";
    case AQ3Verdict::NonZero: return "NonZero";
    case AQ3Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

AQ3Report aq3_is_zero(const RetractPresentation& ret, int D) {
  AQ3Report r;
  r.regularity = is_regular_sequence(ret.P, minimal_generators(ret), D);
  switch (r.regularity.status) {
    case Regularity::Regular: r.verdict = AQ3Verdict::Zero; break;
    case Regularity::NotRegular: r.verdict = AQ3Verdict::NonZero; break;
    case Regularity::Inconclusive: r.verdict = AQ3Verdict::Inconclusive; break;
  }
  return r;
}

std::string FourTermReport::summary() const {
  std::size_t m1 = 0, m2 = 0, a1 = 0, a2 = 0, r = 0;
  for (const auto& g : degrees) {
    m1 += g.m1;
    m2 += g.m2;
    a1 += g.aq1;
    a2 += g.aq2;
    r += g.delta_rank;
  }
  std::ostringstream os;
  os << "0 -> AQ2 (" << a2 << ") -> (f)/(f)^2 (" << m1 << ") -> (x)/(x)^2 (" << m2 << ") -> AQ1 (" << a1
     << ") -> 0; rank(delta) = " << r << "; " << (exact ? "exact" : "NOT exact") << ", "
     << (containment ? "Im(delta) in n.(x)/(x)^2" : "containment FAILS");
  return os.str();
}

FourTermReport four_term_check(const RetractPresentation& ret, int D) {
  const GradedAlgebra& P = *ret.P;
  const Field& F = P.field();
  D = std::min(D, std::min(P.max_degree(), ret.R->max_degree()));
  auto xs = x_polys(ret);
  Gens x1 = to_gens(P, xs);
  Gens x2 = to_gens(P, products(F, xs, xs, true));
  Gens f1 = to_gens(P, ret.b);
  Gens xf = to_gens(P, products(F, xs, ret.b, false));
  Gens nx = to_gens(P, products(F, base_variables(ret), xs, false));

  GradedRank a1 = aq1(ret, D);
  GradedRank a2 = aq2(ret, 2, D);

  FourTermReport rep;
  for (int d = 1; d <= D; ++d) {
    Subspace X = ideal_span(P, x1, d), X2 = ideal_span(P, x2, d);
    Subspace Fd = ideal_span(P, f1, d), XF = ideal_span(P, xf, d);
    // (f)/(f)^2 tensored down to S is (f)/(x)(f) since f lies in (x)
    QuotientSpace M1(Fd, XF), M2(X, X2);
    Subspace target = ideal_span(P, nx, d).sum(X2);
    FourTermDegree g;
    g.d = d;
    g.m1 = M1.dim();
    g.m2 = M2.dim();
    std::vector<SparseVec> delta;
    for (const auto& rep1 : M1.representatives()) {
      delta.push_back(M2.coordinates(rep1));
      if (!target.contains(rep1)) g.contained = false;
    }
    g.delta_rank = Subspace::span(F, M2.dim(), delta).dim();
    g.aq1 = a1.dims[d];
    g.aq2 = a2.dims[d];
    g.exact = (g.m1 - g.delta_rank == g.aq2) && (g.m2 - g.delta_rank == g.aq1);
    rep.exact = rep.exact && g.exact;
    rep.containment = rep.containment && g.contained;
    rep.delta_zero = rep.delta_zero && g.delta_rank == 0;
    if (g.m1 || g.m2 || g.aq1 || g.aq2) rep.degrees.push_back(g);
  }
  return rep;
}

std::optional<long> AQRanks::at(int n) const {
  if (n < first || n - first >= static_cast<int>(ranks.size())) return std::nullopt;
  return ranks[n - first];
}

AQRanks aq_ranks_via_deviations(const MapPtr& psi, int N, int D) {
  AQRanks out;
  out.deviations = deviations_map(psi, N + 1, D);
  const unsigned long p = psi->source()->field().characteristic();
  for (int n = 2; n <= N; ++n) {
    auto e = out.deviations.at(n + 1);
    if (!e) break;
    out.ranks.push_back(*e);
    out.certified.push_back(p == 0 || static_cast<unsigned long>(n) <= 2 * p - 1);
  }
  return out;
}

TheoremIReport theorem_I_check(const RetractPresentation& ret, int N, int D) {
  TheoremIReport r;
  r.aq3 = aq3_is_zero(ret, D);
  r.b_empty = ret.b.empty();
  switch (r.aq3.verdict) {
    case AQ3Verdict::Zero: r.verdict = r.b_empty ? "AQ-dim <= 1" : "AQ-dim <= 2"; break;
    case AQ3Verdict::NonZero: r.verdict = "AQ-dim = infinity"; break;
    case AQ3Verdict::Inconclusive: r.verdict = "undetermined"; break;
  }
  r.classification = classify(ret.cover, std::max(N, 3), D);
  // a bijective cover classifies as Regular, which is the case b = 0 of a
  // complete intersection
  bool ci = r.classification.kind != MapClass::Neither;
  if (r.aq3.verdict != AQ3Verdict::Inconclusive) r.consistent = ci == (r.aq3.verdict == AQ3Verdict::Zero);
  const unsigned long p = ret.R->field().characteristic();
  if (p == 0)
    r.characteristic_note = "char 0: floor((n-1)/2)! invertible for every n";
  else
    r.characteristic_note = "char " + std::to_string(p) + ": floor((n-1)/2)! invertible only for n <= " +
                            std::to_string(2 * p) + "; condition (iv) applies in that range only";
  return r;
}

std::vector<mpz_class> exterior_symmetric_series(std::size_t a, std::size_t b, int N) {
  std::vector<mpz_class> c(N + 1, 0);
  c[0] = 1;
  for (std::size_t i = 0; i < a; ++i)
    for (int n = N; n >= 1; --n) c[n] += c[n - 1];
  for (std::size_t i = 0; i < b; ++i)
    for (int n = 2; n <= N; ++n) c[n] += c[n - 2];
  return c;
}

TheoremIIReport theorem_II_check(const RetractPresentation& ret, int N, int D) {
  TheoremIIReport r;
  const GradedAlgebra& P = *ret.P;
  const Field& F = P.field();
  r.b_regular = aq3_is_zero(ret, D).verdict == AQ3Verdict::Zero;
  auto xs = x_polys(ret);
  Gens x2 = to_gens(P, products(F, xs, xs, true));
  r.b_in_x_squared = true;
  for (const auto& f : ret.b) {
    RingElement e = ring_element(P, f);
    if (e.coords.empty()) continue;
    if (!ideal_span(P, x2, e.degree).contains(e.coords)) r.b_in_x_squared = false;
  }
  r.characteristic_ok = F.characteristic() == 0 || ret.b.empty();
  r.condition_iv = r.b_regular && r.b_in_x_squared && r.characteristic_ok;

  N = std::max(N, 2);
  TorAlgebra T = tor_ss_retract(ret, N, D);
  r.d1 = tor1_ranks(T).rank();
  r.d2 = aq2_from_tor(T).rank();
  r.tor_ranks = T.ranks();
  r.expected = exterior_symmetric_series(r.d1, r.d2, T.max_hom());
  r.series_match = r.tor_ranks.size() == r.expected.size();
  for (std::size_t n = 0; r.series_match && n < r.tor_ranks.size(); ++n)
    r.series_match = r.expected[n] == static_cast<unsigned long>(r.tor_ranks[n]);
  r.projectivity_certified = ret.base_is_field();
  r.generators = algebra_generators(T, T.max_hom());
  for (std::size_t n = 3; n < r.generators.size(); ++n)
    if (r.generators[n] > 0) {
      r.fresh_generator = static_cast<int>(n);
      break;
    }

  std::ostringstream os;
  if (r.condition_iv) {
    os << "(iv) holds; d1 = " << r.d1 << ", d2 = " << r.d2 << "; Tor ranks "
       << (r.series_match ? "match" : "DO NOT match") << " (1+t)^" << r.d1 << "/(1-t^2)^" << r.d2 << " up to "
       << T.max_hom();
  } else {
    os << "(iv) fails:";
    if (!r.b_regular) os << " b not regular;";
    if (!r.b_in_x_squared) os << " b not in (x)^2;";
    if (!r.characteristic_ok) os << " char " << F.characteristic() << " with b nonempty;";
    if (r.fresh_generator)
      os << " algebra generator in degree " << *r.fresh_generator << " (Tor not generated in degrees <= 2)";
    else
      os << " no algebra generator above degree 2 up to " << T.max_hom();
  }
  if (!r.projectivity_certified) os << "; projectivity not certified (base is not the field)";
  r.summary = os.str();
  return r;
}

}  // namespace tateforge
