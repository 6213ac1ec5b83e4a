#include "tateforge/resolve.hpp"

#include <algorithm>
#include <numeric>

#include "tateforge/errors.hpp"
#include "tateforge/parallel.hpp"

namespace tateforge {

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "Regular";
    case Regularity::NotRegular: return "NotRegular";
    default: return "Inconclusive";
  }
}

RingElement ring_element(const GradedAlgebra& A, const Polynomial& p) {
  if (!is_homogeneous(p, A.variables()))
    throw InhomogeneousElement(format_polynomial(A.field(), p, A.variables()) + " is not homogeneous");
  auto d = degree_of(p, A.variables());
  if (!d) return RingElement{0, {}};
  return RingElement{*d, A.reduce(p, *d)};
}

KoszulComplex koszul(AlgebraPtr ring, const std::vector<Polynomial>& elements, int max_int) {
  std::vector<RingElement> els;
  for (const auto& p : elements) els.push_back(ring_element(*ring, p));
  return koszul(std::move(ring), els, max_int);
}

KoszulComplex koszul(AlgebraPtr ring, const std::vector<RingElement>& elements, int max_int) {
  KoszulComplex K{ring, elements, nullptr};
  int top = std::max<int>(1, static_cast<int>(elements.size()));
  K.ext = std::make_shared<Extension>(ring, top, std::min(max_int, ring->max_degree()));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& f = elements[i];
    if (f.coords.empty()) throw InvalidInput("Koszul element " + std::to_string(i + 1) + " is zero in the ring");
    if (f.degree < 1) throw InvalidInput("Koszul elements must have positive degree");
    if (f.degree > K.ext->max_int()) continue;  // its variable lives beyond the truncation
    K.ext->adjoin(AdjoinedVariable{"e" + std::to_string(i + 1), 1, f.degree, Flavor::DividedPower},
                  K.ext->base_element(f.degree, f.coords));
  }
  return K;
}

namespace {

// "a_1*(f_1) + ... = 0" for a cycle sum a_i e_i of the Koszul complex
std::string syzygy_text(const KoszulComplex& K, const Element& z) {
  const GradedAlgebra& R = *K.ring;
  std::map<std::uint32_t, Accumulator> acc;
  std::map<std::uint32_t, int> deg;
  for (const auto& [i, c] : z.coeffs) {
    auto d = K.ext->decode(z.bd, i);
    std::uint32_t v = (*d.var)[0].first;
    acc[v].add(d.base_idx, c);
    deg[v] = d.base_deg;
  }
  std::string out;
  // variable v of the extension corresponds to the element it was adjoined for
  for (auto& [v, a] : acc) {
    std::size_t el = std::stoul(K.ext->variables()[v].name.substr(1)) - 1;
    SparseVec av = a.take(R.field());
    std::string fa = R.format(deg[v], av);
    std::string ff = R.format(K.elements[el].degree, K.elements[el].coords);
    if (!out.empty()) out += " + ";
    out += "(" + fa + ")*(" + ff + ")";
  }
  return out + " = 0";
}

// dim of (P/(gens))_d for the polynomial ring P on vars, gens homogeneous
std::size_t quotient_dim(const Field& F, const std::vector<Variable>& vars, const std::vector<Polynomial>& gens, int d) {
  auto mons = enumerate_monomials(vars, d);
  std::unordered_map<Exponents, Index, ExponentsHash> idx;
  for (std::size_t i = 0; i < mons.size(); ++i) idx.emplace(mons[i], static_cast<Index>(i));
  std::vector<SparseVec> rows;
  for (const auto& g : gens) {
    auto gd = degree_of(g, vars);
    if (!gd || *gd > d) continue;
    for (const auto& m : enumerate_monomials(vars, d - *gd)) {
      Accumulator acc;
      for (const auto& [e, c] : g.terms) {
        Exponents s(e);
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = static_cast<std::uint16_t>(s[k] + m[k]);
        acc.add(idx.at(s), c);
      }
      rows.push_back(acc.take(F));
    }
  }
  return mons.size() - Subspace::span(F, mons.size(), rows).dim();
}

// Some list of variables T with |T| = n - c such that P/(f, x_T) vanishes in
// a window of max-weight consecutive degrees <= D, which certifies that f has
// height c and hence is a regular sequence in the Cohen-Macaulay ring P.
std::optional<std::string> artinian_certificate(const GradedAlgebra& P, const std::vector<RingElement>& els, int D) {
  const std::size_t n = P.num_variables(), c = els.size();
  if (c > n) return std::nullopt;
  const Field& F = P.field();
  std::vector<Polynomial> f;
  for (const auto& e : els) f.push_back(P.to_polynomial(e.degree, e.coords));
  int w = std::max(1, P.max_variable_degree());
  std::vector<bool> choose(n, false);
  std::fill(choose.begin(), choose.begin() + static_cast<long>(n - c), true);
  int tried = 0;
  do {
    if (++tried > 256) break;
    // substitute x_T = 0 and drop those variables
    std::vector<Variable> rest;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
      if (!choose[i]) {
        rest.push_back(P.variables()[i]);
        keep.push_back(i);
      }
    std::vector<Polynomial> g;
    for (const auto& p : f) {
      Polynomial q;
      for (const auto& [e, x] : p.terms) {
        bool killed = false;
        for (std::size_t i = 0; i < n; ++i)
          if (choose[i] && e[i] > 0) killed = true;
        if (killed) continue;
        Exponents s;
        for (auto i : keep) s.push_back(e[i]);
        q.add_term(F, s, x);
      }
      g.push_back(q);
    }
    int run = 0;
    for (int d = 0; d <= D; ++d) {
      run = quotient_dim(F, rest, g, d) == 0 ? run + 1 : 0;
      if (run >= w) {
        std::string names;
        for (std::size_t i = 0; i < n; ++i)
          if (choose[i]) names += (names.empty() ? "" : ",") + P.variables()[i].name;
        return "quotient by the sequence and {" + names + "} vanishes from degree " + std::to_string(d - w + 1);
      }
    }
  } while (std::prev_permutation(choose.begin(), choose.end()));
  return std::nullopt;
}

}  // namespace

RegularityVerdict is_regular_sequence(AlgebraPtr ring, const std::vector<Polynomial>& elements, int D) {
  std::vector<RingElement> els;
  for (const auto& p : elements) els.push_back(ring_element(*ring, p));
  return is_regular_sequence(std::move(ring), els, D);
}

RegularityVerdict is_regular_sequence(AlgebraPtr ring, const std::vector<RingElement>& elements, int D) {
  RegularityVerdict v;
  const GradedAlgebra& R = *ring;
  if (elements.empty()) {
    v.status = Regularity::Regular;
    v.reason = "empty sequence";
    return v;
  }
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i].coords.empty()) {
      v.status = Regularity::NotRegular;
      v.witness = "element " + std::to_string(i + 1) + " is zero in the ring";
      v.reason = "zero element";
      return v;
    }
  D = std::min(D, R.max_degree());
  KoszulComplex K = koszul(ring, elements, D);
  for (int d = 1; d <= D; ++d) {
    const auto& H = K.ext->homology(Bidegree{1, d});
    if (H.rank() > 0) {
      v.status = Regularity::NotRegular;
      v.cycle = Element{Bidegree{1, d}, H.representatives()[0]};
      v.witness = syzygy_text(K, *v.cycle);
      v.reason = "H_1 of the Koszul complex is nonzero in internal degree " + std::to_string(d);
      return v;
    }
  }
  if (elements.size() > R.num_variables()) {
    v.status = Regularity::NotRegular;
    v.witness = "length " + std::to_string(elements.size()) + " exceeds embedding dimension " +
                std::to_string(R.num_variables());
    v.reason = "length of a regular sequence is at most the depth";
    return v;
  }
  if (auto top = R.top_degree()) {
    // Artinian and not a field: f_1 kills the socle
    v.status = Regularity::NotRegular;
    v.witness = "(" + R.format(elements[0].degree, elements[0].coords) + ")*(" + R.basis_name(*top, 0) + ") = 0";
    v.reason = "the ring is Artinian, so every element of positive degree is a zero divisor";
    return v;
  }
  if (!R.has_relations()) {
    if (elements.size() == 1) {
      v.status = Regularity::Regular;
      v.reason = "nonzero element of a polynomial ring";
      return v;
    }
    bool monomial = std::all_of(elements.begin(), elements.end(), [](const RingElement& e) { return e.coords.size() == 1; });
    if (monomial) {
      for (std::size_t i = 0; i < elements.size(); ++i)
        for (std::size_t j = i + 1; j < elements.size(); ++j) {
          const auto& a = R.basis_monomial(elements[i].degree, elements[i].coords[0].first);
          const auto& b = R.basis_monomial(elements[j].degree, elements[j].coords[0].first);
          Exponents g(a.size()), ma(a.size()), mb(a.size());
          bool coprime = true;
          for (std::size_t k = 0; k < a.size(); ++k) {
            g[k] = std::min(a[k], b[k]);
            if (g[k]) coprime = false;
            ma[k] = static_cast<std::uint16_t>(b[k] - g[k]);
            mb[k] = static_cast<std::uint16_t>(a[k] - g[k]);
          }
          if (!coprime) {
            v.status = Regularity::NotRegular;
            v.witness = "(" + format_monomial(ma, R.variables()) + ")*(" + format_monomial(a, R.variables()) + ") - (" +
                        format_monomial(mb, R.variables()) + ")*(" + format_monomial(b, R.variables()) + ") = 0";
            v.reason = "monomials " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " share a factor";
            return v;
          }
        }
      v.status = Regularity::Regular;
      v.reason = "pairwise coprime monomials";
      return v;
    }
    if (auto cert = artinian_certificate(R, elements, D)) {
      v.status = Regularity::Regular;
      v.reason = *cert;
      return v;
    }
  }
  v.status = Regularity::Inconclusive;
  v.reason = "H_1 vanishes through internal degree " + std::to_string(D) + " but no certificate covers higher degrees";
  return v;
}

std::size_t BettiTable::total(int i) const {
  if (i < 0 || i > N) return 0;
  return std::accumulate(beta[i].begin(), beta[i].end(), std::size_t{0});
}

BettiTable betti_numbers(const AlgebraPtr& R, int N, int D) {
  D = std::min(D, R->max_degree());
  const int n = static_cast<int>(R->num_variables());
  BettiTable t;
  t.N = N;
  t.D = D;
  t.beta.assign(N + 1, std::vector<std::size_t>(D + 1, 0));
  std::vector<RingElement> vars;
  for (int i = 0; i < n; ++i) vars.push_back(RingElement{R->variables()[i].degree, R->variable_element(i)});
  KoszulComplex K = koszul(R, vars, D);
  const int top = std::min(N, n);
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i <= top; ++i)
    for (int j = 0; j <= D; ++j) cells.emplace_back(i, j);
  std::vector<std::size_t> ranks(cells.size());
  parallel_for(cells.size(), [&](std::size_t c) {
    ranks[c] = K.ext->homology(Bidegree{cells[c].first, cells[c].second}).rank();
  });
  for (std::size_t c = 0; c < cells.size(); ++c) t.beta[cells[c].first][cells[c].second] = ranks[c];
  return t;
}

std::optional<int> depth(const BettiTable& t, std::size_t num_variables) {
  const int n = static_cast<int>(num_variables);
  if (t.N < n) return std::nullopt;
  for (int i = n; i >= 0; --i)
    if (t.total(i) > 0) return n - i;
  return std::nullopt;
}

int depth(const AlgebraPtr& R, int /*N*/, int D) {
  const int n = static_cast<int>(R->num_variables());
  auto d = depth(betti_numbers(R, n, D), R->num_variables());
  return d ? *d : n;
}

PolregData polreg(const BettiTable& t) {
  PolregData r;
  for (int i = 0; i <= t.N; ++i)
    for (int j = 0; j <= t.D; ++j)
      if (t.beta[i][j] > 0) r.polreg = std::max(r.polreg, j - i);
  r.small_threshold = 2 + r.polreg;
  return r;
}

PolregData polreg(const AlgebraPtr& R, int N, int D) { return polreg(betti_numbers(R, N, D)); }

std::vector<long> euler_series(const GradedAlgebra& R, int D) {
  std::vector<long> s(D + 1, 0);
  for (int d = 0; d <= D; ++d) s[d] = static_cast<long>(R.dim(d));
  for (const auto& v : R.variables()) {
    for (int d = D; d >= v.degree; --d) s[d] -= s[d - v.degree];
  }
  return s;
}

}  // namespace tateforge
