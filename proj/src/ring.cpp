#include "tateforge/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "tateforge/errors.hpp"

namespace tateforge {

// ---------------------------------------------------------------- polynomials

void Polynomial::add_term(const Field& F, const Exponents& e, const Scalar& c) {
  if (Field::is_zero(c)) return;
  auto it = terms.find(e);
  if (it == terms.end()) {
    terms.emplace(e, c);
    return;
  }
  it->second = F.add(it->second, c);
  if (Field::is_zero(it->second)) terms.erase(it);
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p;
  Exponents e(nvars, 0);
  e[i] = 1;
  p.terms.emplace(e, Scalar(1));
  return p;
}

Polynomial Polynomial::constant(const Field& F, std::size_t nvars, const Scalar& c) {
  Polynomial p;
  p.add_term(F, Exponents(nvars, 0), F.from_rational(c));
  return p;
}

Polynomial add(const Field& F, const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  for (const auto& [e, c] : b.terms) r.add_term(F, e, c);
  return r;
}

Polynomial scale(const Field& F, const Scalar& c, const Polynomial& a) {
  Polynomial r;
  for (const auto& [e, x] : a.terms) r.add_term(F, e, F.mul(c, x));
  return r;
}

Polynomial multiply(const Field& F, const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ea, ca] : a.terms) {
    for (const auto& [eb, cb] : b.terms) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      r.add_term(F, e, F.mul(ca, cb));
    }
  }
  return r;
}

int weighted_degree(const Exponents& e, const std::vector<Variable>& vars) {
  int d = 0;
  for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * vars[i].degree;
  return d;
}

int total_exponent(const Exponents& e) {
  int s = 0;
  for (auto x : e) s += x;
  return s;
}

bool is_homogeneous(const Polynomial& p, const std::vector<Variable>& vars) {
  std::optional<int> deg;
  for (const auto& [e, c] : p.terms) {
    int d = weighted_degree(e, vars);
    if (deg && *deg != d) return false;
    deg = d;
  }
  return true;
}

std::optional<int> degree_of(const Polynomial& p, const std::vector<Variable>& vars) {
  if (p.terms.empty() || !is_homogeneous(p, vars)) return std::nullopt;
  return weighted_degree(p.terms.begin()->first, vars);
}

std::string format_monomial(const Exponents& e, const std::vector<Variable>& vars) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars[i].name;
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

namespace {

std::string join_terms(const std::vector<std::pair<std::string, Scalar>>& terms, const Field& F) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, c] : terms) {
    Scalar v = c;
    bool negative = false;
    if (F.characteristic() == 0 && sgn(v) < 0) {
      negative = true;
      v = -v;
    }
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (mono == "1") {
      out += F.format(v);
    } else if (v == 1) {
      out += mono;
    } else {
      out += F.format(v) + "*" + mono;
    }
  }
  return out;
}

}  // namespace

std::string format_polynomial(const Field& F, const Polynomial& p, const std::vector<Variable>& vars) {
  std::vector<std::pair<std::string, Scalar>> terms;
  // descending lexicographic order: x^2 before x*y before y^2
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it)
    terms.emplace_back(format_monomial(it->first, vars), it->second);
  return join_terms(terms, F);
}

Polynomial parse_polynomial(const Field& F, const std::string& text, const std::vector<Variable>& vars) {
  const std::size_t n = vars.size();
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_uint = [&]() -> std::string {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  };
  Polynomial result;
  skip();
  if (pos == text.size()) throw InvalidInput("empty polynomial");
  bool first = true;
  while (true) {
    skip();
    if (pos == text.size()) break;
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip();
    } else if (!first) {
      throw InvalidInput("expected '+' or '-' at position " + std::to_string(pos + 1) + " in \"" + text + "\"");
    }
    first = false;
    Scalar coef = F.from_int(sign);
    Exponents e(n, 0);
    bool expect_factor = true;
    while (expect_factor) {
      skip();
      if (pos == text.size()) throw InvalidInput("unexpected end of polynomial \"" + text + "\"");
      char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num = read_uint();
        mpq_class q(mpz_class(num), 1);
        skip();
        if (pos < text.size() && text[pos] == '/') {
          ++pos;
          skip();
          std::string den = read_uint();
          if (den.empty() || mpz_class(den) == 0)
            throw InvalidInput("bad denominator in \"" + text + "\"");
          q = mpq_class(mpz_class(num), mpz_class(den));
          q.canonicalize();
        }
        coef = F.mul(coef, F.from_rational(q));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
          ++pos;
        std::string name = text.substr(start, pos - start);
        auto it = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == name; });
        if (it == vars.end()) throw InvalidInput("unknown variable '" + name + "' in \"" + text + "\"");
        long power = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip();
          std::string ps = read_uint();
          if (ps.empty()) throw InvalidInput("missing exponent in \"" + text + "\"");
          power = std::stol(ps);
        }
        std::size_t idx = static_cast<std::size_t>(it - vars.begin());
        e[idx] = static_cast<std::uint16_t>(e[idx] + power);
      } else {
        throw InvalidInput("unexpected character '" + std::string(1, c) + "' in \"" + text + "\"");
      }
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
      } else {
        expect_factor = false;
      }
    }
    result.add_term(F, e, coef);
  }
  return result;
}

// ---------------------------------------------------------------- algebras

std::vector<Exponents> enumerate_monomials(const std::vector<Variable>& vars, int d) {
  std::vector<Exponents> out;
  if (vars.empty()) {
    if (d == 0) out.emplace_back();
    return out;
  }
  Exponents cur(vars.size(), 0);
  // exponents of earlier variables are tried from high to low, giving
  // descending lexicographic order
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == vars.size()) {
      if (left % vars[i].degree == 0) {
        cur[i] = static_cast<std::uint16_t>(left / vars[i].degree);
        out.push_back(cur);
      }
      return;
    }
    for (int ex = left / vars[i].degree; ex >= 0; --ex) {
      cur[i] = static_cast<std::uint16_t>(ex);
      self(self, i + 1, left - ex * vars[i].degree);
    }
    cur[i] = 0;
  };
  rec(rec, 0, d);
  return out;
}

GradedAlgebra::GradedAlgebra(const Field& F, std::vector<Variable> vars, std::vector<Polynomial> relations,
                             int max_degree, std::string name)
    : F_(F), vars_(std::move(vars)), D_(max_degree), name_(std::move(name)) {
  if (D_ < 0) throw InvalidInput("negative truncation degree");
  for (const auto& v : vars_)
    if (v.degree < 1) throw InvalidInput("variable " + v.name + " must have degree >= 1");
  for (std::size_t r = 0; r < relations.size(); ++r) {
    const Polynomial& p = relations[r];
    if (p.is_zero()) continue;
    for (const auto& [e, c] : p.terms)
      if (e.size() != vars_.size()) throw InvalidInput("relation has wrong number of variables");
    if (!is_homogeneous(p, vars_))
      throw InhomogeneousRelation("relation " + format_polynomial(F_, p, vars_) + " is not homogeneous");
    for (const auto& [e, c] : p.terms)
      if (total_exponent(e) < 2)
        throw InvalidInput("relation " + format_polynomial(F_, p, vars_) + " is not contained in (x)^2");
    int d = *degree_of(p, vars_);
    if (d > D_)
      throw TruncationExceeded("relation of degree " + std::to_string(d) + " exceeds truncation " +
                               std::to_string(D_));
    relations_.push_back(p);
  }

  monomials_.resize(D_ + 1);
  monomial_index_.resize(D_ + 1);
  ideal_.resize(D_ + 1);
  basis_.resize(D_ + 1);
  nf_.resize(D_ + 1);
  for (int d = 0; d <= D_; ++d) {
    monomials_[d] = enumerate_monomials(vars_, d);
    for (std::size_t i = 0; i < monomials_[d].size(); ++i) monomial_index_[d].emplace(monomials_[d][i], i);
  }
  std::vector<int> rel_deg;
  for (const auto& p : relations_) rel_deg.push_back(*degree_of(p, vars_));
  for (int d = 0; d <= D_; ++d) {
    std::vector<SparseVec> gens;
    for (std::size_t r = 0; r < relations_.size(); ++r) {
      if (rel_deg[r] > d) continue;
      for (const auto& m : monomials_[d - rel_deg[r]]) {
        Accumulator acc;
        for (const auto& [e, c] : relations_[r].terms) {
          Exponents prod(e.size());
          for (std::size_t i = 0; i < e.size(); ++i) prod[i] = static_cast<std::uint16_t>(e[i] + m[i]);
          acc.add(static_cast<Index>(monomial_index_[d].at(prod)), c);
        }
        gens.push_back(acc.take(F_));
      }
    }
    ideal_[d] = Subspace::span(F_, monomials_[d].size(), gens);
    std::vector<bool> pivot(monomials_[d].size(), false);
    for (Index p : ideal_[d].pivots()) pivot[p] = true;
    std::vector<std::int64_t> position(monomials_[d].size(), -1);
    for (std::size_t i = 0; i < monomials_[d].size(); ++i) {
      if (!pivot[i]) {
        position[i] = static_cast<std::int64_t>(basis_[d].size());
        basis_[d].push_back(i);
      }
    }
    nf_[d].resize(monomials_[d].size());
    for (std::size_t i = 0; i < monomials_[d].size(); ++i) {
      SparseVec r = ideal_[d].reduce(unit_vector(static_cast<Index>(i)));
      SparseVec v;
      for (const auto& [c, x] : r) v.emplace_back(static_cast<Index>(position[c]), x);
      nf_[d][i] = std::move(v);
    }
  }
}

std::shared_ptr<const GradedAlgebra> GradedAlgebra::residue_field(const Field& F, int max_degree) {
  return std::make_shared<GradedAlgebra>(F, std::vector<Variable>{}, std::vector<Polynomial>{}, max_degree,
                                         F.name());
}

int GradedAlgebra::max_variable_degree() const {
  int m = 0;
  for (const auto& v : vars_) m = std::max(m, v.degree);
  return m;
}

void GradedAlgebra::check_degree(int d) const {
  if (d < 0 || d > D_)
    throw TruncationExceeded("degree " + std::to_string(d) + " outside truncation 0.." + std::to_string(D_));
}

const std::vector<Exponents>& GradedAlgebra::monomials(int d) const {
  check_degree(d);
  return monomials_[d];
}

std::optional<std::size_t> GradedAlgebra::monomial_index(int d, const Exponents& e) const {
  check_degree(d);
  auto it = monomial_index_[d].find(e);
  if (it == monomial_index_[d].end()) return std::nullopt;
  return it->second;
}

const Subspace& GradedAlgebra::ideal_piece(int d) const {
  check_degree(d);
  return ideal_[d];
}

std::size_t GradedAlgebra::dim(int d) const {
  check_degree(d);
  return basis_[d].size();
}

const Exponents& GradedAlgebra::basis_monomial(int d, std::size_t i) const {
  check_degree(d);
  return monomials_[d][basis_[d].at(i)];
}

const SparseVec& GradedAlgebra::normal_form(int d, std::size_t monomial) const {
  check_degree(d);
  return nf_[d].at(monomial);
}

SparseVec GradedAlgebra::normal_form(const Exponents& e) const {
  int d = weighted_degree(e, vars_);
  check_degree(d);
  return nf_[d][monomial_index_[d].at(e)];
}

SparseVec GradedAlgebra::reduce(const Polynomial& p, int d) const {
  check_degree(d);
  Accumulator acc;
  for (const auto& [e, c] : p.terms) {
    if (weighted_degree(e, vars_) != d)
      throw InhomogeneousElement(format_polynomial(F_, p, vars_) + " is not homogeneous of degree " +
                                 std::to_string(d));
    acc.add(F_, c, nf_[d][monomial_index_[d].at(e)]);
  }
  return acc.take(F_);
}

SparseVec GradedAlgebra::variable_element(std::size_t i) const {
  Exponents e(vars_.size(), 0);
  e.at(i) = 1;
  return normal_form(e);
}

SparseVec GradedAlgebra::multiply_basis(int a, std::size_t i, int b, std::size_t j) const {
  check_degree(a + b);
  const Exponents& x = basis_monomial(a, i);
  const Exponents& y = basis_monomial(b, j);
  Exponents e(x.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = static_cast<std::uint16_t>(x[k] + y[k]);
  return nf_[a + b][monomial_index_[a + b].at(e)];
}

SparseVec GradedAlgebra::multiply(int a, const SparseVec& x, int b, const SparseVec& y) const {
  check_degree(a + b);
  Accumulator acc;
  for (const auto& [i, u] : x)
    for (const auto& [j, v] : y) acc.add(F_, F_.mul(u, v), multiply_basis(a, i, b, j));
  return acc.take(F_);
}

Polynomial GradedAlgebra::to_polynomial(int d, const SparseVec& x) const {
  Polynomial p;
  for (const auto& [i, c] : x) p.add_term(F_, basis_monomial(d, i), c);
  return p;
}

std::string GradedAlgebra::format(int d, const SparseVec& x) const {
  return format_polynomial(F_, to_polynomial(d, x), vars_);
}

std::string GradedAlgebra::basis_name(int d, std::size_t i) const {
  return format_monomial(basis_monomial(d, i), vars_);
}

std::vector<std::size_t> GradedAlgebra::hilbert_function() const {
  std::vector<std::size_t> h;
  for (int d = 0; d <= D_; ++d) h.push_back(basis_[d].size());
  return h;
}

std::vector<std::size_t> GradedAlgebra::minimal_generator_count() const {
  std::vector<std::size_t> out(D_ + 1, 0);
  for (int d = 0; d <= D_; ++d) {
    std::vector<SparseVec> mI;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      int e = d - vars_[v].degree;
      if (e < 0) continue;
      for (const auto& row : ideal_[e].basis()) {
        Accumulator acc;
        for (const auto& [c, x] : row) {
          Exponents m = monomials_[e][c];
          m[v] = static_cast<std::uint16_t>(m[v] + 1);
          acc.add(static_cast<Index>(monomial_index_[d].at(m)), x);
        }
        mI.push_back(acc.take(F_));
      }
    }
    Subspace S = Subspace::span(F_, monomials_[d].size(), mI);
    out[d] = ideal_[d].dim() - S.dim();
  }
  return out;
}

std::optional<int> GradedAlgebra::top_degree() const {
  int w = std::max(1, max_variable_degree());
  int top = -1;
  for (int d = 0; d <= D_; ++d)
    if (!basis_[d].empty()) top = d;
  if (top + w > D_) return std::nullopt;
  return top;
}

Subspace ideal_span(const GradedAlgebra& A, const std::vector<std::pair<int, SparseVec>>& gens, int d) {
  std::vector<SparseVec> vecs;
  for (const auto& [e, g] : gens) {
    if (e > d || g.empty()) continue;
    for (std::size_t b = 0; b < A.dim(d - e); ++b) vecs.push_back(A.multiply(d - e, unit_vector(static_cast<Index>(b)), e, g));
  }
  return Subspace::span(A.field(), A.dim(d), vecs);
}

// ---------------------------------------------------------------- maps

GradedMap::GradedMap(AlgebraPtr source, AlgebraPtr target, std::vector<Polynomial> images, std::string name)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)), name_(std::move(name)) {
  const GradedAlgebra& S = *source_;
  const GradedAlgebra& T = *target_;
  if (!(S.field() == T.field())) throw InvalidInput("map between algebras over different fields");
  if (images_.size() != S.num_variables())
    throw InvalidInput("map " + name_ + " needs one image per source variable");
  D_ = std::min(S.max_degree(), T.max_degree());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    int w = S.variables()[i].degree;
    if (images_[i].is_zero()) {
      var_images_.emplace_back();
      continue;
    }
    auto deg = degree_of(images_[i], T.variables());
    if (!deg || *deg != w)
      throw IllDefinedMap("image of " + S.variables()[i].name + " is not homogeneous of degree " +
                          std::to_string(w));
    var_images_.push_back(w <= T.max_degree() ? T.reduce(images_[i], w) : SparseVec{});
  }
  for (std::size_t r = 0; r < S.relations().size(); ++r) {
    const Polynomial& f = S.relations()[r];
    int d = *degree_of(f, S.variables());
    if (d > T.max_degree()) continue;
    Accumulator acc;
    for (const auto& [e, c] : f.terms) acc.add(T.field(), c, apply_monomial(e));
    if (!acc.take(T.field()).empty())
      throw IllDefinedMap("generator " + format_polynomial(S.field(), f, S.variables()) +
                          " does not map to 0 in degree " + std::to_string(d));
  }
  matrices_.resize(D_ + 1);
  for (int d = 0; d <= D_; ++d) {
    std::vector<SparseVec> cols;
    for (std::size_t b = 0; b < S.dim(d); ++b) cols.push_back(apply_monomial(S.basis_monomial(d, b)));
    matrices_[d] = SparseMatrix::from_columns(T.dim(d), cols);
  }
}

GradedMap GradedMap::identity(AlgebraPtr A) {
  std::vector<Polynomial> im;
  for (std::size_t i = 0; i < A->num_variables(); ++i)
    im.push_back(Polynomial::variable(A->num_variables(), i));
  return GradedMap(A, A, im, "id");
}

GradedMap GradedMap::augmentation(AlgebraPtr A) {
  auto k = GradedAlgebra::residue_field(A->field(), A->max_degree());
  return GradedMap(A, k, std::vector<Polynomial>(A->num_variables()), "augmentation");
}

SparseVec GradedMap::apply_monomial(const Exponents& e) const {
  const GradedAlgebra& T = *target_;
  SparseVec acc = unit_vector(0);
  int deg = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (int k = 0; k < e[i]; ++k) {
      if (var_images_[i].empty()) return {};
      int w = source_->variables()[i].degree;
      acc = T.multiply(deg, acc, w, var_images_[i]);
      deg += w;
      if (acc.empty()) return {};
    }
  }
  return acc;
}

const SparseMatrix& GradedMap::matrix(int d) const {
  if (d < 0 || d > D_) throw TruncationExceeded("map degree " + std::to_string(d));
  return matrices_[d];
}

SparseVec GradedMap::apply(int d, const SparseVec& x) const {
  return matrix(d).apply(target_->field(), x);
}

std::optional<int> GradedMap::first_nonsurjective_degree() const {
  for (int d = 0; d <= D_; ++d)
    if (rank(target_->field(), matrices_[d]) != target_->dim(d)) return d;
  return std::nullopt;
}

GradedMap GradedMap::then(const GradedMap& after, std::string name) const {
  if (after.source_.get() != target_.get()) throw InvalidInput("composing maps with mismatched rings");
  std::vector<Polynomial> im;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    int w = source_->variables()[i].degree;
    if (var_images_[i].empty() || w > after.D_) {
      im.emplace_back();
      continue;
    }
    SparseVec v = after.apply(w, var_images_[i]);
    im.push_back(after.target_->to_polynomial(w, v));
  }
  return GradedMap(source_, after.target_, im, name.empty() ? after.name_ + "*" + name_ : name);
}

AlgebraPtr make_algebra(const Field& F, std::vector<Variable> vars, const std::vector<std::string>& relations,
                        int max_degree, std::string name) {
  std::vector<Polynomial> rels;
  for (const auto& r : relations) rels.push_back(parse_polynomial(F, r, vars));
  return std::make_shared<const GradedAlgebra>(F, std::move(vars), std::move(rels), max_degree, std::move(name));
}

std::vector<Variable> degree_one_variables(const std::string& names) {
  std::vector<Variable> out;
  std::string cur;
  for (char c : names + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(Variable{cur, 1});
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  return out;
}

GradedMap make_map(AlgebraPtr source, AlgebraPtr target, const std::vector<std::string>& images, std::string name) {
  std::vector<Polynomial> imgs;
  for (const auto& s : images) imgs.push_back(parse_polynomial(target->field(), s, target->variables()));
  return GradedMap(std::move(source), std::move(target), std::move(imgs), std::move(name));
}

}  // namespace tateforge
