#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tateforge/field.hpp"
#include "tateforge/linalg.hpp"

namespace tateforge {

struct Variable {
  std::string name;
  int degree = 1;
};

using Exponents = std::vector<std::uint16_t>;

struct ExponentsHash {
  std::size_t operator()(const Exponents& e) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : e) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

// Polynomial in a fixed list of variables; zero coefficients are never stored.
struct Polynomial {
  std::map<Exponents, Scalar> terms;

  bool is_zero() const { return terms.empty(); }
  void add_term(const Field& F, const Exponents& e, const Scalar& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);
  static Polynomial constant(const Field& F, std::size_t nvars, const Scalar& c);
};

Polynomial add(const Field& F, const Polynomial& a, const Polynomial& b);
Polynomial scale(const Field& F, const Scalar& c, const Polynomial& a);
Polynomial multiply(const Field& F, const Polynomial& a, const Polynomial& b);
int weighted_degree(const Exponents& e, const std::vector<Variable>& vars);
int total_exponent(const Exponents& e);
// all terms of one weighted degree; the zero polynomial counts as homogeneous
bool is_homogeneous(const Polynomial& p, const std::vector<Variable>& vars);
std::optional<int> degree_of(const Polynomial& p, const std::vector<Variable>& vars);
std::string format_monomial(const Exponents& e, const std::vector<Variable>& vars);
std::string format_polynomial(const Field& F, const Polynomial& p, const std::vector<Variable>& vars);

// Parses sums of terms "c*x^a*y^b" with integer or fraction coefficients.
// Throws InvalidInput with a message describing the offending token.
Polynomial parse_polynomial(const Field& F, const std::string& text, const std::vector<Variable>& vars);

// A connected graded algebra k[x_1..x_n]/I, sealed at construction: every
// degree piece up to the truncation degree D is computed by linear algebra
// on I_d = span{m*f}. The basis of (A/I)_d consists of the monomials that are
// not pivots of the echelon form of I_d.
class GradedAlgebra {
 public:
  GradedAlgebra(const Field& F, std::vector<Variable> vars, std::vector<Polynomial> relations,
                int max_degree, std::string name = "");

  static std::shared_ptr<const GradedAlgebra> residue_field(const Field& F, int max_degree);

  const Field& field() const { return F_; }
  const std::string& name() const { return name_; }
  int max_degree() const { return D_; }
  std::size_t num_variables() const { return vars_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Polynomial>& relations() const { return relations_; }
  bool is_field() const { return vars_.empty(); }
  bool has_relations() const { return !relations_.empty(); }
  int max_variable_degree() const;

  const std::vector<Exponents>& monomials(int d) const;
  std::optional<std::size_t> monomial_index(int d, const Exponents& e) const;
  const Subspace& ideal_piece(int d) const;

  std::size_t dim(int d) const;
  const Exponents& basis_monomial(int d, std::size_t i) const;
  // coordinates in the degree-d basis of the class of a monomial
  const SparseVec& normal_form(int d, std::size_t monomial) const;
  SparseVec normal_form(const Exponents& e) const;
  // reduces a homogeneous polynomial of degree d
  SparseVec reduce(const Polynomial& p, int d) const;
  SparseVec variable_element(std::size_t i) const;

  SparseVec multiply_basis(int a, std::size_t i, int b, std::size_t j) const;
  SparseVec multiply(int a, const SparseVec& x, int b, const SparseVec& y) const;

  Polynomial to_polynomial(int d, const SparseVec& x) const;
  std::string format(int d, const SparseVec& x) const;
  std::string basis_name(int d, std::size_t i) const;

  std::vector<std::size_t> hilbert_function() const;
  // dimension of I_d / ((x) I)_d for d = 0..D
  std::vector<std::size_t> minimal_generator_count() const;
  std::size_t edim() const { return vars_.size(); }
  // top nonzero degree when A/I is certified finite within the truncation
  std::optional<int> top_degree() const;

 private:
  void check_degree(int d) const;

  Field F_;
  std::vector<Variable> vars_;
  std::vector<Polynomial> relations_;
  int D_;
  std::string name_;
  std::vector<std::vector<Exponents>> monomials_;
  std::vector<std::unordered_map<Exponents, std::size_t, ExponentsHash>> monomial_index_;
  std::vector<Subspace> ideal_;
  std::vector<std::vector<std::size_t>> basis_;  // monomial indices
  std::vector<std::vector<SparseVec>> nf_;
};

using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

std::vector<Exponents> enumerate_monomials(const std::vector<Variable>& vars, int d);

// Degree-preserving algebra map given on variables; well-definedness is
// verified at construction (the check_map operation).
class GradedMap {
 public:
  GradedMap(AlgebraPtr source, AlgebraPtr target, std::vector<Polynomial> images, std::string name = "");

  static GradedMap identity(AlgebraPtr A);
  static GradedMap augmentation(AlgebraPtr A);

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const std::string& name() const { return name_; }
  const std::vector<Polynomial>& images() const { return images_; }
  int max_degree() const { return D_; }

  const SparseMatrix& matrix(int d) const;
  SparseVec apply(int d, const SparseVec& x) const;
  // image in the target of a source monomial (not necessarily a basis element)
  SparseVec apply_monomial(const Exponents& e) const;

  std::optional<int> first_nonsurjective_degree() const;
  bool is_surjective() const { return !first_nonsurjective_degree().has_value(); }
  // (after o this)
  GradedMap then(const GradedMap& after, std::string name = "") const;

 private:
  AlgebraPtr source_, target_;
  std::vector<Polynomial> images_;
  std::string name_;
  int D_;
  std::vector<SparseVec> var_images_;
  std::vector<SparseMatrix> matrices_;
};

using MapPtr = std::shared_ptr<const GradedMap>;

// Convenience constructors from polynomial strings.
AlgebraPtr make_algebra(const Field& F, std::vector<Variable> vars, const std::vector<std::string>& relations,
                        int max_degree, std::string name = "");
// variables of degree 1 from a comma separated list "x,y"
std::vector<Variable> degree_one_variables(const std::string& names);
GradedMap make_map(AlgebraPtr source, AlgebraPtr target, const std::vector<std::string>& images,
                   std::string name = "");

// Subspace of A_d spanned by the ideal generated by gens (each homogeneous,
// given in basis coordinates together with its degree).
Subspace ideal_span(const GradedAlgebra& A, const std::vector<std::pair<int, SparseVec>>& gens, int d);

}  // namespace tateforge
