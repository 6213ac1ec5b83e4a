#pragma once

#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tateforge/linalg.hpp"
#include "tateforge/ring.hpp"

namespace tateforge {

enum class Flavor { Polynomial, DividedPower };

struct AdjoinedVariable {
  std::string name;
  int hom = 1;
  int internal = 1;
  Flavor flavor = Flavor::DividedPower;
  bool odd() const { return hom % 2 != 0; }
};

struct Bidegree {
  int hom = 0;
  int internal = 0;
  auto operator<=>(const Bidegree&) const = default;
  Bidegree operator+(const Bidegree& o) const { return {hom + o.hom, internal + o.internal}; }
};

std::string to_string(const Bidegree& bd);

// Variable part of a monomial: (variable index, exponent), increasing index.
// For divided-power variables the exponent j stands for the divided power
// x^(j); for polynomial ones it is an ordinary power.
using VarMonomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct VarMonomialHash {
  std::size_t operator()(const VarMonomial& m) const {
    std::size_t h = 1469598103934665603ull;
    for (auto [v, e] : m) h = (h ^ (v * 131u + e)) * 1099511628211ull;
    return h;
  }
};

struct Element {
  Bidegree bd;
  SparseVec coeffs;
  bool is_zero() const { return coeffs.empty(); }
  bool operator==(const Element& o) const { return bd == o.bd && coeffs == o.coeffs; }
};

struct HomologyData {
  Subspace cycles;
  Subspace boundaries;
  QuotientSpace quotient;
  std::size_t rank() const { return quotient.dim(); }
  const std::vector<SparseVec>& representatives() const { return quotient.representatives(); }
};

class LinearSolver;

// A bigraded DG algebra base[X] with zero differential on the base. Basis
// monomials of bidegree (h, d) are (base basis element of degree j) x
// (variable monomial of bidegree (h, d - j)), ordered by j, then base index,
// then variable monomial. Variables are appended stage by stage; bidegree
// data is computed on demand and cached, and all const queries may be
// called concurrently.
class Extension {
 public:
  Extension(AlgebraPtr base, int max_hom, int max_int);
  Extension(const Extension& o);
  Extension& operator=(const Extension&) = delete;

  // Adjoins a variable with the given differential, which must be a cycle of
  // bidegree (hom - 1, internal). Variables must be adjoined in
  // nondecreasing homological degree.
  std::size_t adjoin(const AdjoinedVariable& v, const Element& differential);

  const Field& field() const { return base_->field(); }
  const GradedAlgebra& base() const { return *base_; }
  const AlgebraPtr& base_ptr() const { return base_; }
  int max_hom() const { return max_hom_; }
  int max_int() const { return max_int_; }
  void set_max_hom(int n);
  std::size_t num_variables() const { return vars_.size(); }
  const std::vector<AdjoinedVariable>& variables() const { return vars_; }
  const Element& variable_differential(std::size_t i) const { return diffs_.at(i); }
  std::vector<std::size_t> variables_of_hom(int n) const;

  // bases
  bool in_range(const Bidegree& bd) const;
  std::size_t dim(const Bidegree& bd) const;
  const std::vector<VarMonomial>& var_monomials(int hom, int internal) const;
  struct Decoded {
    int base_deg;
    std::uint32_t base_idx;
    const VarMonomial* var;
  };
  Decoded decode(const Bidegree& bd, Index idx) const;
  std::optional<Index> encode(const Bidegree& bd, int base_deg, std::uint32_t base_idx,
                              const VarMonomial& vm) const;
  std::string monomial_name(const Bidegree& bd, Index idx) const;
  std::vector<std::string> monomial_basis(const Bidegree& bd) const;
  std::string format(const Element& e) const;

  // elements
  Element zero(const Bidegree& bd) const { return Element{bd, {}}; }
  Element one() const { return Element{{0, 0}, unit_vector(0)}; }
  Element base_element(int d, const SparseVec& x) const;
  Element variable(std::size_t i) const;
  Element monomial(const Bidegree& bd, Index idx) const { return Element{bd, unit_vector(idx)}; }
  Element add(const Element& a, const Element& b) const;
  Element scale(const Scalar& c, const Element& a) const;
  Element multiply(const Element& a, const Element& b) const;
  Element power(const Element& a, int e) const;
  Element differential(const Element& a) const;
  // gamma_j of an element of even positive homological degree
  Element divided_power(const Element& a, int j) const;

  const std::vector<SparseVec>& differential_columns(const Bidegree& bd) const;
  const HomologyData& homology(const Bidegree& bd) const;
  // w with dw = target, if one exists
  std::optional<Element> solve_boundary(const Element& target, bool reverse = false) const;

  // monomial terms of x^e in the variable part only with no base factor:
  // true when no term of any variable's differential is (unit) x (single variable)
  bool is_decomposable() const;
  // true when every coefficient of every stored differential lies in the
  // maximal ideal of the base, i.e. all terms have positive base degree
  bool differential_in_maximal_ideal() const;
  // d^2 = 0 on every basis element of bd
  bool check_d_squared(const Bidegree& bd) const;

  // base[X] -> target[X] along beta: the same variables over beta's target
  Extension base_change(const GradedMap& beta) const;
  Element transport_base_change(const GradedMap& beta, const Extension& target, const Element& e) const;
  // quotient by the ideal generated by the variables with keep[i] == false;
  // the caller guarantees that this ideal is stable under d
  Extension kill_variables(const std::vector<bool>& keep) const;
  Element transport_kill(const Extension& target, const std::vector<bool>& keep, const Element& e) const;

  // total Gamma/variable monomial count of homological degree n with
  // base part 1 and internal degree <= max_int
  std::size_t var_monomial_count(int n) const;

 private:
  struct Layout {
    std::vector<std::size_t> offset;  // by base degree j, size D+2
    std::vector<const std::vector<VarMonomial>*> parts;
  };
  struct VarPartCache {
    std::vector<VarMonomial> list;
    std::unordered_map<VarMonomial, Index, VarMonomialHash> index;
  };

  const VarPartCache& var_part(int hom, int internal) const;
  const Layout& layout(const Bidegree& bd) const;
  void check_range(const Bidegree& bd) const;
  void invalidate_from(int hom);

  // c * (j1,b1,v1) * (j2,b2,v2) added into acc at bidegree bd
  void multiply_monomials(Accumulator& acc, const Bidegree& bd, const Scalar& c, int j1, std::uint32_t b1,
                          const VarMonomial& v1, int j2, std::uint32_t b2, const VarMonomial& v2) const;
  // combined variable part, with the sign/binomial coefficient; false if zero
  bool multiply_var(const VarMonomial& a, const VarMonomial& b, VarMonomial& out, Scalar& coef) const;
  SparseVec differential_of_monomial(const Bidegree& bd, Index idx) const;
  Element gamma_term(const Bidegree& bd, Index idx, const Scalar& c, int j) const;
  Bidegree var_bidegree(const VarMonomial& v) const;

  AlgebraPtr base_;
  int max_hom_, max_int_;
  std::vector<AdjoinedVariable> vars_;
  std::vector<Element> diffs_;

  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<VarPartCache>> var_parts_;
  mutable std::map<Bidegree, std::unique_ptr<Layout>> layouts_;
  mutable std::map<Bidegree, std::unique_ptr<std::vector<SparseVec>>> dcols_;
  mutable std::map<Bidegree, std::unique_ptr<HomologyData>> homology_;
  mutable std::map<std::pair<Bidegree, bool>, std::unique_ptr<LinearSolver>> solvers_;
};

// Ind_q(C) = C_+ / C_+ C_+ in homological degree q, per internal degree, for
// an extension of the residue field (C_+ = positive homological degree)
std::map<int, QuotientSpace> algebra_indecomposables(const Extension& C, int q);

// A morphism of DG algebras between extensions determined by a base map and
// the images of the source variables. Divided-power variables of the source
// are sent to divided powers of their images; polynomial ones to powers.
class ExtensionMorphism {
 public:
  // base_map == nullptr means the two bases are identified (same basis)
  ExtensionMorphism(const Extension& source, const Extension& target, const GradedMap* base_map);

  void set_image(std::size_t var, Element image);
  bool has_image(std::size_t var) const { return images_.at(var).has_value(); }
  const Element& image(std::size_t var) const { return *images_.at(var); }
  Element apply(const Element& e) const;
  const Extension& source() const { return src_; }
  const Extension& target() const { return tgt_; }

 private:
  const Element& factor(std::uint32_t var, std::uint32_t e) const;

  const Extension& src_;
  const Extension& tgt_;
  const GradedMap* base_map_;
  std::vector<std::optional<Element>> images_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::uint32_t, std::uint32_t>, Element> factor_cache_;
};

}  // namespace tateforge
