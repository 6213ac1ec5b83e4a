#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "tateforge/dga.hpp"

namespace tateforge {

// A bar element is homogeneous of bar degree n and internal degree d.
struct BarElement {
  int n = 0, d = 0;
  SparseVec coeffs;
  bool is_zero() const { return coeffs.empty(); }
  bool operator==(const BarElement& o) const { return n == o.n && d == o.d && coeffs == o.coeffs; }
};

// Reduced bar construction of a connected DG algebra C given as an extension
// of the residue field. Letters are the basis monomials of C of positive
// homological degree; a symbol [c_1|...|c_p] has degree p + sum |c_i|,
// weight p and internal degree the sum of the internal degrees. Chains are
// enumerated up to degree deg_max + 1, so homology is exact up to deg_max.
class BarComplex {
 public:
  // Throws NotConnected unless C is an extension of the residue field, and
  // TruncationExceeded when C is not carried up to homological degree deg_max.
  BarComplex(std::shared_ptr<const Extension> C, int deg_max);

  const Extension& algebra() const { return *C_; }
  const std::shared_ptr<const Extension>& algebra_ptr() const { return C_; }
  const Field& field() const { return C_->field(); }
  int deg_max() const { return deg_max_; }
  int weight_max() const { return deg_max_ + 1; }
  int max_int() const { return D_; }

  struct Letter {
    Bidegree bd;
    Index idx;
  };
  using Symbol = std::vector<std::uint32_t>;  // letter ids

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t dim(int n, int d) const;
  std::size_t dim(int n, int p, int d) const;
  const std::vector<Symbol>& basis(int n, int d) const;
  // symbols in a cell are sorted by weight; [begin, end) of weight p
  std::pair<std::size_t, std::size_t> weight_range(int n, int p, int d) const;
  int weight(const Symbol& s) const { return static_cast<int>(s.size()); }
  std::optional<Index> index_of(int n, int d, const Symbol& s) const;
  std::string format_symbol(const Symbol& s) const;
  std::string format(const BarElement& x) const;

  // columns of the two differential components (n, d) -> (n - 1, d)
  const std::vector<SparseVec>& d_prime(int n, int d) const;
  const std::vector<SparseVec>& d_second(int n, int d) const;
  BarElement differential(const BarElement& x) const;

  BarElement symbol(int n, int d, const Symbol& s) const;
  BarElement one() const { return BarElement{0, 0, unit_vector(0)}; }
  BarElement add(const BarElement& a, const BarElement& b) const;
  BarElement scale(const Scalar& c, const BarElement& a) const;
  // tensor word [x_1|...|x_p] of elements of C (all of positive degree)
  BarElement word(const std::vector<Element>& xs) const;

  // shuffle product; throws TruncationExceeded out of range
  BarElement shuffle_product(const BarElement& a, const BarElement& b) const;
  // gamma_j on an element of even positive degree
  BarElement divided_power(const BarElement& x, int j) const;

  // homology at (n, d) for n <= deg_max
  const HomologyData& homology(int n, int d) const;

 private:
  struct Cell {
    std::vector<Symbol> symbols;
    std::vector<std::size_t> weight_offset;  // size weight_max + 2
    std::unordered_map<std::string, Index> index;
    std::vector<SparseVec> dp, ds;
  };
  const Cell& cell(int n, int d) const;
  static std::string key(const Symbol& s);
  int letter_degree(std::uint32_t id) const { return letters_[id].bd.hom; }
  // expands sum over words of products of elements into the cell (n, d)
  void add_word(Accumulator& acc, int n, int d, const Scalar& c, const std::vector<Element>& xs) const;
  Element letter_element(std::uint32_t id) const;

  std::shared_ptr<const Extension> C_;
  int deg_max_, D_;
  std::vector<Letter> letters_;
  std::map<std::pair<Bidegree, Index>, std::uint32_t> letter_id_;
  std::map<std::pair<int, int>, Cell> cells_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<HomologyData>> homology_;
};

// E1_{p,q} = Tor_p over the underlying algebra of C, internal grading q,
// computed from the standard resolution; ranks are summed over internal
// degrees.
struct SpectralPage {
  int deg_max = 0;
  std::map<std::pair<int, int>, std::size_t> ranks;  // (p, q)
  std::size_t at(int p, int q) const;
  std::size_t total(int n) const;
};

SpectralPage e1_page(const BarComplex& B);
// E0 with the differential induced by d' (must agree with E1 in rank)
SpectralPage e1_page_from_bar(const BarComplex& B);

std::size_t bar_homology(const BarComplex& B, int n);

struct DegenerationReport {
  bool holds = true;
  int n_max = 0;
  std::vector<std::size_t> e1_totals, homology_ranks;
  std::string summary() const;
};
DegenerationReport degeneration_check(const BarComplex& B, int n_max);

// Gamma-indecomposables of H_n(bar): per internal degree, coset
// representatives in homology coordinates.
struct BarIndecomposables {
  int n = 0;
  std::map<int, QuotientSpace> blocks;
  std::size_t rank() const;
};
BarIndecomposables gamma_indecomposables(const BarComplex& B, int n);

struct EdgeMap {
  int n = 0;
  std::map<int, SparseMatrix> blocks;  // rows = Ind_{n-1} dim, cols = gamma-ind H_n dim
  std::size_t source_dim = 0, target_dim = 0, rank = 0;
  bool is_isomorphism() const { return source_dim == target_dim && rank == source_dim; }
};
// Throws InvalidInput when degeneration fails in degree n.
EdgeMap edge_map(const BarComplex& B, int n);

// B(gamma) for a morphism of connected DG algebras, per cell (n, d)
std::map<std::pair<int, int>, SparseMatrix> bar_map(const BarComplex& source, const BarComplex& target,
                                                    const ExtensionMorphism& gamma);
BarElement apply_bar_map(const BarComplex& source, const BarComplex& target, const ExtensionMorphism& gamma,
                         const BarElement& x);

}  // namespace tateforge
