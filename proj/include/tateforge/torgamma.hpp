#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tateforge/dga.hpp"
#include "tateforge/retract.hpp"
#include "tateforge/ring.hpp"
#include "tateforge/tate.hpp"

namespace tateforge {

// A bigraded Tor algebra truncated at homological degree N and internal
// degree D, stored as explicit tables. Blocks are indexed by (n, d). The
// product of two blocks is tabled whenever the target block is in range;
// divided powers gamma_j of basis elements are tabled whenever has_gamma.
class TorAlgebra {
 public:
  using ProductFn = std::function<SparseVec(const Bidegree&, Index, const Bidegree&, Index)>;
  using GammaFn = std::function<SparseVec(const Bidegree&, Index, int)>;

  TorAlgebra() = default;
  // labels[bd] names the basis of block bd; blocks absent from labels are zero.
  static TorAlgebra tabulate(const Field& F, int N, int D, std::map<Bidegree, std::vector<std::string>> labels,
                             const ProductFn& product, const GammaFn* gamma, std::string provenance);

  const Field& field() const { return F_; }
  int max_hom() const { return N_; }
  int max_int() const { return D_; }
  bool has_gamma() const { return has_gamma_; }
  const std::string& provenance() const { return provenance_; }

  bool in_range(const Bidegree& bd) const { return bd.hom >= 0 && bd.hom <= N_ && bd.internal >= 0 && bd.internal <= D_; }
  std::size_t dim(const Bidegree& bd) const;
  // nonzero blocks in increasing order
  std::vector<Bidegree> blocks() const;
  std::vector<Bidegree> blocks_of_hom(int n) const;
  const std::vector<std::string>& labels(const Bidegree& bd) const;
  std::string format(const Bidegree& bd, const SparseVec& x) const;

  // k-dimension of the homological degree n part
  std::size_t total_dim(int n) const;
  // minimal number of generators of T_n as a module over T_0; this is the
  // k-dimension when T_0 = k
  std::size_t rank(int n) const;
  std::vector<std::size_t> ranks() const;

  // element product; throws TruncationExceeded when a + b is out of range
  SparseVec multiply(const Bidegree& a, const SparseVec& x, const Bidegree& b, const SparseVec& y) const;
  const SparseVec& product_basis(const Bidegree& a, Index i, const Bidegree& b, Index j) const;
  // gamma_j(x) for x of even positive homological degree; needs has_gamma
  SparseVec gamma(const Bidegree& a, const SparseVec& x, int j) const;
  const SparseVec& gamma_basis(const Bidegree& a, Index i, int j) const;

  // span in block bd of the products T_a T_b with a, b != (0,0)
  Subspace decomposables(const Bidegree& bd, bool with_gamma, bool only_positive_hom) const;

 private:
  Field F_;
  int N_ = 0, D_ = 0;
  bool has_gamma_ = false;
  std::string provenance_;
  std::map<Bidegree, std::vector<std::string>> labels_;
  std::map<std::pair<Bidegree, Bidegree>, std::vector<SparseVec>> products_;  // row-major i*dim(b)+j
  std::map<std::pair<Bidegree, int>, std::vector<SparseVec>> gammas_;
};

class TorMap {
 public:
  TorMap(std::shared_ptr<const TorAlgebra> source, std::shared_ptr<const TorAlgebra> target,
         std::map<Bidegree, SparseMatrix> blocks);

  const TorAlgebra& source() const { return *src_; }
  const TorAlgebra& target() const { return *tgt_; }
  const std::shared_ptr<const TorAlgebra>& source_ptr() const { return src_; }
  const std::shared_ptr<const TorAlgebra>& target_ptr() const { return tgt_; }
  // rows = target block dim, cols = source block dim
  const SparseMatrix& matrix(const Bidegree& bd) const;
  SparseVec apply(const Bidegree& bd, const SparseVec& x) const;
  // (after o this); the middle algebras must have the same block dimensions
  TorMap then(const TorMap& after) const;
  bool operator==(const TorMap& o) const { return blocks_ == o.blocks_; }

 private:
  std::shared_ptr<const TorAlgebra> src_, tgt_;
  std::map<Bidegree, SparseMatrix> blocks_;
  SparseMatrix empty_;
};

// Tor^R(k,k) = k<X> from the acyclic closure tensored down to k.
TorAlgebra tor_kk(const AlgebraPtr& R, int N, int D);
TorAlgebra tor_kk(const AcyclicClosure& C, int D);
// Tor^R(S,S) as the homology of S (x)_R R[U] for the minimal model of the
// projection R -> S.
TorAlgebra tor_ss_retract(const RetractPresentation& ret, int N, int D);
// Tor^R(S,S) for any surjection R -> S, same construction
TorAlgebra tor_of_surjection(const MapPtr& phi, int N, int D);

// Tor(phi): Tor^R(k,k) -> Tor^S(k,k). reverse selects the other tie-break
// when solving for the lift; the induced map does not depend on it.
TorMap induced_tor_map(const MapPtr& phi, int N, int D, bool reverse = false);

// T / (T . T_1)
TorAlgebra reduced_tor(const TorAlgebra& T);

struct IndecomposableSpace {
  std::shared_ptr<const TorAlgebra> algebra;
  // per block: coset representatives (in T coordinates) of T/T^(2)
  std::map<Bidegree, QuotientSpace> blocks;
  std::size_t dim(const Bidegree& bd) const;
  std::size_t rank(int n) const;
  std::vector<std::size_t> ranks() const;
  SparseVec project(const Bidegree& bd, const SparseVec& x) const;
};

// Throws InvalidInput when the algebra carries no divided powers.
IndecomposableSpace pi(std::shared_ptr<const TorAlgebra> T);
// matrices Ind(source) -> Ind(target) per block
std::map<Bidegree, SparseMatrix> pi_map(const TorMap& f, const IndecomposableSpace& src,
                                        const IndecomposableSpace& tgt);

enum class SmallnessStatus { Small, NotSmall };
struct SmallnessVerdict {
  SmallnessStatus status = SmallnessStatus::Small;
  bool almost = false;  // the almost-small variant (degrees >= 2)
  int N = 0;
  std::optional<Bidegree> witness_degree;
  std::string witness;  // a kernel class of pi(phi)
  std::string summary() const;
};

SmallnessVerdict is_small(const MapPtr& phi, int N, int D);
SmallnessVerdict is_almost_small(const MapPtr& phi, int N, int D);

std::vector<std::size_t> poincare_series(const TorAlgebra& T);
// generators[n] = rank of T_n modulo the subalgebra generated in lower
// degrees together with T_0-multiples; entry 0 is 0
std::vector<std::size_t> algebra_generators(const TorAlgebra& T, int N);
// the same per block
std::map<Bidegree, std::size_t> algebra_generators_bigraded(const TorAlgebra& T, int N);

// Indecomposables (C+ / C+ C+) of an extension over the residue field, per
// bidegree of homological degree q
std::size_t indecomposable_rank(const Extension& C, int q);
// The fiber k[X] = k (x)_P P[X] of the minimal model of a surjection P -> R
Extension closed_fiber(const MinimalModel& M);

}  // namespace tateforge
