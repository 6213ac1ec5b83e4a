#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tateforge/dga.hpp"
#include "tateforge/ring.hpp"

namespace tateforge {

// Homogeneous element of a graded algebra in basis coordinates.
struct RingElement {
  int degree = 0;
  SparseVec coords;
};

RingElement ring_element(const GradedAlgebra& A, const Polynomial& p);

struct KoszulComplex {
  AlgebraPtr ring;
  std::vector<RingElement> elements;
  std::shared_ptr<Extension> ext;  // exterior variable e_i with d(e_i) = f_i
};

// Throws InhomogeneousElement for inhomogeneous input and InvalidInput for
// elements that vanish in the ring.
KoszulComplex koszul(AlgebraPtr ring, const std::vector<Polynomial>& elements, int max_int);
KoszulComplex koszul(AlgebraPtr ring, const std::vector<RingElement>& elements, int max_int);

enum class Regularity { Regular, NotRegular, Inconclusive };
std::string to_string(Regularity r);

struct RegularityVerdict {
  Regularity status = Regularity::Inconclusive;
  // for NotRegular: a syzygy sum a_i f_i = 0 that is not a Koszul relation,
  // or a text certificate when the witness lies beyond the truncation
  std::optional<Element> cycle;
  std::string witness;
  std::string reason;
};

RegularityVerdict is_regular_sequence(AlgebraPtr ring, const std::vector<Polynomial>& elements, int D);
RegularityVerdict is_regular_sequence(AlgebraPtr ring, const std::vector<RingElement>& elements, int D);

struct BettiTable {
  int N = 0, D = 0;
  // beta[i][j] for 0 <= i <= N, 0 <= j <= D
  std::vector<std::vector<std::size_t>> beta;
  std::size_t at(int i, int j) const {
    if (i < 0 || j < 0 || i > N || j > D) return 0;
    return beta[i][j];
  }
  std::size_t total(int i) const;
};

// Tor^P(R, k) for P the ambient polynomial ring, as Koszul homology of the
// variables over R; exact for internal degrees <= D.
BettiTable betti_numbers(const AlgebraPtr& R, int N, int D);
int depth(const AlgebraPtr& R, int N, int D);
std::optional<int> depth(const BettiTable& t, std::size_t num_variables);
struct PolregData {
  int polreg = 0;
  int small_threshold = 2;
};
PolregData polreg(const AlgebraPtr& R, int N, int D);
PolregData polreg(const BettiTable& t);

// coefficients of H_R(t) * prod (1 - t^{deg x_i}) up to t^D
std::vector<long> euler_series(const GradedAlgebra& R, int D);

}  // namespace tateforge
