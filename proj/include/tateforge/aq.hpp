#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tateforge/resolve.hpp"
#include "tateforge/retract.hpp"
#include "tateforge/tate.hpp"
#include "tateforge/torgamma.hpp"

namespace tateforge {

// Graded S-module data in internal degrees 0..D: k-dimensions and the
// number of minimal S-module generators in each degree.
struct GradedRank {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> generators;
  std::size_t rank() const;
  std::size_t total_dim() const;
  std::string format() const;
};

// a/a^2 for a = (x)R
GradedRank aq1(const RetractPresentation& ret, int D);
// Tor_1 of a Tor algebra viewed the same way (cross-check for aq1)
GradedRank tor1_ranks(const TorAlgebra& T);
// Tor_2 / (Tor_1 Tor_1) from the Tor tables of the retract
GradedRank aq2(const RetractPresentation& ret, int N, int D);
GradedRank aq2_from_tor(const TorAlgebra& T);

enum class AQ3Verdict { Zero, NonZero, Inconclusive };
std::string to_string(AQ3Verdict v);
struct AQ3Report {
  AQ3Verdict verdict = AQ3Verdict::Inconclusive;
  RegularityVerdict regularity;
};
// zero exactly when a minimal generating set of (b) is a regular sequence in
// S[x]; redundant generators are dropped first
AQ3Report aq3_is_zero(const RetractPresentation& ret, int D);

struct FourTermDegree {
  int d = 0;
  std::size_t m1 = 0, m2 = 0;  // (f)/(f)^2 (x) S and (x)/(x)^2
  std::size_t delta_rank = 0;
  std::size_t aq1 = 0, aq2 = 0;
  bool exact = true, contained = true;
};
struct FourTermReport {
  bool exact = true;
  bool containment = true;  // Im(delta) inside n.(x)/(x)^2
  bool delta_zero = true;
  std::vector<FourTermDegree> degrees;
  std::string summary() const;
};
FourTermReport four_term_check(const RetractPresentation& ret, int D);

struct AQRanks {
  int first = 2;
  std::vector<long> ranks;       // ranks[n - first] = eps_{n+1}
  std::vector<bool> certified;   // inside the characteristic window
  DeviationSequence deviations;
  std::optional<long> at(int n) const;
};
// rank_k AQ_n(R|Q,k) for n = 2..N through the deviations of psi: Q -> R
AQRanks aq_ranks_via_deviations(const MapPtr& psi, int N, int D);

struct TheoremIReport {
  AQ3Report aq3;
  bool b_empty = false;
  std::string verdict;  // "AQ-dim <= 1", "AQ-dim <= 2", "AQ-dim = infinity", "undetermined"
  Classification classification;
  bool consistent = true;  // condition (v) agrees with the classification of S[x] -> R
  std::string characteristic_note;
};
TheoremIReport theorem_I_check(const RetractPresentation& ret, int N, int D);

struct TheoremIIReport {
  bool b_regular = false, b_in_x_squared = false, characteristic_ok = false;
  bool condition_iv = false;
  std::size_t d1 = 0, d2 = 0;
  std::vector<std::size_t> tor_ranks;
  std::vector<mpz_class> expected;  // coefficients of (1+t)^d1 / (1-t^2)^d2
  bool series_match = false;
  bool projectivity_certified = false;
  std::vector<std::size_t> generators;  // minimal algebra generators per degree
  std::optional<int> fresh_generator;   // first generator degree above 2
  std::string summary;
};
TheoremIIReport theorem_II_check(const RetractPresentation& ret, int N, int D);

// coefficients of (1+t)^a / (1-t^2)^b up to t^N
std::vector<mpz_class> exterior_symmetric_series(std::size_t a, std::size_t b, int N);

}  // namespace tateforge
