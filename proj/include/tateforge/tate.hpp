#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tateforge/dga.hpp"
#include "tateforge/resolve.hpp"
#include "tateforge/ring.hpp"

namespace tateforge {

// counts[n][d] = number of adjoined variables of bidegree (n, d); every entry
// with n <= N and d <= D is exact.
struct VariableCounts {
  int N = 0, D = 0;
  std::vector<std::vector<std::size_t>> counts;
  std::size_t total(int n) const;
};

struct AcyclicClosure {
  AlgebraPtr ring;
  std::shared_ptr<Extension> ext;  // divided-power flavor
  VariableCounts vars;
  bool minimality_certified = false;
};

// Throws MinimalityViolation if some stored differential leaves m*closure.
AcyclicClosure acyclic_closure(AlgebraPtr R, int N, int D);

struct DeviationSequence {
  int first = 1;  // smallest index carried: 1 for rings, 2 for maps
  int N = 0, D = 0;
  std::vector<long> values;  // values[n - first]
  std::optional<long> at(int n) const {
    if (n < first || n - first >= static_cast<int>(values.size())) return std::nullopt;
    return values[n - first];
  }
  int last() const { return first + static_cast<int>(values.size()) - 1; }
};

DeviationSequence deviations_ring(const AlgebraPtr& R, int N, int D);
DeviationSequence deviations_ring(const AcyclicClosure& C);

struct MinimalModel {
  std::shared_ptr<const GradedMap> map;
  std::shared_ptr<Extension> ext;  // R[U], polynomial flavor
  VariableCounts vars;
  bool decomposable = false;
};

// Throws NotSurjective when phi misses some degree <= its truncation.
MinimalModel minimal_model(std::shared_ptr<const GradedMap> phi, int N, int D);

DeviationSequence deviations_map(std::shared_ptr<const GradedMap> phi, int N, int D);
DeviationSequence deviations_map(const MinimalModel& M);

enum class MapClass { Regular, CompleteIntersection, Neither };
std::string to_string(MapClass c);

struct Classification {
  MapClass kind = MapClass::Neither;
  DeviationSequence deviations;
  // regular-sequence test on the minimal generators of the kernel
  RegularityVerdict kernel_check;
  std::string summary;
};

Classification classify(std::shared_ptr<const GradedMap> phi, int N, int D);

struct WcatProbe {
  int lower_bound = 0;
  int witness_n = -1;                  // the quotient k[U_{>=n}] carrying the witness
  std::vector<std::string> factors;    // names of the factor classes
  std::string product;                 // nonzero product representative
  std::vector<int> per_n;              // lower bound found for each probed n
  std::vector<int> n_values;
};

// n_range = {lo, hi}; products with more than s_max factors are not examined
WcatProbe wcat_probe(const MinimalModel& M, std::pair<int, int> n_range, int s_max, int D);

enum class GrowthStatus { NoData, ZeroFound, AllPositive };

// An exact real number a^(1/m), m >= 1.
struct Root {
  mpz_class base;
  unsigned long index = 1;
  std::string exact() const;
  std::string decimal(int digits = 4) const;
};
bool operator<(const Root& a, const Root& b);

struct GrowthReport {
  GrowthStatus status = GrowthStatus::NoData;
  int first_zero = -1;
  int lo = 0, hi = -1;
  Root rate;     // eps_hi^(1/hi)
  Root uniform;  // largest c with eps_n >= c^n on the window
  std::string summary;
};

GrowthReport growth_check(const DeviationSequence& dev);

struct WcatInequality {
  int probe = 0;
  int bound = 0;  // edim S - depth S
  bool holds = false;
  WcatProbe details;
};

WcatInequality wcat_inequality_check(std::shared_ptr<const GradedMap> phi, int N, int D, int s_max = 3);

}  // namespace tateforge
