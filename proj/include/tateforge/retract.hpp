#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tateforge/ring.hpp"

namespace tateforge {

// A split retract S -> R = S[x]/(b) -> S. R is presented on the variables of
// S followed by x, with the relations of S together with b; the projection
// kills x and the section is the inclusion of S.
struct RetractPresentation {
  std::string name;
  AlgebraPtr S;
  AlgebraPtr P;  // S[x]
  AlgebraPtr R;
  std::vector<Polynomial> b;  // in the variables of P (and R)
  std::vector<std::size_t> x_vars;
  std::shared_ptr<const GradedMap> section;     // S -> R
  std::shared_ptr<const GradedMap> projection;  // R -> S
  std::shared_ptr<const GradedMap> cover;       // S[x] -> R
  std::shared_ptr<const GradedMap> p_to_s;      // S[x] -> S, x -> 0

  bool base_is_field() const { return S->is_field(); }
};

// Throws InvalidInput when a generator of b has a term without x, or a term
// that is a constant multiple of a single x (the generators must lie in
// n(x) + (x)^2).
RetractPresentation make_retract(std::string name, AlgebraPtr S, const std::vector<Variable>& x,
                                 const std::vector<std::string>& b, int D);

}  // namespace tateforge
