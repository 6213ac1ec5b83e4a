#include "tateforge/retract.hpp"

#include "tateforge/errors.hpp"

namespace tateforge {

RetractPresentation make_retract(std::string name, AlgebraPtr S, const std::vector<Variable>& x,
                                 const std::vector<std::string>& b, int D) {
  RetractPresentation r;
  r.name = std::move(name);
  const Field& F = S->field();
  D = std::min(D, S->max_degree());
  std::vector<Variable> vars = S->variables();
  const std::size_t ns = vars.size();
  for (const auto& v : x) {
    for (const auto& w : vars)
      if (w.name == v.name) throw InvalidInput("retract variable " + v.name + " clashes with a variable of the base");
    vars.push_back(v);
  }
  for (std::size_t i = 0; i < x.size(); ++i) r.x_vars.push_back(ns + i);
  // relations of S lifted to the bigger variable set
  std::vector<Polynomial> srels;
  for (const auto& f : S->relations()) {
    Polynomial g;
    for (const auto& [e, c] : f.terms) {
      Exponents ee(e);
      ee.resize(vars.size(), 0);
      g.add_term(F, ee, c);
    }
    srels.push_back(g);
  }
  for (const auto& s : b) {
    Polynomial f = parse_polynomial(F, s, vars);
    for (const auto& [e, c] : f.terms) {
      int xdeg = 0, sdeg = 0;
      for (std::size_t i = 0; i < vars.size(); ++i) (i < ns ? sdeg : xdeg) += e[i];
      if (xdeg == 0)
        throw InvalidInput("generator " + s + " of " + r.name + " has a term without retract variables");
      if (xdeg == 1 && sdeg == 0)
        throw InvalidInput("generator " + s + " of " + r.name + " has a linear term in the retract variables");
    }
    r.b.push_back(f);
  }
  std::vector<Polynomial> rels = srels;
  for (const auto& f : r.b) rels.push_back(f);
  r.P = std::make_shared<const GradedAlgebra>(F, vars, srels, D, S->name() + "[x]");
  r.R = std::make_shared<const GradedAlgebra>(F, vars, rels, D, r.name);
  std::vector<Polynomial> id_s, id_r, proj;
  for (std::size_t i = 0; i < ns; ++i) {
    Polynomial p = Polynomial::variable(vars.size(), i);
    id_r.push_back(p);
    id_s.push_back(p);
    proj.push_back(Polynomial::variable(ns, i));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    id_r.push_back(Polynomial::variable(vars.size(), ns + i));
    proj.push_back(Polynomial{});
  }
  r.section = std::make_shared<const GradedMap>(S, r.R, id_s, "section");
  r.projection = std::make_shared<const GradedMap>(r.R, S, proj, "projection");
  r.cover = std::make_shared<const GradedMap>(r.P, r.R, id_r, "cover");
  r.p_to_s = std::make_shared<const GradedMap>(r.P, S, proj, "p_to_s");
  r.S = std::move(S);
  return r;
}

}  // namespace tateforge
