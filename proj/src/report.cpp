#include "tateforge/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "tateforge/aq.hpp"
#include "tateforge/bar.hpp"
#include "tateforge/errors.hpp"
#include "tateforge/tate.hpp"
#include "tateforge/torgamma.hpp"

namespace tateforge {

int Report::exit_code() const {
  for (const auto& s : sections)
    if (s.negative) return 2;
  return 0;
}

namespace {

void render_table(std::ostringstream& os, const Table& t) {
  std::vector<std::size_t> w(t.columns.size(), 0);
  for (std::size_t c = 0; c < t.columns.size(); ++c) w[c] = t.columns[c].size();
  for (const auto& r : t.rows)
    for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s = " ";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      s += " " + cells[c];
      if (c + 1 < cells.size()) s += std::string(w[c] - cells[c].size(), ' ');
      if (c + 1 < cells.size()) s += " ";
    }
    os << s << "\n";
  };
  os << t.title << ":\n";
  line(t.columns);
  for (const auto& r : t.rows) line(r);
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

}  // namespace

std::string Report::text() const {
  std::ostringstream os;
  os << "# " << echo << "\n";
  for (const auto& s : sections) {
    os << "\n== " << s.command << " " << s.object << " ==\n";
    for (const auto& l : s.lines) os << l << "\n";
    for (const auto& t : s.tables) render_table(os, t);
  }
  return os.str();
}

void Report::write_tsv(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& s : sections)
    for (const auto& t : s.tables) {
      std::string path = dir + "/" + slug(s.command) + "__" + slug(s.object) + "__" + slug(t.title) + ".tsv";
      std::ofstream f(path);
      if (!f) throw InvalidInput("cannot write " + path);
      auto row = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) f << (c ? "\t" : "") << cells[c];
        f << "\n";
      };
      row(t.columns);
      for (const auto& r : t.rows) row(r);
    }
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"deviations", "classify", "tor", "pi", "smallness", "generators",
                                                 "bar-verify", "wcat", "retract-check", "report-all"};
  return names;
}

namespace {

using Kind = Workspace::Kind;

std::string str(std::size_t v) { return std::to_string(v); }
std::string str(long v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }
std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string truncation_line(const RunSettings& s) {
  return "truncation: homological degree <= " + str(s.N) + ", internal degree <= " + str(s.D);
}

std::string describe_ring(const Workspace& ws, const std::string& name, int D) {
  AlgebraPtr R = ws.ring(name, D);
  std::vector<std::string> vars, rels;
  for (const auto& v : R->variables()) vars.push_back(v.degree == 1 ? v.name : v.name + ":" + str(v.degree));
  for (const auto& r : R->relations()) rels.push_back(format_polynomial(R->field(), r, R->variables()));
  std::vector<std::string> hf;
  for (auto h : R->hilbert_function()) hf.push_back(str(h));
  return "ring " + name + " over " + R->field().name() + ": vars " + (vars.empty() ? "none" : join(vars, ", ")) +
         "; relations " + (rels.empty() ? "none" : join(rels, ", ")) + "; Hilbert function " + join(hf, " ");
}

std::string describe_map(const GradedMap& m) {
  std::vector<std::string> im;
  const auto& sv = m.source()->variables();
  for (std::size_t i = 0; i < sv.size(); ++i)
    im.push_back(sv[i].name + " -> " + format_polynomial(m.target()->field(), m.images()[i], m.target()->variables()));
  return "map " + m.name() + " (" + m.source()->name() + " -> " + m.target()->name() + ")" +
         (im.empty() ? "" : ": " + join(im, ", "));
}

// the map a ring or map name stands for in map-valued commands
MapPtr as_map(const Workspace& ws, const std::string& name, int D) {
  return ws.kind(name) == Kind::Ring ? ws.presentation(name, D) : ws.map(name, D);
}

Table deviation_table(const DeviationSequence& d) {
  Table t{"deviations", {"n", "eps_n"}, {}};
  for (int n = d.first; n <= d.last(); ++n) t.rows.push_back({str(n), str(*d.at(n))});
  return t;
}

Section deviations_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"deviations", name, {}, {}, false};
  if (ws.kind(name) == Kind::Ring) {
    sec.lines.push_back(describe_ring(ws, name, s.D));
    sec.tables.push_back(deviation_table(deviations_ring(ws.ring(name, s.D), s.N, s.D)));
  } else {
    MapPtr phi = ws.map(name, s.D);
    sec.lines.push_back(describe_map(*phi));
    sec.tables.push_back(deviation_table(deviations_map(phi, s.N, s.D)));
  }
  sec.lines.push_back(truncation_line(s));
  sec.lines.push_back("counts cover variables of internal degree <= " + str(s.D));
  return sec;
}

Section classify_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"classify", name, {}, {}, false};
  MapPtr phi = as_map(ws, name, s.D);
  sec.lines.push_back(describe_map(*phi));
  Classification c = classify(phi, std::max(s.N, 3), s.D);
  sec.lines.push_back("verdict: " + to_string(c.kind));
  sec.lines.push_back(c.summary);
  sec.lines.push_back("kernel generators regular: " + to_string(c.kernel_check.status) +
                      (c.kernel_check.reason.empty() ? "" : " (" + c.kernel_check.reason + ")"));
  if (!c.kernel_check.witness.empty()) sec.lines.push_back("witness: " + c.kernel_check.witness);
  if (c.kind == MapClass::Neither) {
    sec.negative = true;
    if (auto e3 = c.deviations.at(3)) sec.lines.push_back("witness: eps_3 = " + str(*e3) + " != 0");
  }
  sec.tables.push_back(deviation_table(c.deviations));
  sec.lines.push_back(truncation_line(s));
  return sec;
}

void tor_tables(Section& sec, const TorAlgebra& T) {
  Table r{"ranks", {"n", "rank"}, {}};
  auto ranks = T.ranks();
  for (std::size_t n = 0; n < ranks.size(); ++n) r.rows.push_back({str(n), str(ranks[n])});
  Table b{"bigraded", {"n", "d", "dim", "basis"}, {}};
  for (const auto& bd : T.blocks()) {
    const auto& lab = T.labels(bd);
    std::string basis = join(std::vector<std::string>(lab.begin(), lab.begin() + std::min<std::size_t>(lab.size(), 6)), " ");
    if (lab.size() > 6) basis += " ...";
    b.rows.push_back({str(bd.hom), str(bd.internal), str(T.dim(bd)), basis});
  }
  sec.tables.push_back(std::move(r));
  sec.tables.push_back(std::move(b));
}

Section tor_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"tor", name, {}, {}, false};
  switch (ws.kind(name)) {
    case Kind::Ring: {
      sec.lines.push_back(describe_ring(ws, name, s.D));
      sec.lines.push_back("Tor^R(k,k) from the acyclic closure");
      tor_tables(sec, tor_kk(ws.ring(name, s.D), s.N, s.D));
      break;
    }
    case Kind::Map: {
      MapPtr phi = ws.map(name, s.D);
      sec.lines.push_back(describe_map(*phi));
      sec.lines.push_back("Tor^R(S,S) for the surjection R -> S; ranks over Tor_0 = S");
      tor_tables(sec, tor_of_surjection(phi, s.N, s.D));
      break;
    }
    case Kind::Retract: {
      const auto& ret = ws.retract(name, s.D);
      sec.lines.push_back("Tor^R(S,S) for the retract " + name + "; ranks over Tor_0 = S");
      tor_tables(sec, tor_ss_retract(ret, s.N, s.D));
      break;
    }
  }
  sec.lines.push_back(truncation_line(s));
  return sec;
}

Section pi_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"pi", name, {}, {}, false};
  if (ws.kind(name) == Kind::Ring) {
    AlgebraPtr R = ws.ring(name, s.D);
    sec.lines.push_back(describe_ring(ws, name, s.D));
    auto closure = acyclic_closure(R, s.N, s.D);
    auto T = std::make_shared<const TorAlgebra>(tor_kk(closure, s.D));
    IndecomposableSpace I = pi(T);
    DeviationSequence dev = deviations_ring(closure);
    Table t{"pi", {"n", "rank pi_n", "eps_n", "match"}, {}};
    bool all = true;
    for (int n = 1; n <= s.N; ++n) {
      long e = dev.at(n).value_or(-1);
      bool m = static_cast<long>(I.rank(n)) == e;
      all = all && m;
      t.rows.push_back({str(n), str(I.rank(n)), str(e), yes_no(m)});
    }
    sec.lines.push_back(std::string("homotopy Lie algebra ranks ") + (all ? "equal" : "DIFFER FROM") + " the deviations");
    sec.tables.push_back(std::move(t));
  } else {
    MapPtr phi = ws.map(name, s.D);
    sec.lines.push_back(describe_map(*phi));
    TorMap f = induced_tor_map(phi, s.N, s.D);
    IndecomposableSpace ps = pi(f.source_ptr()), pt = pi(f.target_ptr());
    auto mats = pi_map(f, ps, pt);
    const Field& F = f.source().field();
    Table t{"pi(phi)", {"n", "rank source", "rank target", "rank pi_n(phi)", "kernel"}, {}};
    for (int n = 1; n <= s.N; ++n) {
      std::size_t r = 0;
      for (const auto& [bd, M] : mats)
        if (bd.hom == n) r += rank(F, M);
      t.rows.push_back({str(n), str(ps.rank(n)), str(pt.rank(n)), str(r), str(ps.rank(n) - r)});
    }
    sec.tables.push_back(std::move(t));
  }
  sec.lines.push_back(truncation_line(s));
  return sec;
}

Section smallness_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"smallness", name, {}, {}, false};
  MapPtr phi = ws.map(name, s.D);
  sec.lines.push_back(describe_map(*phi));
  auto small = is_small(phi, s.N, s.D);
  auto almost = is_almost_small(phi, s.N, s.D);
  sec.lines.push_back("small: " + small.summary());
  sec.lines.push_back("almost small: " + almost.summary());
  sec.negative = small.status == SmallnessStatus::NotSmall || almost.status == SmallnessStatus::NotSmall;
  sec.lines.push_back(truncation_line(s));
  return sec;
}

Section generators_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"generators", name, {}, {}, false};
  TorAlgebra T;
  if (ws.kind(name) == Kind::Ring) {
    sec.lines.push_back(describe_ring(ws, name, s.D));
    T = tor_kk(ws.ring(name, s.D), s.N, s.D);
  } else {
    sec.lines.push_back("Tor^R(S,S) for the retract " + name);
    T = tor_ss_retract(ws.retract(name, s.D), s.N, s.D);
  }
  auto g = algebra_generators(T, s.N);
  Table t{"generators", {"n", "generators"}, {}};
  int top = 0;
  for (std::size_t n = 1; n < g.size(); ++n) {
    t.rows.push_back({str(n), str(g[n])});
    if (g[n]) top = static_cast<int>(n);
  }
  Table b{"generators bigraded", {"n", "d", "generators"}, {}};
  for (const auto& [bd, c] : algebra_generators_bigraded(T, s.N))
    if (c) b.rows.push_back({str(bd.hom), str(bd.internal), str(c)});
  sec.lines.push_back("minimal algebra generators (products only, no divided powers) occur up to degree " + str(top) +
                      " within n <= " + str(s.N));
  sec.tables.push_back(std::move(t));
  sec.tables.push_back(std::move(b));
  sec.lines.push_back(truncation_line(s));
  return sec;
}

Section bar_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"bar-verify", name, {}, {}, false};
  sec.lines.push_back(describe_ring(ws, name, s.D));
  const int n_max = std::min(s.N, 4);
  MinimalModel M = minimal_model(ws.presentation(name, s.D), n_max + 1, s.D);
  auto fiber = std::make_shared<const Extension>(closed_fiber(M));
  BarComplex B(fiber, n_max);
  DegenerationReport deg = degeneration_check(B, n_max);
  sec.lines.push_back("fiber k[X] of the minimal model of " + ws.presentation(name, s.D)->name());
  sec.lines.push_back(deg.summary());
  if (!deg.holds) sec.negative = true;
  DeviationSequence dev = deviations_ring(ws.ring(name, s.D), n_max, s.D);
  Table t{"edge maps", {"n", "E1 total", "H(bar)", "Ind_{n-1}", "eps_n", "gamma-ind H_n", "rank nu_n", "iso"}, {}};
  for (int n = 0; n <= n_max; ++n) {
    std::vector<std::string> row = {str(n), str(deg.e1_totals[n]), str(deg.homology_ranks[n])};
    if (n >= 2) {
      std::size_t ind = indecomposable_rank(*fiber, n - 1);
      row.push_back(str(ind));
      row.push_back(str(dev.at(n).value_or(-1)));
      if (deg.holds) {
        EdgeMap e = edge_map(B, n);
        row.push_back(str(e.target_dim));
        row.push_back(str(e.rank));
        row.push_back(yes_no(e.is_isomorphism()));
        if (!e.is_isomorphism()) sec.negative = true;
      } else {
        row.insert(row.end(), {"-", "-", "-"});
      }
    } else {
      row.insert(row.end(), {"-", "-", "-", "-", "-"});
    }
    t.rows.push_back(std::move(row));
  }
  sec.tables.push_back(std::move(t));
  sec.lines.push_back("bar verification runs for n <= " + str(n_max) + ", internal degree <= " + str(s.D));
  return sec;
}

Section wcat_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"wcat", name, {}, {}, false};
  MapPtr phi = as_map(ws, name, s.D);
  sec.lines.push_back(describe_map(*phi));
  WcatInequality w = wcat_inequality_check(phi, s.N, s.D, s.s_max);
  sec.lines.push_back("wcat lower bound from probe: " + str(w.probe) + " (products of up to " + str(s.s_max) +
                      " factors)");
  if (w.probe > 0) {
    sec.lines.push_back("witness: " + join(w.details.factors, " * ") + " = " + w.details.product + " in k[U_{>=" +
                        str(w.details.witness_n) + "}]");
  }
  sec.lines.push_back("edim S - depth S = " + str(w.bound));
  auto almost = is_almost_small(phi, s.N, s.D);
  if (almost.status == SmallnessStatus::Small) {
    sec.lines.push_back(std::string("inequality wcat <= edim S - depth S: ") + (w.holds ? "holds" : "FAILS"));
    if (!w.holds) sec.negative = true;
  } else {
    sec.lines.push_back("inequality wcat <= edim S - depth S: not asserted, the map is not almost small (" +
                        almost.summary() + ")");
  }
  Table t{"probe", {"n", "lower bound"}, {}};
  for (std::size_t i = 0; i < w.details.n_values.size(); ++i)
    t.rows.push_back({str(w.details.n_values[i]), str(w.details.per_n[i])});
  sec.tables.push_back(std::move(t));
  GrowthReport g = growth_check(deviations_map(phi, s.N, s.D));
  sec.lines.push_back("growth: " + g.summary);
  sec.lines.push_back(truncation_line(s));
  return sec;
}

Section retract_section(const Workspace& ws, const std::string& name, const RunSettings& s) {
  Section sec{"retract-check", name, {}, {}, false};
  const RetractPresentation& ret = ws.retract(name, s.D);
  const RetractSpec& spec = ws.retracts.at(name);
  std::vector<std::string> xs, bs;
  for (const auto& v : spec.vars) xs.push_back(v.name);
  for (const auto& b : ret.b) bs.push_back(format_polynomial(ret.R->field(), b, ret.R->variables()));
  sec.lines.push_back("retract " + name + ": S = " + spec.base + ", R = S[" + join(xs, ",") + "]" +
                      (bs.empty() ? "" : "/(" + join(bs, ", ") + ")") + " over " + ret.R->field().name());

  GradedRank a1 = aq1(ret, s.D);
  TorAlgebra T = tor_ss_retract(ret, std::max(s.N, 2), s.D);
  GradedRank t1 = tor1_ranks(T);
  GradedRank a2 = aq2_from_tor(T);
  sec.lines.push_back("AQ1 = a/a^2: " + a1.format() + "; Tor_1 cross-check " + (t1.dims == a1.dims ? "agrees" : "DISAGREES"));
  sec.lines.push_back("AQ2 = Tor_2/Tor_1^2: " + a2.format());
  Table g{"AQ1 AQ2 by degree", {"d", "dim AQ1", "gens AQ1", "dim AQ2", "gens AQ2"}, {}};
  for (int d = 0; d <= s.D; ++d) {
    std::size_t v1 = d < static_cast<int>(a1.dims.size()) ? a1.dims[d] : 0;
    std::size_t g1 = d < static_cast<int>(a1.generators.size()) ? a1.generators[d] : 0;
    std::size_t v2 = d < static_cast<int>(a2.dims.size()) ? a2.dims[d] : 0;
    std::size_t g2 = d < static_cast<int>(a2.generators.size()) ? a2.generators[d] : 0;
    if (v1 || v2) g.rows.push_back({str(d), str(v1), str(g1), str(v2), str(g2)});
  }
  sec.tables.push_back(std::move(g));

  AQ3Report a3 = aq3_is_zero(ret, s.D);
  sec.lines.push_back("AQ3 = 0: " + to_string(a3.verdict) + " (b regular in S[x]: " + to_string(a3.regularity.status) +
                      ")");
  if (!a3.regularity.witness.empty()) sec.lines.push_back("witness: " + a3.regularity.witness);

  FourTermReport ft = four_term_check(ret, s.D);
  sec.lines.push_back("four-term sequence: " + ft.summary());
  if (!ft.exact || !ft.containment) sec.negative = true;
  Table f{"four-term", {"d", "(f)/(f)^2", "(x)/(x)^2", "rank delta", "AQ2", "AQ1", "exact"}, {}};
  for (const auto& d : ft.degrees)
    f.rows.push_back({str(d.d), str(d.m1), str(d.m2), str(d.delta_rank), str(d.aq2), str(d.aq1), yes_no(d.exact)});
  sec.tables.push_back(std::move(f));

  TheoremIReport t_one = theorem_I_check(ret, s.N, s.D);
  sec.lines.push_back("Theorem I: " + t_one.verdict + "; S[x] -> R classifies as " +
                      to_string(t_one.classification.kind) + (t_one.consistent ? " (consistent)" : " (INCONSISTENT)"));
  sec.lines.push_back("Theorem I note: " + t_one.characteristic_note);
  if (t_one.aq3.verdict != AQ3Verdict::Zero || !t_one.consistent) sec.negative = true;

  TheoremIIReport t_two = theorem_II_check(ret, s.N, s.D);
  sec.lines.push_back("Theorem II: " + t_two.summary);
  if (!t_two.condition_iv || (t_two.condition_iv && !t_two.series_match)) sec.negative = true;
  Table series{"Tor ranks", {"n", "rank Tor_n", "series", "generators"}, {}};
  for (std::size_t n = 0; n < t_two.tor_ranks.size(); ++n)
    series.rows.push_back({str(n), str(t_two.tor_ranks[n]), n < t_two.expected.size() ? t_two.expected[n].get_str() : "-",
                           n < t_two.generators.size() ? str(t_two.generators[n]) : "-"});
  sec.tables.push_back(std::move(series));

  if (ret.base_is_field()) {
    AQRanks r = aq_ranks_via_deviations(ret.projection, s.N, s.D);
    Table d{"AQ_n via deviations", {"n", "rank AQ_n", "certified"}, {}};
    for (std::size_t i = 0; i < r.ranks.size(); ++i)
      d.rows.push_back({str(static_cast<int>(i) + r.first), str(r.ranks[i]), yes_no(r.certified[i])});
    sec.tables.push_back(std::move(d));
    bool agree = r.at(2) && *r.at(2) == static_cast<long>(a2.rank());
    sec.lines.push_back(std::string("AQ2 two routes (Tor and deviations): ") + (agree ? "agree" : "DISAGREE"));
    if (!agree) sec.negative = true;
  }
  sec.lines.push_back(truncation_line(s));
  return sec;
}

using Builder = std::function<Section(const Workspace&, const std::string&, const RunSettings&)>;

struct CommandInfo {
  Builder build;
  std::vector<Kind> kinds;
};

const std::map<std::string, CommandInfo>& commands() {
  static const std::map<std::string, CommandInfo> table = {
      {"deviations", {deviations_section, {Kind::Ring, Kind::Map}}},
      {"classify", {classify_section, {Kind::Ring, Kind::Map}}},
      {"tor", {tor_section, {Kind::Ring, Kind::Map, Kind::Retract}}},
      {"pi", {pi_section, {Kind::Ring, Kind::Map}}},
      {"smallness", {smallness_section, {Kind::Map}}},
      {"generators", {generators_section, {Kind::Ring, Kind::Retract}}},
      {"bar-verify", {bar_section, {Kind::Ring}}},
      {"wcat", {wcat_section, {Kind::Ring, Kind::Map}}},
      {"retract-check", {retract_section, {Kind::Retract}}},
  };
  return table;
}

const std::vector<std::string>& report_all_order(Kind k) {
  static const std::vector<std::string> ring = {"deviations", "classify", "tor", "pi", "generators", "bar-verify", "wcat"};
  static const std::vector<std::string> map = {"deviations", "classify", "pi", "smallness", "wcat"};
  static const std::vector<std::string> retract = {"retract-check"};
  return k == Kind::Ring ? ring : k == Kind::Map ? map : retract;
}

std::string kind_name(Kind k) { return k == Kind::Ring ? "ring" : k == Kind::Map ? "map" : "retract"; }

}  // namespace

Report run_command(const Workspace& ws, const std::string& command, const std::vector<std::string>& names,
                   const RunSettings& settings) {
  Report rep;
  rep.echo = "tateforge " + command;
  for (const auto& n : names) rep.echo += " " + n;
  rep.echo += " --max-hom " + str(settings.N) + " --max-int " + str(settings.D);

  if (command == "report-all") {
    std::vector<std::string> targets = names;
    if (targets.empty())
      for (const auto& e : ws.entries()) targets.push_back(e.name);
    for (const auto& name : targets) {
      Kind k = ws.kind(name);
      for (const auto& c : report_all_order(k)) {
        try {
          rep.sections.push_back(commands().at(c).build(ws, name, settings));
        } catch (const NotSurjective& e) {
          rep.sections.push_back(Section{c, name, {std::string("not applicable: ") + e.what()}, {}, false});
        }
      }
    }
    return rep;
  }

  auto it = commands().find(command);
  if (it == commands().end()) throw InvalidInput("unknown command '" + command + "'");
  const auto& kinds = it->second.kinds;
  std::vector<std::string> targets = names;
  if (targets.empty())
    for (const auto& e : ws.entries())
      if (std::find(kinds.begin(), kinds.end(), e.kind) != kinds.end()) targets.push_back(e.name);
  for (const auto& name : targets) {
    Kind k = ws.kind(name);
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end())
      throw InvalidInput(command + " does not apply to the " + kind_name(k) + " " + name);
    rep.sections.push_back(it->second.build(ws, name, settings));
  }
  return rep;
}

}  // namespace tateforge
