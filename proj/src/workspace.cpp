#include "tateforge/workspace.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "tateforge/errors.hpp"

namespace tateforge {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

int parse_int(const std::string& s, int line, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ParseError(line, what + " must be an integer, got '" + s + "'");
  }
  if (used != s.size()) throw ParseError(line, what + " must be an integer, got '" + s + "'");
  return v;
}

std::vector<Variable> parse_variables(const std::string& s, int line) {
  std::vector<Variable> vars;
  std::set<std::string> seen;
  for (const auto& item : split_list(s)) {
    Variable v;
    auto colon = item.find(':');
    v.name = trim(item.substr(0, colon));
    if (colon != std::string::npos) v.degree = parse_int(trim(item.substr(colon + 1)), line, "degree of " + v.name);
    if (!is_identifier(v.name)) throw ParseError(line, "bad variable name '" + v.name + "'");
    if (v.degree < 1) throw ParseError(line, "variable " + v.name + " needs a positive degree");
    if (!seen.insert(v.name).second) throw ParseError(line, "variable " + v.name + " declared twice");
    vars.push_back(v);
  }
  return vars;
}

std::string at_line(int line, const std::string& what) { return "line " + std::to_string(line) + ": " + what; }

}  // namespace

Workspace parse_workspace(std::istream& in) {
  Workspace ws;
  enum class Block { None, Field, Ring, Map, Retract, Options } block = Block::None;
  std::string current;
  bool seen_field = false, seen_options = false;
  std::set<std::string> names;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated block header");
      std::stringstream hs(s.substr(1, s.size() - 2));
      std::string kind, name, extra;
      hs >> kind >> name >> extra;
      if (!extra.empty()) throw ParseError(line, "block header takes one name");
      if (kind == "field" || kind == "options") {
        if (!name.empty()) throw ParseError(line, "[" + kind + "] takes no name");
        bool& seen = kind == "field" ? seen_field : seen_options;
        if (seen) throw ParseError(line, "duplicate [" + kind + "] block");
        seen = true;
        block = kind == "field" ? Block::Field : Block::Options;
        continue;
      }
      if (kind != "ring" && kind != "map" && kind != "retract") throw ParseError(line, "unknown block [" + kind + "]");
      if (!is_identifier(name)) throw ParseError(line, "[" + kind + "] needs a name");
      if (name == "k") throw ParseError(line, "the name k is reserved for the coefficient field");
      if (!names.insert(name).second) throw ParseError(line, "name " + name + " defined twice");
      current = name;
      if (kind == "ring") {
        block = Block::Ring;
        ws.rings[name] = RingSpec{name, line, {}, {}, {}};
        ws.entries_.push_back({name, Workspace::Kind::Ring});
      } else if (kind == "map") {
        block = Block::Map;
        MapSpec m;
        m.name = name;
        m.line = line;
        ws.maps[name] = m;
        ws.entries_.push_back({name, Workspace::Kind::Map});
      } else {
        block = Block::Retract;
        RetractSpec r;
        r.name = name;
        r.line = line;
        ws.retracts[name] = r;
        ws.entries_.push_back({name, Workspace::Kind::Retract});
      }
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    auto unknown = [&]() { return ParseError(line, "unknown key '" + key + "' in this block"); };
    switch (block) {
      case Block::None: throw ParseError(line, "key outside of a block");
      case Block::Field: {
        if (key != "char" && key != "characteristic") throw unknown();
        int p = parse_int(value, line, "char");
        if (p < 0 || (p != 0 && !is_prime(static_cast<unsigned long>(p)))) throw ParseError(line, "char must be 0 or a prime, got " + value);
        ws.field = p ? Field(static_cast<unsigned long>(p)) : Field();
        break;
      }
      case Block::Options:
        if (key == "N")
          ws.options.N = parse_int(value, line, "N");
        else if (key == "D")
          ws.options.D = parse_int(value, line, "D");
        else if (key == "s_max")
          ws.options.s_max = parse_int(value, line, "s_max");
        else
          throw unknown();
        if (ws.options.N < 1 || ws.options.D < 1 || ws.options.s_max < 1)
          throw ParseError(line, key + " must be positive");
        break;
      case Block::Ring: {
        RingSpec& r = ws.rings[current];
        if (key == "vars") {
          r.vars = parse_variables(value, line);
        } else if (key == "relations" || key == "relation") {
          auto items = key == "relation" ? std::vector<std::string>{value} : split_list(value);
          for (auto& item : items) {
            if (item.empty()) throw ParseError(line, "empty relation");
            r.relations.push_back(item);
            r.relation_lines.push_back(line);
          }
        } else {
          throw unknown();
        }
        break;
      }
      case Block::Map: {
        MapSpec& m = ws.maps[current];
        if (key == "source") {
          m.source = value;
          m.source_line = line;
        } else if (key == "target") {
          m.target = value;
          m.target_line = line;
        } else if (key == "images") {
          m.images = split_list(value);
          m.images_line = line;
        } else {
          throw unknown();
        }
        break;
      }
      case Block::Retract: {
        RetractSpec& r = ws.retracts[current];
        if (key == "base") {
          r.base = value;
          r.base_line = line;
        } else if (key == "vars") {
          r.vars = parse_variables(value, line);
        } else if (key == "ideal") {
          r.ideal = split_list(value);
          r.ideal_line = line;
        } else {
          throw unknown();
        }
        break;
      }
    }
  }

  auto require_ring = [&](const std::string& name, int ref_line, const std::string& role) {
    if (name.empty()) throw ParseError(ref_line, role + " missing");
    if (!ws.rings.count(name)) throw UndefinedReference(at_line(ref_line, role + " " + name + " is not a defined ring"));
  };
  for (const auto& e : ws.entries_) {
    if (e.kind == Workspace::Kind::Map) {
      const MapSpec& m = ws.maps[e.name];
      require_ring(m.source, m.source_line ? m.source_line : m.line, "source");
      require_ring(m.target, m.target_line ? m.target_line : m.line, "target");
    } else if (e.kind == Workspace::Kind::Retract) {
      const RetractSpec& r = ws.retracts[e.name];
      if (r.base != "k") require_ring(r.base, r.base_line ? r.base_line : r.line, "base");
    }
  }
  ws.validate();
  return ws;
}

Workspace parse_workspace_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot read " + path);
  return parse_workspace(f);
}

bool Workspace::has(const std::string& name) const {
  return rings.count(name) || maps.count(name) || retracts.count(name);
}

Workspace::Kind Workspace::kind(const std::string& name) const {
  if (rings.count(name)) return Kind::Ring;
  if (maps.count(name)) return Kind::Map;
  if (retracts.count(name)) return Kind::Retract;
  throw UndefinedReference(name + " is not defined in the workspace");
}

AlgebraPtr Workspace::ring(const std::string& name, int D) const {
  auto it = ring_cache_.find({name, D});
  if (it != ring_cache_.end()) return it->second;
  auto spec = rings.find(name);
  if (spec == rings.end()) throw UndefinedReference(name + " is not a defined ring");
  const RingSpec& r = spec->second;
  std::vector<Polynomial> rels;
  for (std::size_t i = 0; i < r.relations.size(); ++i) {
    int ln = r.relation_lines[i];
    Polynomial p;
    try {
      p = parse_polynomial(field, r.relations[i], r.vars);
    } catch (const InvalidInput& e) {
      throw ParseError(ln, e.what());
    }
    if (!is_homogeneous(p, r.vars))
      throw InhomogeneousRelation(at_line(ln, "relation " + r.relations[i] + " in ring " + name + " is not homogeneous"));
    rels.push_back(std::move(p));
  }
  AlgebraPtr A;
  try {
    A = std::make_shared<const GradedAlgebra>(field, r.vars, rels, D, name);
  } catch (const Error& e) {
    throw ParseError(r.line, e.what());
  }
  ring_cache_[{name, D}] = A;
  return A;
}

AlgebraPtr Workspace::ambient(const std::string& ring_name, int D) const {
  auto it = ambient_cache_.find({ring_name, D});
  if (it != ambient_cache_.end()) return it->second;
  auto spec = rings.find(ring_name);
  if (spec == rings.end()) throw UndefinedReference(ring_name + " is not a defined ring");
  std::string label = "k[";
  for (std::size_t i = 0; i < spec->second.vars.size(); ++i) label += (i ? "," : "") + spec->second.vars[i].name;
  label += "]";
  auto A = std::make_shared<const GradedAlgebra>(field, spec->second.vars, std::vector<Polynomial>{}, D, label);
  ambient_cache_[{ring_name, D}] = A;
  return A;
}

MapPtr Workspace::presentation(const std::string& ring_name, int D) const {
  std::string key = ring_name + "#presentation";
  auto it = map_cache_.find({key, D});
  if (it != map_cache_.end()) return it->second;
  AlgebraPtr R = ring(ring_name, D);
  std::vector<std::string> im;
  for (const auto& v : R->variables()) im.push_back(v.name);
  auto m = std::make_shared<const GradedMap>(make_map(ambient(ring_name, D), R, im, "presentation of " + ring_name));
  map_cache_[{key, D}] = m;
  return m;
}

MapPtr Workspace::map(const std::string& name, int D) const {
  auto it = map_cache_.find({name, D});
  if (it != map_cache_.end()) return it->second;
  auto spec = maps.find(name);
  if (spec == maps.end()) throw UndefinedReference(name + " is not a defined map");
  const MapSpec& m = spec->second;
  AlgebraPtr S = ring(m.source, D), T = ring(m.target, D);
  int ln = m.images_line ? m.images_line : m.line;
  if (m.images.size() != S->num_variables())
    throw ParseError(ln, "map " + name + " needs " + std::to_string(S->num_variables()) + " images, got " +
                             std::to_string(m.images.size()));
  MapPtr out;
  try {
    out = std::make_shared<const GradedMap>(make_map(S, T, m.images, name));
  } catch (const Error& e) {
    throw ParseError(ln, e.what());
  }
  map_cache_[{name, D}] = out;
  return out;
}

const RetractPresentation& Workspace::retract(const std::string& name, int D) const {
  auto it = retract_cache_.find({name, D});
  if (it != retract_cache_.end()) return it->second;
  auto spec = retracts.find(name);
  if (spec == retracts.end()) throw UndefinedReference(name + " is not a defined retract");
  const RetractSpec& r = spec->second;
  AlgebraPtr S = r.base == "k" ? GradedAlgebra::residue_field(field, D) : ring(r.base, D);
  int ln = r.ideal_line ? r.ideal_line : r.line;
  try {
    auto ret = make_retract(name, S, r.vars, r.ideal, D);
    return retract_cache_.emplace(std::make_pair(name, D), std::move(ret)).first->second;
  } catch (const InhomogeneousRelation& e) {
    throw InhomogeneousRelation(at_line(ln, e.what()));
  } catch (const Error& e) {
    throw ParseError(ln, e.what());
  }
}

void Workspace::validate() const {
  for (const auto& e : entries_) {
    switch (e.kind) {
      case Kind::Ring: ring(e.name, options.D); break;
      case Kind::Map: map(e.name, options.D); break;
      case Kind::Retract: retract(e.name, options.D); break;
    }
  }
}

}  // namespace tateforge
