#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "tateforge/retract.hpp"
#include "tateforge/ring.hpp"

namespace tateforge {

// Line-oriented workspace description:
//
//   [field]            char = 0 | p
//   [ring R]           vars = x, y:2      relations = x^2, x*y   (or one "relation =" per line)
//   [map phi]          source = P   target = R   images = x, y
//   [retract T_ret]    base = k | ring   vars = x   ideal = x^2
//   [options]          N = 6   D = 8   s_max = 3
//
// '#' starts a comment. Variables default to degree 1.
struct RingSpec {
  std::string name;
  int line = 0;
  std::vector<Variable> vars;
  std::vector<std::string> relations;
  std::vector<int> relation_lines;
};

struct MapSpec {
  std::string name;
  int line = 0;
  std::string source, target;
  int source_line = 0, target_line = 0, images_line = 0;
  std::vector<std::string> images;
};

struct RetractSpec {
  std::string name;
  int line = 0;
  std::string base = "k";
  int base_line = 0, ideal_line = 0;
  std::vector<Variable> vars;
  std::vector<std::string> ideal;
};

struct WorkspaceOptions {
  int N = 6, D = 8, s_max = 3;
};

class Workspace {
 public:
  enum class Kind { Ring, Map, Retract };
  struct Entry {
    std::string name;
    Kind kind;
  };

  Field field;
  WorkspaceOptions options;

  const std::vector<Entry>& entries() const { return entries_; }
  bool has(const std::string& name) const;
  // Throws UndefinedReference for unknown names.
  Kind kind(const std::string& name) const;

  // objects truncated at internal degree D, built on first use
  AlgebraPtr ring(const std::string& name, int D) const;
  // the polynomial ring on the variables of a ring, and its projection
  AlgebraPtr ambient(const std::string& ring_name, int D) const;
  MapPtr presentation(const std::string& ring_name, int D) const;
  MapPtr map(const std::string& name, int D) const;
  const RetractPresentation& retract(const std::string& name, int D) const;

  // builds every object at the default truncation; errors carry line numbers
  void validate() const;

  std::map<std::string, RingSpec> rings;
  std::map<std::string, MapSpec> maps;
  std::map<std::string, RetractSpec> retracts;

 private:
  friend Workspace parse_workspace(std::istream& in);
  std::vector<Entry> entries_;
  mutable std::map<std::pair<std::string, int>, AlgebraPtr> ring_cache_, ambient_cache_;
  mutable std::map<std::pair<std::string, int>, MapPtr> map_cache_;
  mutable std::map<std::pair<std::string, int>, RetractPresentation> retract_cache_;
};

// Throws ParseError, UndefinedReference or InhomogeneousRelation; the
// message names the offending line.
Workspace parse_workspace(std::istream& in);
Workspace parse_workspace_file(const std::string& path);

}  // namespace tateforge
