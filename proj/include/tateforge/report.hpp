#pragma once

#include <string>
#include <vector>

#include "tateforge/workspace.hpp"

namespace tateforge {

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Section {
  std::string command, object;
  std::vector<std::string> lines;
  std::vector<Table> tables;
  bool negative = false;  // a negative mathematical verdict (exit status 2)
};

struct Report {
  std::string echo;
  std::vector<Section> sections;
  int exit_code() const;
  std::string text() const;
  // one file per table: <command>__<object>__<title>.tsv
  void write_tsv(const std::string& dir) const;
};

struct RunSettings {
  int N = 6, D = 8, s_max = 3;
};

const std::vector<std::string>& command_names();

// Throws InvalidInput for an unknown command or an object of the wrong kind,
// and UndefinedReference for unknown names. An empty name list means every
// applicable object of the workspace.
Report run_command(const Workspace& ws, const std::string& command, const std::vector<std::string>& names,
                   const RunSettings& settings);

}  // namespace tateforge
