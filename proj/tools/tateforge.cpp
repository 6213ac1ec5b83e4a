#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tateforge/errors.hpp"
#include "tateforge/report.hpp"
#include "tateforge/workspace.hpp"

using namespace tateforge;

int main(int argc, char** argv) {
  CLI::App app{"tateforge: deviations, Tor algebras and Andre-Quillen checks for graded rings"};
  std::string command, path, tsv_dir;
  std::vector<std::string> names;
  std::optional<int> max_hom, max_int, s_max;
  auto* cmd = app.add_option("command", command, "command to run")->required();
  cmd->check(CLI::IsMember(command_names()));
  app.add_option("workspace", path, "workspace file")->required()->check(CLI::ExistingFile);
  app.add_option("names", names, "objects to report on (default: all that apply)");
  app.add_option("--max-hom,--max", max_hom, "homological truncation N (default 6)")->check(CLI::PositiveNumber);
  app.add_option("--max-int", max_int, "internal-degree truncation D (default 8)")->check(CLI::PositiveNumber);
  app.add_option("--s-max", s_max, "largest product length examined by wcat (default 3)")->check(CLI::PositiveNumber);
  app.add_option("--tsv", tsv_dir, "also write every table as TSV into this directory");
  app.footer("Exit status: 0 success, 2 negative mathematical verdict, 1 error.\n"
             "TATEFORGE_THREADS caps the number of worker threads.");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    Workspace ws = parse_workspace_file(path);
    RunSettings s;
    s.N = max_hom.value_or(ws.options.N);
    s.D = max_int.value_or(ws.options.D);
    s.s_max = s_max.value_or(ws.options.s_max);
    Report rep = run_command(ws, command, names, s);
    std::cout << rep.text();
    if (!tsv_dir.empty()) rep.write_tsv(tsv_dir);
    return rep.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
