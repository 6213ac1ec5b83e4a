#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tateforge/errors.hpp"
#include "tateforge/parallel.hpp"
#include "tateforge/report.hpp"

using namespace tateforge;

namespace {

const char* kFlagship = R"(# flagship
[field]
char = 0

[ring P2]
vars = x, y

[ring R]
vars = x, y
relations = x^2, x*y, y^2

[ring T]
vars = x
relation = x^2

[map psi]
source = P2
target = R
images = x, y

[map id]
source = R
target = R
images = x, y

[map aug]
source = T
target = K
images = 0

[ring K]
vars =

[retract T_retract]
base = k
vars = x
ideal = x^2

[options]
N = 5
D = 8
)";

Workspace parse(const std::string& text) {
  std::istringstream in(text);
  return parse_workspace(in);
}

template <class E>
std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("workspace parsing") {
  Workspace ws = parse(kFlagship);
  CHECK(ws.entries().size() == 8);
  CHECK(ws.options.N == 5);
  CHECK(ws.kind("psi") == Workspace::Kind::Map);
  CHECK(ws.kind("T_retract") == Workspace::Kind::Retract);
  CHECK(ws.ring("T", 8)->hilbert_function()[1] == 1);
  CHECK(ws.ring("T", 8)->hilbert_function()[2] == 0);
  CHECK_THROWS_AS(ws.kind("nope"), UndefinedReference);

  auto graded = parse("[ring W]\nvars = x, y:2\nrelations = x^4 - y^2\n");
  CHECK(graded.ring("W", 6)->variables()[1].degree == 2);
  CHECK(parse("[field]\nchar = 3\n[ring A]\nvars = x\nrelations = x^3\n").field.characteristic() == 3);
}

TEST_CASE("workspace errors carry line numbers") {
  auto inh = error_of<InhomogeneousRelation>("[ring T]\nvars = x\nrelations = x^2 + x\n");
  CHECK(contains(inh, "line 3"));
  auto undef = error_of<UndefinedReference>("[ring T]\nvars = x\n[map f]\nsource = T\ntarget = Nope\nimages = x\n");
  CHECK(contains(undef, "line 5"));
  CHECK(contains(undef, "Nope"));
  CHECK(contains(error_of<ParseError>("[ring T]\nvars = x\nrelations = x^2 +* x\n"), "line 3"));
  CHECK(contains(error_of<ParseError>("[ring T]\nvars = x\ncolour = red\n"), "line 3"));
  CHECK(contains(error_of<ParseError>("vars = x\n"), "line 1"));
  CHECK(contains(error_of<ParseError>("[ring T]\n[ring T]\n"), "line 2"));
  CHECK(contains(error_of<ParseError>("[field]\nchar = 4\n"), "line 2"));
  CHECK(contains(error_of<ParseError>("[ring A]\nvars = x\n[map f]\nsource = A\ntarget = A\nimages = x, x\n"),
                 "line 6"));
  CHECK(contains(error_of<ParseError>("[retract r]\nvars = x\nideal = x\n"), "line 3"));
  CHECK(contains(error_of<ParseError>("[wat]\n"), "line 1"));
}

TEST_CASE("commands produce the expected verdicts") {
  Workspace ws = parse(kFlagship);
  RunSettings s{6, 8, 3};
  auto dev = run_command(ws, "deviations", {"R"}, s);
  CHECK(dev.exit_code() == 0);
  REQUIRE(dev.sections.size() == 1);
  const auto& rows = dev.sections[0].tables[0].rows;
  REQUIRE(rows.size() == 6);
  std::vector<std::string> eps;
  for (const auto& r : rows) eps.push_back(r[1]);
  CHECK(eps == std::vector<std::string>{"2", "3", "2", "3", "6", "11"});
  CHECK(contains(dev.text(), "truncation"));

  auto id = run_command(ws, "classify", {"id"}, s);
  CHECK(contains(id.text(), "verdict: Regular"));
  CHECK(id.exit_code() == 0);
  auto psi = run_command(ws, "classify", {"psi"}, s);
  CHECK(contains(psi.text(), "verdict: Neither"));
  CHECK(contains(psi.text(), "witness:"));
  CHECK(psi.exit_code() == 2);

  auto ret = run_command(ws, "retract-check", {"T_retract"}, s);
  CHECK(contains(ret.text(), "Theorem I: AQ-dim <= 2"));
  CHECK(ret.exit_code() == 0);

  auto small = run_command(ws, "smallness", {"aug"}, s);
  CHECK(small.exit_code() == 2);
  CHECK(contains(small.text(), "NotAlmostSmall"));

  auto wc = run_command(ws, "wcat", {"aug"}, s);
  CHECK(wc.exit_code() == 0);
  CHECK(contains(wc.text(), "not asserted"));

  CHECK_THROWS_AS(run_command(ws, "smallness", {"R"}, s), InvalidInput);
  CHECK_THROWS_AS(run_command(ws, "frobnicate", {}, s), InvalidInput);
  CHECK_THROWS_AS(run_command(ws, "tor", {"missing"}, s), UndefinedReference);
}

TEST_CASE("report-all is deterministic across thread counts and writes TSV twins") {
  Workspace ws = parse(kFlagship);
  RunSettings s{4, 6, 3};
  unsigned before = worker_count();
  set_worker_count(1);
  auto one = run_command(ws, "report-all", {}, s).text();
  set_worker_count(8);
  auto many = run_command(parse(kFlagship), "report-all", {}, s);
  set_worker_count(before);
  CHECK(one == many.text());
  CHECK(many.exit_code() == 2);

  auto dir = std::filesystem::temp_directory_path() / "tateforge_tsv_test";
  std::filesystem::remove_all(dir);
  many.write_tsv(dir.string());
  std::ifstream f(dir / "deviations__R__deviations.tsv");
  REQUIRE(f.good());
  std::string header, first;
  std::getline(f, header);
  std::getline(f, first);
  CHECK(header == "n\teps_n");
  CHECK(first == "1\t2");
  std::filesystem::remove_all(dir);
}
