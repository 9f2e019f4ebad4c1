#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mck/graph_io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const fs::path& cwd) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" MCK_CLI_PATH "' " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mck_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("enumerate") {
  TempDir dir;
  const Run one = run("enumerate --p 2 --q 1 --r 1 --marked all --out fig.json", dir.path);
  CHECK(one.code == 0);
  CHECK(one.out.find("classes: 1\n") != std::string::npos);

  const Run bad = run("enumerate --p 2 --q 1 --r 2", dir.path);
  CHECK(bad.code == 2);
  CHECK(bad.out.find("parameter error") != std::string::npos);

  CHECK(run("enumerate --p 2 --q 1 --r 1 --marked 1,1,0", dir.path).code == 2);
  CHECK(run("enumerate --p 2 --q 1 --r 1 --marked x", dir.path).code == 2);
  CHECK(run("enumerate --p 2 --q 5 --r 5", dir.path).code == 2);
  CHECK(run("enumerate --q 2", dir.path).code == 2);
  CHECK(run("frobnicate", dir.path).code == 2);

  const Run two = run("enumerate --p 2 --q 2 --r 2 --marked all --out cat.json", dir.path);
  CHECK(two.code == 0);
  CHECK(two.out.find("classes: 20\n") != std::string::npos);
  const mck::Catalog cat = mck::catalog_from_json(mck::parse_json_text(slurp(dir.path / "cat.json")));
  std::set<std::string> got;
  for (const auto& g : cat.classes) got.insert(mck::canonical_form(g));
  std::set<std::string> want;
  for (const auto& g : oracle::catalog(2, 2, 2, mck::Marking::all(2, 2, 2))) want.insert(mck::canonical_form(g));
  CHECK(got == want);

  // Same configuration, byte-identical output regardless of thread count.
  CHECK(run("enumerate --p 2 --q 2 --r 2 --jobs 3 --out cat3.json", dir.path).code == 0);
  CHECK(slurp(dir.path / "cat.json") == slurp(dir.path / "cat3.json"));

  CHECK(run("enumerate --p 2 --q 1 --r 1 --out /nonexistent/dir/x.json", dir.path).code == 3);
}

TEST_CASE("catalog consumers") {
  TempDir dir;
  REQUIRE(run("enumerate --p 2 --q 1 --r 1 --out q1.json", dir.path).code == 0);
  REQUIRE(run("enumerate --p 2 --q 2 --r 2 --out q2.json", dir.path).code == 0);

  const Run euler = run("euler --in q1.json", dir.path);
  CHECK(euler.code == 0);
  CHECK(euler.out.rfind("formula: 1, independent: 1, AGREE\n", 0) == 0);
  const Run euler2 = run("euler --in q2.json", dir.path);
  CHECK(euler2.out.rfind("formula: -10, independent: -10, AGREE\n", 0) == 0);

  const Run dim = run("dim --in q2.json", dir.path);
  CHECK(dim.code == 0);
  CHECK(dim.out == "4\n");
  CHECK(run("dim --p 2 --q 1 --r 1", dir.path).out == "0\n");

  const Run qpoly = run("qpoly --in q2.json", dir.path);
  CHECK(qpoly.code == 0);
  CHECK(qpoly.out.find("inequalities hold") != std::string::npos);
  CHECK(run("qpoly --in q1.json --betti 1,0,0", dir.path).out.find("inequalities hold") != std::string::npos);
  CHECK(run("qpoly --in q1.json --betti 1,-2", dir.path).code == 2);

  const Run complex = run("complex --in q2.json --out k.json --dot k.dot", dir.path);
  CHECK(complex.code == 0);
  const auto kj = mck::parse_json_text(slurp(dir.path / "k.json"));
  CHECK(kj["dim"] == 4);
  CHECK(kj["classes"].size() == 20);
  CHECK(slurp(dir.path / "k.dot").rfind("digraph", 0) == 0);

  const Run dot = run("export-dot --in q2.json", dir.path);
  CHECK(dot.code == 0);
  CHECK(dot.out.find("cluster_class_0") != std::string::npos);
  CHECK(run("export-dot --in q2.json --poset --out poset.dot", dir.path).code == 0);
  CHECK(slurp(dir.path / "poset.dot").rfind("digraph", 0) == 0);

  // Missing, malformed and incomplete catalogs.
  CHECK(run("euler --in missing.json", dir.path).code == 3);
  std::ofstream(dir.path / "broken.json") << "{\"params\": {";
  const Run broken = run("euler --in broken.json", dir.path);
  CHECK(broken.code == 3);
  CHECK(broken.out.find("byte") != std::string::npos);
  auto partial = mck::parse_json_text(slurp(dir.path / "q2.json"));
  partial["classes"].erase(partial["classes"].size() - 1);
  std::ofstream(dir.path / "partial.json") << partial.dump();
  CHECK(run("euler --in partial.json", dir.path).code == 3);
}

TEST_CASE("facelattice") {
  TempDir dir;
  const Run r = run("facelattice --q 3 --dot faces.dot", dir.path);
  CHECK(r.code == 0);
  CHECK(r.out == "vertices: 6, faces: 13\n");
  CHECK(slurp(dir.path / "faces.dot").rfind("digraph", 0) == 0);
  CHECK(run("facelattice --q 4", dir.path).out == "vertices: 24, faces: 75\n");
  CHECK(run("facelattice --q 0", dir.path).code == 2);
}
