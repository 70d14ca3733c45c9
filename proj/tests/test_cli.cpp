#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "capfield/io.hpp"

namespace fs = std::filesystem;
using namespace capfield;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("capfield_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path log = workdir() / "last.log";
  const std::string cmd = "cd '" + workdir().string() + "' && '" CAPFIELD_EXE "' " + args + " > '" + log.string() +
                          "' 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(workdir() / p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("nets output is deterministic") {
  REQUIRE(run("nets --d 1 --n 10 --seed 7 -o a.json").code == 0);
  REQUIRE(run("nets --d 1 --n 10 --seed 7 -o b.json").code == 0);
  CHECK(slurp("a.json") == slurp("b.json"));
  CHECK(slurp("a.json").find("config_hash") != std::string::npos);
  REQUIRE(run("nets --d 1 --n 10 --seed 8 -o c.json").code == 0);
  CHECK(slurp("a.json") != slurp("c.json"));
}

TEST_CASE("exit codes") {
  const Run big = run("nets --d 3 --n 12");
  CHECK(big.code == 3);
  CHECK(big.out.find("--force") != std::string::npos);
  CHECK(run("nets --d 1").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("verify --suite nonsense").code == 2);
  CHECK(run("profile -f missing.json --y 0,1").code == 1);
}

TEST_CASE("corrupted nets are named") {
  REQUIRE(run("nets --d 1 --n 6 -o good.json").code == 0);
  json j = read_json_file(workdir() / "good.json");
  // Move a level-4 point onto its neighbour.
  j["nets"][3]["points"][5] = j["nets"][3]["points"][4];
  write_json_file(workdir() / "bad.json", j);
  const Run r = run("verify --nets bad.json");
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL nets") != std::string::npos);
  CHECK(r.out.find("separation") != std::string::npos);

  std::ofstream(workdir() / "trunc.json") << slurp("good.json").substr(0, 200);
  CHECK(run("verify --nets trunc.json").code == 1);
  CHECK(run("verify --nets good.json").code == 0);
}

TEST_CASE("suite filtering") {
  const Run r = run("verify --suite sphere --suite kernel --report rep.json");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS sphere") != std::string::npos);
  CHECK(r.out.find("PASS kernel") != std::string::npos);
  CHECK(r.out.find("lemma53") == std::string::npos);
  const json rep = read_json_file(workdir() / "rep.json");
  CHECK(rep.dump().find("lemma53") == std::string::npos);

  const Run l = run("verify --suite lemma53");
  CHECK(l.code == 0);
  CHECK(l.out.find("PASS lemma53") != std::string::npos);
  CHECK(l.out.find("sphere") == std::string::npos);
}

TEST_CASE("build, profile and slicecheck") {
  REQUIRE(run("build divergence --point 0,1 --beta 0.5 -o div.json").code == 0);
  const json f = read_json_file(workdir() / "div.json");
  CHECK(f.contains("config_hash"));
  REQUIRE(run("profile -f div.json --y 0,1 --n 4:10 -o prof.csv").code == 0);
  std::ifstream in(workdir() / "prof.csv");
  const CsvTable t = read_csv(in);
  CHECK(t.schema == "profile");
  CHECK(t.rows.size() == 7);
  const std::size_t vcol = t.column("value");
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(std::stod(t.rows[i][vcol]) > std::stod(t.rows[i - 1][vcol]));

  REQUIRE(run("nets --d 1 --n 8 -o n8.json").code == 0);
  REQUIRE(run("build saturating --n 6 --nets n8.json -o f6.json").code == 0);
  const Run s = run("slicecheck --measure f6.json --net n8.json --r 0.95 --y-index 3 -o slice.csv");
  CHECK(s.code == 0);
  std::ifstream sin(workdir() / "slice.csv");
  const CsvTable st = read_csv(sin);
  CHECK(st.rows.at(0)[st.column("ok")] == "1");
}

TEST_CASE("spectrum writes a versioned table and a plot") {
  const Run r = run("spectrum -o spec.csv --svg spec.svg");
  REQUIRE(r.code == 0);
  std::ifstream in(workdir() / "spec.csv");
  const CsvTable t = read_csv(in);
  CHECK(t.schema == "spectrum");
  CHECK(t.config.size() == 16);
  CHECK(t.rows.size() >= 5);
  CHECK_NOTHROW(t.column("fit_r2"));
  CHECK_NOTHROW(t.column("beta"));
  CHECK_NOTHROW(t.column("dim"));
  const std::string svg = slurp("spec.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find(t.config) != std::string::npos);

  std::string text = slurp("spec.csv");
  text.replace(text.find("version=1"), 9, "version=9");
  std::istringstream bumped(text);
  CHECK_THROWS_AS(read_csv(bumped), FormatError);
}
