#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sceig/bench.hpp"
#include "sceig/io.hpp"

using namespace sceig;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "sceig_cli_test";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SCEIG_CLI_PATH) + " " + args + " >" +
                          (scratch() / "stdout.txt").string() + " 2>" + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& rel) { return (fs::path(SCEIG_TEST_DATA_DIR) / rel).string(); }

std::string strip_wall(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line))
    if (line.find("wall") == std::string::npos) out += line + "\n";
  return out;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("verify-toy") == 0);
  const std::string out = read_text_file(scratch() / "stdout.txt");
  CHECK(out.find("lambda1 = -0.578") != std::string::npos);
  CHECK(out.find("verify-toy: PASS") != std::string::npos);

  CHECK(run("solve missing.prob") == 2);
  CHECK_FALSE(read_text_file(scratch() / "stderr.txt").empty());
  CHECK(run("") == 2);
  CHECK(run("solve " + data("fixtures/h2_sto3g.json") + " --method newton") == 2);
  CHECK(run("solve " + data("fixtures/h2_sto3g.json") + " --t 10 --i-f 50") == 2);
  CHECK(run("solve " + data("fixtures/h2_sto3g.json") + " --method scf") == 0);
  // budget too small to converge: exit 1 but reports still written
  const fs::path report = scratch() / "short.json";
  fs::remove(report);
  CHECK(run("solve " + data("corpus/h2o.json") + " --t 100 --i-f 50 --report-out " + report.string()) == 1);
  CHECK(fs::exists(report));
}

TEST_CASE("solve writes trace and report; reruns are identical") {
  const fs::path a = scratch() / "a.json", b = scratch() / "b.json", t = scratch() / "t.csv";
  const std::string args = "solve " + data("fixtures/h2_sto3g.json") +
                           " --method hybrid --init random --seed 5 --t 500 --i-f 25 --trace-out " + t.string();
  CHECK(run(args + " --report-out " + a.string()) == 0);
  CHECK(run(args + " --report-out " + b.string()) == 0);
  CHECK(strip_wall(read_text_file(a)) == strip_wall(read_text_file(b)));
  CHECK(read_text_file(t).rfind("iteration,", 0) == 0);
}

TEST_CASE("bench and sweep-if") {
  const fs::path dir = scratch() / "mini";
  fs::create_directories(dir);
  fs::copy_file(data("fixtures/h2_sto3g.json"), dir / "h2_sto3g.json", fs::copy_options::overwrite_existing);
  fs::copy_file(data("fixtures/he_sto3g.json"), dir / "he_sto3g.json", fs::copy_options::overwrite_existing);
  std::ofstream(dir / "notes.txt") << "not a problem file";

  const fs::path out1 = scratch() / "b1.csv", out2 = scratch() / "b2.csv", sum = scratch() / "s.csv";
  CHECK(run("bench " + dir.string() + " --grid default --out " + out1.string() + " --summary-out " + sum.string()) == 0);
  CHECK(run("bench " + dir.string() + " --grid default --out " + out2.string() + " --threads 2") == 0);
  auto r1 = parse_bench_csv(read_text_file(out1));
  auto r2 = parse_bench_csv(read_text_file(out2));
  REQUIRE(r1.size() == 12);
  for (auto* rows : {&r1, &r2})
    for (auto& r : *rows) r.wall_ms = 0.0;
  CHECK(bench_csv(r1) == bench_csv(r2));
  CHECK(fs::file_size(sum) > 0);

  CHECK(run("bench " + dir.string() + " --grid t=200 --out " + out1.string() + " --append") == 0);
  CHECK(parse_bench_csv(read_text_file(out1)).size() == 14);
  const std::string text = read_text_file(out1);
  CHECK(text.find("label,", 1) == std::string::npos);

  CHECK(run("bench " + dir.string() + " --grid nonsense=1 --out " + out1.string()) == 2);
  CHECK(run("bench /nonexistent --out " + out1.string()) == 2);

  const fs::path sweep = scratch() / "sweep.csv";
  CHECK(run("sweep-if " + data("fixtures/h2_sto3g.json") + " --t 500 --if-values 10,50,100 --out " + sweep.string()) == 0);
  const auto rows = parse_bench_csv(read_text_file(sweep));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].i_f == 10);
  CHECK(rows[2].i_f == 100);
  CHECK(run("sweep-if " + data("fixtures/h2_sto3g.json") + " --t 50 --if-values 10,500") == 2);
}
