#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "sceig/errors.hpp"
#include "sceig/io.hpp"
#include "sceig/toy.hpp"

using namespace sceig;
namespace fs = std::filesystem;

namespace {

std::uint64_t bits(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

std::vector<fs::path> data_files() {
  std::vector<fs::path> out;
  for (const char* sub : {"corpus", "fixtures"})
    for (const auto& e : fs::directory_iterator(fs::path(SCEIG_TEST_DATA_DIR) / sub))
      if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(-0.0) == "-0.0");
  CHECK(format_real(0.0) == "0");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(bits(std::strtod(format_real(x).c_str(), nullptr)) == bits(x));
  }
}

TEST_CASE("toy round trip") {
  const Problem toy = toy_problem();
  const std::string text = write_problem(toy);
  const Problem back = parse_problem(text);
  CHECK(back.overlap() == toy.overlap());
  CHECK(back.core_hamiltonian() == toy.core_hamiltonian());
  CHECK(back.eri() == toy.eri());
  CHECK(back.k() == toy.k());
  CHECK(back.label() == "toy");
  CHECK(back.nuclear_repulsion() == toy.nuclear_repulsion());
  CHECK_FALSE(back.reference_energy().has_value());
  CHECK(write_problem(back) == text);
  CHECK(text.find("reference_energy") == std::string::npos);
  CHECK(text.find("null") == std::string::npos);
}

TEST_CASE("field order and reference energy") {
  ProblemData d = toy_problem_data();
  d.reference_energy = -1.5;
  d.nuclear_repulsion = 0.7;
  const std::string text = write_problem(d);
  const char* keys[] = {"\"version\"", "\"label\"", "\"n_basis\"", "\"k\"", "\"nuclear_repulsion\"",
                        "\"reference_energy\"", "\"s\"", "\"h\"", "\"eri\""};
  std::size_t last = 0;
  for (const char* key : keys) {
    const std::size_t pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    CHECK(pos >= last);
    last = pos;
  }
  const Problem back = parse_problem(text);
  CHECK(*back.reference_energy() == -1.5);
  CHECK(back.nuclear_repulsion() == 0.7);
}

TEST_CASE("negative zero survives") {
  ProblemData d = toy_problem_data();
  d.core_hamiltonian(0, 1) = d.core_hamiltonian(1, 0) = -0.0;
  const ProblemData back = parse_problem_data(write_problem(d));
  CHECK(std::signbit(back.core_hamiltonian(0, 1)));
}

TEST_CASE("parse errors") {
  const std::string text = write_problem(toy_problem());
  try {
    parse_problem(text.substr(0, text.size() / 2));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() > 0);
  }
  CHECK_THROWS_AS(parse_problem(""), ParseError);
  CHECK_THROWS_AS(parse_problem("[1, 2]"), ParseError);

  nlohmann::json doc = nlohmann::json::parse(text);
  doc["eri"].erase(doc["eri"].size() - 1);
  try {
    parse_problem(doc.dump());
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(e.expected() == 16);
    CHECK(e.actual() == 15);
    CHECK(std::string(e.what()).find("eri") != std::string::npos);
  }

  doc = nlohmann::json::parse(text);
  doc["version"] = 2;
  CHECK_THROWS_AS(parse_problem(doc.dump()), ParseError);
  doc = nlohmann::json::parse(text);
  doc.erase("k");
  CHECK_THROWS_AS(parse_problem(doc.dump()), ParseError);
  doc = nlohmann::json::parse(text);
  doc["s"][1] = 0.9;
  CHECK_THROWS_AS(parse_problem(doc.dump()), AsymmetricInput);
  doc = nlohmann::json::parse(text);
  doc["k"] = 5;
  CHECK_THROWS_AS(parse_problem(doc.dump()), BadOccupation);
}

TEST_CASE("exported files are byte-identical after a round trip") {
  const auto files = data_files();
  REQUIRE(files.size() >= 7);
  for (const auto& path : files) {
    CAPTURE(path.string());
    const std::string original = read_text_file(path);
    const Problem p = parse_problem(original);
    CHECK(p.eri_symmetry_repaired() == 0.0);
    CHECK(write_problem(p) == original);
  }
}

TEST_CASE("missing file is an input error") {
  CHECK_THROWS_AS(read_problem_file("/nonexistent/missing.prob"), InputError);
}

TEST_CASE("report and trace output") {
  const Problem toy = toy_problem();
  SolverConfig c;
  c.t_max = 200;
  const ConvergenceReport r = solve(toy, c);
  const auto doc = nlohmann::json::parse(report_json(r, toy, c));
  CHECK(doc["method"] == "scgled");
  CHECK(doc["energy_error"].is_null());
  CHECK(doc["trace"].size() == r.trace.size());
  CHECK(doc["total_energy"].get<double>() == r.total_energy);
  CHECK(doc["config"]["i_f"] == 50);

  const std::string csv = trace_csv(r, toy);
  CHECK(csv.rfind("iteration,total_energy,energy_error,residual,density_change,wall_ms\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.trace.size() + 1);

  // wall-time keys sit alone on their lines so reports can be diffed without them
  const std::string json_text = report_json(r, toy, c);
  std::size_t pos = 0;
  int wall_lines = 0;
  while ((pos = json_text.find("\"wall", pos)) != std::string::npos) {
    const std::size_t line_start = json_text.rfind('\n', pos) + 1;
    const std::size_t line_end = json_text.find('\n', pos);
    const std::string line = json_text.substr(line_start, line_end - line_start);
    CHECK(std::count(line.begin(), line.end(), ':') == 1);
    ++wall_lines;
    pos = line_end;
  }
  CHECK(wall_lines == static_cast<int>(r.trace.size()) + 2);
}
