#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace tfpack;
using namespace tfpack::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "tfpack_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& args) {
  const std::string cmd = std::string(TFPACK_BINARY) + " " + args + " >/dev/null 2>" +
                          scratch("stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::optional<RunConfig> parse(std::vector<std::string> args) {
  std::vector<char*> argv;
  static std::string prog = "tfpack";
  argv.push_back(prog.data());
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  return parse_command_line(static_cast<int>(argv.size()), argv.data(), out);
}

}  // namespace

TEST_CASE("config resolution order") {
  unsetenv("TFPACK_SEED");
  auto plain = parse({"gen"});
  REQUIRE(plain);
  CHECK(plain->seed == 0);
  CHECK(plain->mode == "gen");

  setenv("TFPACK_SEED", "17", 1);
  CHECK(parse({"gen"})->seed == 17);

  fs::path cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"seed": 5, "n": 30, "p": 0.25, "mode": "bounds"})";
  auto from_file = parse({"--config", cfg.string()});
  CHECK(from_file->seed == 5);
  CHECK(from_file->n == 30);
  CHECK(from_file->mode == "bounds");

  auto flags = parse({"gen", "--config", cfg.string(), "--seed", "9", "--r-override", "4"});
  CHECK(flags->seed == 9);
  CHECK(flags->n == 30);
  CHECK(flags->p == 0.25);
  CHECK(flags->mode == "gen");
  CHECK(flags->r_override == 4u);
  unsetenv("TFPACK_SEED");

  std::ofstream(scratch("bad.json")) << R"({"colour": 1})";
  CHECK_THROWS_AS(parse({"--config", scratch("bad.json").string()}), ConfigError);
  CHECK_THROWS_AS(parse({"gen", "--no-such-flag"}), ConfigError);
  CHECK_FALSE(parse({"--help"}).has_value());
}

TEST_CASE("to_json and apply_json round trip") {
  RunConfig c;
  c.mode = "pack-bootstrap";
  c.tau = 4;
  c.sweep_r = {1, 2, 3};
  c.C = 2.5;
  RunConfig d;
  apply_json(d, to_json(c));
  CHECK(to_json(d) == to_json(c));
}

TEST_CASE("validate") {
  RunConfig c;
  c.mode = "pack-pseudo";
  CHECK_NOTHROW(validate(c));
  c.n = 121;
  CHECK_THROWS_AS(validate(c), DivisibilityError);
  c.n = 120;
  c.epsilon = 1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.epsilon = 0.5;
  c.p = -0.1;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.p = 0.5;
  c.tau = 7;
  CHECK_THROWS_AS(validate(c), DivisibilityError);
  c.tau = 8;
  CHECK_NOTHROW(validate(c));
  c.mode = "dance";
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("pack-pseudo on K_4 reports coverage 2/3") {
  fs::path graph = scratch("k4.txt");
  write_edge_list(Graph::complete(4), graph);
  // Every 2+2 split of K_4 leaves a 4-cycle across the parts.
  RunConfig c;
  c.mode = "pack-pseudo";
  c.graph = graph.string();
  c.t = 2;
  c.r_override = 1;
  c.seed = 3;
  Json report = execute(c);
  CHECK(report["factors_count"] == 2);
  CHECK(report["coverage"]["num"] == 2);
  CHECK(report["coverage"]["den"] == 3);
  for (const char* key : {"config", "feasibility", "kappa_summary", "per_blowup", "factors_count",
                          "covered_edges", "total_edges", "coverage", "seed", "version"})
    CHECK(report.contains(key));
  CHECK(report["config"]["n"] == 4);
  CHECK(report["version"] == kVersion);
}

TEST_CASE("bounds mode") {
  RunConfig c;
  c.mode = "bounds";
  c.mu = 300;
  c.epsilon = 0.1;
  Json report = execute(c);
  CHECK(std::abs(report["chernoff_tail"]["value"].get<double>() - 2.0 * std::exp(-1.0)) <= 1e-12);
}

TEST_CASE("reports are byte-identical across runs") {
  RunConfig c;
  c.mode = "pack-random";
  c.n = 60;
  c.t = 3;
  c.p = 0.8;
  c.r_override = 5;
  c.seed = 21;
  CHECK(execute(c).dump() == execute(c).dump());
  RunConfig threaded = c;
  threaded.threads = 3;
  Json a = execute(c), b = execute(threaded);
  a["config"].erase("threads");
  b["config"].erase("threads");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("end to end: gen, pack, verify, tamper") {
  const fs::path graph = scratch("g.txt"), factors = scratch("f.txt"), report = scratch("r.json");
  const fs::path csv = scratch("blowups.csv"), kcsv = scratch("kappa.csv"), sweep = scratch("sweep.csv");
  REQUIRE(shell("gen --n 48 --p 0.9 --seed 4 --graph-out " + graph.string()) == 0);
  REQUIRE(shell("pack-pseudo --graph " + graph.string() + " --t 3 --r-override 6 --seed 4" +
                " --factors-out " + factors.string() + " --out " + report.string() + " --csv " +
                csv.string() + " --kappa-csv " + kcsv.string() + " --sweep-r 1 2 --sweep-csv " +
                sweep.string()) == 0);
  Json r = Json::parse(slurp(report));
  CHECK(r["factors_count"].get<int>() > 0);
  CHECK(slurp(csv).rfind("index,", 0) == 0);
  CHECK(slurp(kcsv).rfind("appearances,edges", 0) == 0);
  CHECK(slurp(sweep).rfind("r,factors", 0) == 0);

  CHECK(shell("verify --graph " + graph.string() + " --t 3 --factors " + factors.string()) == 0);

  // Swap one copy edge for a non-edge of the host.
  Graph g = read_edge_list(graph);
  std::ifstream in(factors);
  auto fs_read = read_factors(in);
  auto& copy = fs_read.at(0).copies.at(0);
  Vertex x = copy.vertices[0];
  Vertex y = 0;
  while (y == x || g.has_edge(x, y)) ++y;
  copy.edges[0] = Edge(x, y);
  std::ofstream out(scratch("tampered.txt"));
  write_factors(out, fs_read, 3);
  out.close();
  CHECK(shell("verify --graph " + graph.string() + " --t 3 --factors " + scratch("tampered.txt").string()) ==
        static_cast<int>(ExitCode::kVerification));
  Json err = Json::parse(slurp(scratch("stderr.txt")));
  CHECK(err["error"] == "verification");
  CHECK(err["message"].get<std::string>().find("factor 0") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(shell("pack-pseudo --n 13 --t 2") == static_cast<int>(ExitCode::kDivisibility));
  CHECK(shell("pack-pseudo --epsilon 1.5") == static_cast<int>(ExitCode::kConfig));
  CHECK(shell("nonsense") == static_cast<int>(ExitCode::kConfig));
  CHECK(shell("verify --graph /nonexistent/g --factors /nonexistent/f") == static_cast<int>(ExitCode::kIo));
  std::ofstream(scratch("broken.txt")) << "3 1\n0 9\n";
  CHECK(shell("certify --graph " + scratch("broken.txt").string()) == static_cast<int>(ExitCode::kIo));
  Json err = Json::parse(slurp(scratch("stderr.txt")));
  CHECK(err["error"] == "parse");
}
