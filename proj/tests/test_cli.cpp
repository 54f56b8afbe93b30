#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "hessquot/checksuite.hpp"
#include "hessquot/config.hpp"
#include "hessquot/report.hpp"

using namespace hessquot;

namespace {

const char* kMinimal =
    "quotient.n = 2\n"
    "quotient.k = 2\n"
    "quotient.l = 0\n"
    "grid.nodes = 9\n"
    "rhs.amplitude = 1.5\n";

}  // namespace

TEST_CASE("minimal config parses with defaults applied") {
  const RunConfig cfg = parse_config_text(kMinimal, "minimal");
  CHECK(cfg.quotient.n == 2);
  CHECK(cfg.rhs.amplitude == 1.5);
  CHECK(cfg.newton_tol == 1e-9);
  CHECK(cfg.max_iterations == 50);
  CHECK(cfg.backtrack_factor == 0.5);
  CHECK(cfg.cone_margin == 1e-8);
  CHECK(cfg.grid_nodes == std::vector<int>{9, 9});
  CHECK(cfg.sweep_betas == std::vector<double>{1.0, 2.0, 4.0, 8.0});
  CHECK(cfg.notices.empty());  // (2,0) is inside the estimate regime
}

TEST_CASE("canonical text round-trips to an identical configuration") {
  RunConfig cfg = parse_config_text(kMinimal, "minimal");
  const std::string echo = cfg.canonical_text();
  const RunConfig again = parse_config_text(echo, "echo");
  CHECK(again.canonical_text() == echo);
  CHECK(config_hash_hex(again) == config_hash_hex(cfg));
}

TEST_CASE("unknown and duplicate keys are rejected with line numbers") {
  CHECK_THROWS_WITH_AS(parse_config_text("quotient.nn = 2\n", "cfg"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config_text("quotient.n = 2\nquotient.n = 3\n", "cfg"),
      doctest::Contains("already set on line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("what is this\n", "cfg"),
                       doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("quotient.k = two\n", "cfg"),
                       doctest::Contains("expects an integer"), ConfigError);
}

TEST_CASE("operator regime vs estimate regime") {
  // k = l+1 is a valid elliptic operator but outside the estimate regime:
  // accepted, with a printed notice
  const RunConfig cfg = parse_config_text(
      "quotient.n = 3\nquotient.k = 2\nquotient.l = 1\n", "cfg");
  REQUIRE(cfg.notices.size() == 1);
  CHECK(cfg.notices[0].find("k >= l+2") != std::string::npos);
  CHECK_FALSE(cfg.quotient.theorem_regime());

  CHECK_THROWS_AS(parse_config_text("quotient.tau = 0.5\n", "cfg"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text("quotient.n = 3\nquotient.k = 1\nquotient.l = 1\n", "cfg"),
      ConfigError);
}

TEST_CASE("domain and grid validation") {
  CHECK_THROWS_WITH_AS(parse_config_text("domain.r_min = 0\n", "cfg"),
                       doctest::Contains("pole"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("domain.r_min = 2\n", "cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("grid.nodes = 4\n", "cfg"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text("quotient.n = 2\ngrid.nodes = 9,9,9\n", "cfg"),
      ConfigError);
  // chart degeneracy: first angle must keep cos >= 0.1 when n = 3
  CHECK_THROWS_AS(
      parse_config_text("quotient.n = 3\nquotient.k = 3\n"
                        "domain.angle_min = -1.53\ndomain.angle_max = 1.53\n",
                        "cfg"),
      ConfigError);
  CHECK_THROWS_AS(parse_config_text("rhs.profile = sinusoid\n", "cfg"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("probe.norm = operator\n", "cfg"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("rhs.eps = 1.5\n", "cfg"), ConfigError);
}

TEST_CASE("comments, blanks and spacing are tolerated") {
  const RunConfig cfg = parse_config_text(
      "# a comment\n\n  quotient.n = 2   # trailing\n\tquotient.k\t=\t2\n",
      "cfg");
  CHECK(cfg.quotient.k == 2);
}

TEST_CASE("config hash is stable and content-sensitive") {
  const RunConfig a = parse_config_text(kMinimal, "a");
  const RunConfig b = parse_config_text(kMinimal, "b");
  CHECK(config_hash_hex(a) == config_hash_hex(b));
  RunConfig c = a;
  c.rhs.amplitude = 2.0;
  CHECK(config_hash_hex(c) != config_hash_hex(a));
  CHECK(config_hash_hex(a).size() == 16);
}

TEST_CASE("u.csv carries the hash comment, a header and exact boundary zeros") {
  RunConfig cfg = parse_config_text(kMinimal, "cfg");
  cfg.quotient.tau = 3.0;  // a feasible zero-data solve at this scale
  const SolveConfig sc = cfg.make_solve_config();
  const SolveReport rep = continuation_solve(sc);

  const std::string csv = u_csv_text(rep.u, config_hash_hex(cfg));
  REQUIRE(csv.rfind("# config_hash=", 0) == 0);
  const auto header_at = csv.find('\n') + 1;
  CHECK(csv.substr(header_at, 8) == "xi1,xi2,");

  // every boundary row ends in exactly 0
  std::size_t pos = csv.find('\n', header_at);
  std::int64_t node = 0;
  const Grid& g = *sc.grid;
  while (pos != std::string::npos && node < g.total) {
    const auto eol = csv.find('\n', pos + 1);
    if (eol == std::string::npos) break;
    const std::string row = csv.substr(pos + 1, eol - pos - 1);
    if (g.is_boundary(g.unflat(node))) {
      CHECK(row.substr(row.rfind(',') + 1) == "0");
    }
    pos = eol;
    ++node;
  }
  CHECK(node == g.total);
}

TEST_CASE("estimate and probe artifacts") {
  EstimateReport rep;
  EstimateCell cell;
  cell.nodes_per_axis = 17;
  cell.h = 0.0625;
  cell.beta = 4.0;
  cell.amplitude = 1.0;
  cell.M_spectral = 2.5;
  cell.solved = true;
  rep.cells.push_back(cell);
  StabilizationFlag flag;
  flag.beta = 4.0;
  flag.amplitude = 1.0;
  flag.stabilized = true;
  rep.flags.push_back(flag);

  const std::string cells = estimate_cells_csv(rep, "deadbeef");
  CHECK(cells.find("# config_hash=deadbeef") == 0);
  CHECK(cells.find("nodes_per_axis,h,beta,amplitude,M_spectral") != std::string::npos);
  CHECK(cells.find("\n17,") != std::string::npos);

  const std::string flags = estimate_flags_csv(rep, "deadbeef");
  CHECK(flags.find("beta,amplitude,stabilized") != std::string::npos);
  CHECK(flags.find("\n4,1,1,") != std::string::npos);

  CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.csv", "x"), IoError);
}

TEST_CASE("check suite passes on a default configuration") {
  // compact seed-0 verification battery behind the `check` command; the
  // acceptance binary runs the full committed counts
  RunConfig cfg = parse_config_text(kMinimal, "cfg");
  const auto results = run_check_suite(cfg, 0);
  CHECK(results.size() >= 20);
  for (const auto& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}
