#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "paulimix/commands.hpp"

using namespace paulimix;
using Catch::Matchers::WithinAbs;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Data lines only: drops '#' comments and the header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  bool header_skipped = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    rows.push_back(split(line, ','));
  }
  return rows;
}

}  // namespace

TEST_CASE("enum round trips") {
  for (const char* s : {"csv", "json"})
    REQUIRE(std::string(to_string(*parse_format(s))) == s);
  for (const char* s : {"quadrature", "monte_carlo", "both"})
    REQUIRE(std::string(to_string(*parse_method(s))) == s);
  for (const char* s : {"unit_side", "area_preserving"})
    REQUIRE(std::string(to_string(*parse_convention(s))) == s);
  REQUIRE_FALSE(parse_format("yaml").has_value());
  REQUIRE_FALSE(parse_method("mc").has_value());
  REQUIRE_FALSE(parse_convention("unit").has_value());
}

TEST_CASE("format_real is exact and compact") {
  REQUIRE(format_real(0.5) == "0.5");
  REQUIRE(format_real(2.0) == "2");
  REQUIRE(format_real(-1.0) == "-1");
  const double v = 1.0 / 3.0;
  REQUIRE(std::stod(format_real(v)) == v);
  REQUIRE(std::stod(format_real(0.86940636205081686)) == 0.86940636205081686);
}

TEST_CASE("linear_grid lands on the endpoint") {
  REQUIRE(linear_grid(2.0, 10.0, 1.0).size() == 9);
  REQUIRE(linear_grid(2.0, 10.0, 0.5).size() == 17);
  REQUIRE(linear_grid(2.0, 2.0, 1.0).size() == 1);
  const std::vector<double> g = linear_grid(2.0, 10.0, 0.5);
  REQUIRE(g.front() == 2.0);
  REQUIRE_THAT(g.back(), WithinAbs(10.0, 1e-12));
}

TEST_CASE("table rendering") {
  Table t;
  t.command = "paulimix demo --x 1";
  t.columns = {"a", "b", "c", "d"};
  t.rows.push_back({Cell(0.5), Cell(std::int64_t(7)),
                    Cell(std::string("hi,x")), Cell(true)});
  t.notes.push_back("note one");

  SECTION("csv layout: command comment, header, rows, notes") {
    const std::string csv = render_csv(t);
    REQUIRE(csv ==
            "# paulimix demo --x 1\n"
            "a,b,c,d\n"
            "0.5,7,\"hi,x\",true\n"
            "# note one\n");
  }
  SECTION("json layout: meta + rows objects") {
    const auto root = nlohmann::json::parse(render_json(t));
    REQUIRE(root.contains("meta"));
    REQUIRE(root.contains("rows"));
    REQUIRE(root["meta"]["command"] == "paulimix demo --x 1");
    REQUIRE(root["meta"]["columns"].size() == 4);
    REQUIRE(root["rows"].size() == 1);
    REQUIRE(root["rows"][0]["a"].get<double>() == 0.5);
    REQUIRE(root["rows"][0]["b"].get<std::int64_t>() == 7);
    REQUIRE(root["rows"][0]["c"] == "hi,x");
    REQUIRE(root["rows"][0]["d"] == true);
  }
  SECTION("unwritable path throws") {
    REQUIRE_THROWS_AS(
        write_table(t, OutputFormat::Csv, "/nonexistent_dir_qp/out.csv"),
        std::runtime_error);
  }
}

TEST_CASE("measure-sweep command") {
  SECTION("quadrature sweep is strictly decreasing") {
    SweepConfig cfg;
    cfg.n_min = 2.0;
    cfg.n_max = 10.0;
    cfg.n_step = 1.0;
    cfg.tolerance = 1e-7;
    cfg.out_path = temp_file("pm_sweep_quad.csv").string();
    REQUIRE(cmd_measure_sweep(cfg) == 0);
    const auto rows = csv_rows(slurp(cfg.out_path));
    REQUIRE(rows.size() == 9);
    double prev = 1.0;
    for (const auto& r : rows) {
      REQUIRE(r.size() == 4);
      REQUIRE(r[2] == "quadrature");
      const double m = std::stod(r[1]);
      REQUIRE(m < prev);
      prev = m;
    }
    REQUIRE_THAT(std::stod(rows[0][1]), WithinAbs(0.86940636205081686, 1e-6));
  }
  SECTION("both methods agree within noise") {
    SweepConfig cfg;
    cfg.n_min = 2.0;
    cfg.n_max = 2.0;
    cfg.method = MeasureMethod::Both;
    cfg.samples = 200000;
    cfg.seed = 11;
    cfg.out_path = temp_file("pm_sweep_both.csv").string();
    REQUIRE(cmd_measure_sweep(cfg) == 0);
    const auto rows = csv_rows(slurp(cfg.out_path));
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0][2] == "quadrature");
    REQUIRE(rows[1][2] == "monte_carlo");
    const double quad = std::stod(rows[0][1]);
    const double mc = std::stod(rows[1][1]);
    const double se = std::stod(rows[1][3]);
    REQUIRE(std::abs(mc - quad) <= 3.0 * se);
  }
  SECTION("bad ranges exit 2") {
    SweepConfig cfg;
    cfg.n_min = 1.5;
    REQUIRE(cmd_measure_sweep(cfg) == 2);
    cfg.n_min = 4.0;
    cfg.n_max = 3.0;
    REQUIRE(cmd_measure_sweep(cfg) == 2);
    cfg.n_max = 5.0;
    cfg.method = MeasureMethod::MonteCarlo;
    cfg.samples = 10;
    REQUIRE(cmd_measure_sweep(cfg) == 2);
  }
  SECTION("monte carlo output is reproducible byte for byte") {
    SweepConfig cfg;
    cfg.n_min = 2.0;
    cfg.n_max = 3.0;
    cfg.n_step = 1.0;
    cfg.method = MeasureMethod::MonteCarlo;
    cfg.samples = 20000;
    cfg.seed = 7;
    cfg.out_path = temp_file("pm_sweep_repeat.csv").string();
    REQUIRE(cmd_measure_sweep(cfg) == 0);
    const std::string first = slurp(cfg.out_path);
    REQUIRE(cmd_measure_sweep(cfg) == 0);
    REQUIRE(first == slurp(cfg.out_path));
  }
}

TEST_CASE("zeta-sweep command") {
  ZetaSweepConfig cfg;
  cfg.n_min = 2.0;
  cfg.n_max = 6.0;
  cfg.n_step = 0.5;
  cfg.out_path = temp_file("pm_zeta.csv").string();
  REQUIRE(cmd_zeta_sweep(cfg) == 0);
  const auto rows = csv_rows(slurp(cfg.out_path));
  REQUIRE(rows.size() == 9);
  REQUIRE(std::stod(rows[0][1]) == 0.0);
  double prev = -1.0;
  for (const auto& r : rows) {
    const double closed = std::stod(r[1]);
    REQUIRE(closed > prev);
    prev = closed;
    REQUIRE(std::stod(r[3]) <= 1e-10);
  }
  cfg.r = -1.0;
  REQUIRE(cmd_zeta_sweep(cfg) == 2);
}

TEST_CASE("boundary command") {
  SECTION("json export with unit-side embedding") {
    BoundaryConfig cfg;
    cfg.n = 2.0;
    cfg.samples = 40;
    cfg.format = OutputFormat::Json;
    cfg.out_path = temp_file("pm_boundary.json").string();
    REQUIRE(cmd_boundary(cfg) == 0);
    const auto root = nlohmann::json::parse(slurp(cfg.out_path));
    const auto& rows = root["rows"];
    REQUIRE(rows.size() == 4 + 3 * 2 * 40);

    // Closed simplex outline first; vertex (0,1) sits at the apex.
    for (int i = 0; i < 4; ++i) REQUIRE(rows[i]["region"] == "SIMPLEX");
    REQUIRE(rows[2]["x"].get<double>() == 0.0);
    REQUIRE(rows[2]["y"].get<double>() == 1.0);
    REQUIRE_THAT(rows[2]["u"].get<double>(), WithinAbs(0.5, 1e-15));
    REQUIRE_THAT(rows[2]["v"].get<double>(),
                 WithinAbs(std::sqrt(3.0) / 2.0, 1e-15));

    // First family: lower branch starts at the corner, upper at the far edge.
    REQUIRE(rows[4]["region"] == "NM_X");
    REQUIRE(rows[4]["branch"] == "lower");
    REQUIRE_THAT(rows[4]["x"].get<double>(), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(rows[4]["y"].get<double>(), WithinAbs(0.0, 1e-14));
    REQUIRE(rows[44]["branch"] == "upper");
    REQUIRE_THAT(rows[44]["x"].get<double>(), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(rows[44]["y"].get<double>(), WithinAbs(1.0, 1e-14));
  }
  SECTION("area-preserving embedding keeps simplex area") {
    BoundaryConfig cfg;
    cfg.n = 3.0;
    cfg.samples = 10;
    cfg.convention = TransformConvention::AreaPreserving;
    cfg.out_path = temp_file("pm_boundary_area.csv").string();
    REQUIRE(cmd_boundary(cfg) == 0);
    const auto rows = csv_rows(slurp(cfg.out_path));
    // Outline triangle area from rows 0..2 should be 1/2.
    const double x1 = std::stod(rows[1][2]) - std::stod(rows[0][2]);
    const double u1 = std::stod(rows[1][4]) - std::stod(rows[0][4]);
    const double v1 = std::stod(rows[1][5]) - std::stod(rows[0][5]);
    const double u2 = std::stod(rows[2][4]) - std::stod(rows[0][4]);
    const double v2 = std::stod(rows[2][5]) - std::stod(rows[0][5]);
    REQUIRE(x1 == 1.0);
    REQUIRE_THAT(0.5 * std::abs(u1 * v2 - u2 * v1), WithinAbs(0.5, 1e-14));
  }
  SECTION("bad arguments exit 2") {
    BoundaryConfig cfg;
    cfg.n = 1.0;
    REQUIRE(cmd_boundary(cfg) == 2);
    cfg.n = 2.0;
    cfg.samples = 1;
    REQUIRE(cmd_boundary(cfg) == 2);
  }
}

TEST_CASE("classify command report") {
  SECTION("center of the simplex") {
    ClassifyConfig cfg;
    cfg.x = 1.0 / 3.0;
    cfg.y = 1.0 / 3.0;
    cfg.n = 3.0;
    std::ostringstream os;
    REQUIRE(cmd_classify(cfg, os) == 0);
    const std::string out = os.str();
    REQUIRE(out.find("region: MARKOVIAN") != std::string::npos);
    REQUIRE(out.find("cp_divisible: true") != std::string::npos);
    REQUIRE(out.find("p_divisible: true") != std::string::npos);
    REQUIRE(out.find("first_violation_q: none") != std::string::npos);
  }
  SECTION("known non-Markovian point") {
    ClassifyConfig cfg;
    cfg.x = 0.5;
    cfg.y = 0.02;
    cfg.n = 2.0;
    std::ostringstream os;
    REQUIRE(cmd_classify(cfg, os) == 0);
    const std::string out = os.str();
    REQUIRE(out.find("region: NM_Y") != std::string::npos);
    REQUIRE(out.find("cp_divisible: false") != std::string::npos);
    REQUIRE(out.find("p_divisible: true") != std::string::npos);
    REQUIRE(out.find("first_violation_q: none") == std::string::npos);
    REQUIRE(out.find("rates: gx=") != std::string::npos);
  }
  SECTION("vertex reproduces the single-channel rate shape") {
    ClassifyConfig cfg;
    cfg.x = 1.0;
    cfg.y = 0.0;
    cfg.n = 5.0;
    std::ostringstream os;
    REQUIRE(cmd_classify(cfg, os) == 0);
    const std::string out = os.str();
    REQUIRE(out.find("region: MARKOVIAN") != std::string::npos);
    REQUIRE(out.find(" gy=0 gz=0") != std::string::npos);
  }
  SECTION("bad input exits 2") {
    ClassifyConfig cfg;
    cfg.x = 0.8;
    cfg.y = 0.8;
    std::ostringstream os;
    REQUIRE(cmd_classify(cfg, os) == 2);
    cfg.x = 0.2;
    cfg.y = 0.2;
    cfg.n = 1.0;
    REQUIRE(cmd_classify(cfg, os) == 2);
  }
}

TEST_CASE("oracle-compare command agrees with the scan away from curves") {
  OracleCompareConfig cfg;
  cfg.n_min = 2.0;
  cfg.n_max = 2.0;
  cfg.samples = 1000;
  cfg.seed = 5;
  cfg.grid_size = 2000;
  cfg.format = OutputFormat::Json;
  cfg.out_path = temp_file("pm_oracle.json").string();
  REQUIRE(cmd_oracle_compare(cfg) == 0);
  const auto root = nlohmann::json::parse(slurp(cfg.out_path));
  const auto& summary = root["meta"]["summary"];
  REQUIRE(summary.size() == 1);
  REQUIRE(summary[0]["disagreements_beyond_margin"].get<std::int64_t>() == 0);
  REQUIRE(summary[0]["agreement_rate"].get<double>() == 1.0);

  cfg.samples = 10;
  REQUIRE(cmd_oracle_compare(cfg) == 2);
}
