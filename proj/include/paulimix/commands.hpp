#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "paulimix/channel.hpp"
#include "paulimix/divisibility.hpp"
#include "paulimix/rates.hpp"
#include "paulimix/region.hpp"
#include "paulimix/sampling.hpp"

namespace paulimix {

enum class OutputFormat { Csv, Json };
enum class MeasureMethod { Quadrature, MonteCarlo, Both };
enum class TransformConvention { UnitSide, AreaPreserving };

inline const char* to_string(OutputFormat f) {
  return f == OutputFormat::Csv ? "csv" : "json";
}

inline const char* to_string(MeasureMethod m) {
  switch (m) {
    case MeasureMethod::Quadrature: return "quadrature";
    case MeasureMethod::MonteCarlo: return "monte_carlo";
    case MeasureMethod::Both: return "both";
  }
  return "?";
}

inline const char* to_string(TransformConvention c) {
  return c == TransformConvention::UnitSide ? "unit_side" : "area_preserving";
}

inline std::optional<OutputFormat> parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  return std::nullopt;
}

inline std::optional<MeasureMethod> parse_method(const std::string& s) {
  if (s == "quadrature") return MeasureMethod::Quadrature;
  if (s == "monte_carlo") return MeasureMethod::MonteCarlo;
  if (s == "both") return MeasureMethod::Both;
  return std::nullopt;
}

inline std::optional<TransformConvention> parse_convention(const std::string& s) {
  if (s == "unit_side") return TransformConvention::UnitSide;
  if (s == "area_preserving") return TransformConvention::AreaPreserving;
  return std::nullopt;
}

/// 17 significant digits: round-trips any double exactly, trims trailing
/// zeros for short decimals.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// One output data set: self-describing (carries the generating command
/// line), rendered as CSV with a leading '#' comment or as a JSON object
/// {"meta": ..., "rows": [...]}.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // trailing '#' comment lines (CSV only)
  nlohmann::ordered_json meta_extra = nlohmann::ordered_json::object();
};

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string cell_to_csv(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_escape(v);
      },
      cell);
}

inline nlohmann::ordered_json cell_to_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, cell);
}

}  // namespace detail

inline std::string render_csv(const Table& t) {
  std::string out = "# " + t.command + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + detail::cell_to_csv(row[i]);
    out += "\n";
  }
  for (const auto& note : t.notes) out += "# " + note + "\n";
  return out;
}

inline std::string render_json(const Table& t) {
  nlohmann::ordered_json meta;
  meta["command"] = t.command;
  meta["columns"] = t.columns;
  for (const auto& [key, value] : t.meta_extra.items()) meta[key] = value;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i)
      obj[t.columns[i]] = detail::cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json root;
  root["meta"] = std::move(meta);
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

inline void write_table(const Table& t, OutputFormat format,
                        const std::string& out_path) {
  const std::string payload =
      format == OutputFormat::Csv ? render_csv(t) : render_json(t);
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);
  os << payload;
  os.flush();
  if (!os) throw std::runtime_error("failed writing output file: " + out_path);
}

/// Inclusive grid lo, lo+step, ..., up to hi (with half-ulp forgiveness so
/// that e.g. 2..10 step 0.5 lands on 10 exactly).
inline std::vector<double> linear_grid(double lo, double hi, double step) {
  const auto count = static_cast<std::int64_t>(
                         std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) grid.push_back(lo + step * i);
  return grid;
}

namespace detail {

inline int fail_validation(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

}  // namespace detail

struct SweepConfig {
  double n_min = 2.0;
  double n_max = 10.0;
  double n_step = 0.5;
  MeasureMethod method = MeasureMethod::Quadrature;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;  // empty = stdout
};

inline int cmd_measure_sweep(const SweepConfig& cfg) {
  if (!(cfg.n_min >= 2.0))
    return detail::fail_validation("measure-sweep: need n-min >= 2");
  if (!(cfg.n_max >= cfg.n_min))
    return detail::fail_validation("measure-sweep: need n-max >= n-min");
  if (!(cfg.n_step > 0.0))
    return detail::fail_validation("measure-sweep: need n-step > 0");
  if (!(cfg.tolerance > 0.0))
    return detail::fail_validation("measure-sweep: need tolerance > 0");
  if (cfg.method != MeasureMethod::Quadrature && cfg.samples < 1000)
    return detail::fail_validation(
        "measure-sweep: need samples >= 1000 for monte_carlo");

  Table t;
  t.command = "paulimix measure-sweep --n-min " + format_real(cfg.n_min) +
              " --n-max " + format_real(cfg.n_max) + " --n-step " +
              format_real(cfg.n_step) + " --method " + to_string(cfg.method) +
              " --samples " + std::to_string(cfg.samples) + " --seed " +
              std::to_string(cfg.seed) + " --tolerance " +
              format_real(cfg.tolerance) + " --format " + to_string(cfg.format) +
              (cfg.out_path.empty() ? "" : " --out " + cfg.out_path);
  t.columns = {"n", "measure", "method", "std_error_or_quadrature_estimate"};

  for (double n : linear_grid(cfg.n_min, cfg.n_max, cfg.n_step)) {
    if (cfg.method != MeasureMethod::MonteCarlo) {
      const MeasureResult m = region_measure_detail(n, cfg.tolerance);
      if (!m.converged) {
        std::cerr << "error: quadrature did not reach tolerance at n = "
                  << format_real(n) << " (estimate " << format_real(m.error_estimate)
                  << ")\n";
        return 1;
      }
      t.rows.push_back({Cell(n), Cell(m.value), Cell(std::string("quadrature")),
                        Cell(m.error_estimate)});
    }
    if (cfg.method != MeasureMethod::Quadrature) {
      const MonteCarloEstimate e = monte_carlo_measure(n, cfg.samples, cfg.seed);
      t.rows.push_back({Cell(n), Cell(e.estimate),
                        Cell(std::string("monte_carlo")), Cell(e.std_error)});
    }
  }
  write_table(t, cfg.format, cfg.out_path);
  return 0;
}

struct BoundaryConfig {
  double n = 2.0;
  int samples = 200;  // points per curve branch
  TransformConvention convention = TransformConvention::UnitSide;
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;
};

inline int cmd_boundary(const BoundaryConfig& cfg) {
  if (!(cfg.n >= 2.0)) return detail::fail_validation("boundary: need n >= 2");
  if (cfg.samples < 2) return detail::fail_validation("boundary: need samples >= 2");

  const SimplexTransform transform =
      cfg.convention == TransformConvention::UnitSide
          ? SimplexTransform::unit_side()
          : SimplexTransform::area_preserving();

  Table t;
  t.command = "paulimix boundary --n " + format_real(cfg.n) + " --samples " +
              std::to_string(cfg.samples) + " --convention " +
              to_string(cfg.convention) + " --format " + to_string(cfg.format) +
              (cfg.out_path.empty() ? "" : " --out " + cfg.out_path);
  t.columns = {"region", "branch", "x", "y", "u", "v"};

  auto emit = [&](const std::string& region, const std::string& branch, double x,
                  double y) {
    const std::array<double, 2> uv = to_equilateral(transform, x, y);
    t.rows.push_back({Cell(region), Cell(branch), Cell(x), Cell(y), Cell(uv[0]),
                      Cell(uv[1])});
  };

  // Outer simplex as a closed loop, then the three curve families.
  const double outline[4][2] = {{0, 0}, {1, 0}, {0, 1}, {0, 0}};
  for (const auto& p : outline) emit("SIMPLEX", "outline", p[0], p[1]);

  for (const LabeledBoundary& lb : boundary_polyline(cfg.n, cfg.samples)) {
    for (int upper = 0; upper < 2; ++upper) {
      for (const BoundarySample& s : lb.curve.samples) {
        const std::array<double, 2> xy = boundary_point_xy(
            lb.region, s.y, upper ? s.x_plus : s.x_minus);
        emit(to_string(lb.region), upper ? "upper" : "lower", xy[0], xy[1]);
      }
    }
  }
  write_table(t, cfg.format, cfg.out_path);
  return 0;
}

struct ZetaSweepConfig {
  double n_min = 2.0;
  double n_max = 10.0;
  double n_step = 0.5;
  double r = 1.0;
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;
};

inline int cmd_zeta_sweep(const ZetaSweepConfig& cfg) {
  if (!(cfg.n_min >= 2.0))
    return detail::fail_validation("zeta-sweep: need n-min >= 2");
  if (!(cfg.n_max >= cfg.n_min))
    return detail::fail_validation("zeta-sweep: need n-max >= n-min");
  if (!(cfg.n_step > 0.0))
    return detail::fail_validation("zeta-sweep: need n-step > 0");
  if (!(cfg.r > 0.0)) return detail::fail_validation("zeta-sweep: need r > 0");

  Table t;
  t.command = "paulimix zeta-sweep --n-min " + format_real(cfg.n_min) +
              " --n-max " + format_real(cfg.n_max) + " --n-step " +
              format_real(cfg.n_step) + " --r " + format_real(cfg.r) +
              " --format " + to_string(cfg.format) +
              (cfg.out_path.empty() ? "" : " --out " + cfg.out_path);
  t.columns = {"n", "zeta_closed_form", "zeta_quadrature", "abs_difference"};

  for (double n : linear_grid(cfg.n_min, cfg.n_max, cfg.n_step)) {
    const double closed = zeta_measure(n, cfg.r, ZetaMethod::ClosedForm).zeta;
    const double quad = zeta_measure(n, cfg.r, ZetaMethod::Quadrature).zeta;
    t.rows.push_back(
        {Cell(n), Cell(closed), Cell(quad), Cell(std::abs(closed - quad))});
  }
  write_table(t, cfg.format, cfg.out_path);
  return 0;
}

struct ClassifyConfig {
  double x = 0.0;
  double y = 0.0;
  double n = 2.0;
  double r = 1.0;
  int grid_size = default_scan_grid;
};

/// Prints a key: value report for one mixture.  Rates are evaluated at
/// q = (1/n)(1 - 1e-6), just short of the asymptote, through the time
/// parametrization of the given r so the vertex case reproduces the
/// single-channel rate.
inline int cmd_classify(const ClassifyConfig& cfg, std::ostream& os = std::cout) {
  if (!(cfg.x >= 0.0 && cfg.y >= 0.0 && cfg.x + cfg.y <= 1.0 + 1e-12))
    return detail::fail_validation("classify: need x, y >= 0 and x + y <= 1");
  if (!(cfg.n >= 2.0)) return detail::fail_validation("classify: need n >= 2");
  if (!(cfg.r > 0.0)) return detail::fail_validation("classify: need r > 0");
  if (cfg.grid_size < 100)
    return detail::fail_validation("classify: need grid-size >= 100");

  const MixWeights w = MixWeights::from_xy(cfg.x, cfg.y);
  const DecoherenceProfile profile(cfg.n, cfg.r);
  const RegionLabel label = classify(w, cfg.n);
  const double q_probe = (1.0 - 1e-6) / cfg.n;
  const double t_probe = -std::log(1.0 - cfg.n * q_probe) / cfg.r;
  const RateVector g = decay_rates(w, q_probe, dq_dt(profile, t_probe));
  const DivisibilityReport rep = cp_divisibility_scan(w, profile, cfg.grid_size);

  os << "point: x=" << format_real(w.x) << " y=" << format_real(w.y)
     << " z=" << format_real(w.z) << "\n";
  os << "n: " << format_real(cfg.n) << "\n";
  os << "r: " << format_real(cfg.r) << "\n";
  os << "region: " << to_string(label) << "\n";
  os << "q_probe: " << format_real(q_probe) << "\n";
  os << "rates: gx=" << format_real(g.gx) << " gy=" << format_real(g.gy)
     << " gz=" << format_real(g.gz) << "\n";
  os << "cp_divisible: " << (rep.cp_divisible ? "true" : "false") << "\n";
  os << "p_divisible: " << (rep.p_divisible ? "true" : "false") << "\n";
  os << "first_violation_q: "
     << (rep.first_violation_q ? format_real(*rep.first_violation_q)
                               : std::string("none"))
     << "\n";
  os << "min_choi_eigenvalue: " << format_real(rep.min_choi_eigenvalue) << "\n";
  return 0;
}

struct OracleCompareConfig {
  double n_min = 2.0;
  double n_max = 10.0;
  double n_step = 1.0;
  std::int64_t samples = 10000;
  std::uint64_t seed = 42;
  double tolerance = 1e-4;  // boundary-margin exclusion radius
  int grid_size = default_scan_grid;
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;
};

/// Cross-validates the analytic classification against the independent
/// CP-divisibility scan on random simplex points.  Points closer than
/// `tolerance` to a boundary curve are tallied but exempt from the
/// agreement requirement (both oracles discretize, so they may legitimately
/// split hairs there).  Any disagreement beyond the margin fails the run.
inline int cmd_oracle_compare(const OracleCompareConfig& cfg) {
  if (!(cfg.n_min >= 2.0))
    return detail::fail_validation("oracle-compare: need n-min >= 2");
  if (!(cfg.n_max >= cfg.n_min))
    return detail::fail_validation("oracle-compare: need n-max >= n-min");
  if (!(cfg.n_step > 0.0))
    return detail::fail_validation("oracle-compare: need n-step > 0");
  if (cfg.samples < 1000)
    return detail::fail_validation("oracle-compare: need samples >= 1000");
  if (!(cfg.tolerance > 0.0))
    return detail::fail_validation("oracle-compare: need tolerance > 0");
  if (cfg.grid_size < 100)
    return detail::fail_validation("oracle-compare: need grid-size >= 100");

  Table t;
  t.command = "paulimix oracle-compare --n-min " + format_real(cfg.n_min) +
              " --n-max " + format_real(cfg.n_max) + " --n-step " +
              format_real(cfg.n_step) + " --samples " +
              std::to_string(cfg.samples) + " --seed " + std::to_string(cfg.seed) +
              " --tolerance " + format_real(cfg.tolerance) + " --format " +
              to_string(cfg.format) +
              (cfg.out_path.empty() ? "" : " --out " + cfg.out_path);
  t.columns = {"n", "x", "y", "z", "region", "cp_divisible", "margin"};

  nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
  std::mt19937_64 rng(cfg.seed);
  std::int64_t total_beyond = 0;

  for (double n : linear_grid(cfg.n_min, cfg.n_max, cfg.n_step)) {
    const DecoherenceProfile profile(n, 1.0);
    const BoundaryGeometry geometry(n);
    std::int64_t near_boundary = 0, checked = 0, agreed = 0, beyond = 0;
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      const MixWeights w = sample_simplex(rng);
      const RegionLabel label = classify(w, n);
      const DivisibilityReport rep =
          cp_divisibility_scan(w, profile, cfg.grid_size);
      const bool agree =
          (label == RegionLabel::Markovian) == rep.cp_divisible;
      const double margin = geometry.distance(w.x, w.y);
      const bool near = margin < cfg.tolerance;
      if (near) {
        ++near_boundary;
      } else {
        ++checked;
        if (agree) ++agreed;
      }
      if (!agree) {
        t.rows.push_back({Cell(n), Cell(w.x), Cell(w.y), Cell(w.z),
                          Cell(std::string(to_string(label))),
                          Cell(rep.cp_divisible), Cell(margin)});
        if (!near) ++beyond;
      }
    }
    const double rate =
        checked ? static_cast<double>(agreed) / static_cast<double>(checked) : 1.0;
    t.notes.push_back("summary n=" + format_real(n) + " samples=" +
                      std::to_string(cfg.samples) + " near_boundary=" +
                      std::to_string(near_boundary) +
                      " disagreements_beyond_margin=" + std::to_string(beyond) +
                      " agreement_rate=" + format_real(rate));
    nlohmann::ordered_json s;
    s["n"] = n;
    s["samples"] = cfg.samples;
    s["near_boundary"] = near_boundary;
    s["disagreements_beyond_margin"] = beyond;
    s["agreement_rate"] = rate;
    summaries.push_back(std::move(s));
    total_beyond += beyond;
  }
  t.meta_extra["summary"] = std::move(summaries);
  write_table(t, cfg.format, cfg.out_path);
  if (total_beyond != 0) {
    std::cerr << "error: " << total_beyond
              << " oracle disagreement(s) beyond the boundary margin\n";
    return 1;
  }
  return 0;
}

}  // namespace paulimix
