#include "cli.hpp"

#include "conereg/barrier.hpp"
#include "conereg/errors.hpp"
#include "conereg/exponent.hpp"
#include "conereg/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>

#ifndef CONEREG_VERSION
#define CONEREG_VERSION "0.0.0"
#endif

namespace conereg::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr double kPi = std::numbers::pi;
// Clamped sweep values stay this far inside the open admissible intervals.
constexpr double kClampMargin = 1e-6;

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json header(const std::string &command)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "conereg";
  j["version"] = CONEREG_VERSION;
  j["command"] = command;
  return j;
}

json optional_number(const std::optional<double> &v)
{
  return v ? json(*v) : json(nullptr);
}

std::string digest(const std::vector<Witness> &witnesses)
{
  // FNV-1a over the serialised witness list.
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto &w : witnesses) {
    for (char ch : w.name + "=" + fmt(w.value) + ";") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Angles
{
  bool degrees = false;
  double operator()(double v) const { return degrees ? v * kPi / 180.0 : v; }
};

// ---------------------------------------------------------------------------

int cmd_classify(double theta0, double s, bool as_json, std::ostream &out)
{
  const ConeGeometry geometry(theta0);
  const ObliqueBC bc(geometry, s);
  const RegimeReport report = classify_regime(geometry, bc);
  if (as_json) {
    json j = header("classify");
    j["theta0"] = theta0;
    j["s"] = s;
    j["label"] = to_string(report.label);
    j["critical_exponent"] = optional_number(report.critical_exponent);
    j["s0"] = report.s0;
    j["witnesses"] = json::array();
    for (const auto &w : report.witnesses)
      j["witnesses"].push_back({{"name", w.name}, {"value", w.value}, {"tolerance", w.tolerance}});
    out << j.dump(2) << '\n';
    return kSuccess;
  }
  out << "theta0: " << fmt(theta0) << '\n'
      << "s: " << fmt(s) << '\n'
      << "label: " << to_string(report.label) << '\n'
      << "critical_exponent: "
      << (report.critical_exponent ? fmt(*report.critical_exponent) : std::string("none")) << '\n'
      << "s0: " << fmt(report.s0) << '\n';
  for (const auto &w : report.witnesses)
    out << "witness " << w.name << ": " << fmt(w.value) << " (tol " << fmt(w.tolerance) << ")\n";
  return kSuccess;
}

int cmd_exponent(double theta0, std::optional<double> s, bool neumann, bool as_json,
                 std::ostream &out)
{
  const ConeGeometry geometry(theta0);
  json j = header("exponent");
  j["theta0"] = theta0;
  std::optional<double> alpha;
  double residual = 0.0;
  int sign_changes = 0;
  if (neumann) {
    j["problem"] = "neumann";
    try {
      alpha = neumann_exponent(geometry);
      residual = neumann_mismatch(geometry, *alpha);
    } catch (const BracketError &) {
      // no root of W on (0, 1]
    }
  } else {
    if (!s)
      throw DomainError("--s is required unless --neumann is given");
    const ObliqueBC bc(geometry, *s);
    j["problem"] = "oblique";
    j["s"] = *s;
    const ExponentSearch search = find_critical_exponent(geometry, bc);
    alpha = search.alpha;
    residual = search.residual;
    sign_changes = search.sign_changes;
  }
  if (as_json) {
    j["alpha"] = optional_number(alpha);
    j["residual"] = residual;
    if (!neumann)
      j["sign_changes"] = sign_changes;
    out << j.dump(2) << '\n';
    return kSuccess;
  }
  out << "problem: " << (neumann ? "neumann" : "oblique") << '\n'
      << "theta0: " << fmt(theta0) << '\n';
  if (!neumann)
    out << "s: " << fmt(*s) << '\n';
  out << "alpha: " << (alpha ? fmt(*alpha) : std::string("none")) << '\n'
      << "residual: " << fmt(residual) << '\n';
  if (!neumann)
    out << "sign_changes: " << sign_changes << '\n';
  return kSuccess;
}

int cmd_barrier(double theta0, double alpha, std::optional<double> s, bool as_json,
                std::ostream &out)
{
  const ConeGeometry geometry(theta0);
  const double threshold = alpha0(geometry);
  const MillerBarrier barrier = build_barrier(geometry, alpha);

  json j = header("barrier-check");
  j["theta0"] = theta0;
  j["alpha"] = alpha;
  j["alpha0"] = threshold;
  j["cstar"] = barrier.cstar();
  j["profile_slope_at_theta0"] = barrier.profile_derivative(theta0);
  if (s) {
    const ObliqueBC bc(geometry, *s);
    // Laplacian in three dimensions: a0 = identity, b021 = n - 2 = 1.
    const ReducedOperator op{Eigen::Matrix2d::Identity(), 1.0};
    const RotatedCoefficients rc = rotate_coefficients(op, bc);
    const double m1 = m1_coefficient(barrier, bc, rc);
    std::optional<double> tilt, m2;
    try {
      tilt = max_admissible_tilt(bc, barrier, rc);
      m2 = m2_coefficient(barrier, bc, rc, *tilt);
    } catch (const NoAdmissibleTilt &) {
    }
    j["s"] = *s;
    j["obliqueness"] = bc.obliqueness();
    j["m1_coefficient"] = m1;
    j["tilt"] = optional_number(tilt);
    j["m2_coefficient"] = optional_number(m2);
  }
  if (as_json) {
    out << j.dump(2) << '\n';
    return kSuccess;
  }
  for (const auto &[key, value] : j.items()) {
    if (key == "schema_version" || key == "tool" || key == "version" || key == "command")
      continue;
    out << key << ": " << (value.is_null() ? std::string("none") : fmt(value.get<double>()))
        << '\n';
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct SweepConfig
{
  std::vector<double> theta0_range;  // lo, hi, count
  std::vector<double> s_fractions;   // lo, hi, count in (0, 1)
  std::vector<double> s_absolute;    // lo, hi, count
  std::string output;
  std::string format = "csv";
  int threads = 0;
};

struct PhaseMapRow
{
  double theta0 = 0.0;
  double s = 0.0;
  bool clamped = false;
  RegimeReport report;
};

int checked_count(double v, const char *what)
{
  if (!(v >= 2.0) || v != std::floor(v) || v > 1e6)
    throw DomainError(std::string(what) + " count must be an integer >= 2");
  return static_cast<int>(v);
}

double grid_value(double lo, double hi, int count, int k)
{
  return lo + (hi - lo) * static_cast<double>(k) / (count - 1);
}

std::vector<PhaseMapRow> sweep_cells(const SweepConfig &cfg, const Angles &angle)
{
  const int n_theta = checked_count(cfg.theta0_range[2], "theta0");
  const bool fractions = !cfg.s_fractions.empty();
  const std::vector<double> &srange = fractions ? cfg.s_fractions : cfg.s_absolute;
  const int n_s = checked_count(srange[2], "s");
  if (fractions && !(srange[0] > 0.0 && srange[0] < srange[1] && srange[1] < 1.0))
    throw DomainError("s fractions must satisfy 0 < lo < hi < 1");

  std::vector<PhaseMapRow> rows;
  rows.reserve(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_s));
  for (int a = 0; a < n_theta; ++a) {
    PhaseMapRow base;
    base.theta0 = grid_value(angle(cfg.theta0_range[0]), angle(cfg.theta0_range[1]), n_theta, a);
    const double t_hi = kMaxOpeningAngle - kClampMargin;
    if (base.theta0 < kClampMargin || base.theta0 > t_hi) {
      base.theta0 = std::clamp(base.theta0, kClampMargin, t_hi);
      base.clamped = true;
    }
    const double lo = -kPi + base.theta0;
    for (int b = 0; b < n_s; ++b) {
      PhaseMapRow row = base;
      if (fractions) {
        row.s = lo + kPi * grid_value(srange[0], srange[1], n_s, b);
      } else {
        row.s = grid_value(angle(srange[0]), angle(srange[1]), n_s, b);
        if (row.s <= lo + kClampMargin || row.s >= base.theta0 - kClampMargin) {
          row.s = std::clamp(row.s, lo + kClampMargin, base.theta0 - kClampMargin);
          row.clamped = true;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void classify_cells(std::vector<PhaseMapRow> &rows, int threads)
{
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
    std::min<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : hw, rows.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(workers);
  const auto work = [&](std::size_t id) {
    try {
      for (std::size_t k = next++; k < rows.size(); k = next++) {
        const ConeGeometry geometry(rows[k].theta0);
        rows[k].report = classify_regime(geometry, ObliqueBC(geometry, rows[k].s));
      }
    } catch (...) {
      failures[id] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t id = 1; id < workers; ++id)
    pool.emplace_back(work, id);
  work(0);
  for (auto &t : pool)
    t.join();
  for (const auto &f : failures)
    if (f)
      std::rethrow_exception(f);
}

void write_phase_map_csv(const std::vector<PhaseMapRow> &rows, std::ostream &out)
{
  out << "# conereg " << CONEREG_VERSION << " phase-map schema_version=" << kSchemaVersion << '\n';
  out << "theta0,s,label,critical_exponent,s0,b_at_1,clamped,witnesses_digest\n";
  for (const auto &row : rows) {
    const double b1 = std::cos(row.s);
    out << fmt(row.theta0) << ',' << fmt(row.s) << ',' << to_string(row.report.label) << ','
        << (row.report.critical_exponent ? fmt(*row.report.critical_exponent) : std::string())
        << ',' << fmt(row.report.s0) << ',' << fmt(b1) << ',' << (row.clamped ? 1 : 0) << ','
        << digest(row.report.witnesses) << '\n';
  }
}

void write_phase_map_json(const std::vector<PhaseMapRow> &rows, const SweepConfig &cfg,
                          bool degrees, std::ostream &out)
{
  json j = header("phase-map");
  j["config"] = {{"theta0_range", cfg.theta0_range},
                 {"s_mode", cfg.s_fractions.empty() ? "absolute" : "fractions"},
                 {"s_range", cfg.s_fractions.empty() ? cfg.s_absolute : cfg.s_fractions},
                 {"degrees", degrees}};
  j["rows"] = json::array();
  for (const auto &row : rows) {
    j["rows"].push_back({{"theta0", row.theta0},
                         {"s", row.s},
                         {"label", to_string(row.report.label)},
                         {"critical_exponent", optional_number(row.report.critical_exponent)},
                         {"s0", row.report.s0},
                         {"b_at_1", std::cos(row.s)},
                         {"clamped", row.clamped},
                         {"witnesses_digest", digest(row.report.witnesses)}});
  }
  out << j.dump(2) << '\n';
}

int cmd_phase_map(const SweepConfig &cfg, const Angles &angle, std::ostream &out,
                  std::ostream &err)
{
  std::vector<PhaseMapRow> rows = sweep_cells(cfg, angle);
  classify_cells(rows, cfg.threads);

  std::ofstream file;
  std::ostream *sink = &out;
  if (cfg.output != "-") {
    file.open(cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write '" << cfg.output << "'\n";
      return kUsageError;
    }
    sink = &file;
  }
  if (cfg.format == "json")
    write_phase_map_json(rows, cfg, angle.degrees, *sink);
  else
    write_phase_map_csv(rows, *sink);
  sink->flush();
  if (!*sink) {
    err << "error: failed while writing '" << cfg.output << "'\n";
    return kUsageError;
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string &suite, bool as_json, bool inject_fault, std::ostream &out)
{
  const auto results = verify::run_suite(suite, {inject_fault});
  const auto passed = std::count_if(results.begin(), results.end(),
                                    [](const verify::CheckResult &r) { return r.pass; });
  const bool ok = passed == static_cast<long>(results.size());
  if (as_json) {
    json j = header("verify");
    j["suite"] = suite;
    j["passed"] = ok;
    j["checks"] = json::array();
    for (const auto &r : results)
      j["checks"].push_back({{"suite", r.suite},
                             {"name", r.name},
                             {"pass", r.pass},
                             {"value", r.value},
                             {"tolerance", r.tolerance},
                             {"seconds", r.seconds},
                             {"detail", r.detail}});
    out << j.dump(2) << '\n';
  } else {
    for (const auto &r : results) {
      char timing[32];
      std::snprintf(timing, sizeof timing, "%.3f s", r.seconds);
      out << (r.pass ? "PASS " : "FAIL ") << r.suite << ": " << r.name
          << "  value=" << fmt(r.value) << " tol=" << fmt(r.tolerance) << "  (" << timing << ")";
      if (!r.detail.empty())
        out << "  " << r.detail;
      out << '\n';
    }
    out << passed << "/" << results.size() << " checks passed\n";
  }
  return ok ? kSuccess : kVerificationFailure;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Regularity regimes of oblique derivative problems on circular cones", "conereg"};
  app.set_version_flag("--version", std::string(CONEREG_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Angles angle;
  app.add_flag("--degrees", angle.degrees, "Read every angle argument in degrees");

  double theta0 = 0.0, s = 0.0, alpha = 0.0;
  bool as_json = false, neumann = false, inject_fault = false;
  std::optional<double> s_opt;
  std::string suite = "all";
  SweepConfig sweep;

  auto *classify = app.add_subcommand("classify", "Classify the regime of one (theta0, s) pair");
  classify->add_option("--theta0", theta0, "Cone opening angle")->required();
  classify->add_option("--s", s, "Angle of the oblique vector")->required();
  classify->add_flag("--json", as_json, "Emit JSON");

  auto *exponent = app.add_subcommand("exponent", "Critical exponent of the oblique or Neumann problem");
  exponent->add_option("--theta0", theta0, "Cone opening angle")->required();
  exponent->add_option("--s", s_opt, "Angle of the oblique vector");
  exponent->add_flag("--neumann", neumann, "Root of W for the m = 1 Neumann problem");
  exponent->add_flag("--json", as_json, "Emit JSON");

  auto *barrier = app.add_subcommand("barrier-check", "Build a Miller barrier and evaluate M1/M2");
  barrier->add_option("--theta0", theta0, "Cone opening angle")->required();
  barrier->add_option("--alpha", alpha, "Barrier exponent")->required();
  barrier->add_option("--s", s_opt, "Angle of the oblique vector");
  barrier->add_flag("--json", as_json, "Emit JSON");

  auto *phase = app.add_subcommand("phase-map", "Sweep (theta0, s) and tabulate the regimes");
  phase->add_option("--theta0-range", sweep.theta0_range, "lo hi count")
    ->expected(3)
    ->required();
  auto *fractions = phase->add_option("--s-fractions", sweep.s_fractions,
                                      "lo hi count as fractions of (-pi + theta0, theta0)")
                      ->expected(3);
  auto *absolute =
    phase->add_option("--s-range", sweep.s_absolute, "lo hi count, clamped per theta0")
      ->expected(3);
  fractions->excludes(absolute);
  phase->add_option("--output,-o", sweep.output, "Output path ('-' for standard output)")
    ->required();
  phase->add_option("--format", sweep.format, "csv or json")
    ->check(CLI::IsMember({"csv", "json"}));
  phase->add_option("--threads", sweep.threads, "Worker threads (0 = hardware concurrency)")
    ->check(CLI::NonNegativeNumber);

  auto *verify_cmd = app.add_subcommand("verify", "Run the invariant suites");
  verify_cmd->add_option("--suite", suite, "special, exponent, barrier, solver or all")
    ->check(CLI::IsMember({"special", "exponent", "barrier", "solver", "all"}));
  verify_cmd->add_flag("--json", as_json, "Emit JSON");
  verify_cmd->add_flag("--inject-fault", inject_fault)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion &) {
    out << CONEREG_VERSION << '\n';
    return kSuccess;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (classify->parsed())
      return cmd_classify(angle(theta0), angle(s), as_json, out);
    if (exponent->parsed())
      return cmd_exponent(angle(theta0), s_opt ? std::optional(angle(*s_opt)) : std::nullopt,
                          neumann, as_json, out);
    if (barrier->parsed())
      return cmd_barrier(angle(theta0), alpha,
                         s_opt ? std::optional(angle(*s_opt)) : std::nullopt, as_json, out);
    if (phase->parsed()) {
      if (sweep.s_fractions.empty() && sweep.s_absolute.empty())
        throw DomainError("phase-map needs --s-fractions or --s-range");
      return cmd_phase_map(sweep, angle, out, err);
    }
    return cmd_verify(suite, as_json, inject_fault, out);
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

} // namespace conereg::cli
