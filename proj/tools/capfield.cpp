// capfield: nets, cap functions, Poisson profiles and divergence spectra.
//
// Exit codes: 0 ok, 1 suite/inequality failure or bad input file, 2 usage,
// 3 resource refusal.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capfield/constructions.hpp"
#include "capfield/exponents.hpp"
#include "capfield/io.hpp"
#include "capfield/net.hpp"
#include "capfield/parallel.hpp"
#include "capfield/slicer.hpp"
#include "capfield/suites.hpp"
#include "capfield/svg.hpp"

using namespace capfield;

namespace {

constexpr double kGuardrail = 1e7;

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kRefused = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

SpherePoint parse_point(const std::string& text, int d) {
  const auto v = parse_list(text, "point");
  if (static_cast<int>(v.size()) != d + 1) {
    throw UsageError("point '" + text + "' needs " + std::to_string(d + 1) + " coordinates");
  }
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  if (std::abs(x.norm() - 1.0) > 1e-6) throw UsageError("point '" + text + "' is not on the unit sphere");
  return SpherePoint::normalized(x);
}

/// "a:b" -> [a, b].
std::pair<int, int> parse_int_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("range '" + text + "': expected lo:hi");
  }
}

/// "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_betas(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_list(text, "betas");
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_list(item, "betas").at(0));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw UsageError("betas '" + text + "': expected lo:hi:step with step > 0");
  }
  std::vector<double> out;
  const auto count = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (int i = 0; i <= count; ++i) out.push_back(parts[0] + i * parts[2]);
  return out;
}

EvalBackend parse_backend(const std::string& name) {
  if (name == "auto") return EvalBackend::Auto;
  if (name == "quadrature") return EvalBackend::Quadrature;
  if (name == "fft") return EvalBackend::Fft;
  throw UsageError("backend must be auto, quadrature or fft");
}

void refuse(const std::string& what, double estimate, bool force) {
  if (estimate > kGuardrail && !force) {
    std::ostringstream msg;
    msg << what << ": estimated " << estimate << " points/caps exceeds " << kGuardrail << " (pass --force)";
    throw ResourceLimitError(msg.str(), estimate);
  }
}

json stamped(json artifact, const json& config) {
  artifact["config"] = config;
  artifact["config_hash"] = config_hash(config);
  return artifact;
}

void emit_csv(const CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    write_csv(std::cout, table);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, table);
}

NetFamily load_nets(const std::string& path) {
  const NetFamily nets = nets_from_json(read_json_file(path));
  return nets;
}

NetFamily nets_or_build(const std::string& path, int d, int level, std::uint64_t seed, bool force) {
  if (!path.empty()) {
    NetFamily nets = load_nets(path);
    if (nets.d != d) throw UsageError("nets file is for d = " + std::to_string(nets.d));
    if (nets.max_level() >= level) return nets;
    // Extend from the file's own seed; the stored levels must be reproduced
    // exactly, or the file did not come from that stream.
    NetBuildOptions opt;
    opt.force = force;
    opt.max_points = kGuardrail;
    NetFamily longer = build_nets(d, level, nets.seed, opt);
    for (const Net& net : nets.nets) {
      if (longer.level(net.level).points != net.points) {
        throw std::runtime_error("nets file stops at level " + std::to_string(nets.max_level()) + ", level " +
                                 std::to_string(level) + " is needed, and its levels do not match seed " +
                                 std::to_string(nets.seed));
      }
    }
    std::fprintf(stderr, "extended nets from level %d to %d (seed %llu)\n", nets.max_level(), level,
                 static_cast<unsigned long long>(nets.seed));
    return longer;
  }
  NetBuildOptions opt;
  opt.force = force;
  opt.max_points = kGuardrail;
  return build_nets(d, level, seed, opt);
}

// ---------------------------------------------------------------- nets

struct NetsArgs {
  int d = 1;
  int n = 12;
  std::uint64_t seed = 7;
  std::size_t samples = 20000;
  std::string out;
  bool force = false;
};

int cmd_nets(const NetsArgs& a) {
  const json config = {{"command", "nets"}, {"d", a.d}, {"n", a.n}, {"seed", a.seed}, {"samples", a.samples}};
  NetBuildOptions opt;
  opt.force = a.force;
  opt.max_points = kGuardrail;
  const NetFamily family = build_nets(a.d, a.n, a.seed, opt);

  std::vector<NetReport> reports;
  bool ok = verify_nesting(family).empty();
  std::printf("%5s %10s %14s %4s %14s %4s %10s\n", "level", "card", "min_sep", "sep", "covering_gap", "cov",
              "card/2^nd");
  for (const Net& net : family.nets) {
    reports.push_back(verify_net(net, a.samples, a.seed + static_cast<std::uint64_t>(net.level)));
    const NetReport& r = reports.back();
    std::printf("%5d %10zu %14.8g %4s %14.8g %4s %10.5f\n", r.level, r.cardinality, r.min_separation,
                r.separation_ok ? "ok" : "FAIL", r.covering_gap, r.covering_ok ? "ok" : "FAIL", r.cardinality_ratio);
    for (const auto& f : r.failures) std::fprintf(stderr, "level %d: %s\n", r.level, f.c_str());
    ok = ok && r.ok();
  }
  std::printf("candidate spacing ratio %g, config %s\n", family.candidate_spacing_ratio, config_hash(config).c_str());
  if (!a.out.empty()) write_json_file(a.out, stamped(nets_to_json(family, reports), config));
  return ok ? kOk : kFailure;
}

// ---------------------------------------------------------------- build

struct BuildArgs {
  std::string kind;
  int d = 1;
  int n = 12;
  int truncation = 0;
  std::uint64_t seed = 7;
  std::string nets;
  std::string spec;
  std::string point;
  int levels = 14;
  double beta = 0.5;
  double gamma = -1.0;
  double psi = -1.0;
  bool power_log = false;
  std::string g;
  std::string out;
  bool force = false;
};

double saturating_estimate(int d, int n) {
  double total = 0.0;
  for (int N = 1; N <= n + 1; ++N) total += estimated_net_cardinality(d, N);
  return total;
}

int cmd_build(const BuildArgs& a) {
  json config = {{"command", "build"}, {"kind", a.kind}};
  CapFunction f;
  if (a.kind == "saturating") {
    config.update({{"d", a.d}, {"n", a.n}, {"seed", a.seed}, {"nets", a.nets}});
    refuse("saturating function", saturating_estimate(a.d, a.n), a.force);
    const NetFamily nets = nets_or_build(a.nets, a.d, a.n + 1, a.seed, a.force);
    f = saturating_function(nets, a.n);
    f.truncation = a.n;
  } else if (a.kind == "divergence") {
    CoveringSequence cov;
    if (!a.spec.empty()) {
      cov = covering_from_json(read_json_file(a.spec));
      config["spec"] = config_hash(read_json_file(a.spec));
    } else if (!a.point.empty()) {
      cov = point_covering(parse_point(a.point, a.d), a.levels);
      config.update({{"point", a.point}, {"levels", a.levels}});
    } else {
      throw UsageError("build divergence needs --spec or --point");
    }
    GaugeSpec gauge;
    gauge.kind = a.power_log ? GaugeKind::PowerLog : GaugeKind::Power;
    gauge.beta = a.beta;
    gauge.gamma = a.gamma > 0.0 ? a.gamma : cov.d - a.beta;
    gauge.psi_gamma = a.psi > 0.0 ? a.psi : gauge.gamma;
    gauge.validate();
    config.update({{"beta", gauge.beta}, {"gamma", gauge.gamma}, {"psi", gauge.psi_gamma}, {"power_log", a.power_log}});
    // Covering budget: the construction itself does not need it,
    // so a violation is reported but not fatal.
    const auto budget = cov.check(gauge);
    if (!budget.empty()) {
      std::fprintf(stderr, "warning: %zu covering level(s) over the phi budget, first: %s\n", budget.size(),
                   budget.front().c_str());
    }
    const DivergenceBuild b = divergence_function(cov, gauge);
    f = b.f;
    std::printf("caps %zu, truncation %d, L1 bound terms", f.terms.size(), f.truncation);
    for (double t : b.series_terms) std::printf(" %.6g", t);
    std::printf("\n");
  } else if (a.kind == "witness") {
    const int trunc = a.truncation > 0 ? a.truncation : (a.d == 1 ? 14 : 10);
    config.update({{"d", a.d}, {"truncation", trunc}, {"seed", a.seed}, {"nets", a.nets}, {"n", a.n}, {"g", a.g}});
    if (!a.g.empty()) {
      // residual witness h_n = g + f_n / n
      const CapFunction g = cap_function_from_json(read_json_file(a.g));
      refuse("residual witness", saturating_estimate(a.d, a.n), a.force);
      const NetFamily nets = nets_or_build(a.nets, a.d, a.n + 1, a.seed, a.force);
      f = residual_witness(g, nets, a.n);
    } else {
      int top = 1;
      while (2 * top <= trunc) top *= 2;
      refuse("mixture witness", saturating_estimate(a.d, top), a.force);
      const NetFamily nets = nets_or_build(a.nets, a.d, top + 1, a.seed, a.force);
      f = mixture_witness(nets, trunc);
    }
  } else {
    throw UsageError("build kind must be saturating, divergence or witness");
  }
  const json j = stamped(cap_function_to_json(f), config);
  if (a.out.empty()) {
    std::cout << j.dump(1) << '\n';
  } else {
    write_json_file(a.out, j);
  }
  return kOk;
}

// ---------------------------------------------------------------- profile

struct ProfileArgs {
  std::string function;
  std::vector<std::string> ys;
  std::string range = "4:14";
  std::string backend = "quadrature";
  std::string out;
  int jobs = 0;
};

int cmd_profile(const ProfileArgs& a) {
  const CapFunction f = cap_function_from_json(read_json_file(a.function));
  const auto [n_min, n_max] = parse_int_range(a.range);
  if (a.ys.empty()) throw UsageError("profile needs at least one --y");
  Eigen::MatrixXd probes(f.d + 1, static_cast<Eigen::Index>(a.ys.size()));
  for (std::size_t i = 0; i < a.ys.size(); ++i) {
    probes.col(static_cast<Eigen::Index>(i)) = parse_point(a.ys[i], f.d).coords();
  }
  EvalOptions eval;
  eval.backend = parse_backend(a.backend);
  eval.jobs = resolve_jobs(a.jobs);
  if (eval.backend != EvalBackend::Quadrature && (f.d != 1 || !f.atoms.empty())) eval.backend = EvalBackend::Quadrature;
  const json config = {{"command", "profile"}, {"function", config_hash(read_json_file(a.function))},
                       {"y", a.ys},          {"n", a.range},
                       {"backend", a.backend}};
  const ProfileTable t = profile_table(f, probes, n_min, n_max, eval);

  CsvTable csv;
  csv.schema = "profile";
  csv.version = csv_schema_version("profile");
  csv.config = config_hash(config);
  csv.columns = {"n", "r", "y_index", "value", "log2_value_over_n"};
  for (Eigen::Index i = 0; i < probes.cols(); ++i) {
    for (int n = n_min; n <= n_max; ++n) {
      const double v = t.values(n - n_min, i);
      csv.add_row({std::to_string(n), format_double(1.0 - std::ldexp(1.0, -n)), std::to_string(i), format_double(v),
                   v > 0.0 ? format_double(std::log2(v) / n) : "nan"});
    }
  }
  emit_csv(csv, a.out);
  for (const auto& fail : t.failures) std::fprintf(stderr, "quadrature tolerance missed: %s\n", fail.c_str());
  return t.failures.empty() ? kOk : kFailure;
}

// ---------------------------------------------------------------- slicecheck

struct SliceArgs {
  std::string measure;
  std::string net;
  double r = 0.99;
  std::size_t y_index = 0;
  int level = 0;
  std::string out;
};

int cmd_slicecheck(const SliceArgs& a) {
  if (!(a.r >= 0.0) || !(a.r < 1.0)) throw UsageError("--r must lie in [0, 1)");
  const CapFunction mu = cap_function_from_json(read_json_file(a.measure));
  const NetFamily nets = load_nets(a.net);
  const Net& net = nets.level(a.level > 0 ? a.level : nets.max_level());
  if (a.y_index >= net.size()) throw UsageError("--y-index out of range (net has " + std::to_string(net.size()) + " points)");
  const SpherePoint y = net.point(a.y_index);
  const DominationCheck c = check_domination(mu, y, a.r);
  const json config = {{"command", "slicecheck"}, {"measure", config_hash(read_json_file(a.measure))},
                       {"net", config_hash(read_json_file(a.net))}, {"r", a.r}, {"y_index", a.y_index},
                       {"level", net.level}};
  CsvTable csv;
  csv.schema = "slicecheck";
  csv.version = csv_schema_version("slicecheck");
  csv.config = config_hash(config);
  csv.columns = {"lhs", "rhs", "delta_star", "doubling", "ok"};
  csv.add_row({format_double(c.lhs), format_double(c.rhs), format_double(c.delta_star), format_double(c.doubling),
               c.ok ? "1" : "0"});
  emit_csv(csv, a.out);
  return c.ok ? kOk : kFailure;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string function;
  std::string nets;
  int d = 1;
  int truncation = 14;
  std::uint64_t seed = 7;
  std::string betas = "0:1:0.125";
  int probe_level = 12;
  int n_lo = 6;
  int n_hi = 12;
  int n_tail = 6;
  double tol = 0.05;
  std::string backend = "auto";
  std::string out = "spec.csv";
  std::string svg;
  int jobs = 0;
  bool force = false;
};

int cmd_spectrum(const SpectrumArgs& a) {
  json config = {{"command", "spectrum"}, {"betas", a.betas}, {"probe_level", a.probe_level}, {"n_lo", a.n_lo},
                 {"n_hi", a.n_hi},         {"n_tail", a.n_tail}, {"tol", a.tol},                 {"seed", a.seed},
                 {"backend", a.backend},   {"nets", a.nets}};
  CapFunction f;
  if (!a.function.empty()) {
    f = cap_function_from_json(read_json_file(a.function));
    config["function"] = config_hash(read_json_file(a.function));
  }
  const int d = a.function.empty() ? a.d : f.d;
  refuse("probe net", estimated_net_cardinality(d, a.probe_level), a.force);
  int top = 1;
  while (2 * top <= a.truncation) top *= 2;
  const int level = a.function.empty() ? std::max(a.probe_level, top + 1) : a.probe_level;
  const NetFamily nets = nets_or_build(a.nets, d, level, a.seed, a.force);
  if (a.function.empty()) {
    refuse("mixture witness", saturating_estimate(d, top), a.force);
    f = mixture_witness(nets, a.truncation);
    config.update({{"d", d}, {"witness", "mixture"}, {"truncation", a.truncation}});
  }

  SpectrumConfig sc;
  sc.tol = a.tol;
  sc.n_tail = a.n_tail;
  sc.probe_level = a.probe_level;
  sc.n_lo = a.n_lo;
  sc.n_hi = a.n_hi;
  sc.eval.backend = parse_backend(a.backend);
  sc.eval.jobs = resolve_jobs(a.jobs);
  const std::vector<double> betas = parse_betas(a.betas);
  const SpectrumEstimate s = spectrum(f, betas, nets, sc);
  const std::string hash = config_hash(config);

  CsvTable csv;
  csv.schema = "spectrum";
  csv.version = csv_schema_version("spectrum");
  csv.config = hash;
  csv.columns = {"beta", "dim", "fit_r2", "reference", "deviation", "empty", "n_lo", "n_hi", "counts"};
  for (const SpectrumPoint& p : s.points) {
    std::string counts;
    for (std::size_t c : p.counts) counts += (counts.empty() ? "" : ";") + std::to_string(c);
    const double ref = d - p.beta;
    csv.add_row({format_double(p.beta), format_double(p.dim), format_double(p.r2), format_double(ref),
                 format_double(p.dim - ref), p.empty ? "1" : "0", std::to_string(p.n_lo), std::to_string(p.n_hi),
                 counts});
  }
  emit_csv(csv, a.out);
  if (!a.svg.empty()) {
    std::ofstream out(a.svg);
    if (!out) throw std::runtime_error("cannot write " + a.svg);
    write_spectrum_svg(out, s, hash);
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::vector<std::string> suites;
  std::string nets;
  std::string report;
  std::uint64_t seed = 7;
  int jobs = 0;
};

int cmd_verify(const VerifyArgs& a) {
  SuiteOptions opt;
  opt.seed = a.seed;
  opt.jobs = resolve_jobs(a.jobs);
  std::vector<std::string> names = a.suites;
  if (!a.nets.empty()) {
    try {
      opt.nets = load_nets(a.nets);
    } catch (const FormatError& e) {
      std::printf("FAIL nets: %s\n", e.what());
      if (!a.report.empty()) {
        write_json_file(a.report, {{"passed", false}, {"error", e.what()}, {"nets", a.nets}});
      }
      return kFailure;
    }
    if (names.empty()) names = {"nets"};
  }
  if (names.empty()) names = suite_names();
  for (const auto& n : names) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      throw UsageError("unknown suite '" + n + "'");
    }
  }
  const json config = {{"command", "verify"}, {"suites", names}, {"seed", a.seed}, {"nets", a.nets}};
  json report = {{"config", config}, {"config_hash", config_hash(config)}, {"suites", json::array()}};
  bool all = true;
  for (const auto& name : names) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult r = run_suite(name, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s\n", r.passed() ? "PASS" : "FAIL", r.name.c_str());
    for (const Check& c : r.checks) {
      if (!c.passed) std::printf("  failed: %s%s%s\n", c.name.c_str(), c.detail.empty() ? "" : ": ", c.detail.c_str());
    }
    std::fflush(stdout);
    std::fprintf(stderr, "%s: %.1f s\n", r.name.c_str(), secs);
    report["suites"].push_back(r.to_json());
    all = all && r.passed();
  }
  report["passed"] = all;
  if (!a.report.empty()) write_json_file(a.report, report);
  return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capfield: Poisson integrals of cap functions on spheres and their divergence spectra"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (default: CAPFIELD_JOBS, else 1)");

  NetsArgs na;
  auto* nets = app.add_subcommand("nets", "Build and verify nested nets");
  nets->add_option("--d", na.d, "Sphere dimension")->required()->check(CLI::Range(1, 7));
  nets->add_option("--n", na.n, "Finest level")->required()->check(CLI::Range(1, 40));
  nets->add_option("--seed", na.seed, "Candidate stream seed");
  nets->add_option("--samples", na.samples, "Covering samples per level");
  nets->add_option("-o,--out", na.out, "Output JSON");
  nets->add_flag("--force", na.force, "Ignore the size guardrail");

  BuildArgs ba;
  auto* build = app.add_subcommand("build", "Build a cap function");
  build->add_option("kind", ba.kind, "saturating | divergence | witness")->required();
  build->add_option("--d", ba.d, "Sphere dimension")->check(CLI::Range(1, 7));
  build->add_option("--n", ba.n, "Saturating level n")->check(CLI::Range(1, 40));
  build->add_option("--truncation", ba.truncation, "Witness truncation level");
  build->add_option("--seed", ba.seed, "Seed for nets built on the fly");
  build->add_option("--nets", ba.nets, "Nets JSON");
  build->add_option("--spec", ba.spec, "Covering sequence JSON (divergence)");
  build->add_option("--point", ba.point, "Point covering around this point (divergence)");
  build->add_option("--levels", ba.levels, "Levels of the point covering");
  build->add_option("--beta", ba.beta, "Exponent of tau(s) = s^-beta");
  build->add_option("--gamma", ba.gamma, "Exponent of phi (default d - beta)");
  build->add_option("--psi", ba.psi, "Exponent of psi (default gamma)");
  build->add_flag("--power-log", ba.power_log, "Multiply tau and phi by 1 + log(1/s)");
  build->add_option("--g", ba.g, "Base function g of the residual witness g + f_n/n");
  build->add_option("-o,--out", ba.out, "Output JSON (default stdout)");
  build->add_flag("--force", ba.force, "Ignore the size guardrail");

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "Radial profile P[f](r_n y)");
  profile->add_option("-f,--function", pa.function, "Cap function JSON")->required();
  profile->add_option("--y", pa.ys, "Direction, comma-separated coordinates (repeatable)")->required();
  profile->add_option("--n", pa.range, "Dyadic levels lo:hi");
  profile->add_option("--backend", pa.backend, "quadrature | fft | auto");
  profile->add_option("-o,--out", pa.out, "Output CSV (default stdout)");

  SliceArgs sa;
  auto* slice = app.add_subcommand("slicecheck", "Slice domination check for a measure");
  slice->add_option("--measure", sa.measure, "Measure JSON")->required();
  slice->add_option("--net", sa.net, "Nets JSON")->required();
  slice->add_option("--r", sa.r, "Radius");
  slice->add_option("--y-index", sa.y_index, "Point index in the net")->required();
  slice->add_option("--level", sa.level, "Net level (default finest)");
  slice->add_option("-o,--out", sa.out, "Output CSV (default stdout)");

  SpectrumArgs pa2;
  auto* spec = app.add_subcommand("spectrum", "Estimate the divergence spectrum");
  spec->add_option("-f,--function", pa2.function, "Cap function JSON (default: mixture witness)");
  spec->add_option("--nets", pa2.nets, "Nets JSON");
  spec->add_option("--d", pa2.d, "Sphere dimension for the default witness")->check(CLI::Range(1, 7));
  spec->add_option("--truncation", pa2.truncation, "Truncation of the default witness");
  spec->add_option("--seed", pa2.seed, "Seed for nets built on the fly");
  spec->add_option("--betas", pa2.betas, "lo:hi:step or comma list");
  spec->add_option("--probe-level", pa2.probe_level, "Probe net level");
  spec->add_option("--n-lo", pa2.n_lo, "Lowest box-counting level");
  spec->add_option("--n-hi", pa2.n_hi, "Highest box-counting level");
  spec->add_option("--n-tail", pa2.n_tail, "Tail window of the exponent estimate");
  spec->add_option("--tol", pa2.tol, "Level-set tolerance");
  spec->add_option("--backend", pa2.backend, "auto | quadrature | fft");
  spec->add_option("-o,--out", pa2.out, "Output CSV");
  spec->add_option("--svg", pa2.svg, "Output SVG plot");
  spec->add_flag("--force", pa2.force, "Ignore the size guardrail");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run invariant suites");
  verify->add_option("--suite", va.suites, "Suite name (repeatable; default all)");
  verify->add_option("--nets", va.nets, "Check this nets file");
  verify->add_option("--report", va.report, "JSON report path");
  verify->add_option("--seed", va.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    try {
      pa.jobs = pa2.jobs = va.jobs = resolve_jobs(jobs);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (*nets) return cmd_nets(na);
    if (*build) return cmd_build(ba);
    if (*profile) return cmd_profile(pa);
    if (*slice) return cmd_slicecheck(sa);
    if (*spec) return cmd_spectrum(pa2);
    if (*verify) return cmd_verify(va);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const ResourceLimitError& e) {
    std::fprintf(stderr, "refused: %s; pass --force to run anyway\n", e.what());
    return kRefused;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kUsage;
}
