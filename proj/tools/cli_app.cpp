#include "cli_app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fconv/analysis.hpp"
#include "fconv/bases.hpp"
#include "fconv/convolution.hpp"
#include "fconv/expr.hpp"
#include "fconv/grid_function.hpp"
#include "fconv/metrics.hpp"
#include "fconv/partition.hpp"
#include "fconv/report_io.hpp"

namespace fconv {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (!std::isfinite(v)) return v > 0.0 ? "inf" : "-inf";
  return v;
}

// Flags shared by every command that builds a function grid.
struct GridArgs {
  std::vector<double> interval{0.0, 1.0};
  int nodes = 4;
  int grid = 256;

  void attach(CLI::App& cmd) {
    cmd.add_option("--interval", interval, "interval endpoints: lo hi")
        ->expected(2)
        ->capture_default_str();
    cmd.add_option("--nodes", nodes, "number of subintervals N")
        ->check(CLI::Range(2, 1 << 16))
        ->capture_default_str();
    cmd.add_option("--grid", grid, "samples per subinterval M")
        ->check(CLI::Range(1, 1 << 20))
        ->capture_default_str();
  }

  Partition partition() const {
    if (!(interval[0] < interval[1])) throw std::invalid_argument("--interval needs lo < hi");
    return Partition::uniform(interval[0], interval[1], nodes);
  }

  json to_json() const {
    return json{{"interval", interval}, {"subintervals", nodes}, {"samples_per_cell", grid}};
  }
};

ScaleVector scale_from_alpha(const std::vector<std::string>& alpha, const Partition& partition,
                             int grid) {
  if (alpha.size() != 1 && static_cast<int>(alpha.size()) != partition.subinterval_count())
    throw std::invalid_argument("--alpha needs one shared expression or N expressions");
  std::vector<Expression> exprs;
  exprs.reserve(alpha.size());
  for (const auto& src : alpha) exprs.push_back(Expression::parse(src));
  return ScaleVector::from_expressions(partition, grid, exprs);
}

std::pair<ScheduleKind, double> parse_schedule(const std::string& text) {
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    double param = 0.0;
    const char* first = text.data() + colon + 1;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, param);
    if (ec == std::errc{} && ptr == last) {
      if (kind == "const") return {ScheduleKind::constant, param};
      if (kind == "c/m") return {ScheduleKind::reciprocal, param};
    }
  }
  throw std::invalid_argument("--schedule needs the form const:L or c/m:C, got '" + text + "'");
}

ConvolutionSide parse_side(const std::string& text) {
  if (text == "left-null") return ConvolutionSide::left_null;
  if (text == "right-null") return ConvolutionSide::right_null;
  if (text == "difference") return ConvolutionSide::difference;
  throw std::invalid_argument("unknown side '" + text + "'");
}

// ---------------------------------------------------------------- convolve

struct ConvolveJob {
  GridArgs where;
  std::string seed_src;
  std::string base_src;
  std::vector<std::string> alpha;
  double p = 2.0;
  double tol = 1e-10;
  int max_iter = 400;
};

json run_convolve_job(const ConvolveJob& job, const fs::path* out_stem) {
  const Partition partition = job.where.partition();
  const GridFunction seed =
      GridFunction::sample(partition, job.where.grid, Expression::parse(job.seed_src));
  const GridFunction base =
      GridFunction::sample(partition, job.where.grid, Expression::parse(job.base_src));
  const ScaleVector scale = scale_from_alpha(job.alpha, partition, job.where.grid);

  const ConvolutionConfig cfg(partition, scale, seed, base, job.tol, job.max_iter);
  FixedPointResult fp = fixed_point(cfg);
  if (!fp.log.converged) throw ConvergenceError(fp.log);

  const NormSpec spec = NormSpec::lp(job.p);
  const double eff = effective_lambda(scale.lambda(), spec);
  const double ratio = eff / (1.0 - eff);
  const double dist = distance(fp.attractor, seed, spec);
  const double seed_base = distance(seed, base, spec);

  json config = job.where.to_json();
  config["seed"] = job.seed_src;
  config["base"] = job.base_src;
  config["alpha"] = job.alpha;
  config["p"] = json_number(job.p);
  config["tol"] = job.tol;
  config["max_iter"] = job.max_iter;

  json doc;
  doc["command"] = "convolve";
  doc["config"] = config;
  doc["lambda"] = scale.lambda();
  doc["contraction_ratio"] = ratio;
  doc["sweeps"] = fp.log.sweeps;
  doc["residual"] = fp.log.residual;
  doc["interpolated_pullback"] = fp.log.interpolated_pullback;
  doc["node_values"] = node_values(cfg);
  doc["distance_to_seed"] = json_number(dist);
  doc["seed_base_distance"] = json_number(seed_base);
  doc["distance_bound"] = json_number(ratio * seed_base);

  if (out_stem != nullptr) {
    fs::path csv = *out_stem;
    csv += ".csv";
    fs::path sidecar = *out_stem;
    sidecar += ".json";
    write_samples_csv(csv, fp.attractor);
    write_json(sidecar, doc);
  }
  return doc;
}

int cmd_convolve(const ConvolveJob& job, const std::string& out) {
  if (out.empty()) {
    std::cout << run_convolve_job(job, nullptr).dump(2) << "\n";
    return 0;
  }
  const fs::path stem(out);
  const json doc = run_convolve_job(job, &stem);
  std::cout << "lambda " << doc["lambda"].get<double>() << ", sweeps "
            << doc["sweeps"].get<int>() << ", residual " << doc["residual"].get<double>()
            << "\nwrote " << out << ".csv and " << out << ".json\n";
  return 0;
}

// ------------------------------------------------------------------ figure

int cmd_figure(const std::string& dir, int grid, double tol) {
  struct Fig {
    const char* stem;
    const char* seed;
    const char* base;
  };
  constexpr Fig figs[] = {{"fig1", "sin(3*pi*x)", "exp(x)"},
                          {"fig2", "0", "sin(3*pi*x)"},
                          {"fig3", "sin(3*pi*x)", "0"}};
  for (const Fig& f : figs) {
    ConvolveJob job;
    job.where.interval = {0.0, 3.0};
    job.where.nodes = 6;
    job.where.grid = grid;
    job.seed_src = f.seed;
    job.base_src = f.base;
    job.alpha = {"x/8"};
    job.tol = tol;
    const fs::path stem = fs::path(dir) / f.stem;
    const json doc = run_convolve_job(job, &stem);
    std::cout << f.stem << ": " << f.seed << " * " << f.base << ", lambda "
              << doc["lambda"].get<double>() << ", sweeps " << doc["sweeps"].get<int>()
              << ", residual " << doc["residual"].get<double>() << "\n";
  }
  std::cout << "wrote fig1..fig3 under " << dir << "\n";
  return 0;
}

// ------------------------------------------------------------------ verify

std::vector<SuiteReport> run_suites(const std::string& suite, const TrialConfig& tc) {
  if (suite == "all") return run_all_suites(tc);
  if (suite == "contraction") return {verify_contraction_bounds(tc)};
  if (suite == "lipschitz") return {verify_lipschitz_bounds(tc)};
  if (suite == "partial-null") return {verify_partial_null(tc)};
  if (suite == "sets") return {verify_set_inequalities(tc)};
  if (suite == "membership") return {verify_convolution_set_membership(tc)};
  if (suite == "interpolation") {
    const auto data = default_interpolation_data(tc.lo, tc.hi);
    return {verify_interpolation(data, tc)};
  }
  if (suite == "lambda-study") {
    const Partition partition = tc.partition();
    const GridFunction f = GridFunction::sample(
        partition, tc.samples_per_cell, [](double x) { return std::sin(3.0 * std::numbers::pi * x); });
    const GridFunction b =
        GridFunction::sample(partition, tc.samples_per_cell, [](double x) { return std::exp(x); });
    std::vector<double> schedule(10);
    for (int k = 1; k <= 10; ++k) schedule[static_cast<std::size_t>(k - 1)] = 0.3 / k;
    return {lambda_convergence_study(f, b, schedule, tc)};
  }
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

int cmd_verify(const std::string& suite, const TrialConfig& tc, const std::string& out) {
  const std::vector<SuiteReport> reports = run_suites(suite, tc);
  int violations = 0;
  for (const auto& r : reports) {
    std::cout << r.suite << "\n";
    for (const auto& c : r.checks)
      std::cout << "  " << c.name << ": trials " << c.trials << ", violations " << c.violations
                << ", worst slack " << c.worst_slack << "\n";
    violations += r.total_violations();
  }
  if (!out.empty()) {
    json doc = json::array();
    for (const auto& r : reports) doc.push_back(r.to_json());
    write_json(out, doc);
    std::cout << "wrote " << out << "\n";
  }
  if (violations > 0) {
    std::cout << "violations: " << violations << "\n";
    return 2;
  }
  std::cout << "all checks passed\n";
  return 0;
}

// ------------------------------------------------------------------- basis

struct BasisArgs {
  GridArgs where;
  std::string family = "trig";
  int count = 8;
  std::string side = "left-null";
  std::string schedule;
  std::vector<std::string> alpha;
  double envelope_pad = 1e-9;
  double tol = 1e-10;
  int max_iter = 400;
};

int cmd_basis(const BasisArgs& a, const std::string& out) {
  if (a.alpha.empty() == a.schedule.empty())
    throw std::invalid_argument("pass exactly one of --alpha and --schedule");
  const Partition partition = a.where.partition();
  const FunctionFamily src = trig_basis(partition, a.where.grid, a.count);
  const ConvolutionSide side = parse_side(a.side);

  FunctionFamily conv;
  if (!a.alpha.empty()) {
    const ScaleVector sv = scale_from_alpha(a.alpha, partition, a.where.grid);
    conv = convolve_family(src, side, sv, a.tol, a.max_iter);
  } else {
    const auto [kind, param] = parse_schedule(a.schedule);
    conv = convolve_family(src, side, lambda_schedule(kind, param, a.count), a.tol, a.max_iter);
  }

  const GramMatrix g = gram_matrix(conv);
  const std::vector<double> eigs = symmetric_eigenvalues(g);
  const RieszBounds rb = riesz_bounds(conv, a.envelope_pad);

  json config = a.where.to_json();
  config["family"] = a.family;
  config["count"] = a.count;
  config["side"] = a.side;
  if (!a.alpha.empty())
    config["alpha"] = a.alpha;
  else
    config["schedule"] = a.schedule;
  config["envelope_pad"] = a.envelope_pad;
  config["tol"] = a.tol;
  config["max_iter"] = a.max_iter;

  json doc;
  doc["command"] = "basis";
  doc["config"] = config;
  if (!conv.schedule.empty()) doc["lambda_schedule"] = conv.schedule;
  doc["eigenvalues"] = eigs;
  doc["min_eigenvalue"] = rb.min_eigenvalue;
  doc["max_eigenvalue"] = rb.max_eigenvalue;
  doc["envelope_lo"] = rb.envelope_lo ? json(*rb.envelope_lo) : json();
  doc["envelope_hi"] = rb.envelope_hi ? json(*rb.envelope_hi) : json();
  doc["within_envelope"] = rb.within_envelope;

  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    const fs::path stem(out);
    fs::path gram_path = stem;
    gram_path += "_gram.csv";
    fs::path spectrum_path = stem;
    spectrum_path += "_spectrum.csv";
    fs::path json_path = stem;
    json_path += ".json";
    write_matrix_csv(gram_path, g.data(), g.size(), g.size());
    write_matrix_csv(spectrum_path, eigs, static_cast<int>(eigs.size()), 1);
    write_json(json_path, doc);
    std::cout << "spectrum [" << rb.min_eigenvalue << ", " << rb.max_eigenvalue << "]\n"
              << "wrote " << out << "_gram.csv, " << out << "_spectrum.csv, " << out << ".json\n";
  }

  const bool has_envelope = rb.envelope_lo.has_value() || rb.envelope_hi.has_value();
  if (has_envelope && !rb.within_envelope) {
    std::cout << "spectrum left the certified envelope\n";
    return 2;
  }
  return 0;
}

// ------------------------------------------------------------------- frame

struct FrameArgs {
  GridArgs where;
  int count = 16;
  std::string schedule = "c/m:0.3";
  double frame_a = 1.0;
  double frame_b = 1.0;
  double tol = 1e-10;
  int max_iter = 400;
};

int cmd_frame(const FrameArgs& a, const std::string& out) {
  const Partition partition = a.where.partition();
  const FunctionFamily src = trig_basis(partition, a.where.grid, a.count);
  const auto [kind, param] = parse_schedule(a.schedule);
  const FunctionFamily conv = convolve_family(src, ConvolutionSide::right_null,
                                              lambda_schedule(kind, param, a.count), a.tol,
                                              a.max_iter);
  const PerturbationBudget budget = perturbation_R(src, conv);
  const FrameReport report = frame_perturbation_bounds(a.frame_a, a.frame_b, budget.bound);

  const double pad = 1e-9 * std::max(1.0, budget.bound);
  const bool within = budget.empirical <= budget.bound + pad;

  json config = a.where.to_json();
  config["count"] = a.count;
  config["schedule"] = a.schedule;
  config["A"] = a.frame_a;
  config["B"] = a.frame_b;
  config["tol"] = a.tol;
  config["max_iter"] = a.max_iter;

  json doc;
  doc["command"] = "frame";
  doc["config"] = config;
  doc["r_bound"] = budget.bound;
  doc["r_empirical"] = budget.empirical;
  doc["empirical_within_bound"] = within;
  doc["feasible"] = report.feasible;
  doc["A_new"] = report.feasible ? json(report.a_new) : json();
  doc["B_new"] = report.feasible ? json(report.b_new) : json();

  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_json(out, doc);
    std::cout << "R " << budget.bound << " (empirical " << budget.empirical << "), "
              << (report.feasible ? "feasible" : "infeasible");
    if (report.feasible) std::cout << ", A' " << report.a_new << ", B' " << report.b_new;
    std::cout << "\nwrote " << out << "\n";
  }

  if (!within) {
    std::cout << "empirical perturbation exceeded its bound\n";
    return 2;
  }
  return 0;
}

}  // namespace
}  // namespace fconv

namespace fconv {

int run_cli(std::vector<std::string> args) {
  CLI::App app{"fractal convolution toolkit"};
  app.require_subcommand(1);
  int code = 0;

  // convolve
  ConvolveJob job;
  std::string convolve_out;
  auto* convolve_cmd = app.add_subcommand("convolve", "compute the fractal convolution f * b");
  job.where.attach(*convolve_cmd);
  convolve_cmd->add_option("--seed-fn", job.seed_src, "seed expression f(x)")->required();
  convolve_cmd->add_option("--base-fn", job.base_src, "base expression b(x)")->required();
  convolve_cmd
      ->add_option("--alpha", job.alpha,
                   "scale expressions: one shared or N comma-separated, sup|alpha| < 1")
      ->required()
      ->delimiter(',');
  convolve_cmd->add_option("--p", job.p, "distance exponent (inf for the sup norm)")
      ->capture_default_str();
  convolve_cmd->add_option("--tol", job.tol, "fixed point tolerance")->capture_default_str();
  convolve_cmd->add_option("--max-iter", job.max_iter, "sweep limit")->capture_default_str();
  convolve_cmd->add_option("--out", convolve_out, "output stem; writes STEM.csv and STEM.json");
  convolve_cmd->callback([&] { code = cmd_convolve(job, convolve_out); });

  // figure
  std::string figure_out;
  int figure_grid = 512;
  double figure_tol = 1e-10;
  auto* figure_cmd =
      app.add_subcommand("figure", "emit the three example convolutions on [0, 3]");
  figure_cmd->add_option("--out", figure_out, "output directory")->required();
  figure_cmd->add_option("--grid", figure_grid, "samples per subinterval M")
      ->check(CLI::Range(1, 1 << 20))
      ->capture_default_str();
  figure_cmd->add_option("--tol", figure_tol, "fixed point tolerance")->capture_default_str();
  figure_cmd->callback([&] { code = cmd_figure(figure_out, figure_grid, figure_tol); });

  // verify
  TrialConfig tc;
  std::string suite = "all";
  std::string verify_out;
  std::vector<double> verify_interval{tc.lo, tc.hi};
  auto* verify_cmd = app.add_subcommand("verify", "run the randomized verification suites");
  verify_cmd->add_option("--suite", suite, "suite to run")
      ->check(CLI::IsMember({"contraction", "lipschitz", "partial-null", "sets", "membership",
                             "interpolation", "lambda-study", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--trials", tc.trials, "trials per check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--seed", tc.rng_seed, "rng seed")->capture_default_str();
  verify_cmd->add_option("--p", tc.p, "distance exponent (inf for the sup norm)")
      ->capture_default_str();
  verify_cmd->add_option("--set-size", tc.set_size, "elements per random function set")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  verify_cmd->add_option("--interval", verify_interval, "interval endpoints: lo hi")
      ->expected(2)
      ->capture_default_str();
  verify_cmd->add_option("--nodes", tc.subintervals, "number of subintervals N")
      ->check(CLI::Range(2, 1 << 16))
      ->capture_default_str();
  verify_cmd->add_option("--grid", tc.samples_per_cell, "samples per subinterval M")
      ->check(CLI::Range(1, 1 << 20))
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "write the JSON report here");
  verify_cmd->callback([&] {
    if (!(verify_interval[0] < verify_interval[1]))
      throw std::invalid_argument("--interval needs lo < hi");
    tc.lo = verify_interval[0];
    tc.hi = verify_interval[1];
    code = cmd_verify(suite, tc, verify_out);
  });

  // basis
  BasisArgs basis;
  std::string basis_out;
  auto* basis_cmd =
      app.add_subcommand("basis", "convolve a spanning family and report its Gram spectrum");
  basis.where.attach(*basis_cmd);
  basis_cmd->add_option("--family", basis.family, "source family")
      ->check(CLI::IsMember({"trig"}))
      ->capture_default_str();
  basis_cmd->add_option("--count", basis.count, "family size m")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
  basis_cmd->add_option("--side", basis.side, "convolution applied to each member")
      ->check(CLI::IsMember({"left-null", "right-null", "difference"}))
      ->capture_default_str();
  auto* schedule_opt = basis_cmd->add_option(
      "--schedule", basis.schedule, "contraction factors: const:L or c/m:C");
  basis_cmd
      ->add_option("--alpha", basis.alpha,
                   "shared scale expressions: one or N comma-separated (alternative to --schedule)")
      ->delimiter(',')
      ->excludes(schedule_opt);
  basis_cmd->add_option("--envelope-pad", basis.envelope_pad, "slack added to the spectral envelope")
      ->capture_default_str();
  basis_cmd->add_option("--tol", basis.tol, "fixed point tolerance")->capture_default_str();
  basis_cmd->add_option("--max-iter", basis.max_iter, "sweep limit")->capture_default_str();
  basis_cmd->add_option("--out", basis_out,
                        "output stem; writes STEM_gram.csv, STEM_spectrum.csv, STEM.json");
  basis_cmd->callback([&] { code = cmd_basis(basis, basis_out); });

  // frame
  FrameArgs frame;
  std::string frame_out;
  auto* frame_cmd =
      app.add_subcommand("frame", "frame bounds after convolving each member with the null base");
  frame.where.attach(*frame_cmd);
  frame_cmd->add_option("--count", frame.count, "family size m")
      ->check(CLI::Range(1, 4096))
      ->capture_default_str();
  frame_cmd->add_option("--schedule", frame.schedule, "contraction factors: const:L or c/m:C")
      ->capture_default_str();
  frame_cmd->add_option("--A", frame.frame_a, "lower frame bound of the source family")
      ->capture_default_str();
  frame_cmd->add_option("--B", frame.frame_b, "upper frame bound of the source family")
      ->capture_default_str();
  frame_cmd->add_option("--tol", frame.tol, "fixed point tolerance")->capture_default_str();
  frame_cmd->add_option("--max-iter", frame.max_iter, "sweep limit")->capture_default_str();
  frame_cmd->add_option("--out", frame_out, "write the JSON report here");
  frame_cmd->callback([&] { code = cmd_frame(frame, frame_out); });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: no convergence after " << e.log().sweeps
              << " sweeps, residual " << e.log().residual << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error, out_of_range, length_error
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}

}  // namespace fconv
