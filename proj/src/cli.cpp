#include "acev/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "acev/diagnostics.hpp"
#include "acev/report_io.hpp"

namespace acev {

namespace {

constexpr std::size_t kDefaultDiagnosticTrials = 100000;

std::string_view command_name(Command c) {
  switch (c) {
    case Command::simulate:
      return "simulate";
    case Command::strong_error:
      return "strong-error";
    case Command::rate_sweep:
      return "rate-sweep";
    case Command::diagnostics:
      return "diagnostics";
  }
  return "unknown";
}

std::size_t resolve_workers(const ExperimentConfig& c) {
  return c.workers == 0 ? default_workers() : c.workers;
}

std::size_t sweep_n0(const ExperimentConfig& c) { return c.n0.value_or(c.n); }

std::vector<double> sweep_alphas(const ExperimentConfig& c) {
  return c.alphas.empty() ? std::vector<double>{c.model.alpha} : c.alphas;
}

CsvRow base_row(const ExperimentConfig& c, const ModelParams& params) {
  CsvRow row;
  row.scheme = std::string(scheme_name(c.scheme));
  row.params = params;
  row.T = c.T;
  row.seed = c.seed;
  return row;
}

void add_violations(ValidationReport& into, const ModelParams& params, double T, std::size_t n) {
  try {
    params.check_domain();
  } catch (const std::invalid_argument& e) {
    into.violations.push_back({"domain", e.what()});
    return;
  }
  auto r = validate_assumption_A(params, T, n);
  for (auto& v : r.violations) into.violations.push_back(std::move(v));
  for (auto& w : r.warnings) into.warnings.push_back(std::move(w));
}

std::string violations_json(const ExperimentConfig& config, const ValidationReport& report) {
  nlohmann::json j;
  j["status"] = "invalid";
  j["command"] = command_name(config.command);
  j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"code", v.code}, {"message", v.message}});
  }
  j["warnings"] = report.warnings;
  return j.dump();
}

void run_simulate(const ExperimentConfig& c, std::ostream& os) {
  const GridSpec grid(c.T, c.n, c.model.k);
  const StableLawSpec law(c.model.alpha, c.normalization, grid.dt());
  const auto inc =
      make_increment_grid(c.seed, sample_stream_id(c.n, 0), c.n, law, c.model.sigma2 > 0.0);
  const auto result = simulate_path(c.scheme, c.model, grid, inc, true);
  const auto& path = *result.path;
  if (c.format == OutputFormat::plot) {
    os << "# x: t\n# y: X_t\n# columns: series x y err\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
      os << "path " << format_double(static_cast<double>(i) * grid.dt()) << ' '
         << format_double(path[i]) << " 0\n";
    }
    return;
  }
  os << "step,t,state\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    os << i << ',' << format_double(static_cast<double>(i) * grid.dt()) << ','
       << format_double(path[i]) << '\n';
  }
}

void run_strong_error(const ExperimentConfig& c, std::ostream& os, std::ostream* plot) {
  const std::size_t samples = c.samples.value_or(squared_sample_rule(c.n));
  const SimulationOptions opts{c.normalization, resolve_workers(c)};
  const auto report = estimate_strong_error(c.scheme, c.model, c.T, c.n, samples, c.seed, opts);
  const std::vector<StrongErrorReport> reports{report};
  if (c.format == OutputFormat::plot) {
    emit_plot_data(os, reports);
  } else {
    write_csv_header(os);
    auto row = base_row(c, c.model);
    row.n = report.n;
    row.samples = report.samples;
    row.metric = "s_n";
    row.value = report.s_n;
    row.stderr_value = report.std_error;
    write_csv_row(os, row);
  }
  if (plot) emit_plot_data(*plot, reports);
}

void run_rate_sweep(const ExperimentConfig& c, std::ostream& os, std::ostream* plot) {
  const std::size_t n0 = sweep_n0(c);
  const std::size_t fixed = c.samples.value_or(squared_sample_rule(n0));
  const SampleRule rule = [fixed](std::size_t) { return fixed; };
  const SimulationOptions opts{c.normalization, resolve_workers(c)};
  RateOptions rate_opts;
  rate_opts.method = c.method;
  const auto alphas = sweep_alphas(c);
  const auto sweep = rate_sweep(c.scheme, c.model, c.T, n0, alphas, rule, c.seed, opts, rate_opts);

  if (c.format == OutputFormat::plot) {
    emit_plot_data(os, sweep.reports);
  } else {
    write_csv_header(os);
    for (const auto& r : sweep.reports) {
      ModelParams params = c.model;
      params.alpha = r.alpha;
      auto row = base_row(c, params);
      for (const auto& level : r.levels) {
        row.n = level.n;
        row.samples = level.samples;
        row.metric = "s_n";
        row.value = level.s_n;
        row.stderr_value = level.std_error;
        write_csv_row(os, row);
      }
      row.n = r.levels.front().n;
      row.samples = r.levels.front().samples;
      const std::pair<const char*, std::pair<double, double>> metrics[] = {
          {"rate", {r.rate_estimate, r.rate_stderr}},
          {"ref_half", {r.reference.half, 0.0}},
          {"ref_inv2alpha", {r.reference.inv2alpha, 0.0}},
          {"ref_alpha_quarter", {r.reference.alpha_quarter, 0.0}},
          {"theoretical_floor", {r.theoretical_floor, 0.0}},
      };
      for (const auto& [name, vals] : metrics) {
        row.metric = name;
        row.value = vals.first;
        row.stderr_value = vals.second;
        write_csv_row(os, row);
      }
    }
  }
  if (plot) emit_plot_data(*plot, sweep.reports);
}

void run_diagnostics(const ExperimentConfig& c, std::ostream& os) {
  const GridSpec grid(c.T, c.n, c.model.k);
  const std::size_t trials = c.samples.value_or(kDefaultDiagnosticTrials);
  const SimulationOptions opts{c.normalization, resolve_workers(c)};

  const auto dneg = estimate_dneg_frequency(c.model, grid, trials, c.seed, opts);
  const auto moment = estimate_scheme_moment(c.model, grid, c.beta, trials, c.seed, opts);
  const auto inverse =
      estimate_inverse_moment(c.model, grid, c.inverse_p, trials, c.seed, opts, c.c_f);

  write_csv_header(os);
  auto row = base_row(c, c.model);
  row.n = c.n;
  row.samples = trials;
  const std::pair<const char*, std::pair<double, double>> metrics[] = {
      {"dneg_freq", {dneg.observed_freq, dneg.mc_stderr}},
      {"dneg_bound", {dneg.theoretical_bound, 0.0}},
      {"moment", {moment.estimate, moment.std_error}},
      {"inv_moment", {inverse.estimate, inverse.std_error}},
  };
  for (const auto& [name, vals] : metrics) {
    row.metric = name;
    row.value = vals.first;
    row.stderr_value = vals.second;
    write_csv_row(os, row);
  }
}

}  // namespace

ValidationReport validate_config(const ExperimentConfig& c) {
  ValidationReport report;
  switch (c.command) {
    case Command::simulate:
    case Command::diagnostics:
      add_violations(report, c.model, c.T, c.n);
      break;
    case Command::strong_error:
      add_violations(report, c.model, c.T, c.n);
      break;
    case Command::rate_sweep: {
      const std::size_t n0 = sweep_n0(c);
      if (n0 < 8) report.violations.push_back({"n0", "rate estimation needs n0 >= 8"});
      for (const double alpha : sweep_alphas(c)) {
        ModelParams params = c.model;
        params.alpha = alpha;
        add_violations(report, params, c.T, n0);
      }
      break;
    }
  }
  if (c.command == Command::diagnostics) {
    const std::size_t trials = c.samples.value_or(kDefaultDiagnosticTrials);
    if (trials < 10000) {
      report.violations.push_back({"samples", "diagnostics need at least 10000 samples"});
    }
    if (!(c.beta >= 1.0 && c.beta < c.model.alpha)) {
      report.violations.push_back({"beta", "moment order beta must satisfy 1 <= beta < alpha"});
    }
    if (!(c.inverse_p > 0.0)) {
      report.violations.push_back({"p", "inverse moment order p must be positive"});
    }
  }
  if (c.command == Command::strong_error && c.samples && *c.samples < 100) {
    report.violations.push_back({"samples", "strong error estimation needs at least 100 samples"});
  }
  if (c.command == Command::rate_sweep && c.samples && *c.samples < 100) {
    report.violations.push_back({"samples", "strong error estimation needs at least 100 samples"});
  }
  return report;
}

int run(const ExperimentConfig& config, std::ostream& stdout_stream, std::ostream& err) {
  const auto report = validate_config(config);
  if (!report.ok()) {
    err << violations_json(config, report) << '\n';
    return kExitValidation;
  }
  try {
    std::ostringstream primary;
    std::ostringstream plot_buffer;
    std::ostream* plot = config.plot ? &plot_buffer : nullptr;
    switch (config.command) {
      case Command::simulate:
        run_simulate(config, primary);
        break;
      case Command::strong_error:
        run_strong_error(config, primary, plot);
        break;
      case Command::rate_sweep:
        run_rate_sweep(config, primary, plot);
        break;
      case Command::diagnostics:
        run_diagnostics(config, primary);
        break;
    }
    auto write_to = [](const std::string& path, const std::string& text) {
      std::ofstream file(path, std::ios::binary | std::ios::trunc);
      if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
      file << text;
      file.close();
      if (!file) throw std::runtime_error("failed writing output file '" + path + "'");
    };
    if (config.out == "-") {
      stdout_stream << primary.str();
    } else {
      write_to(config.out, primary.str());
    }
    if (config.plot) write_to(*config.plot, plot_buffer.str());
  } catch (const ValidationError& e) {
    err << violations_json(config, e.report()) << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

std::optional<ExperimentConfig> parse_cli(const std::vector<std::string>& args, std::ostream& out,
                                          std::ostream& err, int& exit_code) {
  ExperimentConfig config;
  CLI::App app{"Positivity-preserving simulation of alpha-CEV / alpha-CIR jump diffusions"};
  app.set_config("--config", "", "key = value file; explicit flags override its values");
  app.require_subcommand(1, 1);
  app.fallthrough();

  auto* simulate = app.add_subcommand("simulate", "simulate one path and write it as CSV");
  auto* strong = app.add_subcommand("strong-error", "estimate S_n = E|X_T^{2n} - X_T^n|");
  auto* sweep = app.add_subcommand("rate-sweep", "estimate the strong rate for each alpha");
  auto* diag = app.add_subcommand("diagnostics", "D-negativity frequency and moment estimates");

  const std::map<std::string, Scheme> schemes{{"implicit", Scheme::implicit},
                                              {"em", Scheme::em},
                                              {"drift-implicit", Scheme::drift_implicit}};
  const std::map<std::string, StableNormalization> norms{
      {"levy", StableNormalization::levy_measure}, {"unit", StableNormalization::unit_scale}};
  const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv},
                                                    {"plot", OutputFormat::plot}};
  const std::map<std::string, RateMethod> methods{{"log-difference", RateMethod::log_difference},
                                                  {"least-squares", RateMethod::least_squares}};

  auto& m = config.model;
  app.add_option("--scheme", config.scheme, "implicit | em | drift-implicit")
      ->transform(CLI::CheckedTransformer(schemes, CLI::ignore_case));
  app.add_option("--alpha", m.alpha, "stable index in (1, 2)");
  app.add_option("--gamma", m.gamma, "diffusion elasticity in [1/2, 1)");
  app.add_option("--a", m.a, "mean-reversion level");
  app.add_option("--k", m.k, "mean-reversion speed");
  app.add_option("--sigma1", m.sigma1, "diffusion scale");
  app.add_option("--sigma2", m.sigma2, "jump scale");
  app.add_option("--x0", m.x0, "initial value");
  app.add_option("--T", config.T, "horizon");
  app.add_option("--n", config.n, "step count");
  std::size_t samples = 0;
  auto* samples_opt = app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--seed", config.seed, "master seed");
  app.add_option("--workers", config.workers, "worker threads (0 = all cores)");
  app.add_option("--out", config.out, "output path, - for stdout");
  app.add_option("--format", config.format, "csv | plot")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  std::string plot_path;
  auto* plot_opt = app.add_option("--plot", plot_path, "also write plot data to this path");
  app.add_option("--normalization", config.normalization, "levy | unit")
      ->transform(CLI::CheckedTransformer(norms, CLI::ignore_case));
  app.add_option("--alphas", config.alphas, "rate-sweep: comma-separated alpha values")
      ->delimiter(',');
  std::size_t n0 = 0;
  auto* n0_opt = app.add_option("--n0", n0, "rate-sweep: base grid size (default --n)");
  app.add_option("--method", config.method, "rate-sweep: log-difference | least-squares")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  app.add_option("--beta", config.beta, "diagnostics: scheme moment order");
  app.add_option("--p", config.inverse_p, "diagnostics: inverse moment order");
  double c_f = 0.0;
  auto* c_f_opt = app.add_option("--c-f", c_f, "diagnostics: constant for the inverse-moment ceiling");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    exit_code = code == 0 ? kExitOk : kExitValidation;
    return std::nullopt;
  }

  if (simulate->parsed()) config.command = Command::simulate;
  if (strong->parsed()) config.command = Command::strong_error;
  if (sweep->parsed()) config.command = Command::rate_sweep;
  if (diag->parsed()) config.command = Command::diagnostics;
  if (samples_opt->count() > 0) config.samples = samples;
  if (plot_opt->count() > 0) config.plot = plot_path;
  if (n0_opt->count() > 0) config.n0 = n0;
  if (c_f_opt->count() > 0) config.c_f = c_f;
  exit_code = kExitOk;
  return config;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  int exit_code = kExitOk;
  const auto config = parse_cli(args, out, err, exit_code);
  if (!config) return exit_code;
  return run(*config, out, err);
}

}  // namespace acev
