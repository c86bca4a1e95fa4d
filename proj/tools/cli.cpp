#include "cli.hpp"

#include "spatavg/spatavg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

namespace spatavg::cli {

namespace {

namespace fs = std::filesystem;
using io::format_double;

const std::map<std::string, Subcommand> kSubcommands = {
    {"moments", Subcommand::moments},   {"estimate", Subcommand::estimate},
    {"simulate", Subcommand::simulate}, {"optimize", Subcommand::optimize},
    {"se-report", Subcommand::se_report}, {"synth", Subcommand::synth}};
const std::map<std::string, Objective> kObjectives = {
    {"bias", Objective::bias}, {"variance", Objective::variance}, {"mse", Objective::mse}};
const std::map<std::string, Scheme> kSchemes = {{"uniform", Scheme::uniform},
                                                {"file", Scheme::file},
                                                {"bias", Scheme::bias},
                                                {"variance", Scheme::variance},
                                                {"mse", Scheme::mse}};
const std::map<std::string, EmptyPatternPolicy> kPolicies = {
    {"error", EmptyPatternPolicy::error}, {"resample", EmptyPatternPolicy::resample}};
const std::map<std::string, SiteLayout> kLayouts = {{"line", SiteLayout::line},
                                                    {"grid", SiteLayout::grid}};

template <typename E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [key, v] : table) {
    if (v == value) return key;
  }
  return "?";
}

template <typename E>
std::vector<std::string> keys_of(const std::map<std::string, E>& table) {
  std::vector<std::string> out;
  for (const auto& entry : table) out.push_back(entry.first);
  return out;
}

std::string sub_name(Subcommand s) { return name_of(kSubcommands, s); }

// "# spatavg <version> <subcommand> key=value ..." on every output file.
class Provenance {
 public:
  explicit Provenance(const RunConfig& cfg) : sub_(sub_name(cfg.subcommand)) {}

  void add(const std::string& key, const std::string& value) {
    params_.emplace_back(key, value);
  }
  void add_path(const std::string& key, const std::optional<fs::path>& p) {
    if (p) add(key, p->string());
  }

  std::string line() const {
    std::string out = "# spatavg " + std::string(kVersion) + " " + sub_;
    for (const auto& [k, v] : params_) out += " " + k + "=" + v;
    return out + "\n";
  }

 private:
  std::string sub_;
  std::vector<std::pair<std::string, std::string>> params_;
};

Provenance provenance(const RunConfig& cfg) {
  Provenance p(cfg);
  switch (cfg.subcommand) {
    case Subcommand::synth:
      p.add("n", std::to_string(cfg.synth.n_sites));
      p.add("steps", std::to_string(cfg.synth.n_steps));
      p.add("corr_length", format_double(cfg.synth.corr_length));
      p.add("mean_contrast", format_double(cfg.synth.mean_contrast));
      p.add("cv", format_double(cfg.synth.coeff_variation));
      p.add("sigma_eps", format_double(cfg.synth.sigma_eps));
      p.add("seed", std::to_string(cfg.synth.seed));
      p.add("layout", name_of(kLayouts, cfg.synth.layout));
      return p;
    default:
      break;
  }
  p.add_path("panel", cfg.panel_path);
  p.add_path("truth", cfg.truth_path);
  p.add_path("moments", cfg.moments_path);
  p.add_path("weights", cfg.weights_path);
  p.add("alpha", cfg.alpha_spec);
  p.add("sigma_eps", format_double(cfg.sigma_eps));
  if (cfg.subcommand == Subcommand::optimize) p.add("objective", name_of(kObjectives, cfg.objective));
  if (cfg.subcommand != Subcommand::moments && cfg.subcommand != Subcommand::optimize) {
    p.add("scheme", name_of(kSchemes, cfg.scheme));
  }
  if (cfg.subcommand == Subcommand::simulate) {
    p.add("seed", std::to_string(cfg.seed));
    p.add("realizations", std::to_string(cfg.realizations));
    p.add("empty_policy", name_of(kPolicies, cfg.empty_policy));
    p.add("trace", cfg.trace ? "true" : "false");
  }
  if (cfg.subcommand == Subcommand::se_report) {
    if (!cfg.blocks.empty()) p.add("blocks", cfg.blocks);
    if (cfg.block_size > 0) p.add("block_size", std::to_string(cfg.block_size));
  }
  return p;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += fields[i];
  }
  return out + "\n";
}

struct Inputs {
  MomentSet m;
  SiteInfo sites;
  std::optional<ObservationPanel> panel;
  std::optional<TruthSeries> truth;
};

void require_panel(const RunConfig& cfg) {
  if (!cfg.panel_path || !cfg.truth_path) {
    fail(Errc::parse_error, sub_name(cfg.subcommand) + " needs --panel and --truth");
  }
}

Inputs load_inputs(const RunConfig& cfg, bool need_panel) {
  Inputs in;
  if (!need_panel && cfg.moments_path && !cfg.panel_path) {
    StoredMoments stored = read_moments(*cfg.moments_path);
    in.m = std::move(stored.moments);
    in.sites = std::move(stored.sites);
    return in;
  }
  require_panel(cfg);
  in.panel = io::read_panel_csv(*cfg.panel_path);
  in.truth = io::read_truth_csv(*cfg.truth_path);
  in.sites = in.panel->sites();
  const double alpha = cfg.alphas.empty() ? 1.0 : cfg.alphas.front();
  in.m = estimate_moments(*in.panel, *in.truth, NoiseModel(cfg.sigma_eps), AvailabilityModel(alpha));
  return in;
}

struct Chosen {
  WeightVector beta;
  std::optional<QpSolution> qp;
};

Chosen choose_weights(const RunConfig& cfg, const MomentSet& m,
                      const std::optional<WeightVector>& from_file, const AvailabilityModel& av) {
  switch (cfg.scheme) {
    case Scheme::uniform:
      return {WeightVector::uniform(m.size()), std::nullopt};
    case Scheme::file:
      return {*from_file, std::nullopt};
    case Scheme::bias: {
      QpSolution s = minimize_bias(m);
      return {s.beta, std::move(s)};
    }
    case Scheme::variance: {
      QpSolution s = minimize_variance(m, av);
      return {s.beta, std::move(s)};
    }
    case Scheme::mse: {
      QpSolution s = minimize_mse(m, av).qp;
      return {s.beta, std::move(s)};
    }
  }
  return {WeightVector::uniform(m.size()), std::nullopt};
}

std::optional<WeightVector> file_weights(const RunConfig& cfg, const SiteInfo& sites) {
  if (cfg.scheme != Scheme::file) return std::nullopt;
  if (!cfg.weights_path) fail(Errc::parse_error, "--scheme file needs --weights");
  return io::read_weights_csv(*cfg.weights_path, sites);
}

void warn_validity(std::ostream& err, double alpha, double ratio) {
  if (std::isfinite(ratio) && ratio > kValidityThreshold) {
    err << "warning: alpha=" << format_double(alpha) << ": validity ratio "
        << format_double(ratio) << " exceeds " << format_double(kValidityThreshold)
        << "; delta estimates may be inaccurate\n";
  }
}

using Outputs = std::vector<std::pair<fs::path, std::string>>;

Outputs run_synth(const RunConfig& cfg) {
  const SyntheticData data = generate_synthetic(cfg.synth);
  const std::string header = provenance(cfg).line();
  std::ostringstream panel;
  panel << header;
  io::write_panel_csv(panel, data.panel);
  std::ostringstream truth;
  truth << header;
  io::write_truth_csv(truth, data.truth, data.panel.time_ids());
  return {{"panel.csv", panel.str()}, {"truth.csv", truth.str()}};
}

Outputs run_moments(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg, true);
  std::ostringstream out;
  out << provenance(cfg).line();
  write_moments(out, in.m, in.sites);
  return {{"moments.txt", out.str()}};
}

std::vector<std::string> report_fields(const StatReport& r) {
  return {format_double(r.bias_sq),        format_double(r.variance),
          format_double(r.mse),            format_double(r.se),
          format_double(r.validity_ratio), format_double(r.bias_term_sampling),
          format_double(r.bias_term_missing)};
}

Outputs run_estimate(const RunConfig& cfg, std::ostream& err) {
  const Inputs in = load_inputs(cfg, false);
  const auto from_file = file_weights(cfg, in.sites);
  std::string out = provenance(cfg).line();
  out += "alpha,scheme,bias_sq,variance,mse,se,validity_ratio,term_sampling,term_missing\n";
  for (double alpha : cfg.alphas) {
    const AvailabilityModel av(alpha);
    const Chosen w = choose_weights(cfg, in.m, from_file, av);
    const StatReport r = evaluate_report(in.m, w.beta, av);
    warn_validity(err, alpha, r.validity_ratio);
    std::vector<std::string> row = {format_double(alpha), name_of(kSchemes, cfg.scheme)};
    for (auto& f : report_fields(r)) row.push_back(std::move(f));
    out += join(row);
  }
  return {{"estimate.csv", out}};
}

Outputs run_simulate(const RunConfig& cfg, std::ostream& err) {
  const Inputs in = load_inputs(cfg, true);
  const auto from_file = file_weights(cfg, in.sites);
  SimConfig sim;
  sim.n_realizations = cfg.realizations;
  sim.seed = cfg.seed;
  sim.alpha_grid = cfg.alphas;
  sim.empty_pattern_policy = cfg.empty_policy;
  sim.threads = cfg.threads;
  sim.record_trace = cfg.trace;
  validate(sim);

  const std::string header = provenance(cfg).line();
  std::string out = header;
  out +=
      "alpha,scheme,bias_sq,variance,mse,se,validity_ratio,term_sampling,term_missing,"
      "mc_stderr_bias,mc_stderr_var,delta_bias_sq,delta_variance,resampled_steps\n";
  std::string trace = header + "alpha,realization,t,value\n";
  for (double alpha : cfg.alphas) {
    const AvailabilityModel av(alpha);
    const Chosen w = choose_weights(cfg, in.m, from_file, av);
    const StatReport delta = evaluate_report(in.m, w.beta, av);
    warn_validity(err, alpha, delta.validity_ratio);
    const SimResult s = simulate(*in.panel, *in.truth, w.beta, av, sim);
    StatReport r = delta;
    r.bias_sq = s.sim_bias_sq;
    r.variance = s.sim_variance;
    r.mse = s.sim_bias_sq + s.sim_variance;
    std::vector<std::string> row = {format_double(alpha), name_of(kSchemes, cfg.scheme)};
    for (auto& f : report_fields(r)) row.push_back(std::move(f));
    row.push_back(format_double(s.mc_stderr_bias));
    row.push_back(format_double(s.mc_stderr_var));
    row.push_back(format_double(delta.bias_sq));
    row.push_back(format_double(delta.variance));
    row.push_back(std::to_string(s.resampled_steps));
    out += join(row);
    if (cfg.trace) {
      const auto& ids = in.panel->time_ids();
      for (Eigen::Index k = 0; k < s.trace.rows(); ++k) {
        for (Eigen::Index t = 0; t < s.trace.cols(); ++t) {
          trace += join({format_double(alpha), std::to_string(k + 1),
                         ids[static_cast<std::size_t>(t)], format_double(s.trace(k, t))});
        }
      }
    }
  }
  Outputs files = {{"simulate.csv", out}};
  if (cfg.trace) files.emplace_back("trace.csv", trace);
  return files;
}

Outputs run_optimize(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg, false);
  const std::string objective = name_of(kObjectives, cfg.objective);
  const std::string header = provenance(cfg).line();
  Outputs files;
  std::string summary = header;
  summary +=
      "alpha,objective,objective_value,kkt_residual,iterations,ridge,support,bias_sq,variance,"
      "mse,se,validity_ratio\n";
  for (double alpha : cfg.alphas) {
    const AvailabilityModel av(alpha);
    QpSolution s;
    switch (cfg.objective) {
      case Objective::bias:
        s = minimize_bias(in.m);
        break;
      case Objective::variance:
        s = minimize_variance(in.m, av);
        break;
      case Objective::mse:
        s = minimize_mse(in.m, av).qp;
        break;
    }
    const StatReport r = evaluate_report(in.m, s.beta, av);

    std::string w = header;
    w += "# objective_value=" + format_double(s.objective) + "\n";
    w += "# kkt_residual=" + format_double(s.kkt_residual) + "\n";
    w += "# iterations=" + std::to_string(s.iterations) + "\n";
    w += "# ridge=" + format_double(s.ridge) + "\n";
    w += "location_id,lat,lon,beta,rho,active,kkt_residual\n";
    std::vector<bool> active(static_cast<std::size_t>(s.beta.size()), false);
    for (Eigen::Index i : s.active_set) active[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < s.beta.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      std::string lat;
      std::string lon;
      if (in.sites.coords) {
        lat = format_double((*in.sites.coords)[k].lat);
        lon = format_double((*in.sites.coords)[k].lon);
      }
      w += join({in.sites.ids[k], lat, lon, format_double(s.beta[i]), format_double(s.rho[i]),
                 active[k] ? "1" : "0", format_double(s.stationarity[i])});
    }
    files.emplace_back("weights_" + objective + "_alpha" + format_double(alpha) + ".csv", w);

    summary += join({format_double(alpha), objective, format_double(s.objective),
                     format_double(s.kkt_residual), std::to_string(s.iterations),
                     format_double(s.ridge), std::to_string(s.beta.support(1e-6)),
                     format_double(r.bias_sq), format_double(r.variance), format_double(r.mse),
                     format_double(r.se), format_double(r.validity_ratio)});
  }
  files.emplace_back("optimize_summary.csv", summary);
  return files;
}

// One-based inclusive ranges, converted to [first, first + count).
std::vector<std::pair<Eigen::Index, Eigen::Index>> parse_blocks(const RunConfig& cfg,
                                                                 Eigen::Index steps) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  if (!cfg.blocks.empty()) {
    for (const std::string& item : io::split_csv_line(cfg.blocks)) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) fail(Errc::parse_error, "block '" + item + "' is not first-last");
      const double first = io::parse_double(item.substr(0, dash));
      const double last = io::parse_double(item.substr(dash + 1));
      if (first != std::floor(first) || last != std::floor(last) || first < 1 || last > static_cast<double>(steps) || last < first + 1) {
        fail(Errc::invalid_parameter, "block '" + item + "' must be a range of at least two steps within 1-" + std::to_string(steps));
      }
      out.emplace_back(static_cast<Eigen::Index>(first) - 1,
                       static_cast<Eigen::Index>(last - first) + 1);
    }
    return out;
  }
  const Eigen::Index size = cfg.block_size > 0 ? cfg.block_size : steps;
  if (size < 2) fail(Errc::invalid_parameter, "--block-size must be at least 2");
  for (Eigen::Index first = 0; first < steps; first += size) {
    const Eigen::Index count = std::min(size, steps - first);
    if (count < 2) {
      out.back().second += count;
    } else {
      out.emplace_back(first, count);
    }
  }
  return out;
}

Outputs run_se_report(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg, true);
  const auto from_file = file_weights(cfg, in.sites);
  const AvailabilityModel av(cfg.alphas.empty() ? 1.0 : cfg.alphas.front());
  std::string out = provenance(cfg).line();
  out += "block,start,end,n_steps,se,mean,stdev,se_over_mean,support\n";
  int block_no = 0;
  for (const auto& [first, count] : parse_blocks(cfg, in.panel->n_steps())) {
    const ObservationPanel panel = in.panel->slice_steps(first, count);
    const TruthSeries truth = in.truth->slice(first, count);
    const MomentSet m = estimate_moments(panel, truth, NoiseModel(cfg.sigma_eps), av);
    const Chosen w = choose_weights(cfg, m, from_file, av);
    const StatReport r = mse_and_se(0.0, 0.0, m, w.beta);
    const Eigen::VectorXd series = panel.values().transpose() * w.beta.values();
    const double mean = series.mean();
    const double stdev = std::sqrt((series.array() - mean).square().mean());
    out += join({std::to_string(++block_no), std::to_string(first + 1),
                 std::to_string(first + count), std::to_string(count), format_double(r.se),
                 format_double(mean), format_double(stdev), format_double(r.se / mean),
                 std::to_string(w.beta.support())});
  }
  return {{"se_report.csv", out}};
}

void validate_config(const RunConfig& cfg) {
  if (cfg.alphas.empty() && cfg.subcommand != Subcommand::synth) {
    fail(Errc::parse_error, "empty alpha grid");
  }
  if (!std::isfinite(cfg.sigma_eps) || cfg.sigma_eps < 0.0) {
    fail(Errc::invalid_parameter, "--sigma-eps must be finite and >= 0");
  }
}

}  // namespace

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error:
      return 2;
    case Errc::io_error:
      return 3;
    default:
      return 10 + static_cast<int>(code) - static_cast<int>(Errc::dimension_mismatch);
  }
}

std::vector<double> parse_alpha_grid(const std::string& spec) {
  auto round12 = [](double v) { return std::round(v * 1e12) / 1e12; };
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto a = spec.find(':');
    const auto b = spec.find(':', a + 1);
    if (b == std::string::npos || spec.find(':', b + 1) != std::string::npos) {
      fail(Errc::parse_error, "alpha grid '" + spec + "' is not start:stop:step");
    }
    const double start = io::parse_double(spec.substr(0, a));
    const double stop = io::parse_double(spec.substr(a + 1, b - a - 1));
    const double step = io::parse_double(spec.substr(b + 1));
    if (!(step > 0.0) || stop < start) {
      fail(Errc::parse_error, "alpha grid '" + spec + "' needs step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(round12(start + static_cast<double>(k) * step));
  } else {
    for (const std::string& item : io::split_csv_line(spec)) {
      out.push_back(io::parse_double(item));
    }
  }
  for (double v : out) (void)AvailabilityModel{v};
  return out;
}

int run(const RunConfig& cfg, std::ostream& err) {
  try {
    validate_config(cfg);
    Outputs files;
    switch (cfg.subcommand) {
      case Subcommand::synth:
        files = run_synth(cfg);
        break;
      case Subcommand::moments:
        files = run_moments(cfg);
        break;
      case Subcommand::estimate:
        files = run_estimate(cfg, err);
        break;
      case Subcommand::simulate:
        files = run_simulate(cfg, err);
        break;
      case Subcommand::optimize:
        files = run_optimize(cfg);
        break;
      case Subcommand::se_report:
        files = run_se_report(cfg);
        break;
    }
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) fail(Errc::io_error, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
    for (const auto& [name, contents] : files) io::write_file_atomic(cfg.output_dir / name, contents);
    return 0;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

namespace {

std::string exit_code_table() {
  std::string out = "Exit codes:\n  0  success\n  1  internal error\n";
  for (int c = 0; c <= static_cast<int>(Errc::index_out_of_range); ++c) {
    const auto code = static_cast<Errc>(c);
    std::string num = std::to_string(exit_code(code));
    out += "  " + num + std::string(3 - num.size(), ' ') + std::string(to_string(code)) + "\n";
  }
  out += "Errors print one line: error: <category>: <message>\n";
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial averaging of station data with missing observations"};
  app.footer(exit_code_table());
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Flat key=value file mirroring the long flags; flags win");

  RunConfig cfg;
  std::string command;
  std::string objective = "mse";
  std::string scheme;
  std::string policy = "resample";
  std::string layout = "grid";
  std::string panel, truth, moments, weights;

  app.add_option("command", command, "Subcommand")
      ->required()
      ->check(CLI::IsMember(keys_of(kSubcommands)));
  app.add_option("--panel", panel, "Panel CSV: location_id,lat,lon,<one column per step>");
  app.add_option("--truth", truth, "Truth CSV: t,value");
  app.add_option("--moments", moments, "Moments file written by the moments subcommand");
  app.add_option("--weights", weights, "Weights CSV with location_id and beta columns");
  app.add_option("--alpha", cfg.alpha_spec,
                 "Availability: value, comma list or start:stop:step "
                 "(default 0.1:1.0:0.1 for estimate and simulate, else 1.0)");
  app.add_option("--sigma-eps", cfg.sigma_eps, "Measurement noise standard deviation");
  app.add_option("--objective", objective, "optimize objective")
      ->check(CLI::IsMember(keys_of(kObjectives)));
  app.add_option("--scheme", scheme, "Weights to evaluate (default uniform, file with --weights)")
      ->check(CLI::IsMember(keys_of(kSchemes)));
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--realizations", cfg.realizations, "Monte Carlo ensemble size")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", cfg.threads, "Simulation threads, 0 for all cores; never changes results");
  app.add_flag("--trace", cfg.trace, "Also write every simulated series to trace.csv");
  app.add_option("--empty-policy", policy, "All-missing draws: resample or error")
      ->check(CLI::IsMember(keys_of(kPolicies)));
  app.add_option("--blocks", cfg.blocks, "se-report blocks, e.g. 1-30,31-61 (one-based, inclusive)");
  app.add_option("--block-size", cfg.block_size, "se-report contiguous block length");
  app.add_option("--n", cfg.synth.n_sites, "synth: number of sites");
  app.add_option("--steps", cfg.synth.n_steps, "synth: number of time steps");
  app.add_option("--corr-length", cfg.synth.corr_length, "synth: exponential correlation length");
  app.add_option("--mean-contrast", cfg.synth.mean_contrast,
                 "synth: relative amplitude of the climatological mean pattern");
  app.add_option("--cv", cfg.synth.coeff_variation, "synth: point stdev over local mean");
  app.add_option("--layout", layout, "synth: line or grid")->check(CLI::IsMember(keys_of(kLayouts)));
  app.add_option("--out", cfg.output_dir, "Output directory");

  std::vector<std::string> argv_store = {"spatavg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);
    }
    const bool io = dynamic_cast<const CLI::FileError*>(&e) != nullptr;
    const Errc code = io ? Errc::io_error : Errc::parse_error;
    err << "error: " << to_string(code) << ": " << e.what() << "\n";
    return exit_code(code);
  }

  try {
    cfg.subcommand = kSubcommands.at(command);
    cfg.objective = kObjectives.at(objective);
    cfg.empty_policy = kPolicies.at(policy);
    cfg.synth.layout = kLayouts.at(layout);
    cfg.synth.sigma_eps = cfg.sigma_eps;
    if (app.count("--seed") > 0) cfg.synth.seed = cfg.seed;
    if (!panel.empty()) cfg.panel_path = panel;
    if (!truth.empty()) cfg.truth_path = truth;
    if (!moments.empty()) cfg.moments_path = moments;
    if (!weights.empty()) cfg.weights_path = weights;
    if (scheme.empty()) scheme = weights.empty() ? "uniform" : "file";
    cfg.scheme = kSchemes.at(scheme);
    if (cfg.alpha_spec.empty()) {
      const bool sweep =
          cfg.subcommand == Subcommand::estimate || cfg.subcommand == Subcommand::simulate;
      cfg.alpha_spec = sweep ? "0.1:1.0:0.1" : "1.0";
    }
    cfg.alphas = parse_alpha_grid(cfg.alpha_spec);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  }
  return run(cfg, err);
}

}  // namespace spatavg::cli
