#include "banditlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "banditlab/corral.hpp"
#include "banditlab/linucb_pp.hpp"
#include "banditlab/policies.hpp"

namespace banditlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string current;
  std::stringstream ss(s);
  while (std::getline(ss, current, ',')) {
    current = trim(current);
    if (!current.empty()) items.push_back(current);
  }
  return items;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long parsed = 0;
  try {
    parsed = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
  if (used != value.size()) {
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
  return parsed;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
  }
  if (used != value.size()) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
  }
  return parsed;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

std::string join_ints(const std::vector<int>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(items[i]);
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (T < 2) throw std::invalid_argument("config: T must be >= 2");
  if (K < 1) throw std::invalid_argument("config: K must be >= 1");
  if (d < 1) throw std::invalid_argument("config: d must be >= 1");
  if (d_star.empty()) throw std::invalid_argument("config: d_star must be nonempty");
  for (int ds : d_star) {
    if (ds < 1 || ds > d) throw std::invalid_argument("config: every d_star must lie in [1, d]");
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("config: noise_std must be >= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("config: lambda must be > 0");
  if (!(beta >= 0.5 && beta < 1.0)) throw std::invalid_argument("config: beta must lie in [1/2, 1)");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("config: algorithms must be nonempty");
  if (parallelism < 1) throw std::invalid_argument("config: parallelism must be >= 1");
  resolve_eta(*this);    // rejects malformed eta rules
  resolve_width(*this);  // rejects malformed width rules
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream out;
  out << "T=" << T << '\n'
      << "K=" << K << '\n'
      << "d=" << d << '\n'
      << "d_star=" << join_ints(d_star) << '\n'
      << "noise_std=" << format_double(noise_std) << '\n'
      << "lambda=" << format_double(lambda) << '\n'
      << "beta=" << format_double(beta) << '\n'
      << "eta=" << eta << '\n'
      << "width=" << width << '\n'
      << "trials=" << trials << '\n'
      << "seed=" << seed << '\n'
      << "algorithms=" << join(algorithms) << '\n'
      << "expressive=" << (expressive ? "true" : "false") << '\n';
  return out.str();
}

std::string ExperimentConfig::hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_text())));
  return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not of the form key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "T") {
      cfg.T = parse_int(key, value);
    } else if (key == "K") {
      cfg.K = static_cast<int>(parse_int(key, value));
    } else if (key == "d") {
      cfg.d = static_cast<int>(parse_int(key, value));
    } else if (key == "d_star") {
      cfg.d_star.clear();
      for (const auto& item : split_list(value)) {
        cfg.d_star.push_back(static_cast<int>(parse_int(key, item)));
      }
    } else if (key == "noise_std") {
      cfg.noise_std = parse_double(key, value);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(key, value);
    } else if (key == "beta") {
      cfg.beta = parse_double(key, value);
    } else if (key == "eta") {
      cfg.eta = value;
    } else if (key == "width") {
      cfg.width = value;
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "algorithms") {
      cfg.algorithms = split_list(value);
    } else if (key == "expressive") {
      cfg.expressive = parse_bool(key, value);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "parallelism") {
      cfg.parallelism = static_cast<int>(parse_int(key, value));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

ActionSet sample_sphere_arms(int d, int K, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_sphere_arms: d must be >= 1");
  if (K < 1) throw std::invalid_argument("sample_sphere_arms: K must be >= 1");
  Eigen::MatrixXd arms(K, d);
  for (int k = 0; k < K; ++k) {
    double norm = 0.0;
    do {
      for (int c = 0; c < d; ++c) arms(k, c) = rng.gauss();
      norm = arms.row(k).norm();
    } while (norm == 0.0);
    arms.row(k) /= norm;
  }
  return ActionSet(std::move(arms));
}

RewardModel make_paper_model(int d, int d_star, double noise_std) {
  if (d_star < 1 || d_star > d) {
    throw std::invalid_argument("make_paper_model: d_star must lie in [1, d]");
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  theta.head(d_star).setConstant(1.0 / std::sqrt(static_cast<double>(d_star)));
  return RewardModel(std::move(theta), d_star, noise_std);
}

Aggregate aggregate_trials(std::span<const RegretTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate_trials: no traces");
  const long long len = traces.front().size();
  for (const RegretTrace& trace : traces) {
    if (trace.size() != len) throw std::invalid_argument("aggregate_trials: mixed trace lengths");
  }
  const double n = static_cast<double>(traces.size());

  Aggregate agg;
  agg.mean.resize(static_cast<std::size_t>(len));
  agg.band.resize(static_cast<std::size_t>(len));
  for (long long t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const RegretTrace& trace : traces) sum += trace.cumulative()[static_cast<std::size_t>(t)];
    const double mean = sum / n;
    double sq = 0.0;
    for (const RegretTrace& trace : traces) {
      const double diff = trace.cumulative()[static_cast<std::size_t>(t)] - mean;
      sq += diff * diff;
    }
    const double var = traces.size() > 1 ? sq / (n - 1.0) : 0.0;
    agg.mean[static_cast<std::size_t>(t)] = mean;
    agg.band[static_cast<std::size_t>(t)] = 2.0 * std::sqrt(var);
  }
  return agg;
}

std::vector<int> smooth_corral_base_dims(int d) {
  std::vector<int> dims;
  for (long long v = 1; ; v *= 2) {
    const int dim = static_cast<int>(std::min<long long>(v, d));
    if (dims.empty() || dims.back() != dim) dims.push_back(dim);
    if (dim == d || v >= d) break;
  }
  return dims;
}

double resolve_eta(const ExperimentConfig& cfg) {
  if (cfg.eta == "sqrt-mt") {
    const double m = std::max(1.0, std::ceil(std::log2(static_cast<double>(cfg.d))));
    return 1.0 / std::sqrt(m * static_cast<double>(cfg.T));
  }
  if (cfg.eta == "t-beta") {
    return std::pow(static_cast<double>(cfg.T), -cfg.beta);
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cfg.eta, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cfg.eta.size() || !(value > 0.0)) {
    throw std::invalid_argument("config: eta must be 'sqrt-mt', 't-beta' or a positive number");
  }
  return value;
}

double resolve_width(const ExperimentConfig& cfg) {
  if (cfg.width == "auto") return -1.0;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cfg.width, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cfg.width.size() || !(value >= 0.0)) {
    throw std::invalid_argument("config: width must be 'auto' or a nonnegative number");
  }
  return value;
}

const AlgorithmRegistry& default_registry() {
  static const AlgorithmRegistry* registry = [] {
    auto* reg = new AlgorithmRegistry;
    (*reg)["linucb"] = [](const ActionSet& actions, const RewardModel& model,
                          const ExperimentConfig& cfg, std::uint64_t trial_seed) {
      LinUcbRunOptions opts;
      opts.lambda = cfg.lambda;
      opts.width = resolve_width(cfg);
      return run_linucb(actions, model, cfg.T, trial_seed, opts);
    };
    (*reg)["linucb-oracle"] = [](const ActionSet& actions, const RewardModel& model,
                                 const ExperimentConfig& cfg, std::uint64_t trial_seed) {
      LinUcbRunOptions opts;
      opts.lambda = cfg.lambda;
      opts.width = resolve_width(cfg);
      opts.working_dim = std::max(1, model.intrinsic_dim());
      return run_linucb(actions, model, cfg.T, trial_seed, opts);
    };
    (*reg)["ucb"] = [](const ActionSet& actions, const RewardModel& model,
                       const ExperimentConfig& cfg, std::uint64_t trial_seed) {
      return run_ucb(actions, model, cfg.T, trial_seed);
    };
    (*reg)["linucb++"] = [](const ActionSet& actions, const RewardModel& model,
                            const ExperimentConfig& cfg, std::uint64_t trial_seed) {
      LinUcbPlusPlusOptions opts;
      opts.lambda = cfg.lambda;
      opts.width = resolve_width(cfg);
      // An explicit width constant stands in for the whole bonus.
      if (opts.width >= 0.0) opts.norm_bonus = 0.0;
      return run_linucb_plus_plus(actions, model, cfg.T, cfg.beta, trial_seed, opts).trace;
    };
    (*reg)["smooth-corral"] = [](const ActionSet& actions, const RewardModel& model,
                                 const ExperimentConfig& cfg, std::uint64_t trial_seed) {
      const std::vector<int> dims = smooth_corral_base_dims(cfg.d);
      return run_smooth_corral(actions, model, cfg.T, resolve_eta(cfg), dims, trial_seed,
                               cfg.lambda, resolve_width(cfg))
          .trace;
    };
    (*reg)["corral-schedule"] = [](const ActionSet& actions, const RewardModel& model,
                                   const ExperimentConfig& cfg, std::uint64_t trial_seed) {
      return run_corral_within_schedule(actions, model, cfg.T, cfg.beta, trial_seed, cfg.lambda,
                                        resolve_width(cfg))
          .trace;
    };
    return reg;
  }();
  return *registry;
}

namespace {

struct TrialOutput {
  std::vector<RegretTrace> traces;  // one per (algorithm, d_star) pair, flattened
  bool done = false;
};

// Runs `fn(trial)` for every trial index on up to `parallelism` workers.
void for_each_trial(int trials, int parallelism, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(parallelism, trials));
  if (workers == 1) {
    for (int i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

const AlgorithmFn& lookup(const AlgorithmRegistry& registry, const std::string& name) {
  const auto it = registry.find(name);
  if (it == registry.end()) {
    throw std::invalid_argument("config: algorithm '" + name + "' is not registered");
  }
  return it->second;
}

ActionSet trial_actions(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  Rng arms_rng(mix_seed(trial_seed, kArmsStream));
  ActionSet arms = sample_sphere_arms(cfg.d, cfg.K, arms_rng);
  if (cfg.expressive) {
    const Schedule sched = build_schedule(cfg.T, cfg.beta, cfg.d);
    arms = expressive_closure(arms, sched.dims);
  }
  return arms;
}

// Shared driver for plain runs and sweeps: runs every (algorithm, d_star)
// pair on each trial's arms, persisting completed trials if one fails.
std::vector<std::vector<std::vector<RegretTrace>>> run_trials(
    const ExperimentConfig& cfg, const AlgorithmRegistry& registry,
    const std::vector<int>& d_star_values) {
  const int trials = cfg.trials;
  const std::size_t n_alg = cfg.algorithms.size();
  const std::size_t n_ds = d_star_values.size();

  // traces[alg][ds][trial]
  std::vector<std::vector<std::vector<RegretTrace>>> traces(
      n_alg, std::vector<std::vector<RegretTrace>>(n_ds, std::vector<RegretTrace>(
                                                             static_cast<std::size_t>(trials))));
  std::vector<char> trial_ok(static_cast<std::size_t>(trials), 0);
  std::vector<std::string> errors(static_cast<std::size_t>(trials));

  for_each_trial(trials, cfg.parallelism, [&](int trial) {
    const std::uint64_t trial_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    try {
      const ActionSet arms = trial_actions(cfg, trial_seed);
      for (std::size_t a = 0; a < n_alg; ++a) {
        const AlgorithmFn& fn = lookup(registry, cfg.algorithms[a]);
        for (std::size_t s = 0; s < n_ds; ++s) {
          const RewardModel model = make_paper_model(cfg.d, d_star_values[s], cfg.noise_std);
          try {
            traces[a][s][static_cast<std::size_t>(trial)] = fn(arms, model, cfg, trial_seed);
          } catch (const std::exception& e) {
            throw std::runtime_error("trial " + std::to_string(trial) + ", algorithm '" +
                                     cfg.algorithms[a] + "': " + e.what());
          }
        }
      }
      trial_ok[static_cast<std::size_t>(trial)] = 1;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(trial)] = e.what();
    }
  });

  for (int trial = 0; trial < trials; ++trial) {
    if (!errors[static_cast<std::size_t>(trial)].empty()) {
      // Persist whatever completed before reporting the failure.
      std::vector<std::vector<std::vector<RegretTrace>>> done(n_alg);
      for (std::size_t a = 0; a < n_alg; ++a) {
        done[a].resize(n_ds);
        for (std::size_t s = 0; s < n_ds; ++s) {
          for (int i = 0; i < trials; ++i) {
            if (trial_ok[static_cast<std::size_t>(i)]) {
              done[a][s].push_back(traces[a][s][static_cast<std::size_t>(i)]);
            }
          }
        }
      }
      if (!done.empty() && !done[0].empty() && !done[0][0].empty()) {
        AggregateResult partial;
        partial.algorithms = cfg.algorithms;
        partial.config_hash = cfg.hash();
        partial.seed = cfg.seed;
        partial.trials = static_cast<int>(done[0][0].size());
        for (std::size_t a = 0; a < n_alg; ++a) {
          const Aggregate agg = aggregate_trials(done[a][0]);
          partial.mean_regret.push_back(agg.mean);
          partial.band_halfwidth.push_back(agg.band);
        }
        try {
          export_results(partial, cfg.out + ".partial", ExportFormat::table, true);
        } catch (const std::exception&) {
          // The original failure is the one worth reporting.
        }
      }
      throw std::runtime_error(errors[static_cast<std::size_t>(trial)]);
    }
  }
  return traces;
}

}  // namespace

AggregateResult run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, default_registry());
}

AggregateResult run_experiment(const ExperimentConfig& cfg, const AlgorithmRegistry& registry) {
  cfg.validate();
  for (const auto& name : cfg.algorithms) lookup(registry, name);

  const std::vector<int> ds{cfg.d_star.front()};
  const auto traces = run_trials(cfg, registry, ds);

  AggregateResult result;
  result.algorithms = cfg.algorithms;
  result.config_hash = cfg.hash();
  result.seed = cfg.seed;
  result.trials = cfg.trials;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    const Aggregate agg = aggregate_trials(traces[a][0]);
    result.mean_regret.push_back(agg.mean);
    result.band_halfwidth.push_back(agg.band);
  }
  return result;
}

AggregateResult run_sweep(const ExperimentConfig& cfg) {
  return run_sweep(cfg, default_registry());
}

AggregateResult run_sweep(const ExperimentConfig& cfg, const AlgorithmRegistry& registry) {
  cfg.validate();
  for (const auto& name : cfg.algorithms) lookup(registry, name);

  const auto traces = run_trials(cfg, registry, cfg.d_star);

  AggregateResult result;
  result.algorithms = cfg.algorithms;
  result.config_hash = cfg.hash();
  result.seed = cfg.seed;
  result.trials = cfg.trials;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    for (std::size_t s = 0; s < cfg.d_star.size(); ++s) {
      std::vector<double> terminal;
      terminal.reserve(traces[a][s].size());
      for (const RegretTrace& trace : traces[a][s]) terminal.push_back(trace.total());
      const double n = static_cast<double>(terminal.size());
      double mean = 0.0;
      for (double v : terminal) mean += v;
      mean /= n;
      double sq = 0.0;
      for (double v : terminal) sq += (v - mean) * (v - mean);
      const double band = terminal.size() > 1 ? 2.0 * std::sqrt(sq / (n - 1.0)) : 0.0;
      result.sweep.push_back(SweepRow{cfg.algorithms[a], cfg.d_star[s],
                                      hardness_level(cfg.T, cfg.d_star[s]), mean, band});
    }
  }
  return result;
}

namespace {

void ensure_writable(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path)) {
    throw std::runtime_error("export_results: '" + path +
                             "' exists; pass force (--force) to overwrite");
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_results: cannot open '" + path + "'");
  out << content;
}

}  // namespace

std::string render_table(const AggregateResult& result) {
  const bool curves = !result.mean_regret.empty();
  std::ostringstream out;
  out << "# banditlab results\n";
  out << "# config_hash=" << result.config_hash << "\n";
  out << "# seed=" << result.seed << "\n";
  out << "# trials=" << result.trials << "\n";
  if (curves) {
    out << "algorithm,step,mean_regret,band_halfwidth\n";
    for (std::size_t a = 0; a < result.algorithms.size(); ++a) {
      const auto& mean = result.mean_regret[a];
      const auto& band = result.band_halfwidth[a];
      for (std::size_t t = 0; t < mean.size(); ++t) {
        out << result.algorithms[a] << ',' << (t + 1) << ',' << format_double(mean[t]) << ','
            << format_double(band[t]) << '\n';
      }
    }
  } else {
    out << "algorithm,d_star,alpha,mean_terminal_regret,band_halfwidth\n";
    for (const SweepRow& row : result.sweep) {
      out << row.algorithm << ',' << row.d_star << ',' << format_double(row.alpha) << ','
          << format_double(row.mean_terminal) << ',' << format_double(row.band_halfwidth) << '\n';
    }
  }
  return out.str();
}

std::string export_results(const AggregateResult& result, const std::string& path_base,
                           ExportFormat format, bool force) {
  const bool curves = !result.mean_regret.empty();
  std::string path;
  std::string content;

  if (format == ExportFormat::table) {
    path = path_base + (curves ? ".csv" : "_sweep.csv");
    content = render_table(result);
  } else {
    path = path_base + (curves ? ".svg" : "_sweep.svg");
    content = curves ? render_curves_svg(result) : render_sweep_svg(result);
  }

  ensure_writable(path, force);
  write_file(path, content);
  return path;
}

AggregateResult import_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("import_table: cannot open '" + path + "'");

  AggregateResult result;
  std::string line;
  bool header_seen = false;
  bool is_sweep = false;
  std::map<std::string, std::size_t> index;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        const std::string key = trim(line.substr(1, eq - 1));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "config_hash") result.config_hash = value;
        if (key == "seed") result.seed = static_cast<std::uint64_t>(std::stoull(value));
        if (key == "trials") result.trials = std::stoi(value);
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line == "algorithm,step,mean_regret,band_halfwidth") {
        is_sweep = false;
      } else if (line == "algorithm,d_star,alpha,mean_terminal_regret,band_halfwidth") {
        is_sweep = true;
      } else {
        throw std::invalid_argument("import_table: unrecognized header '" + line + "'");
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4 + (is_sweep ? 1u : 0u)) {
      throw std::invalid_argument("import_table: malformed row '" + line + "'");
    }
    if (is_sweep) {
      result.sweep.push_back(SweepRow{fields[0], std::stoi(fields[1]), std::stod(fields[2]),
                                      std::stod(fields[3]), std::stod(fields[4])});
      if (index.find(fields[0]) == index.end()) {
        index[fields[0]] = result.algorithms.size();
        result.algorithms.push_back(fields[0]);
      }
    } else {
      auto it = index.find(fields[0]);
      if (it == index.end()) {
        it = index.emplace(fields[0], result.algorithms.size()).first;
        result.algorithms.push_back(fields[0]);
        result.mean_regret.emplace_back();
        result.band_halfwidth.emplace_back();
      }
      result.mean_regret[it->second].push_back(std::stod(fields[2]));
      result.band_halfwidth[it->second].push_back(std::stod(fields[3]));
    }
  }
  if (!header_seen) throw std::invalid_argument("import_table: no header found");
  return result;
}

}  // namespace banditlab
