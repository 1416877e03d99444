#include "swapschur/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "swapschur/markov.hpp"
#include "swapschur/purify.hpp"
#include "swapschur/rep.hpp"
#include "swapschur/report.hpp"
#include "swapschur/rng.hpp"
#include "swapschur/verify.hpp"

namespace swapschur::cli {

namespace {

using report::Cell;
using report::Envelope;
using report::format_double;

constexpr const char* kOutputDirEnv = "SWAPSCHUR_OUTPUT_DIR";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 0;
  std::optional<int> two_j;
  std::optional<double> p;
  double eps = 0.01;
  std::optional<std::int64_t> tmax;
  std::optional<std::int64_t> trials;
  bool mc = false;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string out;
  bool tamper = false;
};

std::int64_t default_tmax(int n) {
  return n < 2 ? 0 : static_cast<std::int64_t>(std::ceil(3.0 * n * std::log(static_cast<double>(n))));
}

void require_n(const RunConfig& cfg, int lowest) {
  if (cfg.n < lowest) {
    throw ConfigError("--n must be at least " + std::to_string(lowest) + " for " + cfg.command +
                      " (got " + std::to_string(cfg.n) + ")");
  }
}

std::int64_t resolve_tmax(const RunConfig& cfg, std::int64_t fallback) {
  const auto t = cfg.tmax.value_or(fallback);
  if (t < 0) throw ConfigError("--tmax must be non-negative");
  return t;
}

std::int64_t resolve_trials(const RunConfig& cfg, std::int64_t fallback) {
  const auto t = cfg.trials.value_or(fallback);
  if (t < 1) throw ConfigError("--trials must be at least 1");
  return t;
}

double resolve_p(const RunConfig& cfg) {
  const double p = cfg.p.value_or(0.5);
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("--p must lie in [0, 1]");
  return p;
}

HalfSpin resolve_j(const RunConfig& cfg) {
  const int two_j = cfg.two_j.value_or(cfg.n % 2);
  if (two_j < 0 || !valid_for(cfg.n, HalfSpin::from_twice(two_j))) {
    throw ConfigError("--two-j " + std::to_string(two_j) + " is not a sector of " +
                      std::to_string(cfg.n) + " qubits");
  }
  return HalfSpin::from_twice(two_j);
}

std::uint64_t draw_seed(RunConfig& cfg) {
  if (!cfg.seed) cfg.seed = entropy_seed();
  return *cfg.seed;
}

Envelope make_envelope(const RunConfig& cfg) {
  Envelope env;
  env.command = cfg.command;
  env.config.emplace_back("format", cfg.format);
  return env;
}

// ---------------------------------------------------------------------------

Envelope cmd_sectors(RunConfig& cfg) {
  require_n(cfg, 1);
  auto env = make_envelope(cfg);
  env.config.emplace_back("n", std::to_string(cfg.n));
  env.table.columns = {"two_j", "dim", "multiplicity", "log_multiplicity", "provenance"};
  for (const auto& row : sectors(cfg.n).rows) {
    env.table.add_row({std::int64_t{row.j.twice()}, std::int64_t{row.irrep_dim},
                       row.multiplicity.str(), log_multiplicity(cfg.n, row.j),
                       std::string("exact")});
  }
  return env;
}

Envelope cmd_error_curve(RunConfig& cfg) {
  require_n(cfg, 2);
  const auto j = resolve_j(cfg);
  const auto tmax = resolve_tmax(cfg, default_tmax(cfg.n));
  auto env = make_envelope(cfg);
  env.config.emplace_back("n", std::to_string(cfg.n));
  env.config.emplace_back("two_j", std::to_string(j.twice()));
  env.config.emplace_back("tmax", std::to_string(tmax));
  const markov::ChainSpec spec{cfg.n, j};
  const bool transient = j.twice() < cfg.n;
  const auto ts = markov::t_star(spec);
  env.meta.emplace_back("T_star", format_double(ts.value));

  std::vector<std::int64_t> times;
  std::int64_t trials = 0;
  if (cfg.mc) {
    trials = resolve_trials(cfg, 10000);
    env.config.emplace_back("mc", "true");
    env.config.emplace_back("trials", std::to_string(trials));
    Rng rng(draw_seed(cfg));
    env.seed = cfg.seed;
    times = markov::sample_absorption_times(spec, trials, rng);
    std::sort(times.begin(), times.end());
  }

  env.table.columns = {"T", "prob_error", "chernoff_bound", "chernoff_in_regime", "final_bound",
                       "final_in_regime"};
  if (cfg.mc) {
    env.table.columns.push_back("mc_prob_error");
    env.table.columns.push_back("mc_stderr");
  }
  env.table.columns.push_back("provenance");

  markov::ChainEvolver ev(spec);
  for (std::int64_t t = 0; t <= tmax; ++t) {
    if (t > 0) ev.step();
    std::vector<Cell> row{t, ev.error()};
    if (transient) {
      const auto c = markov::chernoff_tail(spec, t);
      row.push_back(c.in_regime ? Cell(c.value) : Cell());
      row.push_back(c.in_regime);
    } else {
      row.push_back(Cell());
      row.push_back(false);
    }
    const auto f = markov::final_bound(cfg.n, static_cast<double>(t));
    row.push_back(f.in_regime ? Cell(f.value) : Cell());
    row.push_back(f.in_regime);
    if (cfg.mc) {
      const auto above = times.end() - std::upper_bound(times.begin(), times.end(), t);
      const double frac = static_cast<double>(above) / static_cast<double>(trials);
      row.push_back(frac);
      row.push_back(std::sqrt(frac * (1.0 - frac) / static_cast<double>(trials)));
    }
    row.push_back(std::string("dp"));
    env.table.add_row(std::move(row));
  }
  return env;
}

Envelope cmd_tstar(RunConfig& cfg) {
  require_n(cfg, 2);
  auto env = make_envelope(cfg);
  env.config.emplace_back("n", std::to_string(cfg.n));
  const std::optional<double> max_bound =
      cfg.n >= 8 ? std::optional<double>(markov::max_t_star_bound(cfg.n)) : std::nullopt;
  const auto [arg, peak] = markov::max_t_star(cfg.n);
  env.meta.emplace_back("max_T_star", format_double(peak));
  env.meta.emplace_back("argmax_two_j", std::to_string(arg.twice()));
  if (max_bound) env.meta.emplace_back("max_T_star_bound", format_double(*max_bound));
  env.table.columns = {"two_j", "T_star", "upper", "lower", "gap", "p_star", "p_star_exact",
                       "max_bound", "provenance"};
  for (const auto j : spins_for(cfg.n)) {
    const auto ts = markov::t_star({cfg.n, j});
    std::vector<Cell> row{std::int64_t{j.twice()}, ts.value};
    if (j.twice() < cfg.n) {
      const auto ps = markov::p_star(cfg.n, j);
      row.insert(row.end(), {ts.upper, ts.lower, ts.gap(), ps.convert_to<double>(), ps.str()});
    } else {
      row.insert(row.end(), {Cell(), Cell(), Cell(), Cell(), Cell()});
    }
    row.push_back(max_bound ? Cell(*max_bound) : Cell());
    row.push_back(std::string("exact"));
    env.table.add_row(std::move(row));
  }
  return env;
}

Envelope cmd_purify(RunConfig& cfg) {
  require_n(cfg, 1);
  const double p = resolve_p(cfg);
  const auto tmax = resolve_tmax(cfg, default_tmax(cfg.n));
  const purify::NoiseModel noise(p);
  auto env = make_envelope(cfg);
  env.config.emplace_back("n", std::to_string(cfg.n));
  env.config.emplace_back("p", format_double(p));
  env.config.emplace_back("tmax", std::to_string(tmax));
  const auto curve = purify::fidelity_curve(cfg.n, noise, tmax);
  env.meta.emplace_back("marker_T", format_double(curve.marker));
  env.meta.emplace_back("f_opt", format_double(curve.f_opt));
  env.meta.emplace_back("f_opt_asymptotic", format_double(purify::f_opt_asymptotic(cfg.n, noise)));

  std::int64_t trials = 0;
  std::optional<Rng> root;
  if (cfg.mc) {
    if (cfg.n > 8) throw ConfigError("--mc for purify needs n <= 8 (dense trajectories)");
    trials = resolve_trials(cfg, 10000);
    env.config.emplace_back("mc", "true");
    env.config.emplace_back("trials", std::to_string(trials));
    root.emplace(draw_seed(cfg));
    env.seed = cfg.seed;
  }
  env.table.columns = {"T", "f", "f_opt", "exp_gap_bound", "eps_gap_bound", "eps"};
  if (cfg.mc) {
    env.table.columns.push_back("mc_f");
    env.table.columns.push_back("mc_stderr");
  }
  env.table.columns.push_back("provenance");
  for (const auto& r : curve.rows) {
    std::vector<Cell> row{r.steps, r.fidelity, curve.f_opt,
                          r.exp_gap.in_regime ? Cell(r.exp_gap.value) : Cell(), r.eps_gap, r.eps};
    if (cfg.mc) {
      Rng rng = root->fork(static_cast<std::uint64_t>(r.steps));
      const auto est = purify::mc_fidelity(cfg.n, noise, r.steps, trials, rng);
      row.push_back(est.mean);
      row.push_back(est.std_error);
    }
    row.push_back(std::string("dp"));
    env.table.add_row(std::move(row));
  }
  return env;
}

Envelope cmd_verify(RunConfig& cfg, bool& all_passed) {
  require_n(cfg, 2);
  verify::VerifyConfig vc;
  vc.n = cfg.n;
  vc.tmax = static_cast<int>(resolve_tmax(cfg, 20));
  vc.trajectories = static_cast<int>(resolve_trials(cfg, 100));
  vc.seed = draw_seed(cfg);
  vc.tamper = cfg.tamper;
  auto env = make_envelope(cfg);
  env.seed = cfg.seed;
  env.config.emplace_back("n", std::to_string(vc.n));
  env.config.emplace_back("tmax", std::to_string(vc.tmax));
  env.config.emplace_back("trials", std::to_string(vc.trajectories));
  if (vc.tamper) env.config.emplace_back("tamper", "true");
  const auto checks = verify::run_verification(vc);
  all_passed = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  env.meta.emplace_back("all_passed", all_passed ? "true" : "false");
  env.table = report::checks_table(checks);
  return env;
}

Envelope cmd_compare_childs(RunConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ConfigError("--eps must lie in (0, 1)");
  std::vector<double> grid = purify::default_childs_grid();
  if (cfg.p) {
    if (!(*cfg.p > 0.0 && *cfg.p < 1.0)) throw ConfigError("--p must lie in (0, 1) for compare-childs");
    grid = {*cfg.p};
  }
  auto env = make_envelope(cfg);
  env.config.emplace_back("eps", format_double(cfg.eps));
  std::string grid_text;
  for (const double p : grid) grid_text += (grid_text.empty() ? "" : ";") + format_double(p);
  env.config.emplace_back("p_grid", grid_text);
  std::vector<purify::ChildsRow> rows;
  for (const double p : grid) rows.push_back(purify::childs_comparison(purify::NoiseModel(p), cfg.eps));
  std::optional<purify::SlopeFit> fit;
  if (rows.size() >= 2) {
    fit = purify::fit_childs_slopes(rows);
    env.meta.emplace_back("slope_ours", format_double(fit->ours));
    env.meta.emplace_back("slope_baseline", format_double(fit->baseline));
    env.meta.emplace_back("slope_baseline_exponent", format_double(-8.0 * std::log(2.0)));
  }
  env.table.columns = {"p", "eps", "n_ours", "swap_tests_ours", "n_baseline_bound", "slope_ours",
                       "slope_baseline", "provenance"};
  for (const auto& r : rows) {
    env.table.add_row({r.p, r.eps, r.n_ours, r.swap_tests, r.n_baseline,
                       fit ? Cell(fit->ours) : Cell(), fit ? Cell(fit->baseline) : Cell(),
                       std::string("exact")});
  }
  return env;
}

std::optional<std::filesystem::path> output_path(const RunConfig& cfg) {
  const char* dir = std::getenv(kOutputDirEnv);
  const bool has_dir = dir != nullptr && *dir != '\0';
  if (!cfg.out.empty()) {
    std::filesystem::path p(cfg.out);
    if (p.is_relative() && has_dir) p = std::filesystem::path(dir) / p;
    return p;
  }
  if (has_dir) return std::filesystem::path(dir) / (cfg.command + "." + cfg.format);
  return std::nullopt;
}

void emit(const Envelope& env, const RunConfig& cfg, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (cfg.format == "json") {
      report::write_json(env, os);
    } else {
      report::write_csv(env, os);
    }
  };
  const auto path = output_path(cfg);
  if (!path) {
    write(out);
    return;
  }
  if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file " + path->string());
  write(file);
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out, "Output file (relative paths resolve under $" +
                                        std::string(kOutputDirEnv) + " when set)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  // Options are bound to plain locals; optionals are filled after parsing.
  int two_j = 0;
  double p = 0.5;
  std::int64_t tmax = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  CLI::App app{"Random SWAP-test Schur sampling: simulation, bounds and purification data", "swapschur"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SWAPSCHUR_VERSION);

  auto* sectors_cmd = app.add_subcommand("sectors", "Sector table j, 2j+1, m(n,j)");
  auto* error_cmd = app.add_subcommand("error-curve", "Pr(j' != j; T) with bound columns");
  auto* tstar_cmd = app.add_subcommand("tstar", "Expected detection time T*(j) for every j");
  auto* purify_cmd = app.add_subcommand("purify", "Purification fidelity f(n,T)");
  auto* verify_cmd = app.add_subcommand("verify", "Cross-module consistency checks");
  auto* childs_cmd = app.add_subcommand("compare-childs", "Sample complexity vs the baseline bound");

  std::vector<CLI::Option*> two_j_opts, p_opts, tmax_opts, trials_opts, seed_opts;
  for (auto* sub : {sectors_cmd, error_cmd, tstar_cmd, purify_cmd, verify_cmd}) {
    sub->add_option("--n", cfg.n, "Number of qubits")->required();
  }
  two_j_opts.push_back(error_cmd->add_option("--two-j", two_j, "Sector 2j (default: smallest)"));
  for (auto* sub : {purify_cmd, childs_cmd}) {
    p_opts.push_back(sub->add_option("--p", p, "Depolarizing weight p"));
  }
  childs_cmd->add_option("--eps", cfg.eps, "Target error eps");
  for (auto* sub : {error_cmd, purify_cmd, verify_cmd}) {
    tmax_opts.push_back(sub->add_option("--tmax", tmax, "Largest T"));
    trials_opts.push_back(sub->add_option("--trials", trials, "Monte-Carlo trials"));
    seed_opts.push_back(sub->add_option("--seed", seed, "RNG seed (default: OS entropy)"));
  }
  for (auto* sub : {error_cmd, purify_cmd}) sub->add_flag("--mc", cfg.mc, "Add Monte-Carlo columns");
  verify_cmd->add_flag("--tamper", cfg.tamper, "Test hook: make every check fail")
      ->group("");  // hidden
  for (auto* sub : {sectors_cmd, error_cmd, tstar_cmd, purify_cmd, verify_cmd, childs_cmd}) {
    add_common(sub, cfg);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SWAPSCHUR_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  auto given = [](const std::vector<CLI::Option*>& opts) {
    return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
  };
  if (given(two_j_opts)) cfg.two_j = two_j;
  if (given(p_opts)) cfg.p = p;
  if (given(tmax_opts)) cfg.tmax = tmax;
  if (given(trials_opts)) cfg.trials = trials;
  if (given(seed_opts)) cfg.seed = seed;

  const auto* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  try {
    Envelope env;
    bool passed = true;
    if (chosen == sectors_cmd) {
      env = cmd_sectors(cfg);
    } else if (chosen == error_cmd) {
      env = cmd_error_curve(cfg);
    } else if (chosen == tstar_cmd) {
      env = cmd_tstar(cfg);
    } else if (chosen == purify_cmd) {
      env = cmd_purify(cfg);
    } else if (chosen == verify_cmd) {
      env = cmd_verify(cfg, passed);
    } else {
      env = cmd_compare_childs(cfg);
    }
    emit(env, cfg, out);
    if (!passed) {
      err << "verify: one or more checks failed\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace swapschur::cli
