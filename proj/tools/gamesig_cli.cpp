// Command-line harness: game generation, decomposition, dynamics runs,
// zero-sum and mixture benchmarks, policy training and evaluation.
//
// Exit codes: 0 success, 1 usage/input error, 2 numerical failure.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "gamesig/analysis.hpp"
#include "gamesig/bench.hpp"
#include "gamesig/decomposition.hpp"
#include "gamesig/dynamics.hpp"
#include "gamesig/generators.hpp"
#include "gamesig/io.hpp"
#include "gamesig/policy.hpp"
#include "gamesig/rng.hpp"

using namespace gamesig;

namespace {

ExecMode mode_from_threads(int threads) {
  return threads == 1 ? ExecMode::Serial : ExecMode::OpenMP;
}

struct GenArgs {
  std::string type = "random";
  long n = 10, m = 10;
  std::uint64_t seed = 0;
  std::string name = "rps";
  std::string mixture;
  std::string out = "game.json";
};

int cmd_gen(const GenArgs& args) {
  nlohmann::json meta;
  meta["seed"] = args.seed;
  meta["rng"] = kRngName;
  std::optional<BimatrixGame> game;
  if (args.type == "random") {
    game = random_game(args.n, args.m, args.seed);
    meta["spec"] = {{"type", "random"}, {"n", args.n}, {"m", args.m}};
  } else if (args.type == "zero-sum") {
    game = random_zero_sum(args.n, args.m, args.seed);
    meta["spec"] = {{"type", "zero-sum"}, {"n", args.n}, {"m", args.m}};
  } else if (args.type == "named") {
    game = named_game(args.name);
    meta["spec"] = {{"type", "named"}, {"name", args.name}};
  } else if (args.type == "mixture") {
    // Mixture spec grammar: KIND:WEIGHT[,KIND:WEIGHT...], e.g. "ZACy:0.5,CSCy:0.5".
    MixtureSpec spec;
    spec.base_seed = args.seed;
    std::stringstream ss(args.mixture);
    std::string tok;
    nlohmann::json picks = nlohmann::json::array();
    while (std::getline(ss, tok, ',')) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument("mixture pick must be KIND:WEIGHT, got '" + tok + "'");
      }
      const ComponentKind8 kind = component8_from_name(tok.substr(0, colon));
      const double w = std::stod(tok.substr(colon + 1));
      spec.picks.emplace_back(kind, w);
      picks.push_back({{"kind", component8_name(kind)}, {"weight", w}});
    }
    game = mixture_game(spec, args.n);
    meta["spec"] = {{"type", "mixture"}, {"n", args.n}, {"picks", picks}};
  } else {
    throw std::invalid_argument("unknown --type '" + args.type + "'");
  }
  write_game(args.out, *game, meta);
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

int cmd_decompose(const std::string& game_path, const std::string& out_dir, bool four) {
  const BimatrixGame g = read_game(game_path);
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  if (four) {
    const auto parts = decompose4(g);
    for (int i = 0; i < kNumComponents4; ++i) {
      const std::string name = component4_name(static_cast<ComponentKind4>(i));
      write_game((dir / (name + ".json")).string(), parts[static_cast<std::size_t>(i)]);
    }
  } else {
    const auto parts = decompose8(g);
    for (int i = 0; i < kNumComponents8; ++i) {
      const std::string name = component8_name(static_cast<ComponentKind8>(i));
      write_game((dir / (name + ".json")).string(), parts[static_cast<std::size_t>(i)]);
    }
    write_signature((dir / "signature.json").string(), signature(g));
  }
  std::cout << "wrote components to " << out_dir << "\n";
  return 0;
}

struct RunArgs {
  std::string algo = "cmwu";
  std::string game_path;
  double h = 0.1;
  double eps = 0.0;
  long steps = 1000;
  std::uint64_t seed = 0;
  std::string out = "trajectory.csv";
};

int cmd_run(const RunArgs& args) {
  const auto game = std::make_shared<BimatrixGame>(read_game(args.game_path));
  const AlgorithmKind kind = algorithm_from_name(args.algo);
  const JointStrategy init = random_init(game->rows(), game->cols(), args.seed);
  const StepCoefficients c = vanilla_coefficients(kind, args.h, args.eps);
  const Trajectory traj = run(kind, game, init.x, init.y, args.steps, constant_source(c));
  write_trajectory_csv(args.out, traj);
  const Gaps last = traj.gaps.back();
  std::cout << "final delta = " << last.d << " (ratio " << last.d / traj.gaps.front().d
            << "), wrote " << args.out << "\n";
  return 0;
}

struct BenchZsArgs {
  std::vector<long> sizes = {25};
  int seeds = 200;
  long tau = 500;
  std::vector<double> grid = {0.05, 0.1, 0.2, 0.5, 1.0};
  std::vector<std::string> algos = {"cmwu", "ogda", "omd", "omwu"};
  double eps_factor = 0.25;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "bench_zs.csv";
};

int cmd_bench_zs(const BenchZsArgs& args) {
  BenchConfig cfg;
  cfg.sizes.assign(args.sizes.begin(), args.sizes.end());
  cfg.seeds = args.seeds;
  cfg.tau = args.tau;
  cfg.grid = args.grid;
  cfg.algos.clear();
  for (const auto& a : args.algos) cfg.algos.push_back(algorithm_from_name(a));
  cfg.eps_factor = args.eps_factor;
  cfg.mode = mode_from_threads(args.threads);
  const auto rows = bench_zero_sum(cfg, args.seed);
  write_zs_csv(args.out, rows);
  for (const auto& r : rows) {
    if (r.best) {
      std::cout << "best " << algorithm_name(r.algo) << " n=" << r.n << " h=" << r.h
                << " beta=" << r.beta_mean << "\n";
    }
  }
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

struct BenchMixArgs {
  std::vector<std::string> mixtures;
  std::vector<std::string> methods;
  int seeds = 200;
  long size = 10;
  std::string budgets_path;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "bench_mix.csv";
};

// Method grammar: NAME=policy:FILE or NAME=const:ALGO:H[:EPS].
MixtureMethod parse_method(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("method must be NAME=policy:FILE or NAME=const:ALGO:H[:EPS]");
  }
  MixtureMethod method;
  method.name = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  if (rest.rfind("policy:", 0) == 0) {
    method.policy = load_policy(rest.substr(7));
    method.algo = method.policy->algo;
    return method;
  }
  if (rest.rfind("const:", 0) == 0) {
    std::stringstream ss(rest.substr(6));
    std::string algo_name, h_str, eps_str;
    std::getline(ss, algo_name, ':');
    std::getline(ss, h_str, ':');
    const double h = std::stod(h_str);
    double eps = 0.0;
    if (std::getline(ss, eps_str, ':')) eps = std::stod(eps_str);
    method.algo = algorithm_from_name(algo_name);
    method.constants = vanilla_coefficients(method.algo, h, eps);
    return method;
  }
  throw std::invalid_argument("unknown method spec '" + rest + "'");
}

int cmd_bench_mix(const BenchMixArgs& args) {
  std::vector<MixtureMethod> methods;
  for (const auto& m : args.methods) methods.push_back(parse_method(m));
  std::map<std::string, long> budgets;
  if (!args.budgets_path.empty()) {
    budgets = load_mixture_budgets(args.budgets_path);
  } else if (std::filesystem::exists("configs/mixture_budgets.json")) {
    budgets = load_mixture_budgets("configs/mixture_budgets.json");
  } else {
    budgets = default_mixture_budgets();
  }
  const auto rows = bench_mixtures(args.mixtures, methods, args.seeds, args.size, budgets,
                                   args.seed, mode_from_threads(args.threads));
  write_mix_csv(args.out, rows);
  for (const auto& r : rows) {
    std::cout << r.mixture << " " << r.method << " beta=" << r.beta_mean << " (tau=" << r.budget
              << ")\n";
  }
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string algo = "cmwu";
  std::string variant = "full";
  std::string mixture = "ZCy+CCy";
  int gens = 50;
  int pop = 48;
  double elite = 0.25;
  long tau = 1000;
  int episodes = 6;
  long size = 10;
  double init_h = std::numeric_limits<double>::quiet_NaN();
  double init_eps = 0.0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "policy.json";
};

int cmd_train(const TrainArgs& args) {
  TrainConfig cfg;
  cfg.algo = algorithm_from_name(args.algo);
  cfg.variant = variant_from_name(args.variant);
  cfg.dist = GameDistribution::parse(args.mixture, args.size);
  cfg.generations = args.gens;
  cfg.population = args.pop;
  cfg.elite_fraction = args.elite;
  cfg.tau = args.tau;
  cfg.episodes_per_candidate = args.episodes;
  cfg.game_size = args.size;
  cfg.mode = mode_from_threads(args.threads);
  if (!std::isnan(args.init_h)) {
    cfg.init_coefficients = vanilla_coefficients(cfg.algo, args.init_h, args.init_eps);
  }
  const TrainResult result = train_cem(cfg, args.seed);
  save_policy(args.out, result.policy);
  write_curve_csv(args.out + ".curve.csv", result.curve);
  std::cout << "best objective " << result.curve.back().best_seen << ", wrote " << args.out
            << " and " << args.out << ".curve.csv\n";
  return 0;
}

struct EvalArgs {
  std::string policy_path;
  std::string mixture = "ZCy+CCy";
  int episodes = 100;
  long tau = 0;  // 0 -> the mixture's default budget
  std::uint64_t seed = 0;
  std::string report;
};

int cmd_eval(const EvalArgs& args) {
  const MlpPolicy policy = load_policy(args.policy_path);
  const GameDistribution dist = GameDistribution::parse(args.mixture, policy.game_size);
  long tau = args.tau;
  if (tau == 0) {
    const auto budgets = default_mixture_budgets();
    const auto it = budgets.find(args.mixture);
    tau = it != budgets.end() ? it->second : 1000;
  }
  EvalStats stats;
  const double obj =
      evaluate_policy(policy, dist, args.episodes, tau, 1.0, args.seed, &stats);
  double beta_mean = 0.0;
  for (double b : stats.episode_betas) beta_mean += b;
  beta_mean /= static_cast<double>(stats.episode_betas.size());
  std::cout << "episodes=" << args.episodes << " tau=" << tau << " objective=" << obj
            << " mean_beta=" << beta_mean << "\n";
  if (!args.report.empty()) {
    std::ofstream out(args.report);
    if (!out) throw std::invalid_argument("cannot write " + args.report);
    out << "episode,objective,beta\n";
    for (std::size_t e = 0; e < stats.episode_betas.size(); ++e) {
      out << e << ',' << format_double(stats.episode_objectives[e]) << ','
          << format_double(stats.episode_betas[e]) << '\n';
    }
    std::cout << "wrote " << args.report << "\n";
  }
  return 0;
}

struct PlotArgs {
  std::string game_path;
  std::string named = "rps";
  long steps = 10000;
  std::uint64_t seed = 0;
  std::string out = "plot.csv";
};

// Constants tuned per algorithm for the named RPS run; other games reuse
// them as reasonable defaults.
StepCoefficients plot_constants(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::MWU: return vanilla_coefficients(kind, 0.1);
    case AlgorithmKind::CMWU: return vanilla_coefficients(kind, 0.5, 3.0);
    case AlgorithmKind::OMWU: return vanilla_coefficients(kind, 0.5);
    case AlgorithmKind::OMD: return vanilla_coefficients(kind, 0.5);
    case AlgorithmKind::OGDA: return vanilla_coefficients(kind, 0.2);
  }
  throw std::invalid_argument("plot_constants: bad kind");
}

int cmd_plot(const PlotArgs& args) {
  const auto game = std::make_shared<BimatrixGame>(
      args.game_path.empty() ? named_game(args.named) : read_game(args.game_path));
  const JointStrategy init = random_init(game->rows(), game->cols(), args.seed);
  std::vector<Trajectory> trajectories;
  std::vector<std::pair<std::string, const Trajectory*>> columns;
  const std::vector<AlgorithmKind> algos = {AlgorithmKind::MWU, AlgorithmKind::CMWU,
                                            AlgorithmKind::OMWU, AlgorithmKind::OMD,
                                            AlgorithmKind::OGDA};
  trajectories.reserve(algos.size());
  for (const AlgorithmKind kind : algos) {
    trajectories.push_back(
        run(kind, game, init.x, init.y, args.steps, constant_source(plot_constants(kind))));
  }
  for (std::size_t i = 0; i < algos.size(); ++i) {
    columns.emplace_back(algorithm_name(algos[i]), &trajectories[i]);
  }
  write_plot_csv(args.out, columns);
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Last-iterate game dynamics, projector decompositions and learned coefficients"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a game JSON file");
  gen->add_option("--type", gen_args.type, "random | zero-sum | named | mixture");
  gen->add_option("--n", gen_args.n);
  gen->add_option("--m", gen_args.m);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--name", gen_args.name, "named game (rps, matching_pennies, coordination2)");
  gen->add_option("--mixture", gen_args.mixture, "picks as KIND:WEIGHT,...");
  gen->add_option("--out", gen_args.out);

  std::string dec_game, dec_dir = "components";
  bool dec_four = false;
  auto* dec = app.add_subcommand("decompose", "Write the component games and the signature");
  dec->add_option("--game", dec_game)->required();
  dec->add_option("--out-dir", dec_dir);
  dec->add_flag("--four", dec_four, "4-component decomposition (any shape, no signature)");

  RunArgs run_args;
  auto* runc = app.add_subcommand("run", "Run one algorithm on a game");
  runc->set_help_flag("--help", "Print this help message and exit");  // frees up --h
  runc->add_option("--algo", run_args.algo, "mwu | cmwu | omwu | omd | ogda");
  runc->add_option("--game", run_args.game_path)->required();
  runc->add_option("--h", run_args.h);
  runc->add_option("--eps", run_args.eps, "Hessian coefficient (cmwu only)");
  runc->add_option("--steps", run_args.steps);
  runc->add_option("--seed", run_args.seed);
  runc->add_option("--out", run_args.out);

  BenchZsArgs zs_args;
  auto* zs = app.add_subcommand("bench-zs", "Zero-sum benchmark over a learning-rate grid");
  zs->add_option("--sizes", zs_args.sizes);
  zs->add_option("--seeds", zs_args.seeds);
  zs->add_option("--tau", zs_args.tau);
  zs->add_option("--grid", zs_args.grid);
  zs->add_option("--algos", zs_args.algos);
  zs->add_option("--eps-factor", zs_args.eps_factor, "CMWU eps = factor * n / h");
  zs->add_option("--seed", zs_args.seed);
  zs->add_option("--threads", zs_args.threads, "1 forces the serial path");
  zs->add_option("--out", zs_args.out);

  BenchMixArgs mix_args;
  auto* mix = app.add_subcommand("bench-mix", "Mixture benchmark for policies and constants");
  mix->add_option("--mixtures", mix_args.mixtures, "row labels, e.g. ZT ZCy+CCy random");
  mix->add_option("--method", mix_args.methods,
                  "NAME=policy:FILE or NAME=const:ALGO:H[:EPS] (repeatable)");
  mix->add_option("--seeds", mix_args.seeds);
  mix->add_option("--size", mix_args.size);
  mix->add_option("--budgets", mix_args.budgets_path, "budgets JSON (default: shipped table)");
  mix->add_option("--seed", mix_args.seed);
  mix->add_option("--threads", mix_args.threads);
  mix->add_option("--out", mix_args.out);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a coefficient policy by cross-entropy search");
  train->add_option("--algo", train_args.algo);
  train->add_option("--variant", train_args.variant, "base | partial | full");
  train->add_option("--mixture", train_args.mixture);
  train->add_option("--gens", train_args.gens);
  train->add_option("--pop", train_args.pop);
  train->add_option("--elite", train_args.elite);
  train->add_option("--tau", train_args.tau);
  train->add_option("--episodes", train_args.episodes, "episodes per candidate");
  train->add_option("--size", train_args.size);
  train->add_option("--init-h", train_args.init_h, "warm-start constant learning rate");
  train->add_option("--init-eps", train_args.init_eps, "warm-start constant eps");
  train->add_option("--seed", train_args.seed);
  train->add_option("--threads", train_args.threads);
  train->add_option("--out", train_args.out);

  EvalArgs eval_args;
  auto* evalc = app.add_subcommand("eval", "Evaluate a saved policy on a mixture distribution");
  evalc->add_option("--policy", eval_args.policy_path)->required();
  evalc->add_option("--mixture", eval_args.mixture);
  evalc->add_option("--episodes", eval_args.episodes);
  evalc->add_option("--tau", eval_args.tau, "0 uses the mixture's default budget");
  evalc->add_option("--seed", eval_args.seed);
  evalc->add_option("--report", eval_args.report, "per-episode CSV");

  PlotArgs plot_args;
  auto* plot = app.add_subcommand("plot-data", "Per-step delta ratios for all five algorithms");
  plot->add_option("--game", plot_args.game_path);
  plot->add_option("--named", plot_args.named);
  plot->add_option("--steps", plot_args.steps);
  plot->add_option("--seed", plot_args.seed);
  plot->add_option("--out", plot_args.out);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (dec->parsed()) return cmd_decompose(dec_game, dec_dir, dec_four);
    if (runc->parsed()) return cmd_run(run_args);
    if (zs->parsed()) return cmd_bench_zs(zs_args);
    if (mix->parsed()) return cmd_bench_mix(mix_args);
    if (train->parsed()) return cmd_train(train_args);
    if (evalc->parsed()) return cmd_eval(eval_args);
    if (plot->parsed()) return cmd_plot(plot_args);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
}
