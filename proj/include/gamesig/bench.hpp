#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gamesig/analysis.hpp"
#include "gamesig/dynamics.hpp"
#include "gamesig/parallel.hpp"
#include "gamesig/policy.hpp"

namespace gamesig {

// Zero-sum benchmark: for every (algorithm, size, h) cell, mean and standard
// deviation of beta_tau over seeded random zero-sum games; games and starts
// are shared across algorithms and rates. CMWU uses eps = eps_factor * n / h.
struct BenchConfig {
  std::vector<Eigen::Index> sizes = {25};
  int seeds = 200;
  long tau = 500;
  std::vector<double> grid = {0.05, 0.1, 0.2, 0.5, 1.0};
  std::vector<AlgorithmKind> algos = {AlgorithmKind::CMWU, AlgorithmKind::OGDA,
                                      AlgorithmKind::OMD, AlgorithmKind::OMWU};
  double eps_factor = 0.25;
  ExecMode mode = ExecMode::OpenMP;

  void validate() const;
};

struct ZsResultRow {
  bool best = false;  // best-h summary row for its (algo, n)
  AlgorithmKind algo = AlgorithmKind::CMWU;
  Eigen::Index n = 0;
  double h = 0.0;
  double eps = 0.0;
  double beta_mean = 0.0;
  double beta_std = 0.0;  // NaN when seeds == 1
  int seeds = 0;
  long tau = 0;
};

std::vector<ZsResultRow> bench_zero_sum(const BenchConfig& cfg, std::uint64_t seed_base);

void write_zs_csv(const std::string& path, const std::vector<ZsResultRow>& rows);

// A method benchmarked on mixtures: either a loaded policy or a constant
// coefficient configuration.
struct MixtureMethod {
  std::string name;
  AlgorithmKind algo = AlgorithmKind::CMWU;
  std::optional<MlpPolicy> policy;  // nullopt -> constants
  StepCoefficients constants{};
};

struct MixResultRow {
  std::string mixture;
  std::string method;
  double beta_mean = 0.0;
  double beta_std = 0.0;
  long budget = 0;
  int seeds = 0;
};

// Iteration budgets per mixture row, keyed by the row label ("ZT",
// "ZCy+CCy", "random", ...). default_mixture_budgets() mirrors
// configs/mixture_budgets.json.
std::map<std::string, long> default_mixture_budgets();
std::map<std::string, long> load_mixture_budgets(const std::string& path);

std::vector<MixResultRow> bench_mixtures(const std::vector<std::string>& mixture_rows,
                                         const std::vector<MixtureMethod>& methods,
                                         int seeds, Eigen::Index size,
                                         const std::map<std::string, long>& budgets,
                                         std::uint64_t seed_base, ExecMode mode);

void write_mix_csv(const std::string& path, const std::vector<MixResultRow>& rows);

// Per-step delta(x_t, y_t) / delta(x_0, y_0), one column per trajectory.
// All trajectories must have the same length.
void write_plot_csv(const std::string& path,
                    const std::vector<std::pair<std::string, const Trajectory*>>& columns);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

void write_curve_csv(const std::string& path, const std::vector<TrainCurvePoint>& curve);

}  // namespace gamesig
