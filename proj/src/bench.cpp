#include "gamesig/bench.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "gamesig/generators.hpp"
#include "gamesig/io.hpp"
#include "gamesig/rng.hpp"

namespace gamesig {

void BenchConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("BenchConfig: no game sizes");
  if (seeds < 1) throw std::invalid_argument("BenchConfig: seeds must be >= 1");
  if (tau < 1) throw std::invalid_argument("BenchConfig: tau must be >= 1");
  if (grid.empty()) throw std::invalid_argument("BenchConfig: learning-rate grid is empty");
  if (algos.empty()) throw std::invalid_argument("BenchConfig: no algorithms");
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double stddev = std::numeric_limits<double>::quiet_NaN();
};

// Sample standard deviation; undefined (NaN) for a single observation.
MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

}  // namespace

std::vector<ZsResultRow> bench_zero_sum(const BenchConfig& cfg, std::uint64_t seed_base) {
  cfg.validate();
  std::vector<ZsResultRow> rows;
  for (const Eigen::Index n : cfg.sizes) {
    std::vector<ZsResultRow> cell_rows;
    for (const AlgorithmKind algo : cfg.algos) {
      for (const double h : cfg.grid) {
        const double eps = algo == AlgorithmKind::CMWU
                               ? cfg.eps_factor * static_cast<double>(n) / h
                               : 0.0;
        const StepCoefficients c = vanilla_coefficients(algo, h, eps);
        std::vector<double> betas(static_cast<std::size_t>(cfg.seeds));
        parallel_for_index(static_cast<std::size_t>(cfg.seeds), cfg.mode, [&](std::size_t s) {
          // Games and starts depend on (n, seed index) only, so every
          // algorithm and rate sees the same instances.
          const std::uint64_t game_seed =
              derive_seed(seed_base, {static_cast<std::uint64_t>(n), s, 0});
          const std::uint64_t init_seed =
              derive_seed(seed_base, {static_cast<std::uint64_t>(n), s, 1});
          const BimatrixGame game = random_zero_sum(n, n, game_seed);
          const JointStrategy init = random_init(n, n, init_seed);
          const std::vector<Gaps> gaps =
              run_gaps(algo, game, init.x, init.y, cfg.tau, constant_source(c));
          betas[s] = beta_from_gaps(gaps, cfg.tau).beta;
        });
        const MeanStd ms = mean_std(betas);
        cell_rows.push_back({false, algo, n, h, eps, ms.mean, ms.stddev, cfg.seeds, cfg.tau});
      }
    }
    // Best-h summary per (algo, n): the grid row with the lowest mean beta.
    for (const AlgorithmKind algo : cfg.algos) {
      const ZsResultRow* best = nullptr;
      for (const auto& row : cell_rows) {
        if (row.algo != algo) continue;
        if (!best || row.beta_mean < best->beta_mean) best = &row;
      }
      ZsResultRow summary = *best;
      summary.best = true;
      cell_rows.push_back(summary);
    }
    rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
  }
  return rows;
}

void write_zs_csv(const std::string& path, const std::vector<ZsResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << "row_kind,algo,n,h,eps,beta_mean,beta_std,seeds,tau\n";
  for (const auto& r : rows) {
    out << (r.best ? "best" : "grid") << ',' << algorithm_name(r.algo) << ',' << r.n << ','
        << format_double(r.h) << ',' << format_double(r.eps) << ','
        << format_double(r.beta_mean) << ',' << format_double(r.beta_std) << ',' << r.seeds
        << ',' << r.tau << '\n';
  }
}

std::map<std::string, long> default_mixture_budgets() {
  // Budgets in iterations (stored as hundreds in the shipped config file).
  return {
      {"ZT", 200},          {"ZCy", 4000},        {"CT", 200},
      {"CCy", 800},         {"ZT+ZCy", 4000},     {"ZT+CT", 400},
      {"ZT+CCy", 400},      {"ZCy+CT", 4000},     {"ZCy+CCy", 4000},
      {"CT+CCy", 400},      {"ZT+ZCy+CT", 4000},  {"ZT+ZCy+CCy", 4000},
      {"ZT+CT+CCy", 400},   {"ZCy+CT+CCy", 4000}, {"ZT+ZCy+CT+CCy", 4000},
      {"random", 4000},
  };
}

std::map<std::string, long> load_mixture_budgets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open budgets file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  if (!j.contains("budgets_x100")) {
    throw std::invalid_argument(path + ": missing \"budgets_x100\" object");
  }
  std::map<std::string, long> out;
  for (const auto& [key, value] : j["budgets_x100"].items()) {
    out[key] = 100L * value.get<long>();
  }
  return out;
}

std::vector<MixResultRow> bench_mixtures(const std::vector<std::string>& mixture_rows,
                                         const std::vector<MixtureMethod>& methods,
                                         int seeds, Eigen::Index size,
                                         const std::map<std::string, long>& budgets,
                                         std::uint64_t seed_base, ExecMode mode) {
  if (seeds < 1) throw std::invalid_argument("bench_mixtures: seeds must be >= 1");
  for (const auto& m : methods) {
    if (m.policy) {
      if (m.policy->game_size != size) {
        throw std::invalid_argument("bench_mixtures: policy '" + m.name +
                                    "' was trained for game size " +
                                    std::to_string(m.policy->game_size) + ", benchmark uses " +
                                    std::to_string(size));
      }
      if (m.policy->algo != m.algo) {
        throw std::invalid_argument("bench_mixtures: policy '" + m.name +
                                    "' algorithm mismatch");
      }
    }
  }
  std::vector<MixResultRow> rows;
  for (std::size_t row_i = 0; row_i < mixture_rows.size(); ++row_i) {
    const std::string& label = mixture_rows[row_i];
    const GameDistribution dist = GameDistribution::parse(label, size);
    const auto it = budgets.find(label);
    if (it == budgets.end()) {
      throw std::invalid_argument("bench_mixtures: no budget for mixture row '" + label + "'");
    }
    const long tau = it->second;
    for (const auto& method : methods) {
      std::vector<double> betas(static_cast<std::size_t>(seeds));
      parallel_for_index(static_cast<std::size_t>(seeds), mode, [&](std::size_t s) {
        // Episode seeds depend on (row, seed) only: methods share instances.
        const std::uint64_t ep_seed = derive_seed(seed_base, {row_i, s});
        Episode ep = sample_episode(dist, ep_seed);
        int attempt = 0;
        while (best_response_gaps(ep.game, ep.init).d == 0.0 && attempt < 100) {
          ++attempt;
          ep = sample_episode(dist, derive_seed(seed_base, {row_i, s, 1000 + static_cast<std::uint64_t>(attempt)}));
        }
        const CoefficientSource source =
            method.policy ? policy_source(*method.policy, ep.game, ep.sig)
                          : constant_source(method.constants);
        const std::vector<Gaps> gaps =
            run_gaps(method.algo, ep.game, ep.init.x, ep.init.y, tau, source);
        betas[s] = beta_from_gaps(gaps, tau).beta;
      });
      const MeanStd ms = mean_std(betas);
      rows.push_back({label, method.name, ms.mean, ms.stddev, tau, seeds});
    }
  }
  return rows;
}

void write_mix_csv(const std::string& path, const std::vector<MixResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << "mixture,method,beta_mean,beta_std,budget,seeds\n";
  for (const auto& r : rows) {
    out << r.mixture << ',' << r.method << ',' << format_double(r.beta_mean) << ','
        << format_double(r.beta_std) << ',' << r.budget << ',' << r.seeds << '\n';
  }
}

void write_plot_csv(const std::string& path,
                    const std::vector<std::pair<std::string, const Trajectory*>>& columns) {
  if (columns.empty()) throw std::invalid_argument("write_plot_csv: no trajectories");
  const std::size_t length = columns.front().second->gaps.size();
  for (const auto& [name, traj] : columns) {
    if (traj->gaps.size() != length) {
      throw std::invalid_argument("write_plot_csv: trajectory '" + name +
                                  "' has mismatched length");
    }
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << "t";
  for (const auto& [name, traj] : columns) out << ',' << name;
  out << '\n';
  for (std::size_t t = 0; t < length; ++t) {
    out << t;
    for (const auto& [name, traj] : columns) {
      const double d0 = traj->gaps[0].d;
      out << ',' << format_double(traj->gaps[t].d / d0);
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << "t,delta1,delta2,delta,delta_ratio,c1,c2,c3,c4\n";
  const double d0 = traj.gaps.empty() ? 0.0 : traj.gaps[0].d;
  for (std::size_t t = 0; t < traj.gaps.size(); ++t) {
    const Gaps& gp = traj.gaps[t];
    // Row t carries the coefficients that produced state t (zeros at t = 0).
    StepCoefficients c{};
    if (t > 0) c = traj.coefficients_used[t - 1];
    out << t << ',' << format_double(gp.d1) << ',' << format_double(gp.d2) << ','
        << format_double(gp.d) << ',' << format_double(gp.d / d0) << ','
        << format_double(c[0]) << ',' << format_double(c[1]) << ',' << format_double(c[2])
        << ',' << format_double(c[3]) << '\n';
  }
}

void write_curve_csv(const std::string& path, const std::vector<TrainCurvePoint>& curve) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << "generation,best_seen,gen_best,gen_mean\n";
  for (const auto& p : curve) {
    out << p.generation << ',' << format_double(p.best_seen) << ','
        << format_double(p.gen_best) << ',' << format_double(p.gen_mean) << '\n';
  }
}

}  // namespace gamesig
