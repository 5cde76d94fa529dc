#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gamesig/policy.hpp"
#include "gamesig/rng.hpp"

namespace gamesig {

void TrainConfig::validate() const {
  if (tau < 1) throw std::invalid_argument("TrainConfig: tau must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0) throw std::invalid_argument("TrainConfig: gamma in (0, 1]");
  if (generations < 1) throw std::invalid_argument("TrainConfig: generations must be >= 1");
  if (episodes_per_candidate < 1) {
    throw std::invalid_argument("TrainConfig: episodes_per_candidate must be >= 1");
  }
  if (!(elite_fraction > 0.0) || elite_fraction > 1.0) {
    throw std::invalid_argument("TrainConfig: elite_fraction in (0, 1]");
  }
  if (population < 2 * elite_count()) {
    throw std::invalid_argument("TrainConfig: population must be >= 2 * elites");
  }
}

int TrainConfig::elite_count() const {
  return std::max(1, static_cast<int>(std::lround(elite_fraction * population)));
}

void cem_refit(const std::vector<Vector>& samples, const std::vector<double>& objectives,
               int elite_count, double std_floor, Vector& mean, Vector& stddev) {
  if (samples.empty() || samples.size() != objectives.size()) {
    throw std::invalid_argument("cem_refit: samples/objectives mismatch");
  }
  if (elite_count < 1 || elite_count > static_cast<int>(samples.size())) {
    throw std::invalid_argument("cem_refit: bad elite count");
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return objectives[a] < objectives[b];
  });
  const Eigen::Index dim = samples.front().size();
  mean = Vector::Zero(dim);
  for (int e = 0; e < elite_count; ++e) mean += samples[order[static_cast<std::size_t>(e)]];
  mean /= static_cast<double>(elite_count);
  Vector var = Vector::Zero(dim);
  for (int e = 0; e < elite_count; ++e) {
    const Vector diff = samples[order[static_cast<std::size_t>(e)]] - mean;
    var += diff.cwiseProduct(diff);
  }
  var /= static_cast<double>(elite_count);
  stddev = var.cwiseSqrt().cwiseMax(std_floor);
}

namespace {

// Per-parameter initial exploration scales: output layer wider than hidden
// layers so constant (bias-driven) behaviors are reachable early.
Vector initial_stddev(const MlpPolicy& proto, const TrainConfig& cfg) {
  Vector sd(proto.parameter_count());
  Eigen::Index at = 0;
  const std::size_t layers = proto.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const double scale = (l + 1 == layers) ? cfg.init_std_out : cfg.init_std_hidden;
    sd.segment(at, proto.weights[l].size()).setConstant(scale);
    at += proto.weights[l].size();
    sd.segment(at, proto.biases[l].size()).setConstant(scale);
    at += proto.biases[l].size();
  }
  return sd;
}

}  // namespace

namespace {

// Output biases that make the zero-weight policy emit the given constants.
Vector warm_start_mean(const MlpPolicy& proto, const StepCoefficients& target) {
  MlpPolicy p = proto;
  const Vector scales = coefficient_scales(p.variant, p.algo);
  Vector raw(p.output_dim());
  if (p.variant == PolicyVariant::FullRL) {
    for (int i = 0; i < 4; ++i) raw[i] = target[i];
  } else {
    raw[0] = target[0];  // h
    if (raw.size() > 1) {
      raw[1] = target[0] != 0.0 ? target[2] / target[0] : 0.0;  // eps = (h*eps)/h
    }
  }
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double squashed = std::clamp(raw[i] / scales[i], -0.999, 0.999);
    p.biases.back()[i] = std::atanh(squashed);
  }
  return p.flatten_parameters();
}

}  // namespace

TrainResult train_cem(const TrainConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const MlpPolicy proto = MlpPolicy::zero(cfg.algo, cfg.variant, cfg.game_size, cfg.hidden);
  const Eigen::Index dim = proto.parameter_count();
  const int elites = cfg.elite_count();

  Vector mean = cfg.init_coefficients ? warm_start_mean(proto, *cfg.init_coefficients)
                                      : Vector::Zero(dim);
  Vector stddev = initial_stddev(proto, cfg);

  double best_seen = std::numeric_limits<double>::infinity();
  Vector best_params = mean;
  TrainResult result;
  result.curve.reserve(static_cast<std::size_t>(cfg.generations));

  std::vector<Vector> samples(static_cast<std::size_t>(cfg.population));
  std::vector<double> objectives(static_cast<std::size_t>(cfg.population));

  for (int gen = 0; gen < cfg.generations; ++gen) {
    // Candidates within a generation share the episode seed stream (common
    // random numbers); each candidate owns its sampling stream, so the loop
    // is deterministic under any thread schedule.
    const std::uint64_t eval_seed = derive_seed(seed, {0xEEu, static_cast<std::uint64_t>(gen)});
    parallel_for_index(static_cast<std::size_t>(cfg.population), cfg.mode, [&](std::size_t cand) {
      SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(gen), cand}));
      Vector theta(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        theta[i] = mean[i] + stddev[i] * rng.normal();
      }
      MlpPolicy candidate = proto;
      candidate.set_parameters(theta);
      double obj;
      try {
        obj = evaluate_policy(candidate, cfg.dist, cfg.episodes_per_candidate, cfg.tau,
                              cfg.gamma, eval_seed);
      } catch (const NumericalError&) {
        obj = std::numeric_limits<double>::infinity();
      }
      samples[cand] = std::move(theta);
      objectives[cand] = obj;
    });

    double gen_best = std::numeric_limits<double>::infinity();
    double gen_sum = 0.0;
    int gen_best_idx = -1;
    int finite_count = 0;
    for (int candidate = 0; candidate < cfg.population; ++candidate) {
      const double obj = objectives[static_cast<std::size_t>(candidate)];
      if (std::isfinite(obj)) {
        ++finite_count;
        gen_sum += obj;
        if (obj < gen_best) {
          gen_best = obj;
          gen_best_idx = candidate;
        }
      }
    }
    if (finite_count == 0) {
      throw std::runtime_error("train_cem: every candidate in generation " +
                               std::to_string(gen) + " evaluated non-finite");
    }
    if (gen_best < best_seen) {
      best_seen = gen_best;
      best_params = samples[static_cast<std::size_t>(gen_best_idx)];
    }
    result.curve.push_back(
        {gen, best_seen, gen_best, gen_sum / static_cast<double>(finite_count)});

    cem_refit(samples, objectives, elites, cfg.std_floor, mean, stddev);
  }

  result.policy = proto;
  result.policy.set_parameters(best_params);
  return result;
}

}  // namespace gamesig
