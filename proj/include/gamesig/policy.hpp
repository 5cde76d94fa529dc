#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gamesig/decomposition.hpp"
#include "gamesig/dynamics.hpp"
#include "gamesig/game.hpp"
#include "gamesig/generators.hpp"
#include "gamesig/parallel.hpp"

namespace gamesig {

// Feature layout, for a fixed square game size n (versioned; see
// kFeatureLayoutVersion):
//   [0, 8)                 game signature
//   [8, 10)                delta1, delta2
//   [10, 10+n)             gradient A y
//   [10+n, 10+2n)          gradient B' x
//   [10+2n, 10+2n+n^2)     Hx flattened row-major
//   [10+2n+n^2, 10+2n+2n^2) Hy flattened row-major
//   last two               payoffs x'Ay, x'By
// Total 12 + 2n + 2n^2. Feature groups are kept at their natural scale
// ("identity-v1"): U[-1,1] payoffs already put every group at O(1).
inline constexpr int kFeatureLayoutVersion = 1;
inline constexpr const char* kFeatureScaling = "identity-v1";

Eigen::Index feature_size(Eigen::Index n);

Vector extract_features(const BimatrixGame& g, const GameSignature& sig,
                        const DynamicsState& st);

// Base: the feature vector is masked (zeroed), so the output is constant.
// PartialRL: full features, emits vanilla coefficients (shared h; plus eps
// for CMWU). FullRL: full features, emits all 4 coefficients.
enum class PolicyVariant { Base, PartialRL, FullRL };

const char* variant_name(PolicyVariant v);
PolicyVariant variant_from_name(const std::string& name);

// Raw network outputs per variant: FullRL -> 4, Partial/Base -> 2 for CMWU
// (h, eps) and 1 otherwise (h).
int policy_output_dim(PolicyVariant v, AlgorithmKind algo);

// Every emitted value is bounded by c_i = scale_i * tanh(u_i). Rate-like
// outputs use kGradScale; CMWU Hessian outputs (the h*eps products for
// FullRL, the eps ratio for Partial/Base) use kHessScale, since taming
// cyclic components takes Hessian coefficients far above the useful
// learning-rate range (the Table-2 rule alone puts eps at 25 for h=0.1,
// n=10).
inline constexpr double kGradScale = 2.0;
inline constexpr double kHessScale = 30.0;

// Per-output squash scales for a variant/algorithm pair.
Vector coefficient_scales(PolicyVariant v, AlgorithmKind algo);

// Fully connected net, two hidden layers of 256 tanh units. Outputs are the
// per-coefficient means; log_std holds the per-output log standard deviation
// used for stochastic sampling (diagonal covariance).
struct MlpPolicy {
  AlgorithmKind algo = AlgorithmKind::CMWU;
  PolicyVariant variant = PolicyVariant::FullRL;
  Eigen::Index game_size = 10;
  std::vector<Matrix> weights;  // [hidden1 x in], [hidden2 x hidden1], [out x hidden2]
  std::vector<Vector> biases;
  Vector log_std;

  static MlpPolicy zero(AlgorithmKind algo, PolicyVariant variant, Eigen::Index game_size,
                        int hidden = 256);

  Eigen::Index input_dim() const { return weights.front().cols(); }
  int output_dim() const { return static_cast<int>(weights.back().rows()); }

  // Raw output means (before squashing).
  Vector forward(const Vector& features) const;

  Eigen::Index parameter_count() const;
  Vector flatten_parameters() const;
  void set_parameters(const Vector& theta);
};

StepCoefficients map_outputs_to_coefficients(AlgorithmKind algo, PolicyVariant variant,
                                             const Vector& raw_outputs);

// Deterministic mode returns the squashed means; stochastic mode adds
// independent Gaussian noise with the learned spread before squashing.
StepCoefficients act(const MlpPolicy& policy, const Vector& features, bool stochastic,
                     std::uint64_t seed);

// Distribution over episode games. With empty pools, a raw random game is
// drawn. Otherwise one component kind is picked uniformly from each pool,
// component weights are drawn uniformly from the simplex, and the mixture is
// assembled from fresh component draws.
struct GameDistribution {
  Eigen::Index size = 10;
  std::vector<std::vector<ComponentKind8>> pools;

  // "random", or '+'-separated groups/kinds: ZT, ZCy, CT, CCy expand to
  // their symmetric/antisymmetric pairs; explicit 8-component names are a
  // single-kind pool. E.g. "ZCy+CCy", "ZACy".
  static GameDistribution parse(const std::string& spec, Eigen::Index size);
  std::string describe() const;
};

struct Episode {
  BimatrixGame game;
  GameSignature sig;
  JointStrategy init;
};

Episode sample_episode(const GameDistribution& dist, std::uint64_t seed);

// Coefficient source backed by a policy; the signature is computed once per
// episode. Stochastic sources draw per-step noise from a stream derived from
// noise_seed.
CoefficientSource policy_source(const MlpPolicy& policy, const BimatrixGame& g,
                                const GameSignature& sig, bool stochastic = false,
                                std::uint64_t noise_seed = 0);

struct EvalStats {
  std::vector<double> episode_objectives;
  std::vector<double> episode_betas;
  int resampled_episodes = 0;
};

// Mean over episodes of sum_{t=1..tau} gamma^{t-1} delta_t / delta_0, fresh
// game and init per episode, deterministic actions. Episodes that start at
// equilibrium (delta_0 = 0) are resampled and counted in stats.
double evaluate_policy(const MlpPolicy& policy, const GameDistribution& dist, int episodes,
                       long tau, double gamma, std::uint64_t seed,
                       EvalStats* stats = nullptr);

// Same objective for a fixed coefficient source factory (used for constant-
// coefficient baselines).
double evaluate_constant(AlgorithmKind algo, const StepCoefficients& c,
                         const GameDistribution& dist, int episodes, long tau, double gamma,
                         std::uint64_t seed, EvalStats* stats = nullptr);

struct TrainConfig {
  long tau = 1000;
  double gamma = 1.0;
  int population = 48;
  double elite_fraction = 0.25;
  int generations = 50;
  int episodes_per_candidate = 6;
  GameDistribution dist;
  AlgorithmKind algo = AlgorithmKind::CMWU;
  PolicyVariant variant = PolicyVariant::FullRL;
  Eigen::Index game_size = 10;
  int hidden = 256;
  double init_std_hidden = 0.05;
  double init_std_out = 0.5;
  double std_floor = 1e-3;
  // Optional warm start: initialize the search mean so the policy emits
  // these constant coefficients (output biases at atanh(c/scale)).
  std::optional<StepCoefficients> init_coefficients;
  ExecMode mode = ExecMode::OpenMP;

  void validate() const;
  int elite_count() const;
};

struct TrainCurvePoint {
  int generation = 0;
  double best_seen = 0.0;  // incumbent raw score; non-increasing
  double gen_best = 0.0;
  double gen_mean = 0.0;
};

struct TrainResult {
  MlpPolicy policy;
  std::vector<TrainCurvePoint> curve;
};

// Refit a diagonal Gaussian to the elite_count best samples (ties broken by
// index). With elite_count = samples.size() this is a plain sample fit (no
// selection).
void cem_refit(const std::vector<Vector>& samples, const std::vector<double>& objectives,
               int elite_count, double std_floor, Vector& mean, Vector& stddev);

// Cross-entropy search over flattened policy parameters. Candidates within a
// generation are evaluated concurrently on common random episode seeds; the
// best-seen candidate is returned.
TrainResult train_cem(const TrainConfig& cfg, std::uint64_t seed);

// Per pure-component-kind averages of the coefficient time series
// (G1, G2, H1, H2) and their seed-averaged pairwise correlations. For CMWU,
// G_k is the gradient coefficient and H_k the (negated) Hessian coefficient;
// other algorithms report the raw coefficients. Zero-variance series have
// their correlations marked undefined rather than emitting NaNs.
struct CoefficientSummary {
  std::array<double, 4> means{};
  std::array<std::array<double, 4>, 4> corr{};
  std::array<std::array<bool, 4>, 4> corr_defined{};
};

using SourceFactory =
    std::function<CoefficientSource(const BimatrixGame&, const GameSignature&, std::uint64_t)>;

std::array<CoefficientSummary, kNumComponents8> coefficient_summary(
    const MlpPolicy& policy, const GameDistribution& dist, int episodes, long tau,
    std::uint64_t seed);

// Engine behind coefficient_summary, usable with hand-built sources.
std::array<CoefficientSummary, kNumComponents8> coefficient_summary_with_source(
    AlgorithmKind algo, const SourceFactory& make_source, Eigen::Index size, int episodes,
    long tau, std::uint64_t seed);

}  // namespace gamesig
