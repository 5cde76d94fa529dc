#include "gamesig/policy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gamesig/analysis.hpp"
#include "gamesig/rng.hpp"

namespace gamesig {

Eigen::Index feature_size(Eigen::Index n) { return 12 + 2 * n + 2 * n * n; }

Vector extract_features(const BimatrixGame& g, const GameSignature& sig,
                        const DynamicsState& st) {
  if (g.rows() != g.cols()) {
    throw std::invalid_argument("extract_features: requires a square game");
  }
  check_dims(g, st.current);
  const Eigen::Index n = g.rows();
  const Vector& x = st.current.x.weights();
  const Vector& y = st.current.y.weights();
  const Vector g1 = g.A * y;
  const Vector g2 = g.B.transpose() * x;
  const auto [hx, hy] = simplex_hessians(g, st.current);
  const Gaps gaps = best_response_gaps(g, st.current);

  Vector f(feature_size(n));
  Eigen::Index at = 0;
  for (int i = 0; i < kNumComponents8; ++i) f[at++] = sig.weights[static_cast<std::size_t>(i)];
  f[at++] = gaps.d1;
  f[at++] = gaps.d2;
  f.segment(at, n) = g1;
  at += n;
  f.segment(at, n) = g2;
  at += n;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) f[at++] = hx(i, j);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) f[at++] = hy(i, j);
  f[at++] = x.dot(g1);
  f[at++] = x.dot(g.B * y);
  return f;
}

const char* variant_name(PolicyVariant v) {
  switch (v) {
    case PolicyVariant::Base: return "base";
    case PolicyVariant::PartialRL: return "partial";
    case PolicyVariant::FullRL: return "full";
  }
  throw std::invalid_argument("variant_name: bad variant");
}

PolicyVariant variant_from_name(const std::string& name) {
  for (PolicyVariant v : {PolicyVariant::Base, PolicyVariant::PartialRL, PolicyVariant::FullRL}) {
    if (name == variant_name(v)) return v;
  }
  throw std::invalid_argument("unknown policy variant: " + name);
}

int policy_output_dim(PolicyVariant v, AlgorithmKind algo) {
  if (v == PolicyVariant::FullRL) return 4;
  return algo == AlgorithmKind::CMWU ? 2 : 1;
}

MlpPolicy MlpPolicy::zero(AlgorithmKind algo, PolicyVariant variant, Eigen::Index game_size,
                          int hidden) {
  MlpPolicy p;
  p.algo = algo;
  p.variant = variant;
  p.game_size = game_size;
  const Eigen::Index in = feature_size(game_size);
  const int out = policy_output_dim(variant, algo);
  p.weights = {Matrix::Zero(hidden, in), Matrix::Zero(hidden, hidden),
               Matrix::Zero(out, hidden)};
  p.biases = {Vector::Zero(hidden), Vector::Zero(hidden), Vector::Zero(out)};
  p.log_std = Vector::Constant(out, -1.6);
  return p;
}

Vector MlpPolicy::forward(const Vector& features) const {
  if (features.size() != input_dim()) {
    throw std::invalid_argument("MlpPolicy::forward: feature size mismatch");
  }
  Vector h = ((weights[0] * features + biases[0]).array().tanh()).matrix();
  h = ((weights[1] * h + biases[1]).array().tanh()).matrix();
  return weights[2] * h + biases[2];
}

Eigen::Index MlpPolicy::parameter_count() const {
  Eigen::Index count = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    count += weights[l].size() + biases[l].size();
  }
  return count;
}

Vector MlpPolicy::flatten_parameters() const {
  Vector theta(parameter_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Matrix& w = weights[l];
    theta.segment(at, w.size()) = Eigen::Map<const Vector>(w.data(), w.size());
    at += w.size();
    theta.segment(at, biases[l].size()) = biases[l];
    at += biases[l].size();
  }
  return theta;
}

void MlpPolicy::set_parameters(const Vector& theta) {
  if (theta.size() != parameter_count()) {
    throw std::invalid_argument("MlpPolicy::set_parameters: size mismatch");
  }
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Matrix& w = weights[l];
    Eigen::Map<Vector>(w.data(), w.size()) = theta.segment(at, w.size());
    at += w.size();
    biases[l] = theta.segment(at, biases[l].size());
    at += biases[l].size();
  }
}

Vector coefficient_scales(PolicyVariant v, AlgorithmKind algo) {
  Vector scales = Vector::Constant(policy_output_dim(v, algo), kGradScale);
  if (algo == AlgorithmKind::CMWU) {
    if (v == PolicyVariant::FullRL) {
      scales[2] = kHessScale;
      scales[3] = kHessScale;
    } else {
      scales[1] = kHessScale;  // the shared eps ratio
    }
  }
  return scales;
}

StepCoefficients map_outputs_to_coefficients(AlgorithmKind algo, PolicyVariant variant,
                                             const Vector& raw) {
  if (raw.size() != policy_output_dim(variant, algo)) {
    throw std::invalid_argument("map_outputs_to_coefficients: output size mismatch");
  }
  if (!raw.allFinite()) {
    throw std::invalid_argument("map_outputs_to_coefficients: non-finite output");
  }
  const Vector scales = coefficient_scales(variant, algo);
  if (variant == PolicyVariant::FullRL) {
    return {{scales[0] * std::tanh(raw[0]), scales[1] * std::tanh(raw[1]),
             scales[2] * std::tanh(raw[2]), scales[3] * std::tanh(raw[3])}};
  }
  const double h = scales[0] * std::tanh(raw[0]);
  const double eps = algo == AlgorithmKind::CMWU ? scales[1] * std::tanh(raw[1]) : 0.0;
  return vanilla_coefficients(algo, h, eps);
}

StepCoefficients act(const MlpPolicy& policy, const Vector& features, bool stochastic,
                     std::uint64_t seed) {
  Vector raw;
  if (policy.variant == PolicyVariant::Base) {
    raw = policy.forward(Vector::Zero(features.size()));
  } else {
    raw = policy.forward(features);
  }
  if (stochastic) {
    SplitMix64 rng(seed);
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
      raw[i] += std::exp(policy.log_std[i]) * rng.normal();
    }
  }
  return map_outputs_to_coefficients(policy.algo, policy.variant, raw);
}

namespace {

const std::vector<ComponentKind8>& group_expansion(const std::string& token) {
  static const std::vector<ComponentKind8> zt = {ComponentKind8::ZST, ComponentKind8::ZAT};
  static const std::vector<ComponentKind8> zcy = {ComponentKind8::ZSCy, ComponentKind8::ZACy};
  static const std::vector<ComponentKind8> ct = {ComponentKind8::CST, ComponentKind8::CAT};
  static const std::vector<ComponentKind8> ccy = {ComponentKind8::CSCy, ComponentKind8::CACy};
  if (token == "ZT") return zt;
  if (token == "ZCy") return zcy;
  if (token == "CT") return ct;
  if (token == "CCy") return ccy;
  throw std::invalid_argument("not a group: " + token);
}

}  // namespace

GameDistribution GameDistribution::parse(const std::string& spec, Eigen::Index size) {
  GameDistribution dist;
  dist.size = size;
  if (spec == "random" || spec == "Random") return dist;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, '+')) {
    // trim spaces
    const auto b = token.find_first_not_of(' ');
    const auto e = token.find_last_not_of(' ');
    if (b == std::string::npos) throw std::invalid_argument("empty mixture token in: " + spec);
    token = token.substr(b, e - b + 1);
    try {
      dist.pools.push_back(group_expansion(token));
    } catch (const std::invalid_argument&) {
      dist.pools.push_back({component8_from_name(token)});
    }
  }
  if (dist.pools.empty()) {
    throw std::invalid_argument("empty mixture spec: " + spec);
  }
  return dist;
}

std::string GameDistribution::describe() const {
  if (pools.empty()) return "random";
  std::string out;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (i) out += "+";
    if (pools[i].size() == 2 && pools[i][0] == ComponentKind8::ZST) out += "ZT";
    else if (pools[i].size() == 2 && pools[i][0] == ComponentKind8::ZSCy) out += "ZCy";
    else if (pools[i].size() == 2 && pools[i][0] == ComponentKind8::CST) out += "CT";
    else if (pools[i].size() == 2 && pools[i][0] == ComponentKind8::CSCy) out += "CCy";
    else {
      for (std::size_t j = 0; j < pools[i].size(); ++j) {
        if (j) out += "|";
        out += component8_name(pools[i][j]);
      }
    }
  }
  return out;
}

Episode sample_episode(const GameDistribution& dist, std::uint64_t seed) {
  if (dist.pools.empty()) {
    BimatrixGame game = random_game(dist.size, dist.size, derive_seed(seed, {17}));
    GameSignature sig = signature(game);
    JointStrategy init = random_init(dist.size, dist.size, derive_seed(seed, {29}));
    return Episode{std::move(game), sig, std::move(init)};
  }
  SplitMix64 rng(derive_seed(seed, {11}));
  MixtureSpec spec;
  spec.base_seed = derive_seed(seed, {23});
  std::vector<double> weights(dist.pools.size());
  double wsum = 0.0;
  for (std::size_t i = 0; i < dist.pools.size(); ++i) {
    // Dirichlet(1): exponentials normalized to the simplex.
    weights[i] = -std::log(1.0 - rng.uniform01());
    wsum += weights[i];
  }
  for (std::size_t i = 0; i < dist.pools.size(); ++i) {
    const auto& pool = dist.pools[i];
    const ComponentKind8 kind = pool[rng.below(pool.size())];
    spec.picks.emplace_back(kind, weights[i] / wsum);
  }
  BimatrixGame game = mixture_game(spec, dist.size);
  GameSignature sig = signature(game);
  JointStrategy init = random_init(dist.size, dist.size, derive_seed(seed, {29}));
  return Episode{std::move(game), sig, std::move(init)};
}

CoefficientSource policy_source(const MlpPolicy& policy, const BimatrixGame& g,
                                const GameSignature& sig, bool stochastic,
                                std::uint64_t noise_seed) {
  if (policy.game_size != g.rows() || g.rows() != g.cols()) {
    throw std::invalid_argument("policy_source: policy/game size mismatch");
  }
  return [&policy, &g, sig, stochastic, noise_seed](const DynamicsState& st) {
    const Vector f = extract_features(g, sig, st);
    const std::uint64_t step_seed =
        stochastic ? derive_seed(noise_seed, {static_cast<std::uint64_t>(st.step_index)}) : 0;
    return act(policy, f, stochastic, step_seed);
  };
}

namespace {

double evaluate_with_sources(AlgorithmKind algo, const SourceFactory& make_source,
                             const GameDistribution& dist, int episodes, long tau, double gamma,
                             std::uint64_t seed, EvalStats* stats) {
  if (episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");
  if (tau < 1) throw std::invalid_argument("evaluate: tau must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0) throw std::invalid_argument("evaluate: gamma in (0, 1]");
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Episode ep = sample_episode(dist, derive_seed(seed, {static_cast<std::uint64_t>(e)}));
    int attempt = 0;
    while (best_response_gaps(ep.game, ep.init).d == 0.0) {
      ++attempt;
      if (attempt > 100) {
        throw std::runtime_error("evaluate: could not sample an episode with delta0 > 0");
      }
      if (stats) ++stats->resampled_episodes;
      ep = sample_episode(
          dist, derive_seed(seed, {static_cast<std::uint64_t>(e), 1000 + static_cast<std::uint64_t>(attempt)}));
    }
    const CoefficientSource source =
        make_source(ep.game, ep.sig, derive_seed(seed, {static_cast<std::uint64_t>(e), 7}));
    const std::vector<Gaps> gaps = run_gaps(algo, ep.game, ep.init.x, ep.init.y, tau, source);
    const double delta0 = gaps[0].d;
    double objective = 0.0;
    double discount = 1.0;
    for (long t = 1; t <= tau; ++t) {
      objective += discount * gaps[static_cast<std::size_t>(t)].d / delta0;
      discount *= gamma;
    }
    total += objective;
    if (stats) {
      stats->episode_objectives.push_back(objective);
      stats->episode_betas.push_back(beta_from_gaps(gaps, tau).beta);
    }
  }
  return total / static_cast<double>(episodes);
}

}  // namespace

double evaluate_policy(const MlpPolicy& policy, const GameDistribution& dist, int episodes,
                       long tau, double gamma, std::uint64_t seed, EvalStats* stats) {
  const SourceFactory factory = [&policy](const BimatrixGame& g, const GameSignature& sig,
                                          std::uint64_t) {
    return policy_source(policy, g, sig, /*stochastic=*/false);
  };
  return evaluate_with_sources(policy.algo, factory, dist, episodes, tau, gamma, seed, stats);
}

double evaluate_constant(AlgorithmKind algo, const StepCoefficients& c,
                         const GameDistribution& dist, int episodes, long tau, double gamma,
                         std::uint64_t seed, EvalStats* stats) {
  const SourceFactory factory = [c](const BimatrixGame&, const GameSignature&, std::uint64_t) {
    return constant_source(c);
  };
  return evaluate_with_sources(algo, factory, dist, episodes, tau, gamma, seed, stats);
}

namespace {

// Pearson correlation with an explicit defined flag for (near-)constant
// series.
bool pearson(const std::vector<double>& a, const std::vector<double>& b, double& out) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  const double scale_a = std::sqrt(saa / static_cast<double>(n));
  const double scale_b = std::sqrt(sbb / static_cast<double>(n));
  if (scale_a <= 1e-12 * (std::abs(ma) + 1.0) || scale_b <= 1e-12 * (std::abs(mb) + 1.0)) {
    return false;
  }
  out = sab / std::sqrt(saa * sbb);
  return true;
}

// (G1, G2, H1, H2) as displayed in the coefficient analyses: for CMWU the
// Hessian coefficients enter the update with a minus sign, so H_k = -c[2+k].
std::array<double, 4> display_coefficients(AlgorithmKind algo, const StepCoefficients& c) {
  if (algo == AlgorithmKind::CMWU) return {c[0], c[1], -c[2], -c[3]};
  return {c[0], c[1], c[2], c[3]};
}

}  // namespace

std::array<CoefficientSummary, kNumComponents8> coefficient_summary_with_source(
    AlgorithmKind algo, const SourceFactory& make_source, Eigen::Index size, int episodes,
    long tau, std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("coefficient_summary: episodes must be >= 1");
  std::array<CoefficientSummary, kNumComponents8> out{};
  for (int kind_i = 0; kind_i < kNumComponents8; ++kind_i) {
    const auto kind = static_cast<ComponentKind8>(kind_i);
    std::array<double, 4> mean_acc{};
    std::array<std::array<double, 4>, 4> corr_acc{};
    std::array<std::array<int, 4>, 4> corr_count{};
    for (int e = 0; e < episodes; ++e) {
      const std::uint64_t ep_seed =
          derive_seed(seed, {static_cast<std::uint64_t>(kind_i), static_cast<std::uint64_t>(e)});
      MixtureSpec spec;
      spec.base_seed = derive_seed(ep_seed, {23});
      spec.picks = {{kind, 1.0}};
      const BimatrixGame game = mixture_game(spec, size);
      const GameSignature sig = signature(game);
      const JointStrategy init = random_init(size, size, derive_seed(ep_seed, {29}));
      const CoefficientSource source = make_source(game, sig, derive_seed(ep_seed, {7}));

      std::array<std::vector<double>, 4> series;
      for (auto& s : series) s.reserve(static_cast<std::size_t>(tau));
      DynamicsState st = DynamicsState::initial(init);
      for (long t = 0; t < tau; ++t) {
        const StepCoefficients c = source(st);
        const auto disp = display_coefficients(algo, c);
        for (int k = 0; k < 4; ++k) series[static_cast<std::size_t>(k)].push_back(disp[static_cast<std::size_t>(k)]);
        st = step(algo, game, st, c);
      }
      for (int k = 0; k < 4; ++k) {
        double m = 0.0;
        for (double v : series[static_cast<std::size_t>(k)]) m += v;
        mean_acc[static_cast<std::size_t>(k)] += m / static_cast<double>(tau);
      }
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          double r = 0.0;
          if (pearson(series[static_cast<std::size_t>(i)], series[static_cast<std::size_t>(j)], r)) {
            corr_acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += r;
            corr_count[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += 1;
          }
        }
      }
    }
    CoefficientSummary& summary = out[static_cast<std::size_t>(kind_i)];
    for (int k = 0; k < 4; ++k) {
      summary.means[static_cast<std::size_t>(k)] = mean_acc[static_cast<std::size_t>(k)] / episodes;
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (corr_count[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0) {
          summary.corr[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              corr_acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] /
              corr_count[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          summary.corr_defined[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
        }
      }
    }
  }
  return out;
}

std::array<CoefficientSummary, kNumComponents8> coefficient_summary(
    const MlpPolicy& policy, const GameDistribution& dist, int episodes, long tau,
    std::uint64_t seed) {
  const SourceFactory factory = [&policy](const BimatrixGame& g, const GameSignature& sig,
                                          std::uint64_t) {
    return policy_source(policy, g, sig, /*stochastic=*/false);
  };
  return coefficient_summary_with_source(policy.algo, factory, dist.size, episodes, tau, seed);
}

}  // namespace gamesig
