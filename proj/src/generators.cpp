#include "gamesig/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "gamesig/rng.hpp"

namespace gamesig {

namespace {

Matrix random_matrix(Eigen::Index n, Eigen::Index m, SplitMix64& rng) {
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = rng.uniform_pm1();
    }
  }
  return out;
}

Vector random_raw(Eigen::Index k, SplitMix64& rng) {
  Vector out(k);
  for (Eigen::Index i = 0; i < k; ++i) out[i] = rng.uniform_pm1();
  return out;
}

}  // namespace

BimatrixGame random_game(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("random_game: dimensions must be >= 1");
  SplitMix64 rng(seed);
  Matrix a = random_matrix(n, m, rng);
  Matrix b = random_matrix(n, m, rng);
  return BimatrixGame(std::move(a), std::move(b));
}

BimatrixGame random_zero_sum(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("random_zero_sum: dimensions must be >= 1");
  SplitMix64 rng(seed);
  return BimatrixGame::zero_sum(random_matrix(n, m, rng));
}

JointStrategy random_init(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("random_init: dimensions must be >= 1");
  SplitMix64 rng(seed);
  const Vector raw_x = random_raw(n, rng);
  const Vector raw_y = random_raw(m, rng);
  return JointStrategy{softmax_project(raw_x), softmax_project(raw_y)};
}

BimatrixGame mixture_game(const MixtureSpec& spec, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("mixture_game: size must be >= 1");
  if (spec.picks.empty() || spec.picks.size() > 8) {
    throw std::invalid_argument("mixture_game: need between 1 and 8 picks");
  }
  double wsum = 0.0;
  for (const auto& [kind, w] : spec.picks) {
    (void)kind;
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("mixture_game: weights must be nonnegative and finite");
    }
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture_game: weights must sum to 1");
  }
  Matrix a = Matrix::Zero(n, n);
  Matrix b = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < spec.picks.size(); ++k) {
    const auto& [kind, w] = spec.picks[k];
    const std::uint64_t sub = derive_seed(spec.base_seed, {static_cast<std::uint64_t>(k)});
    const BimatrixGame draw = random_game(n, n, sub);
    const auto components = decompose8(draw);
    const BimatrixGame& comp = components[static_cast<std::size_t>(kind)];
    a += w * comp.A;
    b += w * comp.B;
  }
  return BimatrixGame(std::move(a), std::move(b));
}

BimatrixGame named_game(const std::string& name) {
  if (name == "rps") {
    Matrix a(3, 3);
    a << 0, -1, 1,
         1, 0, -1,
         -1, 1, 0;
    return BimatrixGame::zero_sum(std::move(a));
  }
  if (name == "matching_pennies") {
    Matrix a(2, 2);
    a << 1, -1,
         -1, 1;
    return BimatrixGame::zero_sum(std::move(a));
  }
  if (name == "coordination2") {
    Matrix a(2, 2);
    a << 1, 0,
         0, 1;
    return BimatrixGame(a, a);
  }
  throw std::invalid_argument("named_game: unknown name '" + name + "'");
}

}  // namespace gamesig
