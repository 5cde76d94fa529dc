#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gamesig/decomposition.hpp"
#include "gamesig/game.hpp"

namespace gamesig {

// A weighted combination of pure decomposition components. Each pick draws
// its own fresh random game (sub-seed derived from base_seed and the pick
// index), extracts the named component and adds it with the given weight.
// Repeated kinds are allowed; weights are nonnegative and sum to one.
struct MixtureSpec {
  std::vector<std::pair<ComponentKind8, double>> picks;
  std::uint64_t base_seed = 0;
};

// Entries of A and B i.i.d. uniform on [-1, 1], drawn row-major (A first).
BimatrixGame random_game(Eigen::Index n, Eigen::Index m, std::uint64_t seed);

// A ~ U[-1,1], B = -A.
BimatrixGame random_zero_sum(Eigen::Index n, Eigen::Index m, std::uint64_t seed);

// Raw vectors U[-1,1] passed through softmax; always interior.
JointStrategy random_init(Eigen::Index n, Eigen::Index m, std::uint64_t seed);

BimatrixGame mixture_game(const MixtureSpec& spec, Eigen::Index n);

// rps, matching_pennies, coordination2.
BimatrixGame named_game(const std::string& name);

}  // namespace gamesig
