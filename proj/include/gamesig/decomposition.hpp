#pragma once

#include <array>
#include <string>

#include "gamesig/game.hpp"

namespace gamesig {

// Idempotent linear operators on the space of bimatrix games:
//   ZeroSum       (A,B) -> ((A-B)/2, (B-A)/2)
//   Cooperative   (A,B) -> ((A+B)/2, (A+B)/2)
//   Symmetric     (A,B) -> ((A+B')/2, (B+A')/2)        [square games only]
//   Antisymmetric (A,B) -> ((A-B')/2, (B-A')/2)        [square games only]
//   Transitive    per matrix M -> rowmean + colmean - grandmean, broadcast
//   Cyclic        id - Transitive
// ZeroSum/Cooperative, Symmetric/Antisymmetric and Transitive/Cyclic are
// complementary pairs (they sum to the identity), and all of them commute.
enum class ProjectorKind {
  ZeroSum,
  Cooperative,
  Symmetric,
  Antisymmetric,
  Transitive,
  Cyclic,
};

// The 8 components of a square bimatrix game, in fixed order. Z/C = zero-sum
// vs cooperative, S/A = symmetric vs antisymmetric, T/Cy = transitive vs
// cyclic. This ordering also fixes the game-signature layout.
enum class ComponentKind8 { ZST, ZSCy, ZAT, ZACy, CST, CSCy, CAT, CACy };

// The 4 components available for games of any shape.
enum class ComponentKind4 { ZT, ZCy, CT, CCy };

inline constexpr int kNumComponents8 = 8;
inline constexpr int kNumComponents4 = 4;

const char* component8_name(ComponentKind8 k);
const char* component4_name(ComponentKind4 k);
ComponentKind8 component8_from_name(const std::string& name);
ComponentKind4 component4_from_name(const std::string& name);

BimatrixGame apply_projector(ProjectorKind kind, const BimatrixGame& g);

// Components indexed by ComponentKind4; their entrywise sum reconstructs g.
std::array<BimatrixGame, kNumComponents4> decompose4(const BimatrixGame& g);

// Components indexed by ComponentKind8; square games only; their entrywise
// sum reconstructs g.
std::array<BimatrixGame, kNumComponents8> decompose8(const BimatrixGame& g);

// (||A||_F + ||B||_F) / 2.
double game_norm(const BimatrixGame& g);

// Normalized norms of the 8 components, in ComponentKind8 order.
struct GameSignature {
  std::array<double, kNumComponents8> weights{};

  double operator[](ComponentKind8 k) const {
    return weights[static_cast<int>(k)];
  }
};

// Square nonzero games only; the zero game has no signature (the
// normalization would divide by zero).
GameSignature signature(const BimatrixGame& g);

}  // namespace gamesig
