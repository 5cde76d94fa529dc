#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gamesig/game.hpp"

namespace gamesig {

enum class AlgorithmKind { MWU, CMWU, OMWU, OMD, OGDA };

const char* algorithm_name(AlgorithmKind k);
AlgorithmKind algorithm_from_name(const std::string& name);

// Four per-step coefficients; the layout follows the pattern
// (term1 player1, term1 player2, term2 player1, term2 player2):
//   MWU   (h1, h2, unused, unused)
//   CMWU  (h1, h2, h1*eps1, h2*eps2) -- exponent is c1*grad - c3*hessian_term
//   OMWU  (weight on grad_t for p1/p2, weight on grad_{t-1} for p1/p2);
//         vanilla is (2h, 2h, -h, -h)
//   OMD   (mirror rate p1/p2, regular rate p1/p2); the mirror half-step
//         extrapolates, the regular step produces the next iterate
//   OGDA  (mirror rate p1/p2, regular rate p1/p2); mirror rates update the
//         projected accumulators, regular rates produce the iterates
// Coefficients may be negative.
struct StepCoefficients {
  std::array<double, 4> c{};

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

StepCoefficients vanilla_coefficients(AlgorithmKind kind, double h, double eps = 0.0);

// Iteration state. previous is the strategy one step back (OMWU memory);
// mirror holds the OGDA accumulators, or the last OMD extrapolation point.
// At step 0 both equal current.
struct DynamicsState {
  JointStrategy current;
  JointStrategy previous;
  JointStrategy mirror;
  long step_index = 0;

  static DynamicsState initial(JointStrategy start);
};

struct Trajectory {
  std::vector<JointStrategy> states;             // length steps + 1
  std::vector<Gaps> gaps;                        // length steps + 1
  std::vector<StepCoefficients> coefficients_used;  // length steps
  std::shared_ptr<const BimatrixGame> game;
};

// Coefficients to apply given the state about to be stepped.
using CoefficientSource = std::function<StepCoefficients(const DynamicsState&)>;

CoefficientSource constant_source(StepCoefficients c);

// One update of the chosen rule. Multiplicative rules guard against overflow
// by subtracting the per-player max exponent over the support, which leaves
// the renormalized result unchanged in exact arithmetic.
DynamicsState step(AlgorithmKind kind, const BimatrixGame& g,
                   const DynamicsState& st, const StepCoefficients& c);

Trajectory run(AlgorithmKind kind, std::shared_ptr<const BimatrixGame> g,
               const SimplexVector& x0, const SimplexVector& y0, long steps,
               const CoefficientSource& source);

// Same stepping arithmetic as run() but records only the gap sequence.
std::vector<Gaps> run_gaps(AlgorithmKind kind, const BimatrixGame& g,
                           const SimplexVector& x0, const SimplexVector& y0,
                           long steps, const CoefficientSource& source);

// True iff Ker(M) contains no nonzero vector with zero coordinate sum,
// computed as rank(M * Bz) = cols - 1 where Bz spans the zero-sum subspace
// (columns e_i - e_last). Singular values below tol * sigma_max count as
// zero. A single-column matrix is vacuously invertible.
bool check_weak_invertibility(const Matrix& m, double tol = 1e-9);

// For a zero-sum game (B = -A) and an approximate NE: every off-support
// coordinate must be strictly suboptimal, i.e. [Ay*]_i < v - tol whenever
// x*_i <= tol and [A'x*]_j > v + tol whenever y*_j <= tol, with v = x*'Ay*.
bool check_regular_ne(const BimatrixGame& g, const JointStrategy& ne, double tol);

// Reference only, not benchmarked: the unconstrained consensus update that
// CMWU transplants onto the simplex. For the bilinear payoffs (x'Ay, x'By)
// on R^n x R^m it reads
//   x <- x + h Ay   - h eps B B'x
//   y <- y + h B'x  - h eps A'A y
// i.e. a gradient ascent step corrected by the unconstrained Hessians BB'
// and A'A (which the simplex setting replaces with B Dy B' and A'Dx A).
std::pair<Vector, Vector> unconstrained_consensus_step(const BimatrixGame& g, const Vector& x,
                                                       const Vector& y, double h, double eps);

// Spectral radius of the one-step update map's Jacobian at a fixed point,
// estimated by central finite differences in simplex-tangent coordinates
// (last coordinate of each block dropped, perturbation 1e-6) followed by
// power iteration with a log-growth fit. Throws if the point moves by more
// than 1e-8 under one step.
double update_map_spectral_radius(AlgorithmKind kind, const BimatrixGame& g,
                                  const StepCoefficients& c,
                                  const JointStrategy& fixed_point);

}  // namespace gamesig
