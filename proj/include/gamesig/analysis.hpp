#pragma once

#include "gamesig/dynamics.hpp"
#include "gamesig/game.hpp"

namespace gamesig {

// Trajectory-averaged best-response gap relative to the start, in percent:
// beta = 100 * tau^-1 * sum_{t=1..tau} delta_t / delta_0.
struct ConvergenceScore {
  double beta = 0.0;
  long tau = 0;
  double delta0 = 0.0;
};

ConvergenceScore beta_metric(const Trajectory& traj, long tau);

// Same metric straight from a gap sequence (gaps[0] is the start).
ConvergenceScore beta_from_gaps(const std::vector<Gaps>& gaps, long tau);

// Test-grade approximate NE for the zero-sum game (A, -A): running average
// of MWU iterates from the uniform start. Callers judge quality through
// best_response_gaps.
JointStrategy approximate_ne_zero_sum(const Matrix& a, long iters, double h = 0.05);

// x*' A y*.
double zero_sum_value(const Matrix& a, const JointStrategy& ne);

}  // namespace gamesig
