#include "gamesig/analysis.hpp"

#include <stdexcept>

namespace gamesig {

ConvergenceScore beta_from_gaps(const std::vector<Gaps>& gaps, long tau) {
  if (tau < 1) throw std::invalid_argument("beta_metric: tau must be >= 1");
  if (static_cast<long>(gaps.size()) < tau + 1) {
    throw std::invalid_argument("beta_metric: trajectory shorter than tau + 1");
  }
  const double delta0 = gaps[0].d;
  if (!(delta0 > 0.0)) {
    throw std::invalid_argument("beta_metric: started at equilibrium (delta0 = 0)");
  }
  double sum = 0.0;
  for (long t = 1; t <= tau; ++t) {
    sum += gaps[static_cast<std::size_t>(t)].d / delta0;
  }
  ConvergenceScore score;
  score.beta = 100.0 * sum / static_cast<double>(tau);
  score.tau = tau;
  score.delta0 = delta0;
  return score;
}

ConvergenceScore beta_metric(const Trajectory& traj, long tau) {
  return beta_from_gaps(traj.gaps, tau);
}

JointStrategy approximate_ne_zero_sum(const Matrix& a, long iters, double h) {
  if (iters < 1) throw std::invalid_argument("approximate_ne_zero_sum: iters must be >= 1");
  const BimatrixGame g = BimatrixGame::zero_sum(a);
  const Eigen::Index n = g.rows();
  const Eigen::Index m = g.cols();
  DynamicsState st =
      DynamicsState::initial({SimplexVector::uniform(n), SimplexVector::uniform(m)});
  const StepCoefficients c = vanilla_coefficients(AlgorithmKind::MWU, h);
  Vector xsum = Vector::Zero(n);
  Vector ysum = Vector::Zero(m);
  for (long t = 0; t < iters; ++t) {
    st = step(AlgorithmKind::MWU, g, st, c);
    xsum += st.current.x.weights();
    ysum += st.current.y.weights();
  }
  return JointStrategy{normalize_to_simplex(xsum / static_cast<double>(iters)),
                       normalize_to_simplex(ysum / static_cast<double>(iters))};
}

double zero_sum_value(const Matrix& a, const JointStrategy& ne) {
  if (ne.x.dim() != a.rows() || ne.y.dim() != a.cols()) {
    throw std::invalid_argument("zero_sum_value: dimension mismatch");
  }
  return ne.x.weights().dot(a * ne.y.weights());
}

}  // namespace gamesig
