#include "gamesig/dynamics.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gamesig/rng.hpp"

namespace gamesig {

const char* algorithm_name(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::MWU: return "mwu";
    case AlgorithmKind::CMWU: return "cmwu";
    case AlgorithmKind::OMWU: return "omwu";
    case AlgorithmKind::OMD: return "omd";
    case AlgorithmKind::OGDA: return "ogda";
  }
  throw std::invalid_argument("algorithm_name: bad kind");
}

AlgorithmKind algorithm_from_name(const std::string& name) {
  for (AlgorithmKind k : {AlgorithmKind::MWU, AlgorithmKind::CMWU, AlgorithmKind::OMWU,
                          AlgorithmKind::OMD, AlgorithmKind::OGDA}) {
    if (name == algorithm_name(k)) return k;
  }
  throw std::invalid_argument("unknown algorithm: " + name);
}

StepCoefficients vanilla_coefficients(AlgorithmKind kind, double h, double eps) {
  switch (kind) {
    case AlgorithmKind::MWU: return {{h, h, 0.0, 0.0}};
    case AlgorithmKind::CMWU: return {{h, h, h * eps, h * eps}};
    case AlgorithmKind::OMWU: return {{2.0 * h, 2.0 * h, -h, -h}};
    case AlgorithmKind::OMD: return {{h, h, h, h}};
    case AlgorithmKind::OGDA: return {{h, h, h, h}};
  }
  throw std::invalid_argument("vanilla_coefficients: bad kind");
}

DynamicsState DynamicsState::initial(JointStrategy start) {
  DynamicsState st{start, start, start, 0};
  return st;
}

CoefficientSource constant_source(StepCoefficients c) {
  return [c](const DynamicsState&) { return c; };
}

namespace {

// out_i proportional to w_i * exp(e_i). The max exponent over the support of
// w is subtracted before exponentiation; coordinates with zero weight stay
// zero without evaluating exp (their exponent may exceed the guard).
SimplexVector multiplicative_step(const SimplexVector& w, const Vector& e, long step_index) {
  if (!e.allFinite()) {
    throw NumericalError("non-finite exponent in multiplicative update", step_index);
  }
  const Eigen::Index k = w.dim();
  double emax = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (w[i] > 0.0 && e[i] > emax) emax = e[i];
  }
  Vector num = Vector::Zero(k);
  double z = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (w[i] > 0.0) {
      num[i] = w[i] * std::exp(e[i] - emax);
      z += num[i];
    }
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw NumericalError("degenerate normalizer in multiplicative update", step_index);
  }
  return SimplexVector(num / z);
}

SimplexVector additive_projected_step(const SimplexVector& base, const Vector& direction,
                                      double rate, long step_index) {
  Vector u = base.weights() + rate * direction;
  if (!u.allFinite()) {
    throw NumericalError("non-finite iterate in projected update", step_index);
  }
  return l2_simplex_project(u);
}

}  // namespace

DynamicsState step(AlgorithmKind kind, const BimatrixGame& g, const DynamicsState& st,
                   const StepCoefficients& c) {
  check_dims(g, st.current);
  const long t = st.step_index;
  const Vector& x = st.current.x.weights();
  const Vector& y = st.current.y.weights();
  const Vector g1 = g.A * y;              // player 1 gradient
  const Vector g2 = g.B.transpose() * x;  // player 2 gradient

  DynamicsState next = st;
  next.step_index = t + 1;
  next.previous = st.current;

  switch (kind) {
    case AlgorithmKind::MWU: {
      next.current.x = multiplicative_step(st.current.x, c[0] * g1, t);
      next.current.y = multiplicative_step(st.current.y, c[1] * g2, t);
      next.mirror = next.current;
      break;
    }
    case AlgorithmKind::CMWU: {
      // Hessian-vector products Hy x = B diag(y) B' x and Hx y = A' diag(x) A y,
      // formed without materializing the Hessians. When both Hessian
      // coefficients are exactly zero the term is skipped entirely, making
      // CMWU bit-identical to MWU at eps = 0.
      Vector e1 = c[0] * g1;
      Vector e2 = c[1] * g2;
      if (c[2] != 0.0 || c[3] != 0.0) {
        const Vector hyx = g.B * y.cwiseProduct(g2).eval();
        const Vector hxy = g.A.transpose() * x.cwiseProduct(g1).eval();
        e1 -= c[2] * hyx;
        e2 -= c[3] * hxy;
      }
      next.current.x = multiplicative_step(st.current.x, e1, t);
      next.current.y = multiplicative_step(st.current.y, e2, t);
      next.mirror = next.current;
      break;
    }
    case AlgorithmKind::OMWU: {
      const Vector g1_prev = g.A * st.previous.y.weights();
      const Vector g2_prev = g.B.transpose() * st.previous.x.weights();
      next.current.x = multiplicative_step(st.current.x, c[0] * g1 + c[2] * g1_prev, t);
      next.current.y = multiplicative_step(st.current.y, c[1] * g2 + c[3] * g2_prev, t);
      next.mirror = next.current;
      break;
    }
    case AlgorithmKind::OMD: {
      const SimplexVector xh = multiplicative_step(st.current.x, c[0] * g1, t);
      const SimplexVector yh = multiplicative_step(st.current.y, c[1] * g2, t);
      const Vector g1h = g.A * yh.weights();
      const Vector g2h = g.B.transpose() * xh.weights();
      next.current.x = multiplicative_step(st.current.x, c[2] * g1h, t);
      next.current.y = multiplicative_step(st.current.y, c[3] * g2h, t);
      next.mirror = JointStrategy{xh, yh};
      break;
    }
    case AlgorithmKind::OGDA: {
      next.current.x = additive_projected_step(st.mirror.x, g1, c[2], t);
      next.current.y = additive_projected_step(st.mirror.y, g2, c[3], t);
      const Vector g1_new = g.A * next.current.y.weights();
      const Vector g2_new = g.B.transpose() * next.current.x.weights();
      next.mirror.x = additive_projected_step(st.mirror.x, g1_new, c[0], t);
      next.mirror.y = additive_projected_step(st.mirror.y, g2_new, c[1], t);
      break;
    }
  }
  return next;
}

Trajectory run(AlgorithmKind kind, std::shared_ptr<const BimatrixGame> g,
               const SimplexVector& x0, const SimplexVector& y0, long steps,
               const CoefficientSource& source) {
  if (!g) throw std::invalid_argument("run: null game");
  if (steps < 0) throw std::invalid_argument("run: negative step count");
  Trajectory traj;
  traj.game = g;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.gaps.reserve(static_cast<std::size_t>(steps) + 1);
  traj.coefficients_used.reserve(static_cast<std::size_t>(steps));

  DynamicsState st = DynamicsState::initial(JointStrategy{x0, y0});
  traj.states.push_back(st.current);
  traj.gaps.push_back(best_response_gaps(*g, st.current));
  for (long t = 0; t < steps; ++t) {
    const StepCoefficients c = source(st);
    st = step(kind, *g, st, c);
    traj.coefficients_used.push_back(c);
    traj.states.push_back(st.current);
    traj.gaps.push_back(best_response_gaps(*g, st.current));
  }
  return traj;
}

std::vector<Gaps> run_gaps(AlgorithmKind kind, const BimatrixGame& g,
                           const SimplexVector& x0, const SimplexVector& y0, long steps,
                           const CoefficientSource& source) {
  if (steps < 0) throw std::invalid_argument("run_gaps: negative step count");
  std::vector<Gaps> gaps;
  gaps.reserve(static_cast<std::size_t>(steps) + 1);
  DynamicsState st = DynamicsState::initial(JointStrategy{x0, y0});
  gaps.push_back(best_response_gaps(g, st.current));
  for (long t = 0; t < steps; ++t) {
    st = step(kind, g, st, source(st));
    gaps.push_back(best_response_gaps(g, st.current));
  }
  return gaps;
}

bool check_weak_invertibility(const Matrix& m, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("check_weak_invertibility: tol must be positive");
  validate_payoff_matrix(m, "check_weak_invertibility");
  const Eigen::Index k = m.cols();
  if (k == 1) return true;  // Z_1 = {0}
  Matrix bz = Matrix::Zero(k, k - 1);
  for (Eigen::Index i = 0; i < k - 1; ++i) {
    bz(i, i) = 1.0;
    bz(k - 1, i) = -1.0;
  }
  const Matrix mb = m * bz;
  Eigen::JacobiSVD<Matrix> svd(mb);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (!(smax > 0.0)) return false;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * smax) ++rank;
  }
  return rank == k - 1;
}

bool check_regular_ne(const BimatrixGame& g, const JointStrategy& ne, double tol) {
  check_dims(g, ne);
  const Vector ay = g.A * ne.y.weights();
  const Vector atx = g.A.transpose() * ne.x.weights();
  const double v = ne.x.weights().dot(ay);
  for (Eigen::Index i = 0; i < ne.x.dim(); ++i) {
    if (ne.x[i] <= tol && !(ay[i] < v - tol)) return false;
  }
  for (Eigen::Index j = 0; j < ne.y.dim(); ++j) {
    if (ne.y[j] <= tol && !(atx[j] > v + tol)) return false;
  }
  return true;
}

std::pair<Vector, Vector> unconstrained_consensus_step(const BimatrixGame& g, const Vector& x,
                                                       const Vector& y, double h, double eps) {
  if (x.size() != g.rows() || y.size() != g.cols()) {
    throw std::invalid_argument("unconstrained_consensus_step: dimension mismatch");
  }
  const Vector g1 = g.A * y;
  const Vector g2 = g.B.transpose() * x;
  Vector x_next = x + h * g1 - h * eps * (g.B * (g.B.transpose() * x));
  Vector y_next = y + h * g2 - h * eps * (g.A.transpose() * (g.A * y));
  return {std::move(x_next), std::move(y_next)};
}

namespace {

// Reduced coordinates: the first n-1 entries of x followed by the first m-1
// entries of y; the last entry of each block is 1 minus the rest.
Vector reduce_point(const JointStrategy& s) {
  const Eigen::Index n = s.x.dim();
  const Eigen::Index m = s.y.dim();
  Vector u(n - 1 + m - 1);
  u.head(n - 1) = s.x.weights().head(n - 1);
  u.tail(m - 1) = s.y.weights().head(m - 1);
  return u;
}

JointStrategy reconstruct_point(const Vector& u, Eigen::Index n, Eigen::Index m) {
  Vector x(n), y(m);
  x.head(n - 1) = u.head(n - 1);
  x[n - 1] = 1.0 - u.head(n - 1).sum();
  y.head(m - 1) = u.tail(m - 1);
  y[m - 1] = 1.0 - u.tail(m - 1).sum();
  if ((x.array() < 0.0).any() || (y.array() < 0.0).any()) {
    throw std::invalid_argument(
        "update_map_spectral_radius: perturbation left the simplex; "
        "the fixed point must be interior");
  }
  return JointStrategy{SimplexVector(std::move(x)), SimplexVector(std::move(y))};
}

}  // namespace

double update_map_spectral_radius(AlgorithmKind kind, const BimatrixGame& g,
                                  const StepCoefficients& c,
                                  const JointStrategy& fixed_point) {
  check_dims(g, fixed_point);
  const Eigen::Index n = g.rows();
  const Eigen::Index m = g.cols();
  if (n < 2 || m < 2) {
    throw std::invalid_argument("update_map_spectral_radius: game too small");
  }

  const auto apply_map = [&](const Vector& u) {
    const JointStrategy s = reconstruct_point(u, n, m);
    const DynamicsState next = step(kind, g, DynamicsState::initial(s), c);
    return reduce_point(next.current);
  };

  const Vector u0 = reduce_point(fixed_point);
  {
    const Vector moved = apply_map(u0);
    const double move = (moved - u0).lpNorm<Eigen::Infinity>();
    if (move > 1e-8) {
      throw std::invalid_argument(
          "update_map_spectral_radius: input moves by " + std::to_string(move) +
          " under one step; not a fixed point");
    }
  }

  const Eigen::Index d = u0.size();
  const double fd_step = 1e-6;
  Matrix jac(d, d);
  for (Eigen::Index kcol = 0; kcol < d; ++kcol) {
    Vector up = u0;
    Vector dn = u0;
    up[kcol] += fd_step;
    dn[kcol] -= fd_step;
    jac.col(kcol) = (apply_map(up) - apply_map(dn)) / (2.0 * fd_step);
  }

  // Gelfand-style estimate: least-squares slope of log ||J^k v|| over a long
  // window. Robust to complex dominant pairs, where plain Rayleigh quotients
  // oscillate.
  SplitMix64 rng(0x5eedful);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.normal();
  v.normalize();

  const int burn_in = 500;
  const int window = 20000;
  for (int it = 0; it < burn_in; ++it) {
    v = jac * v;
    const double norm = v.norm();
    if (!(norm > 0.0)) return 0.0;
    v /= norm;
  }
  double sum_k = 0.0, sum_k2 = 0.0, sum_log = 0.0, sum_klog = 0.0;
  double cumulative_log = 0.0;
  for (int it = 1; it <= window; ++it) {
    v = jac * v;
    const double norm = v.norm();
    if (!(norm > 0.0)) return 0.0;
    cumulative_log += std::log(norm);
    v /= norm;
    const double k = static_cast<double>(it);
    sum_k += k;
    sum_k2 += k * k;
    sum_log += cumulative_log;
    sum_klog += k * cumulative_log;
  }
  const double nw = static_cast<double>(window);
  const double slope = (nw * sum_klog - sum_k * sum_log) / (nw * sum_k2 - sum_k * sum_k);
  return std::exp(slope);
}

}  // namespace gamesig
