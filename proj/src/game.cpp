#include "gamesig/game.hpp"

#include <algorithm>
#include <cmath>

namespace gamesig {

void validate_payoff_matrix(const Matrix& m, const char* name) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw std::invalid_argument(std::string(name) + ": payoff matrix must be at least 1x1");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(name) + ": payoff matrix has non-finite entries");
  }
}

SimplexVector::SimplexVector(Vector weights) : w_(std::move(weights)) {
  if (w_.size() == 0) throw std::invalid_argument("SimplexVector: empty vector");
  if (!w_.allFinite()) throw std::invalid_argument("SimplexVector: non-finite weights");
  if ((w_.array() < 0.0).any()) {
    throw std::invalid_argument("SimplexVector: negative weight");
  }
  if (std::abs(w_.sum() - 1.0) > kSimplexSumTol) {
    throw std::invalid_argument("SimplexVector: weights sum to " + std::to_string(w_.sum()) +
                                ", expected 1");
  }
}

SimplexVector SimplexVector::uniform(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("SimplexVector::uniform: dim < 1");
  return SimplexVector(Vector::Constant(dim, 1.0 / static_cast<double>(dim)));
}

SimplexVector SimplexVector::vertex(Eigen::Index dim, Eigen::Index k) {
  if (dim < 1 || k < 0 || k >= dim) {
    throw std::invalid_argument("SimplexVector::vertex: index out of range");
  }
  Vector w = Vector::Zero(dim);
  w[k] = 1.0;
  return SimplexVector(std::move(w));
}

SimplexVector normalize_to_simplex(Vector v) {
  if (v.size() == 0) throw std::invalid_argument("normalize_to_simplex: empty vector");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) {
      if (v[i] < -1e-9) {
        throw std::invalid_argument("normalize_to_simplex: significantly negative entry");
      }
      v[i] = 0.0;
    }
  }
  const double s = v.sum();
  if (!(s > 0.0)) throw std::invalid_argument("normalize_to_simplex: zero mass");
  return SimplexVector(v / s);
}

BimatrixGame::BimatrixGame(Matrix a, Matrix b) : A(std::move(a)), B(std::move(b)) {
  validate_payoff_matrix(A, "A");
  validate_payoff_matrix(B, "B");
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw std::invalid_argument("BimatrixGame: A and B must have identical dimensions");
  }
}

BimatrixGame BimatrixGame::zero_sum(Matrix a) {
  Matrix b = -a;
  return BimatrixGame(std::move(a), std::move(b));
}

void check_dims(const BimatrixGame& g, const JointStrategy& s) {
  if (s.x.dim() != g.rows() || s.y.dim() != g.cols()) {
    throw std::invalid_argument("strategy dimensions do not match the game");
  }
}

std::pair<double, double> payoffs(const BimatrixGame& g, const JointStrategy& s) {
  check_dims(g, s);
  const Vector ay = g.A * s.y.weights();
  const Vector by = g.B * s.y.weights();
  return {s.x.weights().dot(ay), s.x.weights().dot(by)};
}

Gaps best_response_gaps(const BimatrixGame& g, const JointStrategy& s) {
  check_dims(g, s);
  const Vector ay = g.A * s.y.weights();
  const Vector btx = g.B.transpose() * s.x.weights();
  const double u1 = s.x.weights().dot(ay);
  const double u2 = btx.dot(s.y.weights());
  Gaps out;
  out.d1 = ay.maxCoeff() - u1;
  out.d2 = btx.maxCoeff() - u2;
  out.d = out.d1 + out.d2;
  return out;
}

SimplexVector softmax_project(const Vector& v) {
  if (v.size() == 0) throw std::invalid_argument("softmax_project: empty vector");
  if (!v.allFinite()) throw std::invalid_argument("softmax_project: non-finite input");
  const double vmax = v.maxCoeff();
  Vector e = (v.array() - vmax).exp();
  return SimplexVector(e / e.sum());
}

SimplexVector l2_simplex_project(const Vector& v) {
  if (v.size() == 0) throw std::invalid_argument("l2_simplex_project: empty vector");
  if (!v.allFinite()) throw std::invalid_argument("l2_simplex_project: non-finite input");
  const Eigen::Index k = v.size();
  std::vector<double> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    cumsum += u[j];
    const double candidate = (1.0 - cumsum) / static_cast<double>(j + 1);
    if (u[j] + candidate > 0.0) theta = candidate;
  }
  Vector out = (v.array() + theta).max(0.0);
  return SimplexVector(std::move(out));
}

std::pair<Matrix, Matrix> simplex_hessians(const BimatrixGame& g, const JointStrategy& s) {
  check_dims(g, s);
  Matrix hx = g.A.transpose() * s.x.weights().asDiagonal() * g.A;
  Matrix hy = g.B * s.y.weights().asDiagonal() * g.B.transpose();
  return {std::move(hx), std::move(hy)};
}

Support support(const SimplexVector& v, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("support: tol must be positive");
  Support out;
  out.tol = tol;
  for (Eigen::Index i = 0; i < v.dim(); ++i) {
    if (v[i] > tol) out.indices.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace gamesig
