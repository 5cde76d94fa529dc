#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gamesig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerance for the sum-to-one invariant of mixed strategies.
inline constexpr double kSimplexSumTol = 1e-12;

// Raised when an iteration produces non-finite intermediates; carries the
// step index at which the failure occurred.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, long step_index)
      : std::runtime_error(what + " at step " + std::to_string(step_index)),
        step_index_(step_index) {}
  long step_index() const { return step_index_; }

 private:
  long step_index_;
};

void validate_payoff_matrix(const Matrix& m, const char* name);

// Mixed strategy: nonnegative weights summing to one (within kSimplexSumTol).
class SimplexVector {
 public:
  explicit SimplexVector(Vector weights);

  static SimplexVector uniform(Eigen::Index dim);
  static SimplexVector vertex(Eigen::Index dim, Eigen::Index k);

  const Vector& weights() const { return w_; }
  Eigen::Index dim() const { return w_.size(); }
  double operator[](Eigen::Index i) const { return w_[i]; }

 private:
  Vector w_;
};

// Rescale a nonnegative-up-to-noise vector onto the simplex. Used where
// accumulated rounding (e.g. long running averages) may exceed
// kSimplexSumTol; tiny negative entries are clamped to zero.
SimplexVector normalize_to_simplex(Vector v);

// Two-player game in normal form: A is player 1's payoff, B player 2's,
// both n x m. Entries must be finite.
struct BimatrixGame {
  Matrix A;
  Matrix B;

  BimatrixGame(Matrix a, Matrix b);
  static BimatrixGame zero_sum(Matrix a);

  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index cols() const { return A.cols(); }
};

struct JointStrategy {
  SimplexVector x;  // player 1, dim = rows
  SimplexVector y;  // player 2, dim = cols
};

// Best-response gaps: d1 = max_i [Ay]_i - x'Ay, d2 = max_j [x'B]_j - x'By,
// d = d1 + d2. The joint strategy is a Nash equilibrium iff d = 0.
struct Gaps {
  double d1 = 0.0;
  double d2 = 0.0;
  double d = 0.0;
};

struct Support {
  std::vector<int> indices;  // strictly increasing
  double tol = 1e-9;
};

void check_dims(const BimatrixGame& g, const JointStrategy& s);

// Expected payoffs (x'Ay, x'By).
std::pair<double, double> payoffs(const BimatrixGame& g, const JointStrategy& s);

Gaps best_response_gaps(const BimatrixGame& g, const JointStrategy& s);

// exp(v_i - max v) / sum_k exp(v_k - max v); max subtraction keeps the
// exponentials finite for any finite input.
SimplexVector softmax_project(const Vector& v);

// Euclidean projection onto the unit simplex by sort-and-threshold,
// O(k log k).
SimplexVector l2_simplex_project(const Vector& v);

// Simplex-Hessians Hx = A' diag(x) A (m x m), Hy = B diag(y) B' (n x n).
// Both are symmetric positive semidefinite.
std::pair<Matrix, Matrix> simplex_hessians(const BimatrixGame& g,
                                           const JointStrategy& s);

// Indices with weight strictly above tol.
Support support(const SimplexVector& v, double tol = 1e-9);

}  // namespace gamesig
