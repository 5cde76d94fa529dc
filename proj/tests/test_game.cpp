#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gamesig/game.hpp"
#include "gamesig/generators.hpp"
#include "gamesig/rng.hpp"
#include "oracles.hpp"

using namespace gamesig;

namespace {

BimatrixGame rps() { return named_game("rps"); }

JointStrategy uniform_joint(Eigen::Index n, Eigen::Index m) {
  return {SimplexVector::uniform(n), SimplexVector::uniform(m)};
}

}  // namespace

TEST_CASE("payoffs") {
  const BimatrixGame g = rps();

  SUBCASE("uniform strategies on an antisymmetric game") {
    const auto [u1, u2] = payoffs(g, uniform_joint(3, 3));
    CHECK(u1 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(u2 == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("pure strategies index entries") {
    const JointStrategy s{SimplexVector::vertex(3, 0), SimplexVector::vertex(3, 1)};
    const auto [u1, u2] = payoffs(g, s);
    CHECK(u1 == -1.0);
    CHECK(u2 == 1.0);
  }

  SUBCASE("mean over entries") {
    Matrix a(2, 2);
    a << 1, 2, 3, 4;
    const BimatrixGame mean_game(a, a);
    const auto [u1, u2] = payoffs(mean_game, uniform_joint(2, 2));
    CHECK(u1 == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(u2 == doctest::Approx(2.5).epsilon(1e-15));
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(payoffs(g, uniform_joint(2, 3)), std::invalid_argument);
  }
}

TEST_CASE("best_response_gaps") {
  const BimatrixGame g = rps();

  SUBCASE("uniform joint strategy is the RPS equilibrium") {
    const Gaps gp = best_response_gaps(g, uniform_joint(3, 3));
    CHECK(std::abs(gp.d1) < 1e-15);
    CHECK(std::abs(gp.d2) < 1e-15);
    CHECK(std::abs(gp.d) < 1e-15);
  }

  SUBCASE("both players at rock") {
    // Ay = (0, 1, -1), x'B = (0, 1, -1), both payoffs 0.
    const JointStrategy s{SimplexVector::vertex(3, 0), SimplexVector::vertex(3, 0)};
    const Gaps gp = best_response_gaps(g, s);
    CHECK(gp.d1 == 1.0);
    CHECK(gp.d2 == 1.0);
    CHECK(gp.d == 2.0);
  }

  SUBCASE("gaps are never negative") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const BimatrixGame game = random_game(4, 6, seed);
      const JointStrategy s = random_init(4, 6, seed + 1000);
      const Gaps gp = best_response_gaps(game, s);
      CHECK(gp.d1 >= -1e-12);
      CHECK(gp.d2 >= -1e-12);
    }
  }
}

TEST_CASE("softmax_project") {
  SUBCASE("equal logits") {
    const SimplexVector p = softmax_project(Vector::Zero(3));
    for (int i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }

  SUBCASE("log weights") {
    Vector v(3);
    v << std::log(1.0), std::log(2.0), std::log(3.0);
    const SimplexVector p = softmax_project(v);
    CHECK(p[0] == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(2.0 / 6).epsilon(1e-14));
    CHECK(p[2] == doctest::Approx(3.0 / 6).epsilon(1e-14));
  }

  SUBCASE("large logits do not overflow; matches extended-precision oracle") {
    Vector v(2);
    v << 1000.0, 0.0;
    const SimplexVector p = softmax_project(v);
    const Vector expected = oracles::softmax_longdouble(v);
    CHECK(std::isfinite(p[0]));
    CHECK(p[0] == doctest::Approx(expected[0]).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(expected[1]).epsilon(1e-14));
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("oracle agreement on random vectors") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      Vector v(5);
      for (int i = 0; i < 5; ++i) v[i] = 10.0 * rng.uniform_pm1();
      const SimplexVector p = softmax_project(v);
      const Vector expected = oracles::softmax_longdouble(v);
      for (int i = 0; i < 5; ++i) CHECK(p[i] == doctest::Approx(expected[i]).epsilon(1e-13));
    }
  }

  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(softmax_project(Vector()), std::invalid_argument);
  }
}

TEST_CASE("l2_simplex_project") {
  SUBCASE("fixed points and vertices") {
    Vector v(2);
    v << 0.5, 0.5;
    const SimplexVector p = l2_simplex_project(v);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));

    v << 2.0, 0.0;
    const SimplexVector q = l2_simplex_project(v);
    CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q[1] == doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("interior KKT case by hand") {
    Vector v(2);
    v << 0.8, 0.4;
    const SimplexVector p = l2_simplex_project(v);
    CHECK(p[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.3).epsilon(1e-15));
  }

  SUBCASE("agrees with brute-force support enumeration") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 2 + static_cast<int>(rng.below(6));
      Vector v(k);
      for (int i = 0; i < k; ++i) v[i] = 3.0 * rng.uniform_pm1();
      const SimplexVector p = l2_simplex_project(v);
      const Vector expected = oracles::l2_project_bruteforce(v);
      for (int i = 0; i < k; ++i) CHECK(p[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
  }

  SUBCASE("idempotent on simplex points") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
      Vector raw(6);
      for (int i = 0; i < 6; ++i) raw[i] = rng.uniform_pm1();
      const SimplexVector p = softmax_project(raw);
      const SimplexVector q = l2_simplex_project(p.weights());
      for (int i = 0; i < 6; ++i) CHECK(std::abs(q[i] - p[i]) < 1e-12);
    }
  }

  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(l2_simplex_project(Vector()), std::invalid_argument);
  }
}

TEST_CASE("projections return valid simplex vectors at extreme magnitudes") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(7));
    Vector v(k);
    for (int i = 0; i < k; ++i) v[i] = 1e6 * rng.uniform_pm1();
    for (const SimplexVector& p : {softmax_project(v), l2_simplex_project(v)}) {
      CHECK(p.weights().minCoeff() >= 0.0);
      CHECK(std::abs(p.weights().sum() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("simplex_hessians") {
  SUBCASE("RPS Hy at uniform y is (1/3)(3I - J)") {
    const BimatrixGame g = rps();
    const auto [hx, hy] = simplex_hessians(g, uniform_joint(3, 3));
    Matrix expected(3, 3);
    expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    expected /= 3.0;
    CHECK((hy - expected).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("vertex strategy selects one row") {
    const BimatrixGame g = random_game(4, 3, 99);
    const JointStrategy s{SimplexVector::vertex(4, 2), SimplexVector::uniform(3)};
    const auto [hx, hy] = simplex_hessians(g, s);
    const Matrix expected = g.A.row(2).transpose() * g.A.row(2);
    CHECK((hx - expected).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("symmetric and PSD on random games") {
    SplitMix64 rng(23);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const BimatrixGame g = random_game(5, 4, seed);
      const JointStrategy s = random_init(5, 4, seed + 500);
      const auto [hx, hy] = simplex_hessians(g, s);
      CHECK((hx - hx.transpose()).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((hy - hy.transpose()).cwiseAbs().maxCoeff() < 1e-14);
      for (int probe = 0; probe < 20; ++probe) {
        Vector zx(hx.rows()), zy(hy.rows());
        for (Eigen::Index i = 0; i < zx.size(); ++i) zx[i] = rng.uniform_pm1();
        for (Eigen::Index i = 0; i < zy.size(); ++i) zy[i] = rng.uniform_pm1();
        CHECK(zx.dot(hx * zx) >= -1e-10);
        CHECK(zy.dot(hy * zy) >= -1e-10);
      }
    }
  }
}

TEST_CASE("support") {
  SUBCASE("examples") {
    Vector w(3);
    w << 0.5, 0.5, 0.0;
    CHECK(support(SimplexVector(w), 1e-9).indices == std::vector<int>{0, 1});
    CHECK(support(SimplexVector::uniform(3), 1e-9).indices == std::vector<int>{0, 1, 2});
    Vector v(2);
    v << 1e-12, 1.0 - 1e-12;
    CHECK(support(SimplexVector(v), 1e-9).indices == std::vector<int>{1});
  }

  SUBCASE("tolerance must be positive") {
    CHECK_THROWS_AS(support(SimplexVector::uniform(2), 0.0), std::invalid_argument);
  }
}

TEST_CASE("SimplexVector invariants") {
  Vector bad(2);
  bad << 0.6, 0.6;
  CHECK_THROWS_AS(SimplexVector{bad}, std::invalid_argument);
  bad << -0.1, 1.1;
  CHECK_THROWS_AS(SimplexVector{bad}, std::invalid_argument);
  CHECK_THROWS_AS(BimatrixGame(Matrix::Zero(2, 2), Matrix::Zero(3, 2)), std::invalid_argument);
}
