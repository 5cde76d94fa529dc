#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gamesig/decomposition.hpp"
#include "gamesig/generators.hpp"

using namespace gamesig;

TEST_CASE("random_game") {
  SUBCASE("deterministic per seed") {
    const BimatrixGame g1 = random_game(6, 4, 99);
    const BimatrixGame g2 = random_game(6, 4, 99);
    CHECK(g1.A == g2.A);
    CHECK(g1.B == g2.B);
    const BimatrixGame g3 = random_game(6, 4, 100);
    CHECK(g1.A != g3.A);
  }

  SUBCASE("entries are U[-1,1] with near-zero mean") {
    const BimatrixGame g = random_game(100, 50, 7);  // 10^4 entries
    CHECK(g.A.minCoeff() >= -1.0);
    CHECK(g.A.maxCoeff() <= 1.0);
    CHECK(std::abs(g.A.mean()) < 0.02);
  }

  SUBCASE("1x1 game") {
    const BimatrixGame g = random_game(1, 1, 3);
    CHECK(std::abs(g.A(0, 0)) <= 1.0);
  }
}

TEST_CASE("random_zero_sum") {
  const BimatrixGame g = random_zero_sum(5, 5, 11);
  CHECK((g.A + g.B).cwiseAbs().maxCoeff() == 0.0);

  // Cooperative components vanish exactly for zero-sum games.
  const auto parts = decompose4(g);
  const auto inf_norm = [](const BimatrixGame& h) {
    return std::max(h.A.cwiseAbs().maxCoeff(), h.B.cwiseAbs().maxCoeff());
  };
  CHECK(inf_norm(parts[static_cast<int>(ComponentKind4::CT)]) < 1e-12);
  CHECK(inf_norm(parts[static_cast<int>(ComponentKind4::CCy)]) < 1e-12);

  const BimatrixGame g2 = random_zero_sum(5, 5, 11);
  CHECK(g.A == g2.A);
}

TEST_CASE("random_init") {
  const JointStrategy s = random_init(8, 5, 21);
  CHECK(s.x.dim() == 8);
  CHECK(s.y.dim() == 5);
  CHECK(std::abs(s.x.weights().sum() - 1.0) <= 1e-12);
  // Softmax of bounded logits is strictly interior.
  CHECK(s.x.weights().minCoeff() > 0.0);
  CHECK(s.y.weights().minCoeff() > 0.0);
  CHECK(s.x.weights().minCoeff() > std::exp(-2.0) / (8.0 * std::exp(2.0)) * 0.999);

  const JointStrategy s2 = random_init(8, 5, 21);
  CHECK(s.x.weights() == s2.x.weights());
}

TEST_CASE("mixture_game") {
  SUBCASE("single pick concentrates the signature") {
    const MixtureSpec spec{{{ComponentKind8::ZACy, 1.0}}, 42};
    const BimatrixGame g = mixture_game(spec, 6);
    const GameSignature sig = signature(g);
    CHECK(sig[ComponentKind8::ZACy] > 1.0 - 1e-10);
  }

  SUBCASE("two picks leave no mass on other kinds") {
    const MixtureSpec spec{{{ComponentKind8::ZST, 0.5}, {ComponentKind8::CST, 0.5}}, 43};
    const GameSignature sig = signature(mixture_game(spec, 6));
    for (const ComponentKind8 k :
         {ComponentKind8::ZSCy, ComponentKind8::ZAT, ComponentKind8::ZACy,
          ComponentKind8::CSCy, ComponentKind8::CAT, ComponentKind8::CACy}) {
      CHECK(sig[k] < 1e-10);
    }
    CHECK(sig[ComponentKind8::ZST] + sig[ComponentKind8::CST] > 1.0 - 1e-10);
  }

  SUBCASE("degenerate weights select the first component exactly") {
    const MixtureSpec all{{{ComponentKind8::CSCy, 1.0},
                           {ComponentKind8::ZAT, 0.0},
                           {ComponentKind8::ZST, 0.0}},
                          44};
    const MixtureSpec first{{{ComponentKind8::CSCy, 1.0}}, 44};
    const BimatrixGame g_all = mixture_game(all, 5);
    const BimatrixGame g_first = mixture_game(first, 5);
    CHECK(g_all.A == g_first.A);
    CHECK(g_all.B == g_first.B);
  }

  SUBCASE("decompose8 silence off the picked kinds") {
    const MixtureSpec spec{{{ComponentKind8::ZSCy, 0.25}, {ComponentKind8::CACy, 0.75}}, 45};
    const BimatrixGame g = mixture_game(spec, 7);
    const auto parts = decompose8(g);
    for (int i = 0; i < kNumComponents8; ++i) {
      const auto k = static_cast<ComponentKind8>(i);
      if (k == ComponentKind8::ZSCy || k == ComponentKind8::CACy) continue;
      CHECK(std::max(parts[i].A.cwiseAbs().maxCoeff(), parts[i].B.cwiseAbs().maxCoeff()) <
            1e-10);
    }
  }

  SUBCASE("invalid weights are rejected") {
    CHECK_THROWS_AS(mixture_game({{{ComponentKind8::ZST, 0.4}}, 1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(mixture_game({{{ComponentKind8::ZST, -1.0}, {ComponentKind8::CST, 2.0}}, 1}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(mixture_game({{}, 1}, 4), std::invalid_argument);
  }
}

TEST_CASE("named_game") {
  SUBCASE("rps is antisymmetric and zero-sum") {
    const BimatrixGame g = named_game("rps");
    CHECK((g.A + g.A.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g.A + g.B).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("matching pennies signature sits on ZACy") {
    const GameSignature sig = signature(named_game("matching_pennies"));
    CHECK(sig[ComponentKind8::ZACy] == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("coordination game is cooperative") {
    const BimatrixGame g = named_game("coordination2");
    const auto parts = decompose4(g);
    CHECK(parts[static_cast<int>(ComponentKind4::ZT)].A.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(parts[static_cast<int>(ComponentKind4::ZCy)].A.cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("unknown name") {
    CHECK_THROWS_AS(named_game("chess"), std::invalid_argument);
  }
}
