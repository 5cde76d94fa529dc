#include "gamesig/decomposition.hpp"

#include <cmath>
#include <stdexcept>

namespace gamesig {

namespace {

// rowmean_i + colmean_j - grandmean, broadcast to the full shape. Fixed
// points of this map are exactly the additive matrices M_ij = a_i + b_j.
Matrix additive_part(const Matrix& m) {
  const double n = static_cast<double>(m.rows());
  const double k = static_cast<double>(m.cols());
  const Vector row_means = m.rowwise().mean();
  const Eigen::RowVectorXd col_means = m.colwise().mean();
  const double grand = m.sum() / (n * k);
  Matrix out(m.rows(), m.cols());
  out = row_means.replicate(1, m.cols());
  out += col_means.replicate(m.rows(), 1);
  out.array() -= grand;
  return out;
}

void require_square(const BimatrixGame& g, const char* what) {
  if (g.rows() != g.cols()) {
    throw std::invalid_argument(std::string(what) + ": requires a square game (n = m)");
  }
}

}  // namespace

const char* component8_name(ComponentKind8 k) {
  switch (k) {
    case ComponentKind8::ZST: return "ZST";
    case ComponentKind8::ZSCy: return "ZSCy";
    case ComponentKind8::ZAT: return "ZAT";
    case ComponentKind8::ZACy: return "ZACy";
    case ComponentKind8::CST: return "CST";
    case ComponentKind8::CSCy: return "CSCy";
    case ComponentKind8::CAT: return "CAT";
    case ComponentKind8::CACy: return "CACy";
  }
  throw std::invalid_argument("component8_name: bad kind");
}

const char* component4_name(ComponentKind4 k) {
  switch (k) {
    case ComponentKind4::ZT: return "ZT";
    case ComponentKind4::ZCy: return "ZCy";
    case ComponentKind4::CT: return "CT";
    case ComponentKind4::CCy: return "CCy";
  }
  throw std::invalid_argument("component4_name: bad kind");
}

ComponentKind8 component8_from_name(const std::string& name) {
  for (int i = 0; i < kNumComponents8; ++i) {
    const auto k = static_cast<ComponentKind8>(i);
    if (name == component8_name(k)) return k;
  }
  throw std::invalid_argument("unknown component kind: " + name);
}

ComponentKind4 component4_from_name(const std::string& name) {
  for (int i = 0; i < kNumComponents4; ++i) {
    const auto k = static_cast<ComponentKind4>(i);
    if (name == component4_name(k)) return k;
  }
  throw std::invalid_argument("unknown component kind: " + name);
}

BimatrixGame apply_projector(ProjectorKind kind, const BimatrixGame& g) {
  switch (kind) {
    case ProjectorKind::ZeroSum:
      return BimatrixGame(0.5 * (g.A - g.B), 0.5 * (g.B - g.A));
    case ProjectorKind::Cooperative:
      return BimatrixGame(0.5 * (g.A + g.B), 0.5 * (g.A + g.B));
    case ProjectorKind::Symmetric:
      require_square(g, "Symmetric projector");
      return BimatrixGame(0.5 * (g.A + g.B.transpose()), 0.5 * (g.B + g.A.transpose()));
    case ProjectorKind::Antisymmetric:
      require_square(g, "Antisymmetric projector");
      return BimatrixGame(0.5 * (g.A - g.B.transpose()), 0.5 * (g.B - g.A.transpose()));
    case ProjectorKind::Transitive:
      return BimatrixGame(additive_part(g.A), additive_part(g.B));
    case ProjectorKind::Cyclic:
      return BimatrixGame(g.A - additive_part(g.A), g.B - additive_part(g.B));
  }
  throw std::invalid_argument("apply_projector: bad kind");
}

std::array<BimatrixGame, kNumComponents4> decompose4(const BimatrixGame& g) {
  const BimatrixGame z = apply_projector(ProjectorKind::ZeroSum, g);
  const BimatrixGame c = apply_projector(ProjectorKind::Cooperative, g);
  return {
      apply_projector(ProjectorKind::Transitive, z),  // ZT
      apply_projector(ProjectorKind::Cyclic, z),      // ZCy
      apply_projector(ProjectorKind::Transitive, c),  // CT
      apply_projector(ProjectorKind::Cyclic, c),      // CCy
  };
}

std::array<BimatrixGame, kNumComponents8> decompose8(const BimatrixGame& g) {
  require_square(g, "decompose8");
  const BimatrixGame z = apply_projector(ProjectorKind::ZeroSum, g);
  const BimatrixGame c = apply_projector(ProjectorKind::Cooperative, g);
  const BimatrixGame zs = apply_projector(ProjectorKind::Symmetric, z);
  const BimatrixGame za = apply_projector(ProjectorKind::Antisymmetric, z);
  const BimatrixGame cs = apply_projector(ProjectorKind::Symmetric, c);
  const BimatrixGame ca = apply_projector(ProjectorKind::Antisymmetric, c);
  return {
      apply_projector(ProjectorKind::Transitive, zs),  // ZST
      apply_projector(ProjectorKind::Cyclic, zs),      // ZSCy
      apply_projector(ProjectorKind::Transitive, za),  // ZAT
      apply_projector(ProjectorKind::Cyclic, za),      // ZACy
      apply_projector(ProjectorKind::Transitive, cs),  // CST
      apply_projector(ProjectorKind::Cyclic, cs),      // CSCy
      apply_projector(ProjectorKind::Transitive, ca),  // CAT
      apply_projector(ProjectorKind::Cyclic, ca),      // CACy
  };
}

double game_norm(const BimatrixGame& g) {
  return 0.5 * (g.A.norm() + g.B.norm());
}

GameSignature signature(const BimatrixGame& g) {
  require_square(g, "signature");
  const auto components = decompose8(g);
  GameSignature sig;
  double total = 0.0;
  for (int i = 0; i < kNumComponents8; ++i) {
    sig.weights[i] = game_norm(components[i]);
    total += sig.weights[i];
  }
  if (total == 0.0) {
    throw std::invalid_argument("signature: undefined for the zero game");
  }
  for (double& w : sig.weights) w /= total;
  return sig;
}

}  // namespace gamesig
