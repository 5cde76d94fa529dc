#include "gamesig/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gamesig {

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& context) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw std::invalid_argument(context + ": expected a 2D numeric array");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(j.size());
  const Eigen::Index m = static_cast<Eigen::Index>(j[0].size());
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(i)].size()) != m) {
      throw std::invalid_argument(context + ": ragged rows");
    }
    for (Eigen::Index jj = 0; jj < m; ++jj) {
      const auto& cell = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)];
      if (!cell.is_number()) throw std::invalid_argument(context + ": non-numeric entry");
      out(i, jj) = cell.get<double>();
    }
  }
  return out;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

nlohmann::json game_to_json(const BimatrixGame& g) {
  nlohmann::json j;
  j["A"] = matrix_to_json(g.A);
  j["B"] = matrix_to_json(g.B);
  return j;
}

BimatrixGame game_from_json(const nlohmann::json& j, const std::string& context) {
  if (!j.contains("A")) throw std::invalid_argument(context + ": missing \"A\"");
  Matrix a = matrix_from_json(j["A"], context + " [A]");
  if (j.contains("B")) {
    Matrix b = matrix_from_json(j["B"], context + " [B]");
    return BimatrixGame(std::move(a), std::move(b));
  }
  return BimatrixGame::zero_sum(std::move(a));
}

BimatrixGame read_game(const std::string& path, nlohmann::json* meta_out) {
  const nlohmann::json j = read_json_file(path);
  if (meta_out && j.contains("meta")) *meta_out = j["meta"];
  return game_from_json(j, path);
}

void write_game(const std::string& path, const BimatrixGame& g,
                const std::optional<nlohmann::json>& meta) {
  nlohmann::json j = game_to_json(g);
  if (meta) j["meta"] = *meta;
  write_json_file(path, j);
}

void write_signature(const std::string& path, const GameSignature& sig) {
  nlohmann::json j;
  for (int i = 0; i < kNumComponents8; ++i) {
    j[component8_name(static_cast<ComponentKind8>(i))] = sig.weights[static_cast<std::size_t>(i)];
  }
  write_json_file(path, j);
}

void save_policy(const std::string& path, const MlpPolicy& policy) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["feature_layout_version"] = kFeatureLayoutVersion;
  j["feature_scaling"] = kFeatureScaling;
  j["algo"] = algorithm_name(policy.algo);
  j["variant"] = variant_name(policy.variant);
  j["game_size"] = policy.game_size;
  nlohmann::json layers = nlohmann::json::array();
  layers.push_back(policy.input_dim());
  for (const auto& w : policy.weights) layers.push_back(w.rows());
  j["layers"] = layers;
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t l = 0; l < policy.weights.size(); ++l) {
    weights.push_back(matrix_to_json(policy.weights[l]));
    nlohmann::json b = nlohmann::json::array();
    for (Eigen::Index i = 0; i < policy.biases[l].size(); ++i) b.push_back(policy.biases[l][i]);
    biases.push_back(std::move(b));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  nlohmann::json ls = nlohmann::json::array();
  for (Eigen::Index i = 0; i < policy.log_std.size(); ++i) ls.push_back(policy.log_std[i]);
  j["log_std"] = std::move(ls);
  write_json_file(path, j);
}

MlpPolicy load_policy(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  if (!j.contains("format_version") || j["format_version"].get<int>() != 1) {
    throw std::invalid_argument(path + ": unsupported policy format version");
  }
  if (j["feature_layout_version"].get<int>() != kFeatureLayoutVersion) {
    throw std::invalid_argument(path + ": feature layout version mismatch");
  }
  MlpPolicy p;
  p.algo = algorithm_from_name(j["algo"].get<std::string>());
  p.variant = variant_from_name(j["variant"].get<std::string>());
  p.game_size = j["game_size"].get<Eigen::Index>();
  for (const auto& w : j["weights"]) {
    p.weights.push_back(matrix_from_json(w, path + " [weights]"));
  }
  for (const auto& b : j["biases"]) {
    Vector v(static_cast<Eigen::Index>(b.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = b[static_cast<std::size_t>(i)].get<double>();
    p.biases.push_back(std::move(v));
  }
  const auto& ls = j["log_std"];
  p.log_std.resize(static_cast<Eigen::Index>(ls.size()));
  for (Eigen::Index i = 0; i < p.log_std.size(); ++i) {
    p.log_std[i] = ls[static_cast<std::size_t>(i)].get<double>();
  }
  if (p.weights.size() != 3 || p.biases.size() != 3 ||
      p.input_dim() != feature_size(p.game_size) ||
      p.output_dim() != policy_output_dim(p.variant, p.algo)) {
    throw std::invalid_argument(path + ": inconsistent policy shapes");
  }
  return p;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace gamesig
