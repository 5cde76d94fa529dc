#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "gamesig/decomposition.hpp"
#include "gamesig/game.hpp"
#include "gamesig/policy.hpp"

namespace gamesig {

// Game file: {"A": [[...]], "B": [[...]]}. "B" may be omitted for zero-sum
// games (implied B = -A). Extra fields (e.g. "meta") are preserved on read
// via the optional out parameter and ignored otherwise.
BimatrixGame read_game(const std::string& path,
                       nlohmann::json* meta_out = nullptr);
void write_game(const std::string& path, const BimatrixGame& g,
                const std::optional<nlohmann::json>& meta = std::nullopt);

nlohmann::json game_to_json(const BimatrixGame& g);
BimatrixGame game_from_json(const nlohmann::json& j, const std::string& context);

void write_signature(const std::string& path, const GameSignature& sig);

// Versioned policy serialization (JSON): layer sizes, weights, variant,
// algorithm, game size, feature-layout version, scaling scheme.
void save_policy(const std::string& path, const MlpPolicy& policy);
MlpPolicy load_policy(const std::string& path);

// Doubles are printed with %.17g so every CSV re-parses to identical bits.
std::string format_double(double v);

}  // namespace gamesig
