#pragma once

#include "inqkit/bisim.hpp"
#include "inqkit/model.hpp"
#include "inqkit/relational.hpp"
#include "inqkit/structure.hpp"
#include "inqkit/transform.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace inqkit {

using Json = nlohmann::json;

Json load_json_file(const std::string& path);

// Model file: {"worlds", "agents", "props", "valuation": {p: [w...]},
// "sigma": {a: {w: [[w...], ...]}}}. With `allow_invalid` a model that
// fails the frame conditions is returned unvalidated instead of throwing.
EpistemicModel model_from_json(const Json& j, bool allow_invalid = false);
Json model_to_json(const EpistemicModel& m);

// {"worlds", "agents", "props", "states": [[w...], ...], "E": {a: {w: [i...]}},
// "P": {p: [w...]}}
RelationalModel relational_from_json(const Json& j);
Json relational_to_json(const RelationalModel& r);

// {"sorts": [{"name", "elements": [...]}], "relations": [{"name", "sorts": [...],
// "tuples": [[e...], ...]}], "points": {name: e}}
Structure structure_from_json(const Json& j);
Json structure_to_json(const Structure& s);

// {"blocks": [[[w...], ...], ...]}: blocks as lists of cells.
BlockDecomposition decomposition_from_json(const EpistemicModel& m, const Json& j);
Json decomposition_to_json(const EpistemicModel& m, const BlockDecomposition& d);

Json moves_to_json(const std::vector<Move>& moves);
Json state_to_json(const std::vector<std::string>& worlds, InfoState s);

// Comma-separated world names; the empty string is the empty state.
InfoState parse_state(const EpistemicModel& m, const std::string& text);
std::vector<std::string> split(const std::string& text, char sep);

} // namespace inqkit
