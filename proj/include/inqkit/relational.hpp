#pragma once

#include "inqkit/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inqkit {

// Two-sorted relational model. The second sort is kept extensional: states
// are stored as world sets, duplicate-free and canonically ordered, and ε is
// actual membership.
struct RelationalModel {
  Signature sig;
  std::vector<std::string> worlds;
  std::vector<InfoState> states;
  std::vector<std::vector<std::vector<std::size_t>>> E;  // [agent][world] -> sorted indices into states
  std::vector<InfoState> props;

  std::size_t state_index(InfoState s) const;  // SIZE_MAX when absent
  InfoState R(std::size_t a, std::size_t w) const;
};

enum class EncodingFlavor { minimal, locally_full, full };

EncodingFlavor parse_flavor(const std::string& s);
std::string to_string(EncodingFlavor f);

inline constexpr std::size_t kDefaultFullEncodingCap = 16;

// `allow_invalid` admits models that failed validation and skips the final
// check; nothing else in the toolkit accepts such encodings.
RelationalModel encode(const EpistemicModel& m, EncodingFlavor flavor,
                       std::optional<InfoState> pointed_state = std::nullopt, bool allow_invalid = false,
                       std::size_t full_cap = kDefaultFullEncodingCap);

struct ConditionCheck {
  std::string condition;
  bool ok = true;
  std::string witness;
};

struct RelationalReport {
  std::vector<ConditionCheck> checks;  // the six conditions, in order
  bool locally_full = false;
  bool full = false;
  bool ok() const;
};

RelationalReport validate_relational(const RelationalModel& r);
// Throws InvalidModel unless validate_relational passes.
EpistemicModel decode(const RelationalModel& r);

// Same worlds, same ε, and equal E and P up to the renaming of states that
// preserves extension.
bool same_relational_model(const RelationalModel& a, const RelationalModel& b);

} // namespace inqkit
