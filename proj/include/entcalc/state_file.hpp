#pragma once

#include <optional>
#include <string>

#include "entcalc/states.hpp"

namespace entcalc {

/// JSON state document:
///   {"dims": [dA, dB], "matrix": [[[re, im], ...], ...], "name": "..."}
struct StateFile {
  DensityMatrix state;
  std::optional<std::string> name;
};

/// Parses and validates a state document. Throws std::invalid_argument with a
/// description of the first problem found.
StateFile parse_state(const std::string& text);
StateFile read_state_file(const std::string& path);

/// Serialises with 17 significant digits, so parse_state(format_state(s))
/// reproduces every entry bit for bit.
std::string format_state(const DensityMatrix& state,
                         const std::optional<std::string>& name = std::nullopt);
void write_state_file(const std::string& path, const DensityMatrix& state,
                      const std::optional<std::string>& name = std::nullopt);

}  // namespace entcalc
