#pragma once

#include <string>

#include "entcalc/optimizer.hpp"

namespace entcalc {

/// Overlays a JSON object onto `base`. Keys are the OptimizerConfig field
/// names; "functional" takes "ree" or "bures". Unknown keys and ill-typed
/// values throw std::invalid_argument. The result is validated.
OptimizerConfig parse_optimizer_config(const std::string& text, OptimizerConfig base = {});
OptimizerConfig read_optimizer_config(const std::string& path, OptimizerConfig base = {});

}  // namespace entcalc
