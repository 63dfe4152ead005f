#include "entcalc/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <json.hpp>

namespace entcalc {

namespace {

using nlohmann::json;

template <typename T>
void assign(const json& v, const std::string& key, T& field) {
  const bool ok = std::is_integral_v<T> ? v.is_number_integer() : v.is_number();
  if (!ok) throw std::invalid_argument("config: \"" + key + "\" has the wrong type");
  if constexpr (std::is_unsigned_v<T>) {
    if (v.get<long long>() < 0) throw std::invalid_argument("config: \"" + key + "\" must be >= 0");
  }
  field = v.get<T>();
}

}  // namespace

OptimizerConfig parse_optimizer_config(const std::string& text, OptimizerConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "functional") {
      if (!v.is_string()) throw std::invalid_argument("config: \"functional\" must be a string");
      base.functional = functional_from_string(v.get<std::string>());
    } else if (key == "max_iterations") {
      assign(v, key, base.max_iterations);
    } else if (key == "gradient_tolerance") {
      assign(v, key, base.gradient_tolerance);
    } else if (key == "relative_change_tolerance") {
      assign(v, key, base.relative_change_tolerance);
    } else if (key == "initial_step") {
      assign(v, key, base.initial_step);
    } else if (key == "step_shrink") {
      assign(v, key, base.step_shrink);
    } else if (key == "sufficient_decrease") {
      assign(v, key, base.sufficient_decrease);
    } else if (key == "restarts") {
      assign(v, key, base.restarts);
    } else if (key == "seed") {
      assign(v, key, base.seed);
    } else if (key == "finite_difference_step") {
      assign(v, key, base.finite_difference_step);
    } else if (key == "certificate_samples") {
      assign(v, key, base.certificate_samples);
    } else if (key == "log_clamp") {
      assign(v, key, base.log_clamp);
    } else if (key == "polish_rounds") {
      assign(v, key, base.polish_rounds);
    } else if (key == "threads") {
      assign(v, key, base.threads);
    } else {
      throw std::invalid_argument("config: unknown key \"" + key + "\"");
    }
  }
  base.validate();
  return base;
}

OptimizerConfig read_optimizer_config(const std::string& path, OptimizerConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_optimizer_config(buf.str(), base);
}

}  // namespace entcalc
