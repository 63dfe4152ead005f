#include "entcalc/state_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace entcalc {

namespace {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t positive_dim(const json& v, const char* which) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw std::invalid_argument(std::string("state file: ") + which +
                                " dimension must be a positive integer");
  }
  return v.get<std::size_t>();
}

double finite_number(const json& v, std::size_t i, std::size_t j) {
  if (!v.is_number()) {
    throw std::invalid_argument("state file: entry (" + std::to_string(i) + ", " +
                                std::to_string(j) + ") has a non-numeric component");
  }
  return v.get<double>();
}

}  // namespace

StateFile parse_state(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("state file: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("state file: top level must be an object");
  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].size() != 2) {
    throw std::invalid_argument("state file: \"dims\" must be a two-element array");
  }
  const Dims dims{positive_dim(doc["dims"][0], "first"), positive_dim(doc["dims"][1], "second")};
  const std::size_t n = dims.total();
  if (!doc.contains("matrix") || !doc["matrix"].is_array() || doc["matrix"].size() != n) {
    throw std::invalid_argument("state file: \"matrix\" must have " + std::to_string(n) +
                                " rows");
  }
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = doc["matrix"][i];
    if (!row.is_array() || row.size() != n) {
      throw std::invalid_argument("state file: row " + std::to_string(i) + " must have " +
                                  std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const json& z = row[j];
      if (!z.is_array() || z.size() != 2) {
        throw std::invalid_argument("state file: entry (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") must be a [re, im] pair");
      }
      m(i, j) = Complex{finite_number(z[0], i, j), finite_number(z[1], i, j)};
    }
  }
  std::optional<std::string> name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw std::invalid_argument("state file: \"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  try {
    return StateFile{DensityMatrix(std::move(m), dims), name};
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("state file: ") + e.what());
  }
}

StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

std::string format_state(const DensityMatrix& state, const std::optional<std::string>& name) {
  std::ostringstream out;
  out << "{\n";
  if (name) out << "  \"name\": " << json(*name).dump() << ",\n";
  out << "  \"dims\": [" << state.dims().a << ", " << state.dims().b << "],\n";
  out << "  \"matrix\": [\n";
  const std::size_t n = state.dim();
  for (std::size_t i = 0; i < n; ++i) {
    out << "    [";
    for (std::size_t j = 0; j < n; ++j) {
      const Complex z = state.matrix()(i, j);
      out << (j ? ", " : "") << "[" << format_double(z.real()) << ", "
          << format_double(z.imag()) << "]";
    }
    out << "]" << (i + 1 < n ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

void write_state_file(const std::string& path, const DensityMatrix& state,
                      const std::optional<std::string>& name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << format_state(state, name);
}

}  // namespace entcalc
