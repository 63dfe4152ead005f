#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "entcalc/config_file.hpp"
#include "entcalc/state_file.hpp"

using namespace entcalc;

namespace {

std::string qubit_doc(const std::string& matrix) {
  return R"({"dims": [2, 1], "matrix": )" + matrix + "}";
}

}  // namespace

TEST_CASE("state files round-trip bit for bit") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix sigma = random_density({2, 2}, 1 + seed % 4, seed);
    const StateFile back = parse_state(format_state(sigma, "s" + std::to_string(seed)));
    CHECK(back.name == "s" + std::to_string(seed));
    CHECK(back.state.dims() == sigma.dims());
    bool identical = true;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        identical = identical && back.state.matrix()(i, j) == sigma.matrix()(i, j);
      }
    }
    CHECK(identical);
  }
  const DensityMatrix q = random_density({2, 3}, 6, 7);
  const StateFile back = parse_state(format_state(q));
  CHECK_FALSE(back.name.has_value());
  CHECK(back.state.dims() == Dims{2, 3});
  CHECK(back.state.matrix().max_abs_diff(q.matrix()) == 0.0);
}

TEST_CASE("state files on disk") {
  const auto path = std::filesystem::temp_directory_path() / "entcalc_test_io_state.json";
  const DensityMatrix w = werner(0.75);
  write_state_file(path.string(), w, "werner");
  const StateFile back = read_state_file(path.string());
  CHECK(back.name == "werner");
  CHECK(back.state.matrix().max_abs_diff(w.matrix()) == 0.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_state_file(path.string()), std::invalid_argument);
  CHECK_THROWS_AS(write_state_file("/nonexistent-dir/x.json", w), std::runtime_error);
}

TEST_CASE("malformed state files fail loudly") {
  const char* bad[] = {
      "not json",
      "[1, 2]",
      R"({"matrix": [[[1, 0]]]})",
      R"({"dims": [2], "matrix": []})",
      R"({"dims": [0, 2], "matrix": []})",
      R"({"dims": [1.5, 2], "matrix": []})",
      R"({"dims": [2, 1], "matrix": [[[1, 0], [0, 0]]]})",
      R"({"dims": [2, 1], "matrix": [[[1, 0]], [[0, 0], [0, 0]]]})",
      R"({"dims": [2, 1], "matrix": [[[1, 0], [0, 0]], [[0, 0], 0]]})",
      R"({"dims": [2, 1], "matrix": [[[1, 0], [0, 0]], [[0, 0], ["x", 0]]]})",
      R"({"dims": [2, 1], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]], "name": 3})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_state(text), std::invalid_argument);
  }
  // Parses, but is not a density matrix.
  CHECK_THROWS_AS(parse_state(qubit_doc("[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_state(qubit_doc("[[[0.5, 0], [0.5, 0]], [[0, 0], [0.5, 0]]]")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_state(qubit_doc("[[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]")),
                  std::invalid_argument);
  try {
    parse_state(R"({"dims": [2, 1], "matrix": [[[1, 0]]]})");
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("2 rows") != std::string::npos);
  }
  CHECK_NOTHROW(parse_state(qubit_doc("[[[0.5, 0], [0, -0.5]], [[0, 0.5], [0.5, 0]]]")));
}

TEST_CASE("optimizer config overlay") {
  const OptimizerConfig c = parse_optimizer_config(
      R"({"restarts": 9, "seed": 42, "gradient_tolerance": 1e-8, "functional": "bures",
          "polish_rounds": 0, "certificate_samples": 16})");
  CHECK(c.restarts == 9);
  CHECK(c.seed == 42);
  CHECK(c.gradient_tolerance == 1e-8);
  CHECK(c.functional == Functional::Bures);
  CHECK(c.polish_rounds == 0);
  CHECK(c.certificate_samples == 16);
  CHECK(c.max_iterations == OptimizerConfig{}.max_iterations);

  OptimizerConfig base;
  base.restarts = 3;
  CHECK(parse_optimizer_config("{}", base).restarts == 3);
  CHECK(parse_optimizer_config(R"({"functional": "ree"})", base).functional ==
        Functional::RelativeEntropy);
}

TEST_CASE("bad optimizer configs are rejected") {
  const char* bad[] = {
      "[]",
      "{",
      R"({"restart": 3})",
      R"({"restarts": "three"})",
      R"({"restarts": 0})",
      R"({"gradient_tolerance": -1})",
      R"({"functional": "trace"})",
      R"({"seed": -1})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_optimizer_config(text), std::invalid_argument);
  }
  CHECK_THROWS_AS(read_optimizer_config("/nonexistent/config.json"), std::invalid_argument);
}
