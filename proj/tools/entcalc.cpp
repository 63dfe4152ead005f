#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entcalc/analytic.hpp"
#include "entcalc/config_file.hpp"
#include "entcalc/optimizer.hpp"
#include "entcalc/state_file.hpp"
#include "entcalc/verify.hpp"

using namespace entcalc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUncertified = 2;

struct OptimizerFlags {
  std::string config_path;
  int restarts = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = 0.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON optimizer configuration")->check(CLI::ExistingFile);
    cmd->add_option("--restarts", restarts, "Number of restarts")->check(CLI::PositiveNumber);
    cmd->add_option_function<std::uint64_t>(
        "--seed", [this](std::uint64_t s) { seed = s, seed_set = true; }, "Master seed");
    cmd->add_option("--tol", tol, "Gradient tolerance")->check(CLI::PositiveNumber);
  }

  OptimizerConfig build(Functional functional) const {
    OptimizerConfig c;
    c.functional = functional;
    if (!config_path.empty()) c = read_optimizer_config(config_path, c);
    if (restarts > 0) c.restarts = restarts;
    if (seed_set) c.seed = seed;
    if (tol > 0.0) c.gradient_tolerance = tol;
    c.validate();
    return c;
  }
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string nats_text(const Nats& v, bool bits) {
  if (v.infinite) return "inf";
  return bits ? fmt(v.bits()) + " bits" : fmt(v.value) + " nats";
}

void print_matrix(std::ostream& out, const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    out << "  ";
    for (std::size_t j = 0; j < m.dim(); ++j) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%+.6f%+.6fi", j ? "  " : "", m(i, j).real(),
                    m(i, j).imag());
      out << buf;
    }
    out << "\n";
  }
}

std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return &std::cout;
  file.open(path);
  if (!file) throw std::invalid_argument("cannot write '" + path + "'");
  return &file;
}

int cmd_measure(const std::string& path, Functional functional, const OptimizerFlags& flags,
                bool bits, const std::string& out_path) {
  const StateFile input = read_state_file(path);
  const MeasureResult r = minimize(input.state, flags.build(functional));
  std::cout << "functional: " << to_string(functional) << "\n";
  if (input.name) std::cout << "state: " << *input.name << "\n";
  std::cout << "value: " << nats_text(r.value, bits) << "\n";
  std::cout << "closest:\n";
  print_matrix(std::cout, r.closest.matrix());
  std::cout << "iterations: " << r.iterations << "\n";
  std::cout << "gradient_norm: " << fmt(r.gradient_norm) << "\n";
  std::cout << "restarts: " << r.restarts_used << "\n";
  std::cout << "converged: " << (r.converged ? "yes" : "no") << "\n";
  std::cout << "certificate_slack: " << fmt(r.certificate_slack) << "\n";
  std::cout << "certified: " << (r.certified() ? "yes" : "no") << "\n";
  if (!out_path.empty()) write_state_file(out_path, r.closest, "closest separable state");
  return r.certified() ? kExitOk : kExitUncertified;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("parameter '" + item + "' is not of the form key=value");
    }
    std::size_t used = 0;
    const std::string text = item.substr(eq + 1);
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw std::invalid_argument("parameter '" + item + "' has a non-numeric value");
    }
    params[item.substr(0, eq)] = v;
  }
  return params;
}

int parse_case(const std::string& name) {
  for (int k = 1; k <= 4; ++k) {
    if (name == std::to_string(k) || name == "example" + std::to_string(k)) return k;
  }
  throw std::invalid_argument("unknown case '" + name + "' (use 1-4 or example1-example4)");
}

int cmd_analytic(const std::string& name, const std::vector<std::string>& items,
                 const OptimizerFlags& flags, bool bits, bool cross_check) {
  const ClosedFormCase c = example_case(parse_case(name), parse_params(items));
  std::cout << "case: " << c.name << "\n";
  for (const auto& [k, v] : c.parameters) std::cout << "param " << k << ": " << fmt(v) << "\n";
  std::cout << "sigma:\n";
  print_matrix(std::cout, c.sigma.matrix());
  std::cout << "closest:\n";
  print_matrix(std::cout, c.closest.matrix());
  std::cout << "closed_form: " << nats_text(c.value, bits) << "\n";
  const double slack = certify_minimum(c.sigma, c.closest);
  std::cout << "closed_form_certificate_slack: " << fmt(slack) << "\n";
  if (!cross_check) return kExitOk;
  const MeasureResult r = minimize(c.sigma, flags.build(Functional::RelativeEntropy));
  std::cout << "optimizer: " << nats_text(r.value, bits) << "\n";
  std::cout << "delta: " << fmt(r.value.as_double() - c.value.as_double()) << "\n";
  std::cout << "optimizer_certified: " << (r.certified() ? "yes" : "no") << "\n";
  return r.certified() ? kExitOk : kExitUncertified;
}

struct Grid {
  double from = 0.5;
  double to = 1.0;
  double step = 0.05;
};

Grid parse_grid(const std::string& text) {
  Grid g;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  if (!(in >> g.from >> c1 >> g.to >> c2 >> g.step) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof()) {
    throw std::invalid_argument("grid '" + text + "' is not of the form a:b:step");
  }
  if (!(g.step > 0.0) || g.from > g.to || g.from < 0.0 || g.to > 1.0) {
    throw std::invalid_argument("grid must satisfy 0 <= a <= b <= 1 and step > 0");
  }
  return g;
}

int cmd_werner_table(const std::string& grid_text, const OptimizerFlags& flags, bool bits,
                     const std::string& out_path) {
  const Grid g = parse_grid(grid_text);
  const OptimizerConfig config = flags.build(Functional::RelativeEntropy);
  std::ofstream file;
  std::ostream& out = *open_output(out_path, file);
  const double unit = bits ? std::log(2.0) : 1.0;
  out << "F,ree_analytic,ree_optimizer,eof\n";
  bool certified = true;
  const int n = static_cast<int>(std::floor((g.to - g.from) / g.step + 1e-9));
  for (int k = 0; k <= n; ++k) {
    const double f = std::min(g.from + k * g.step, 1.0);
    const double rest = (1.0 - f) / 3.0;
    const DensityMatrix w = werner(f);
    const MeasureResult r = minimize(w, config);
    certified = certified && r.certified();
    char line[160];
    std::snprintf(line, sizeof line, "%.4f,%.10f,%.10f,%.10f\n", f,
                  bell_diagonal_ree(BellDiagonal({f, rest, rest, rest})).value / unit,
                  r.value.as_double() / unit, eof_two_qubit(w).value / unit);
    out << line;
  }
  return certified ? kExitOk : kExitUncertified;
}

Completeness parse_completeness(const std::string& s) {
  if (s == "correlated") return Completeness::Correlated;
  if (s == "product") return Completeness::Product;
  throw std::invalid_argument("completeness must be 'correlated' or 'product'");
}

int cmd_verify(const std::string& suite, const OptimizerFlags& flags, int trials,
               const std::string& completeness, int branches, const std::string& out_path) {
  SuiteOptions options;
  options.optimizer = flags.build(Functional::RelativeEntropy);
  options.seed = flags.seed_set ? flags.seed : 1;
  options.trials = trials;
  options.branches = branches;
  options.completeness = parse_completeness(completeness);
  const auto reports = run_suite(suite, options);
  nlohmann::json doc;
  doc["suite"] = suite;
  doc["seed"] = options.seed;
  doc["reports"] = nlohmann::json::array();
  bool passed = true;
  for (const auto& r : reports) {
    doc["reports"].push_back(nlohmann::json::parse(r.to_json()));
    passed = passed && r.passed();
  }
  doc["passed"] = passed;
  std::ofstream file;
  *open_output(out_path, file) << doc.dump(2) << "\n";
  return passed ? kExitOk : kExitUncertified;
}

int cmd_check_ppt(const std::string& path) {
  const StateFile input = read_state_file(path);
  const bool separable = is_ppt_separable(input.state);
  std::cout << (separable ? "separable" : "entangled") << "\n";
  std::cout << "min_partial_transpose_eigenvalue: "
            << fmt(min_partial_transpose_eigenvalue(input.state)) << "\n";
  return kExitOk;
}

int cmd_sanov(const std::string& sigma_path, const std::string& rho_path, int n) {
  const StateFile sigma = read_state_file(sigma_path);
  const StateFile rho = read_state_file(rho_path);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", sanov_confusion_probability(sigma.state, rho.state, n));
  std::cout << buf << "\n";
  return kExitOk;
}

DensityMatrix make_state(const std::string& kind, const std::map<std::string, double>& p,
                         const std::string& from) {
  auto get = [&](const std::string& key) {
    const auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("state " + kind + " needs " + key + "=...");
    return it->second;
  };
  if (kind == "phi+") return DensityMatrix(bell_state(BellState::PhiPlus));
  if (kind == "phi-") return DensityMatrix(bell_state(BellState::PhiMinus));
  if (kind == "psi+") return DensityMatrix(bell_state(BellState::PsiPlus));
  if (kind == "psi-") return DensityMatrix(bell_state(BellState::PsiMinus));
  if (kind == "werner") return werner(get("F"));
  if (kind == "pure") {
    const double a = get("alpha2");
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("alpha2 must lie in [0, 1]");
    return DensityMatrix(PureState({std::sqrt(a), 0.0, 0.0, std::sqrt(1.0 - a)}, {2, 2}));
  }
  if (kind == "product") {
    ComplexMatrix m(4);
    m(0, 0) = 1.0;
    return DensityMatrix(m, {2, 2});
  }
  if (kind == "random") {
    const double rank = p.count("rank") ? p.at("rank") : 4.0;
    if (rank < 1.0 || rank > 4.0 || rank != std::floor(rank)) {
      throw std::invalid_argument("rank must be an integer in [1, 4]");
    }
    return random_density({2, 2}, static_cast<std::size_t>(rank),
                          static_cast<std::uint64_t>(get("seed")));
  }
  for (int k = 1; k <= 4; ++k) {
    if (kind == "example" + std::to_string(k)) return example_case(k, p).sigma;
  }
  if (kind == "decohere") {
    if (from.empty()) throw std::invalid_argument("state decohere needs --from FILE");
    const StateFile in = read_state_file(from);
    ComplexMatrix m(in.state.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) = in.state.matrix()(i, i);
    return DensityMatrix(m, in.state.dims());
  }
  throw std::invalid_argument("unknown state kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement measures by minimisation over separable two-qubit states"};
  app.require_subcommand(1);
  bool bits = false;
  app.add_flag("--bits", bits, "Report entropic values in bits");

  std::string state_path;
  std::string out_path;
  OptimizerFlags flags;
  std::string functional_name;

  auto* ree = app.add_subcommand("ree", "Relative entropy of entanglement of a state file");
  ree->add_option("state", state_path, "State file")->required()->check(CLI::ExistingFile);
  ree->add_option("--out", out_path, "Write the closest separable state here");
  ree->add_option("--functional", functional_name, "ree or bures");
  flags.add_to(ree);

  auto* bures = app.add_subcommand("bures", "Bures measure of entanglement of a state file");
  bures->add_option("state", state_path, "State file")->required()->check(CLI::ExistingFile);
  bures->add_option("--out", out_path, "Write the closest separable state here");
  flags.add_to(bures);

  std::string case_name;
  std::vector<std::string> params;
  bool no_optimizer = false;
  auto* analytic = app.add_subcommand("analytic", "Closed-form example with optimizer cross-check");
  analytic->add_option("case", case_name, "1-4")->required();
  analytic->add_option("params", params, "key=value parameters");
  analytic->add_flag("--no-optimizer", no_optimizer, "Skip the optimizer cross-check");
  flags.add_to(analytic);

  std::string grid = "0.5:1.0:0.05";
  auto* table = app.add_subcommand("werner-table", "CSV of REE and EoF along the Werner family");
  table->add_option("--grid", grid, "a:b:step over F");
  table->add_option("--out", out_path, "CSV file");
  flags.add_to(table);

  std::string suite = "full";
  int trials = 0;
  int branches = 2;
  std::string completeness = "correlated";
  auto* verify = app.add_subcommand("verify", "Run a property suite and emit a JSON report");
  verify->add_option("--suite", suite, "Suite name or 'full'");
  verify->add_option("--trials", trials, "Override trial counts")->check(CLI::PositiveNumber);
  verify->add_option("--branches", branches, "Outcomes per party for sampled operations")
      ->check(CLI::PositiveNumber);
  verify->add_option("--completeness", completeness, "correlated or product");
  verify->add_option("--out", out_path, "JSON report file");
  flags.add_to(verify);

  auto* ppt = app.add_subcommand("check-ppt", "Partial-transpose separability verdict");
  ppt->add_option("state", state_path, "State file")->required()->check(CLI::ExistingFile);

  std::string rho_path;
  int copies = 1;
  auto* sanov = app.add_subcommand("sanov", "Confusion probability exp(-n S(sigma||rho))");
  sanov->add_option("sigma", state_path, "State file")->required()->check(CLI::ExistingFile);
  sanov->add_option("rho", rho_path, "State file")->required()->check(CLI::ExistingFile);
  sanov->add_option("-n", copies, "Number of copies")->required()->check(CLI::PositiveNumber);

  std::string kind;
  std::string from;
  auto* state = app.add_subcommand("state", "Write a named state as a state file");
  state->add_option("kind", kind,
                    "phi+, phi-, psi+, psi-, werner, pure, product, random, example1-4, decohere")
      ->required();
  state->add_option("params", params, "key=value parameters");
  state->add_option("--from", from, "Input state file for decohere")->check(CLI::ExistingFile);
  state->add_option("--out", out_path, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*ree) {
      const Functional f =
          functional_name.empty() ? Functional::RelativeEntropy : functional_from_string(functional_name);
      return cmd_measure(state_path, f, flags, bits, out_path);
    }
    if (*bures) return cmd_measure(state_path, Functional::Bures, flags, bits, out_path);
    if (*analytic) return cmd_analytic(case_name, params, flags, bits, !no_optimizer);
    if (*table) return cmd_werner_table(grid, flags, bits, out_path);
    if (*verify) return cmd_verify(suite, flags, trials, completeness, branches, out_path);
    if (*ppt) return cmd_check_ppt(state_path);
    if (*sanov) return cmd_sanov(state_path, rho_path, copies);
    if (*state) {
      const DensityMatrix s = make_state(kind, parse_params(params), from);
      if (out_path.empty()) {
        std::cout << format_state(s, kind);
      } else {
        write_state_file(out_path, s, kind);
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
