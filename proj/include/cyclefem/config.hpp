#pragma once

// Run configuration: flat key = value lines grouped under [section] headers,
// '#' starts a comment. Lists are comma separated. Unknown sections or keys
// are rejected so that typos do not silently fall back to defaults.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclefem/cycle.hpp"
#include "cyclefem/equilibrium.hpp"
#include "cyclefem/hopf.hpp"
#include "cyclefem/luo_rudy.hpp"

namespace cyclefem {

/// section -> key -> raw value, in file order independent form.
using ConfigTable = std::map<std::string, std::map<std::string, std::string>>;

/// Throws ConfigError with the line number on malformed input or a repeated key.
ConfigTable parse_config(std::istream& in);

/// 64-bit FNV-1a of the canonical "section.key=value" lines, so comments and
/// spacing do not change it.
std::uint64_t config_hash(const ConfigTable& table);

enum class ModelKind { kLuoRudy, kNormalForm };

struct RunConfig {
  ModelKind model = ModelKind::kLuoRudy;
  luo_rudy::ParameterSet parameters;
  double omega = 1.0;

  // equilibria
  double lambda_start = -1.5;
  double lambda_target = -0.6;  // the branch is cut after the first point past it
  double equilibrium_ds = 0.1;
  int equilibrium_steps = 200;
  std::optional<Vector> guess;
  std::optional<SearchBox> search_box;
  NewtonOptions equilibrium_newton;

  // hopf
  std::size_t bracket = 0;  // which bracket of the report seeds the refinement
  std::optional<double> seed_lambda;
  std::optional<Vector> seed_u;
  std::optional<std::size_t> hopf_k;
  HopfRefineOptions hopf_newton;

  // cycles
  CycleContinuationSettings cycles;
  int n_elements = 20;
  std::optional<std::string> hopf_file;
  std::vector<int> export_steps;
  std::vector<double> export_lambda;
  std::vector<std::pair<std::string, std::string>> projections;

  std::string out_dir = "out";
  std::uint64_t hash = 0;
};

/// Validates every field. Projection coordinates must name a model
/// component or "lambda".
RunConfig make_run_config(const ConfigTable& table);
RunConfig load_run_config(const std::string& path);

std::unique_ptr<ModelSystem> make_model(const RunConfig& config);

}  // namespace cyclefem
