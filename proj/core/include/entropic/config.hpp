#ifndef ENTROPIC_CONFIG_HPP
#define ENTROPIC_CONFIG_HPP

#include "entropic/integrators.hpp"
#include "entropic/nonlinear.hpp"
#include "entropic/operators.hpp"
#include "entropic/relaxation.hpp"
#include "entropic/semidisc.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entropic {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// One experiment, fully resolved. Built by make_config from flat
/// `section.key = value` entries; keys not given take per-equation defaults.
struct ExperimentConfig {
  Equation equation = Equation::kdv;
  Grid grid;
  OperatorFamily family = OperatorFamily::central_fd;
  int accuracy_order = 4;
  /// Accuracy of the KdV third-derivative stencil ("auto": accuracy_order).
  int d3_accuracy_order = 4;
  SchemeKind scheme = SchemeKind::midpoint;
  double dt = 0.05;
  double t_end = 100.0;
  double t_end_full = 1000.0;
  NonlinearMethod method = NonlinearMethod::newton_gmres;
  SolverConfig solver;
  RelaxationPolicy relaxation;
  /// Invariant name to relax, or "auto" for the equation's entropy.
  std::string relax_functional = "auto";
  double wave_speed = 2.0;
  std::string output_path;
  int record_every = 1;
  int study_k_max = 8;
  NonlinearMethod study_variant = NonlinearMethod::newton;
  std::string sweep_parameter;
  std::vector<std::string> sweep_values;

  /// Every key with its effective value, in canonical order.
  KeyValues resolved;

  std::string value(std::string_view key) const;
};

/// Known keys in canonical order.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines; `#` starts a comment. Syntax only.
KeyValues parse_key_values(std::string_view text);

/// Splits `key=value`. Throws ConfigError when there is no '='.
std::pair<std::string, std::string> parse_override(std::string_view text);

/// Later entries win. With full_scale, time.t_end takes time.t_end_full.
ExperimentConfig make_config(const KeyValues& entries, bool full_scale = false);

/// Reads the file (if any), applies the overrides, resolves.
ExperimentConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                             bool full_scale = false);

/// Same configuration with one key replaced.
ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace entropic

#endif  // ENTROPIC_CONFIG_HPP
