#ifndef ENTROPIC_EXPERIMENTS_HPP
#define ENTROPIC_EXPERIMENTS_HPP

#include "entropic/config.hpp"
#include "entropic/semidisc.hpp"
#include "entropic/time_step.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace entropic {

/// x reduced periodically into [−L/2, L/2).
double wrap_periodic(double x, double length);

/// (c/2) sech²((√c/2) wrap(x − ct)) on (x_min, x_max].
double exact_kdv_soliton(double x, double t, double c, double x_min, double x_max);
Vector exact_kdv_soliton(const Grid& grid, double t, double c);

/// A sech²(K wrap(x − ct)), A = 3(c − 1), K = ½√(1 − 1/c). Requires c > 1.
double exact_bbm_wave(double x, double t, double c, double x_min, double x_max);
Vector exact_bbm_wave(const Grid& grid, double t, double c);

/// √(Σ Mᵢ (uᵢ − vᵢ)²)
double l2_error(const Vector& u, const Vector& u_exact, const MassMatrix& m);

/// Operators and semidiscretization named by the config.
SemiDiscretization build_semidiscretization(const ExperimentConfig& cfg);
/// Exact solution at time t; nullopt for Burgers, which has none here.
std::optional<Vector> exact_solution(const ExperimentConfig& cfg, double t);
/// Initial data: the traveling wave at t = 0 (the soliton profile for Burgers).
Vector initial_state(const ExperimentConfig& cfg);
/// Relaxation policy with the configured functional bound to sd.
RelaxationPolicy relaxation_policy(const ExperimentConfig& cfg, const SemiDiscretization& sd);

// ---- Newton study -------------------------------------------------------

struct StudyRow {
  int k = 0;
  /// η(u¹) with u¹ formed from the k-th iterate
  double entropy = 0.0;
  double drift = 0.0;
  double residual = 0.0;
  /// Drift predicted by the closed-form quadratic form of the last update.
  double predicted_drift = 0.0;
  std::optional<double> alpha;
};

/// One step from the initial data with k = 0..study_k_max iterations of
/// cfg.study_variant, started from the replicated uⁿ. Burgers only.
std::vector<StudyRow> run_burgers_newton_study(const ExperimentConfig& cfg);

/// η(u¹) − η(uⁿ) for the midpoint update formed from U_{k+1} = U_k + ΔU,
/// where U_{k+1} is a Newton iterate for the split Burgers form:
/// −2 Δx Δt ΔUᵀ (diag(D U_k) + D diag(U_k)) ΔU.
double midpoint_newton_entropy_change(const GridOperator& d1, double dt, const Vector& U_k, const Vector& dU);

/// η(y_s) − η(uⁿ) for Lobatto IIIC stages U = U_k + ΔU:
/// −η(y¹ − uⁿ) − 2 Δt Δx ΔUᵀ ((B⊗D) diag(U_k) + diag((B⊗D) U_k)) ΔU.
double lobatto_newton_entropy_change(const GridOperator& d1, const RKScheme& scheme, double dt, const Vector& u_prev,
                                     const Vector& U_next, const Vector& U_k);

void write_study_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<StudyRow>& rows);

// ---- time integration ---------------------------------------------------

struct TimeSeriesRow {
  long step = 0;
  double t = 0.0;
  std::optional<double> l2_error;
  std::vector<double> invariants;
  std::vector<double> drifts;
  std::optional<double> gamma;
  int newton_iters = 0;
  int gmres_iters = 0;
  double residual = 0.0;
};

struct RunSummary {
  std::vector<std::string> invariant_names;
  long steps = 0;
  double final_t = 0.0;
  Vector final_u;
};

using RowSink = std::function<void(const TimeSeriesRow&)>;

/// Steps from t = 0 until the first t ≥ t_end, passing every
/// record_every-th row (plus rows 0 and last) to the sink. Solver and
/// relaxation failures propagate after the rows so far were delivered.
RunSummary integrate(const ExperimentConfig& cfg, const RowSink& sink);

/// Convenience: integrate into memory.
std::vector<TimeSeriesRow> integrate_rows(const ExperimentConfig& cfg, RunSummary* summary = nullptr);

std::string csv_header(const std::vector<std::string>& invariant_names);
std::string csv_row(const TimeSeriesRow& row);
/// `# key = value` lines for every resolved key.
void write_config_echo(std::ostream& os, const ExperimentConfig& cfg);

/// Runs cfg and writes the CSV to path plus path + ".meta". The partial CSV
/// is flushed before a failure propagates.
RunSummary run_time_integration(const ExperimentConfig& cfg, const std::string& path);

struct SweepOutcome {
  std::string value;
  std::string path;
  bool ok = false;
  std::string error;
};

/// Runs one configuration per sweep value concurrently, each to
/// `<stem>.<parameter>=<value><ext>` next to base_path.
std::vector<SweepOutcome> run_sweep(const ExperimentConfig& cfg, const std::string& base_path);

}  // namespace entropic

#endif  // ENTROPIC_EXPERIMENTS_HPP
