#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quench/diagnostics.hpp"
#include "quench/model.hpp"
#include "quench/spectral.hpp"
#include "quench/types.hpp"

namespace quench {

// Requested problem size exceeds the configured caps.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physics identity that must hold was violated at runtime.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentPlan {
  std::vector<int> n_values{3, 4, 5, 6, 7, 8, 9, 10};
  int samples_per_n = 100;
  double sigma0 = 1.0;
  double sigma1_ratio = 0.4;
  int subsystem_site = 1;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = one per hardware thread

  // Resource policy: refuse n beyond the hard cap; enumerate every initial
  // configuration up to full_enumeration_max_n sites, then switch to a seeded
  // random subset of eigenstate_cap configurations.
  int n_hard_cap = 12;
  int full_enumeration_max_n = 10;
  int eigenstate_cap = 512;

  // Validation knobs (time quadrature and Monte Carlo sizes).
  int time_samples = 1000;
  double time_horizon = 1e4;
  int thm2_samples = 500;

  double sigma1() const { return sigma0 * sigma1_ratio; }
  std::uint64_t sample_seed(int n, int sample_index) const;
  void validate() const;  // invalid_argument or ResourceCapError
};

struct QuenchRecord {
  int n = 0;
  int sample_index = 0;
  std::uint64_t seed = 0;           // per-sample spec seed
  std::uint64_t k_config_bits = 0;  // initial spin configuration
  double d_eff_1 = 0, d_eff_2 = 0;
  double c_eq_1 = 0, c_eq_2 = 0;
  double r_1 = 0, r_2 = 0;
  double delta_sample = 0;  // max_k delta_k for this disorder sample
  double d_init = 0;
  double d_omega = 0;
  double delta_margin = 0;  // D_omega - C_eq_1 - C_eq_2
  double thm1_lb = 0;       // D_init - R_1 - R_2
  bool degenerate_flag = false;
  Matrix omega_s1, omega_s2;  // kept for distinguisher reports, not serialized
};

// Everything derived from one disorder sample that is shared across its
// initial-state records.
struct SampleContext {
  SpinChainSpec spec;
  int sample_index = 0;
  SpectralData sd;
  Bipartition part;
  ReducedEigenstateCache cache;
  DeltaResult delta;
};

SampleContext make_sample_context(const SpinChainSpec& spec, int subsystem_site,
                                  int sample_index);

// One protocol pair: psi0_1 = |k>, psi0_2 = sigma^X_S |k>. Throws
// VerificationError if the distinguishability lower bound fails.
QuenchRecord run_quench_pair(const SampleContext& ctx, std::uint64_t k_config_bits);
QuenchRecord run_quench_pair(const SpinChainSpec& spec, std::uint64_t k_config_bits,
                             int subsystem_site);

nlohmann::json record_to_json(const QuenchRecord& record);

struct PanelRow {
  int n = 0;
  int samples = 0;
  int subsample_size = 0;  // configurations iterated per sample
  double delta_mean = 0, delta_std = 0;
  double d_omega_mean = 0, d_omega_std = 0;
  double d_eff_mean = 0, d_eff_std = 0;
  double c_eq_mean = 0, c_eq_std = 0;
  double max_delta_mean = 0, max_delta_std = 0;
  double max_delta_d_eff_mean = 0, max_delta_d_eff_std = 0;
  double max_delta_c_eq_mean = 0, max_delta_c_eq_std = 0;
};

struct Figure2Result {
  std::vector<QuenchRecord> records;
  std::vector<PanelRow> panels;
};

// Full ensemble sweep; deterministic for a fixed plan regardless of worker
// count.
Figure2Result run_figure2(const ExperimentPlan& plan);

std::string records_csv(const std::vector<QuenchRecord>& records);
std::string panels_csv(const std::vector<PanelRow>& panels);

// Effective plan, version, and every numeric policy baked into the outputs.
nlohmann::json plan_metadata(const ExperimentPlan& plan);

// Time-sampled check of the equilibration bound: empirical mean of
// D(psi_t^S, omega^S) over uniform times in [0, time_horizon] vs C_eq.
struct EquilibrationInstance {
  int n = 0;
  int sample_index = 0;
  std::uint64_t k_config_bits = 0;
  double time_average = 0;
  double c_eq = 0;
  double ratio = 0;  // time_average / c_eq
};

std::vector<EquilibrationInstance> equilibration_time_average_sweep(const ExperimentPlan& plan, int n,
                                                int states_per_sample);

// Trace-norm residual between the dephased state and the quadrature average
// over uniform times in [0, horizon], one entry per horizon.
struct ConvergencePoint {
  double horizon = 0;
  double residual = 0;
};

std::vector<ConvergencePoint> time_average_convergence(const SpinChainSpec& spec,
                                                       std::uint64_t k_config_bits,
                                                       const std::vector<double>& horizons,
                                                       int samples_per_horizon,
                                                       std::uint64_t seed);

// sigma^Z-alignment of the optimal distinguisher between the two equilibrium
// states, aggregated per chain length.
struct AlignmentStats {
  int n = 0;
  int count = 0;
  double mean = 0;
  double median = 0;
  double min = 0;
  double fraction_above_threshold = 0;
  double max_bias_mismatch = 0;  // |achieved bias - D_omega| consistency
  bool pass = false;             // median above threshold
};

inline constexpr double kAlignmentThreshold = 0.9;

std::vector<AlignmentStats> best_distinguisher_report(const std::vector<QuenchRecord>& records,
                                                      double threshold = kAlignmentThreshold);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string details;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  nlohmann::json to_json() const;
};

struct VerificationOptions {
  std::uint64_t seed = 24601;
  std::string inject_fault;  // "" or "hermiticity"
  int workers = 1;
};

// Bundles the identity/inequality checks behind every reported quantity;
// sizes chosen to finish in seconds.
VerificationReport run_verification_suite(const VerificationOptions& opts);

}  // namespace quench
