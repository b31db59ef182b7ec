#include "quench/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "quench/format.hpp"
#include "quench/parallel.hpp"
#include "quench/rng.hpp"

namespace quench {

namespace {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty set");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty set");
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[m];
  return 0.5 * (xs[m - 1] + xs[m]);
}

std::string fmt3(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

// states_per_sample distinct configurations drawn without replacement,
// returned ascending so iteration order never depends on the draw order.
std::vector<std::uint64_t> draw_configurations(std::int64_t dim, int count,
                                               std::uint64_t seed) {
  if (count < 0 || count > dim) throw std::invalid_argument("bad configuration count");
  std::vector<std::uint64_t> pool(static_cast<std::size_t>(dim));
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const auto remaining = static_cast<double>(dim - i);
    auto j = static_cast<std::int64_t>(i) +
             static_cast<std::int64_t>(rng.uniform() * remaining);
    j = std::min<std::int64_t>(j, dim - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::uint64_t> plan_configurations(const ExperimentPlan& plan, int n,
                                               std::uint64_t sample_seed) {
  const std::int64_t d = std::int64_t{1} << n;
  if (n <= plan.full_enumeration_max_n || d <= plan.eigenstate_cap) {
    std::vector<std::uint64_t> all(static_cast<std::size_t>(d));
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    return all;
  }
  return draw_configurations(
      d, plan.eigenstate_cap,
      derive_seed(sample_seed, {static_cast<std::uint64_t>(Stream::States)}));
}

std::vector<double> draw_times(std::uint64_t seed, int count, double horizon) {
  Rng rng(seed);
  std::vector<double> times(static_cast<std::size_t>(count));
  for (double& t : times) t = horizon * rng.uniform();
  return times;
}

double empirical_distance_average(const SpectralData& sd, const Bipartition& part,
                                  const Vector& c, const Matrix& omega_s,
                                  const std::vector<double>& times) {
  const Matrix columns = evolve_overlaps_batch(sd, c, times);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    const Matrix rho_t = partial_trace_pure(columns.col(j), part);
    sum += trace_distance(rho_t, omega_s);
  }
  return sum / static_cast<double>(times.size());
}

double trace_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace

std::uint64_t ExperimentPlan::sample_seed(int n, int sample_index) const {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(sample_index)});
}

void ExperimentPlan::validate() const {
  if (n_values.empty()) throw std::invalid_argument("no chain lengths requested");
  for (int n : n_values) {
    if (n < 2) throw std::invalid_argument("chain needs at least 2 sites");
    if (n > n_hard_cap) {
      throw ResourceCapError(
          "n=" + std::to_string(n) + " exceeds the hard cap " + std::to_string(n_hard_cap) +
          " (dense eigenproblem of dimension 2^n); lower n or raise the cap explicitly");
    }
    if (subsystem_site < 1 || subsystem_site > n) {
      throw std::invalid_argument("subsystem site outside chain");
    }
  }
  if (samples_per_n < 1) throw std::invalid_argument("need at least one disorder sample");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");
  if (!(sigma1_ratio >= 0.0)) throw std::invalid_argument("sigma1 ratio must be nonnegative");
  if (eigenstate_cap < 1) throw std::invalid_argument("eigenstate cap must be positive");
  if (full_enumeration_max_n < 0) throw std::invalid_argument("bad enumeration threshold");
  if (workers < 0) throw std::invalid_argument("worker count must be nonnegative");
  if (time_samples < 1) throw std::invalid_argument("need at least one time sample");
  if (!(time_horizon > 0.0)) throw std::invalid_argument("time horizon must be positive");
  if (thm2_samples < 2) throw std::invalid_argument("need at least two Monte Carlo samples");
}

SampleContext make_sample_context(const SpinChainSpec& spec, int subsystem_site,
                                  int sample_index) {
  SpectralData sd = diagonalize(build_hamiltonian(spec).h);
  Bipartition part(spec.n, {subsystem_site});
  ReducedEigenstateCache cache = reduced_eigenstate_cache(sd, part);
  DeltaResult delta = geometric_entanglement_delta(cache);
  return SampleContext{spec, sample_index, std::move(sd), std::move(part),
                       std::move(cache), std::move(delta)};
}

QuenchRecord run_quench_pair(const SampleContext& ctx, std::uint64_t k_config_bits) {
  const SpectralData& sd = ctx.sd;
  const Bipartition& part = ctx.part;
  if (part.subsystem_sites().size() != 1) {
    throw std::invalid_argument("the flip protocol expects a single-site subsystem");
  }
  const int site = part.subsystem_sites()[0];
  const auto d = static_cast<std::uint64_t>(sd.dim());
  if (k_config_bits >= d) throw std::invalid_argument("configuration out of range");

  const auto k1 = static_cast<std::int64_t>(k_config_bits);
  const std::int64_t k2 = SiteIndexing::toggle(k1, site);
  const std::int64_t ds = part.dim_s();

  Matrix psi_s1 = Matrix::Zero(ds, ds);
  psi_s1(part.extract_s(k1), part.extract_s(k1)) = 1.0;
  Matrix psi_s2 = Matrix::Zero(ds, ds);
  psi_s2(part.extract_s(k2), part.extract_s(k2)) = 1.0;

  const Vector c1 = basis_state_overlaps(sd, k1);
  const Vector c2 = basis_state_overlaps(sd, k2);

  QuenchRecord rec;
  rec.n = ctx.spec.n;
  rec.sample_index = ctx.sample_index;
  rec.seed = ctx.spec.seed;
  rec.k_config_bits = k_config_bits;
  rec.d_eff_1 = effective_dimension(c1, sd.blocks);
  rec.d_eff_2 = effective_dimension(c2, sd.blocks);
  rec.c_eq_1 = equilibration_coefficient(c1, sd.blocks, ds);
  rec.c_eq_2 = equilibration_coefficient(c2, sd.blocks, ds);
  rec.r_1 = effective_entanglement_R(sd, ctx.cache, c1, psi_s1);
  rec.r_2 = effective_entanglement_R(sd, ctx.cache, c2, psi_s2);
  rec.delta_sample = ctx.delta.delta;
  rec.d_init = trace_distance(psi_s1, psi_s2);
  rec.omega_s1 = dephased_reduced(sd, ctx.cache, c1);
  rec.omega_s2 = dephased_reduced(sd, ctx.cache, c2);
  rec.d_omega = trace_distance(rec.omega_s1, rec.omega_s2);
  rec.delta_margin = rec.d_omega - rec.c_eq_1 - rec.c_eq_2;
  rec.thm1_lb = theorem1_bound(rec.d_init, rec.r_1, rec.r_2);
  rec.degenerate_flag = !sd.nondegenerate();

  if (rec.d_omega < rec.thm1_lb - 1e-10) {
    throw VerificationError("distinguishability lower bound violated: D_omega=" +
                            format_double(rec.d_omega) + " < " + format_double(rec.thm1_lb));
  }
  return rec;
}

QuenchRecord run_quench_pair(const SpinChainSpec& spec, std::uint64_t k_config_bits,
                             int subsystem_site) {
  return run_quench_pair(make_sample_context(spec, subsystem_site, 0), k_config_bits);
}

nlohmann::json record_to_json(const QuenchRecord& record) {
  auto matrix_json = [](const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        row.push_back({m(i, j).real(), m(i, j).imag()});
      }
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json j;
  j["n"] = record.n;
  j["sample_index"] = record.sample_index;
  j["seed"] = record.seed;
  j["k_config_bits"] = record.k_config_bits;
  j["d_eff_1"] = record.d_eff_1;
  j["d_eff_2"] = record.d_eff_2;
  j["C_eq_1"] = record.c_eq_1;
  j["C_eq_2"] = record.c_eq_2;
  j["R_1"] = record.r_1;
  j["R_2"] = record.r_2;
  j["delta_sample"] = record.delta_sample;
  j["D_init"] = record.d_init;
  j["D_omega"] = record.d_omega;
  j["Delta"] = record.delta_margin;
  j["thm1_lb"] = record.thm1_lb;
  j["degenerate_flag"] = record.degenerate_flag;
  j["omega_s1"] = matrix_json(record.omega_s1);
  j["omega_s2"] = matrix_json(record.omega_s2);
  return j;
}

namespace {

struct SampleOutput {
  std::vector<QuenchRecord> records;
  double delta_k_mean = 0.0;
};

SampleOutput run_sample(const ExperimentPlan& plan, int n, int sample_index) {
  const std::uint64_t seed = plan.sample_seed(n, sample_index);
  const SpinChainSpec spec = sample_spec(n, plan.sigma0, plan.sigma1(), seed);
  const SampleContext ctx = make_sample_context(spec, plan.subsystem_site, sample_index);

  SampleOutput out;
  const std::vector<std::uint64_t> configs = plan_configurations(plan, n, seed);
  out.records.reserve(configs.size());
  for (std::uint64_t k : configs) out.records.push_back(run_quench_pair(ctx, k));
  out.delta_k_mean = mean_of(ctx.delta.delta_k);
  return out;
}

}  // namespace

Figure2Result run_figure2(const ExperimentPlan& plan) {
  plan.validate();

  std::vector<std::pair<int, int>> tasks;  // (n, sample_index) in output order
  for (int n : plan.n_values) {
    for (int s = 0; s < plan.samples_per_n; ++s) tasks.emplace_back(n, s);
  }

  std::vector<SampleOutput> outputs(tasks.size());
  parallel_for(tasks.size(), resolve_workers(plan.workers), [&](std::size_t t) {
    outputs[t] = run_sample(plan, tasks[t].first, tasks[t].second);
  });

  Figure2Result result;
  std::size_t t = 0;
  for (int n : plan.n_values) {
    std::vector<double> deltas, d_omegas, d_effs, c_eqs;
    std::vector<double> max_deltas, argmax_d_effs, argmax_c_eqs;
    int subsample = 0;
    for (int s = 0; s < plan.samples_per_n; ++s, ++t) {
      const SampleOutput& out = outputs[t];
      subsample = static_cast<int>(out.records.size());
      deltas.push_back(out.delta_k_mean);

      std::vector<double> rec_d_omega, rec_d_eff, rec_c_eq;
      const QuenchRecord* best = nullptr;
      for (const QuenchRecord& rec : out.records) {
        rec_d_omega.push_back(rec.d_omega);
        rec_d_eff.push_back(rec.d_eff_1);
        rec_c_eq.push_back(rec.c_eq_1);
        if (best == nullptr || rec.delta_margin > best->delta_margin) best = &rec;
      }
      d_omegas.push_back(mean_of(rec_d_omega));
      d_effs.push_back(mean_of(rec_d_eff));
      c_eqs.push_back(mean_of(rec_c_eq));
      max_deltas.push_back(best->delta_margin);
      argmax_d_effs.push_back(best->d_eff_1);
      argmax_c_eqs.push_back(best->c_eq_1);

      result.records.insert(result.records.end(), out.records.begin(), out.records.end());
    }

    PanelRow row;
    row.n = n;
    row.samples = plan.samples_per_n;
    row.subsample_size = subsample;
    row.delta_mean = mean_of(deltas);
    row.delta_std = std_of(deltas, row.delta_mean);
    row.d_omega_mean = mean_of(d_omegas);
    row.d_omega_std = std_of(d_omegas, row.d_omega_mean);
    row.d_eff_mean = mean_of(d_effs);
    row.d_eff_std = std_of(d_effs, row.d_eff_mean);
    row.c_eq_mean = mean_of(c_eqs);
    row.c_eq_std = std_of(c_eqs, row.c_eq_mean);
    row.max_delta_mean = mean_of(max_deltas);
    row.max_delta_std = std_of(max_deltas, row.max_delta_mean);
    row.max_delta_d_eff_mean = mean_of(argmax_d_effs);
    row.max_delta_d_eff_std = std_of(argmax_d_effs, row.max_delta_d_eff_mean);
    row.max_delta_c_eq_mean = mean_of(argmax_c_eqs);
    row.max_delta_c_eq_std = std_of(argmax_c_eqs, row.max_delta_c_eq_mean);
    result.panels.push_back(row);
  }
  return result;
}

std::string records_csv(const std::vector<QuenchRecord>& records) {
  std::string out =
      "n,sample_index,seed,k_config_bits,d_eff_1,d_eff_2,C_eq_1,C_eq_2,R_1,R_2,"
      "delta_sample,D_init,D_omega,Delta,thm1_lb,degenerate_flag\n";
  for (const QuenchRecord& r : records) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.sample_index);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.k_config_bits);
    for (double v : {r.d_eff_1, r.d_eff_2, r.c_eq_1, r.c_eq_2, r.r_1, r.r_2, r.delta_sample,
                     r.d_init, r.d_omega, r.delta_margin, r.thm1_lb}) {
      out += ',';
      out += format_double(v);
    }
    out += r.degenerate_flag ? ",1\n" : ",0\n";
  }
  return out;
}

std::string panels_csv(const std::vector<PanelRow>& panels) {
  std::string out =
      "n,delta_mean,delta_std,D_omega_mean,D_omega_std,d_eff_mean,d_eff_std,"
      "C_eq_mean,C_eq_std,max_Delta_mean,max_Delta_std,max_Delta_d_eff_mean,"
      "max_Delta_d_eff_std,max_Delta_C_eq_mean,max_Delta_C_eq_std,subsample_size,samples\n";
  for (const PanelRow& p : panels) {
    out += std::to_string(p.n);
    for (double v : {p.delta_mean, p.delta_std, p.d_omega_mean, p.d_omega_std, p.d_eff_mean,
                     p.d_eff_std, p.c_eq_mean, p.c_eq_std, p.max_delta_mean, p.max_delta_std,
                     p.max_delta_d_eff_mean, p.max_delta_d_eff_std, p.max_delta_c_eq_mean,
                     p.max_delta_c_eq_std}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(p.subsample_size);
    out += ',';
    out += std::to_string(p.samples);
    out += '\n';
  }
  return out;
}

nlohmann::json plan_metadata(const ExperimentPlan& plan) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["plan"] = {{"n_values", plan.n_values},
               {"samples_per_n", plan.samples_per_n},
               {"sigma0", plan.sigma0},
               {"sigma1_ratio", plan.sigma1_ratio},
               {"sigma1", plan.sigma1()},
               {"subsystem_site", plan.subsystem_site},
               {"master_seed", plan.master_seed},
               {"workers", plan.workers},
               {"n_hard_cap", plan.n_hard_cap},
               {"full_enumeration_max_n", plan.full_enumeration_max_n},
               {"eigenstate_cap", plan.eigenstate_cap},
               {"time_samples", plan.time_samples},
               {"time_horizon", plan.time_horizon},
               {"thm2_samples", plan.thm2_samples}};
  j["tolerances"] = {{"degeneracy_tol_rel", kDegeneracyTolRel},
                     {"negative_eigenvalue_tol", kNegativeEigTol},
                     {"block_weight_floor", kBlockWeightFloor},
                     {"bound_slack", 1e-10},
                     {"montecarlo_criterion", "mean <= bound + 3*stderr"},
                     {"alignment_threshold", kAlignmentThreshold}};
  j["conventions"] = {
      {"site_order", "site 1 = least significant bit; bit 0 = spin up"},
      {"eigenvector_phase", "largest-magnitude component made real positive"},
      {"entropy_log", "natural"},
      {"trace_distance", "half the trace norm of the difference"},
      {"alignment_metric", "Frobenius norm of the diagonal part over Frobenius norm"},
      {"degenerate_flag", "true when eigenvalue blocks are not all singletons"},
      {"prng", "mt19937_64 per substream; substreams chained with a splitmix64 "
               "finalizer; gaussians via Box-Muller"},
      {"time_unit", "1/sigma0"},
      {"csv_floats", "shortest round-trip decimal"}};
  return j;
}

std::vector<EquilibrationInstance> equilibration_time_average_sweep(const ExperimentPlan& plan, int n,
                                                int states_per_sample) {
  plan.validate();
  const std::int64_t d = std::int64_t{1} << n;
  if (states_per_sample < 1 || states_per_sample > d) {
    throw std::invalid_argument("bad states_per_sample");
  }

  std::vector<std::vector<EquilibrationInstance>> outputs(
      static_cast<std::size_t>(plan.samples_per_n));
  parallel_for(outputs.size(), resolve_workers(plan.workers), [&](std::size_t s) {
    const auto sample_index = static_cast<int>(s);
    const std::uint64_t seed = plan.sample_seed(n, sample_index);
    const SpinChainSpec spec = sample_spec(n, plan.sigma0, plan.sigma1(), seed);
    const SampleContext ctx = make_sample_context(spec, plan.subsystem_site, sample_index);

    const std::vector<std::uint64_t> configs = draw_configurations(
        d, states_per_sample,
        derive_seed(seed, {static_cast<std::uint64_t>(Stream::States)}));
    for (std::uint64_t k : configs) {
      const Vector c = basis_state_overlaps(ctx.sd, static_cast<std::int64_t>(k));
      const Matrix omega_s = dephased_reduced(ctx.sd, ctx.cache, c);
      const std::vector<double> times =
          draw_times(derive_seed(seed, {static_cast<std::uint64_t>(Stream::Times), k}),
                     plan.time_samples, plan.time_horizon);
      EquilibrationInstance inst;
      inst.n = n;
      inst.sample_index = sample_index;
      inst.k_config_bits = k;
      inst.time_average = empirical_distance_average(ctx.sd, ctx.part, c, omega_s, times);
      inst.c_eq = equilibration_coefficient(c, ctx.sd.blocks, ctx.part.dim_s());
      inst.ratio = inst.time_average / inst.c_eq;
      outputs[s].push_back(inst);
    }
  });

  std::vector<EquilibrationInstance> flat;
  for (const auto& block : outputs) flat.insert(flat.end(), block.begin(), block.end());
  return flat;
}

std::vector<ConvergencePoint> time_average_convergence(const SpinChainSpec& spec,
                                                       std::uint64_t k_config_bits,
                                                       const std::vector<double>& horizons,
                                                       int samples_per_horizon,
                                                       std::uint64_t seed) {
  if (samples_per_horizon < 1) throw std::invalid_argument("need at least one time sample");
  const SpectralData sd = diagonalize(build_hamiltonian(spec).h);
  if (k_config_bits >= static_cast<std::uint64_t>(sd.dim())) {
    throw std::invalid_argument("configuration out of range");
  }
  const Vector psi0 = basis_vector(spec.n, static_cast<std::int64_t>(k_config_bits));
  const Matrix omega = dephase(sd, psi0);
  const Vector c = overlaps(sd, psi0);

  std::vector<ConvergencePoint> points;
  for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
    const std::vector<double> times =
        draw_times(derive_seed(seed, {static_cast<std::uint64_t>(Stream::Times),
                                      static_cast<std::uint64_t>(hi)}),
                   samples_per_horizon, horizons[hi]);
    const Matrix columns = evolve_overlaps_batch(sd, c, times);
    const Matrix average =
        (columns * columns.adjoint()) / static_cast<double>(samples_per_horizon);
    points.push_back({horizons[hi], trace_norm(omega - average)});
  }
  return points;
}

std::vector<AlignmentStats> best_distinguisher_report(const std::vector<QuenchRecord>& records,
                                                      double threshold) {
  std::map<int, std::vector<double>> alignments;
  std::map<int, double> mismatches;
  for (const QuenchRecord& rec : records) {
    if (rec.omega_s1.size() == 0) throw std::invalid_argument("record lacks stored states");
    const auto [a, value] = optimal_distinguisher(rec.omega_s1, rec.omega_s2);
    (void)a;
    alignments[rec.n].push_back(sigma_z_alignment(rec.omega_s1 - rec.omega_s2));
    mismatches[rec.n] = std::max(mismatches[rec.n], std::abs(value - rec.d_omega));
  }
  std::vector<AlignmentStats> stats;
  for (const auto& [n, values] : alignments) {
    AlignmentStats st;
    st.n = n;
    st.count = static_cast<int>(values.size());
    st.mean = mean_of(values);
    st.median = median_of(values);
    st.min = *std::min_element(values.begin(), values.end());
    st.fraction_above_threshold =
        static_cast<double>(std::count_if(values.begin(), values.end(),
                                          [&](double v) { return v > threshold; })) /
        static_cast<double>(values.size());
    st.max_bias_mismatch = mismatches[n];
    st.pass = st.median > threshold;
    stats.push_back(st);
  }
  return stats;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["all_pass"] = all_pass();
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
  }
  return j;
}

namespace {

Matrix random_density(Rng& rng, std::int64_t dim) {
  Matrix m(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    for (std::int64_t j = 0; j < dim; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  Matrix rho = m * m.adjoint();
  return rho / rho.trace().real();
}

Vector random_state(Rng& rng, std::int64_t dim) {
  Vector v(dim);
  for (std::int64_t i = 0; i < dim; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
  return v / v.norm();
}

}  // namespace

VerificationReport run_verification_suite(const VerificationOptions& opts) {
  if (!opts.inject_fault.empty() && opts.inject_fault != "hermiticity") {
    throw std::invalid_argument("unknown fault: " + opts.inject_fault);
  }
  VerificationReport report;
  auto add = [&report](const std::string& name, bool pass, const std::string& details) {
    report.checks.push_back({name, pass, details});
  };

  // Construction is Hermitian to near machine precision.
  {
    const SpinChainSpec spec = sample_spec(6, 1.0, 0.4, derive_seed(opts.seed, {1}));
    Matrix h = build_hamiltonian(spec).h;
    if (opts.inject_fault == "hermiticity") h(0, 1) += Complex(0.0, 1e-3);
    const double scale = h.cwiseAbs().maxCoeff();
    const double metric = (h - h.adjoint()).cwiseAbs().maxCoeff() / scale;
    add("hermiticity", metric <= 1e-14, "max |H - H^dag| / max |H| = " + fmt3(metric));
  }

  // Embedded Pauli algebra: products, commutation across sites.
  {
    const int n = 3;
    double worst = 0.0;
    const Matrix eye = Matrix::Identity(8, 8);
    const Matrix ops[] = {embed_pauli(n, 2, Pauli::X), embed_pauli(n, 2, Pauli::Y),
                          embed_pauli(n, 2, Pauli::Z)};
    for (int a = 0; a < 3; ++a) {
      worst = std::max(worst, (ops[a] * ops[a] - eye).norm());
      const int b = (a + 1) % 3;
      const int c = (a + 2) % 3;
      worst = std::max(worst, (ops[a] * ops[b] - Complex(0, 1) * ops[c]).norm());
      worst = std::max(worst, (ops[a] * ops[b] + ops[b] * ops[a]).norm());
    }
    worst = std::max(worst, (embed_pauli(n, 1, Pauli::X) * embed_pauli(n, 3, Pauli::Z) -
                             embed_pauli(n, 3, Pauli::Z) * embed_pauli(n, 1, Pauli::X))
                                .norm());
    add("pauli_algebra", worst <= 1e-13, "max algebra residual = " + fmt3(worst));
  }

  // Tr[(A_S (x) I_B) rho] = Tr[A_S Tr_B rho] on random states and observables.
  {
    Rng rng(derive_seed(opts.seed, {3}));
    const int n = 4;
    const Bipartition part(n, {1, 3});
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix rho = random_density(rng, 16);
      Matrix a = Matrix(4, 4);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) a(i, j) = Complex(rng.gaussian(), rng.gaussian());
      }
      a = (a + Matrix(a.adjoint())).eval();
      const Matrix a_full = embed_operator(n, {1, 3}, a);
      const Complex lhs = (a_full * rho).trace();
      const Complex rhs = (a * partial_trace(rho, part)).trace();
      worst = std::max(worst, std::abs(lhs - rhs));
      const Matrix rho_b = partial_trace(rho, part, Keep::Bath);
      worst = std::max(worst, std::abs(rho_b.trace().real() - 1.0));
    }
    add("partial_trace_duality", worst <= 1e-12, "max duality residual = " + fmt3(worst));
  }

  // 1/d_eff = time-averaged Loschmidt echo = Tr[omega^2].
  {
    double worst_ipr = 0.0, worst_purity = 0.0;
    for (int n = 3; n <= 5; ++n) {
      const SpinChainSpec spec =
          sample_spec(n, 1.0, 0.4, derive_seed(opts.seed, {4, static_cast<std::uint64_t>(n)}));
      const SpectralData sd = diagonalize(build_hamiltonian(spec).h);
      Rng rng(derive_seed(opts.seed, {5, static_cast<std::uint64_t>(n)}));
      for (int trial = 0; trial < 3; ++trial) {
        const Vector psi0 = random_state(rng, sd.dim());
        const Vector c = overlaps(sd, psi0);
        const double lbar = loschmidt_time_average(c, sd.blocks);
        const double inv_deff = 1.0 / effective_dimension(c, sd.blocks);
        double ipr = 0.0;
        for (std::int64_t k = 0; k < c.size(); ++k) ipr += std::norm(c(k)) * std::norm(c(k));
        const double purity = dephase(sd, psi0).squaredNorm();
        if (sd.nondegenerate()) worst_ipr = std::max(worst_ipr, std::abs(inv_deff - ipr));
        worst_ipr = std::max(worst_ipr, std::abs(inv_deff - lbar));
        worst_purity = std::max(worst_purity, std::abs(inv_deff - purity));
      }
    }
    add("participation_identities", worst_ipr <= 1e-12 && worst_purity <= 1e-10,
        "max |1/d_eff - IPR| = " + fmt3(worst_ipr) +
            ", max |1/d_eff - Tr[omega^2]| = " + fmt3(worst_purity));
  }

  // Pinching never lowers entropy.
  {
    double worst = 0.0;
    Rng rng(derive_seed(opts.seed, {6}));
    for (int n = 2; n <= 4; ++n) {
      const SpinChainSpec spec =
          sample_spec(n, 1.0, 0.4, derive_seed(opts.seed, {7, static_cast<std::uint64_t>(n)}));
      const SpectralData sd = diagonalize(build_hamiltonian(spec).h);
      for (int trial = 0; trial < 4; ++trial) {
        const Matrix rho = random_density(rng, sd.dim());
        worst = std::max(worst, von_neumann_entropy(rho) -
                                    von_neumann_entropy(pinch(sd, rho)));
      }
    }
    add("pinching_max_entropy", worst <= 1e-10, "max entropy loss = " + fmt3(worst));
  }

  // The time-averaged state commutes with H and is a fixed point of the map.
  {
    const SpinChainSpec spec = sample_spec(5, 1.0, 0.4, derive_seed(opts.seed, {8}));
    const Matrix h = build_hamiltonian(spec).h;
    const SpectralData sd = diagonalize(h);
    Rng rng(derive_seed(opts.seed, {9}));
    double worst_comm = 0.0, worst_fixed = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix omega = dephase(sd, random_state(rng, sd.dim()));
      worst_comm = std::max(worst_comm, (omega * h - h * omega).norm() / h.norm());
      worst_fixed = std::max(worst_fixed, (pinch(sd, omega) - omega).norm());
    }
    add("dephase_commutes", worst_comm <= 1e-10 && worst_fixed <= 1e-12,
        "max ||[omega,H]||/||H|| = " + fmt3(worst_comm) +
            ", max fixed-point residual = " + fmt3(worst_fixed));
  }

  // Time-averaged distance stays below the equilibration coefficient.
  {
    ExperimentPlan plan;
    plan.n_values = {6};
    plan.samples_per_n = 2;
    plan.master_seed = derive_seed(opts.seed, {10});
    plan.workers = opts.workers;
    const std::vector<EquilibrationInstance> instances = equilibration_time_average_sweep(plan, 6, 2);
    double worst = 0.0;
    for (const EquilibrationInstance& inst : instances) worst = std::max(worst, inst.ratio);
    add("equilibration_bound", worst <= 1.0,
        "max time-average/C_eq ratio over " + std::to_string(instances.size()) +
            " instances = " + fmt3(worst));
  }

  // Distinguishability lower bound and its proof-step inequality.
  {
    int instances = 0;
    double min_slack = 1.0;
    double worst_proof = 0.0;
    bool ok = true;
    std::string failure;
    try {
      for (int n = 3; n <= 6; ++n) {
        for (int s = 0; s < 13; ++s) {
          const std::uint64_t seed =
              derive_seed(opts.seed, {11, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(s)});
          const SpinChainSpec spec = sample_spec(n, 1.0, 0.4, seed);
          const SampleContext ctx = make_sample_context(spec, 1, s);
          Rng rng(derive_seed(seed, {12}));
          for (int trial = 0; trial < 4; ++trial) {
            const auto k = static_cast<std::uint64_t>(rng.uniform() * ctx.sd.dim());
            const QuenchRecord rec = run_quench_pair(ctx, k);
            min_slack = std::min(min_slack, rec.d_omega - rec.thm1_lb);
            Matrix psi_s = Matrix::Zero(2, 2);
            const auto s_idx = ctx.part.extract_s(static_cast<std::int64_t>(k));
            psi_s(s_idx, s_idx) = 1.0;
            worst_proof = std::max(
                worst_proof, trace_distance(psi_s, rec.omega_s1) - rec.r_1);
            ++instances;
          }
        }
      }
    } catch (const VerificationError& err) {
      ok = false;
      failure = err.what();
    }
    ok = ok && min_slack >= -1e-10 && worst_proof <= 1e-10;
    add("distinguishability_bound", ok,
        failure.empty() ? std::to_string(instances) + " instances, min slack = " +
                              fmt3(min_slack) + ", max proof-step excess = " + fmt3(worst_proof)
                        : failure);
  }

  // Haar-averaged R against the geometric-entanglement bound, plus its
  // per-eigenstate overlap inequality.
  {
    bool ok = true;
    std::string details;
    double worst_overlap = 0.0;
    for (int s = 0; s < 2 && ok; ++s) {
      const std::uint64_t seed = derive_seed(opts.seed, {13, static_cast<std::uint64_t>(s)});
      const SpinChainSpec spec = sample_spec(6, 1.0, 0.4, seed);
      for (std::int64_t basis = 0; basis < 2; ++basis) {
        const Theorem2Result res =
            theorem2_montecarlo(spec, 1, basis, 200, derive_seed(seed, {14}));
        if (!res.pass) ok = false;
        details = "mean R = " + fmt3(res.mean_r) + ", bound = " + fmt3(res.bound) +
                  ", stderr = " + fmt3(res.std_error);
      }
      const SampleContext ctx = make_sample_context(spec, 1, s);
      Matrix psi_s = Matrix::Zero(2, 2);
      psi_s(0, 0) = 1.0;
      for (std::int64_t k = 0; k < ctx.sd.dim(); ++k) {
        const Matrix& red = ctx.cache.reduced[static_cast<std::size_t>(k)];
        const double overlap = (red * psi_s).trace().real();
        const double dist = trace_distance(red, psi_s);
        worst_overlap = std::max(worst_overlap, overlap - (1.0 - dist * dist));
      }
    }
    ok = ok && worst_overlap <= 1e-10;
    add("haar_average_bound", ok,
        details + ", max overlap-bound excess = " + fmt3(worst_overlap));
  }

  // Quadrature averages converge to the dephased state as the horizon grows.
  {
    const SpinChainSpec spec = sample_spec(4, 1.0, 0.4, derive_seed(opts.seed, {15}));
    const std::vector<ConvergencePoint> points = time_average_convergence(
        spec, 5, {1e2, 1e3, 1e4}, 2000, derive_seed(opts.seed, {16}));
    bool ok = points.back().residual <= 0.05;
    std::string series;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i > 0 && points[i].residual > 1.25 * points[i - 1].residual) ok = false;
      if (!series.empty()) series += ", ";
      series += fmt3(points[i].residual);
    }
    add("time_average_convergence", ok, "residuals by decade: " + series);
  }

  return report;
}

}  // namespace quench
