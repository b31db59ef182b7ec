#include "quench/diagnostics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "quench/rng.hpp"

namespace quench {

namespace {

double abs_eigenvalue_sum_2x2(const Matrix& m) {
  // Hermitian 2x2: eigenvalues mu +- r with mu = tr/2,
  // r = sqrt(((a-d)/2)^2 + |b|^2).
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double mu = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
  return std::abs(mu + r) + std::abs(mu - r);
}

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() ||
      rho.rows() != rho.cols()) {
    throw std::invalid_argument("operator dimension mismatch");
  }
  const Matrix diff = rho - sigma;
  if (diff.rows() == 1) return 0.5 * std::abs(diff(0, 0).real());
  if (diff.rows() == 2) return 0.5 * abs_eigenvalue_sum_2x2(diff);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

std::pair<Matrix, double> optimal_distinguisher(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() ||
      rho.rows() != rho.cols()) {
    throw std::invalid_argument("operator dimension mismatch");
  }
  const Matrix diff = rho - sigma;
  const std::int64_t d = diff.rows();
  if (diff.norm() <= 1e-14 * std::max<double>(1.0, d)) {
    return {Matrix::Zero(d, d), 0.0};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  Matrix a = Matrix::Zero(d, d);
  double value = 0.0;
  for (std::int64_t i = 0; i < d; ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > 0.0) {
      a += solver.eigenvectors().col(i) * solver.eigenvectors().col(i).adjoint();
      value += lambda;
    }
  }
  return {a, value};
}

RealVector block_weights(const Vector& c, const std::vector<std::pair<int, int>>& blocks) {
  RealVector p(blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto [b, e] = blocks[j];
    if (b < 0 || e > c.size() || b >= e) throw std::invalid_argument("invalid block range");
    double w = 0.0;
    for (int k = b; k < e; ++k) w += std::norm(c(k));
    p(static_cast<Eigen::Index>(j)) = w;
  }
  return p;
}

double effective_dimension(const Vector& c, const std::vector<std::pair<int, int>>& blocks) {
  return 1.0 / loschmidt_time_average(c, blocks);
}

double loschmidt_time_average(const Vector& c, const std::vector<std::pair<int, int>>& blocks) {
  const RealVector p = block_weights(c, blocks);
  return p.squaredNorm();
}

double equilibration_coefficient(const Vector& c, const std::vector<std::pair<int, int>>& blocks,
                                 std::int64_t d_s) {
  if (d_s < 1) throw std::invalid_argument("subsystem dimension must be positive");
  const double d_eff = effective_dimension(c, blocks);
  return 0.5 * std::sqrt(static_cast<double>(d_s) * static_cast<double>(d_s) / d_eff);
}

double effective_entanglement_R(const SpectralData& sd, const ReducedEigenstateCache& cache,
                                const Vector& c, const Matrix& psi0_s) {
  if (c.size() != sd.dim()) throw std::invalid_argument("overlap dimension mismatch");
  if (psi0_s.rows() != cache.part.dim_s() || psi0_s.cols() != cache.part.dim_s()) {
    throw std::invalid_argument("subsystem state dimension mismatch");
  }
  double r = 0.0;
  for (const auto& [b, e] : sd.blocks) {
    if (e - b == 1) {
      const double w = std::norm(c(b));
      if (w < kBlockWeightFloor) continue;
      r += w * trace_distance(cache.reduced[static_cast<std::size_t>(b)], psi0_s);
    } else {
      double w = 0.0;
      for (int k = b; k < e; ++k) w += std::norm(c(k));
      if (w < kBlockWeightFloor) continue;
      const Vector proj = sd.eigenvectors.middleCols(b, e - b) * c.segment(b, e - b);
      const Matrix rho_s = partial_trace_pure(proj, cache.part) / w;
      r += w * trace_distance(rho_s, psi0_s);
    }
  }
  return r;
}

DeltaResult geometric_entanglement_delta(const ReducedEigenstateCache& cache) {
  const std::int64_t ds = cache.part.dim_s();
  Matrix basis = Matrix::Identity(ds, ds);
  return geometric_entanglement_delta(cache, basis);
}

DeltaResult geometric_entanglement_delta(const ReducedEigenstateCache& cache,
                                         const Matrix& basis) {
  const std::int64_t ds = cache.part.dim_s();
  if (basis.rows() != ds || basis.cols() != ds) {
    throw std::invalid_argument("basis dimension mismatch");
  }
  if ((basis.adjoint() * basis - Matrix::Identity(ds, ds)).norm() > 1e-10 * ds) {
    throw std::invalid_argument("basis is not orthonormal");
  }
  std::vector<Matrix> projectors;
  projectors.reserve(static_cast<std::size_t>(ds));
  for (std::int64_t i = 0; i < ds; ++i) {
    projectors.push_back(basis.col(i) * basis.col(i).adjoint());
  }
  DeltaResult result;
  result.delta_k.reserve(cache.reduced.size());
  for (const Matrix& rho : cache.reduced) {
    double best = 1.0;
    for (const Matrix& proj : projectors) {
      best = std::min(best, trace_distance(rho, proj));
    }
    result.delta_k.push_back(best);
    result.delta = std::max(result.delta, best);
  }
  return result;
}

double theorem1_bound(double d_init, double r1, double r2) {
  return d_init - r1 - r2;
}

Vector haar_random_state(std::int64_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  Rng rng(seed);
  Vector v(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    v(i) = Complex(re, im);
  }
  const double norm = v.norm();
  if (norm == 0.0) throw std::runtime_error("degenerate Gaussian draw");
  return v / norm;
}

Theorem2Result theorem2_montecarlo(const SpinChainSpec& spec, int subsystem_site,
                                   std::int64_t basis_state, int n_samples,
                                   std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("need at least 2 Monte Carlo samples");
  const SpectralData sd = diagonalize(build_hamiltonian(spec).h);
  if (!sd.nondegenerate()) {
    throw DegenerateSpectrumError("degenerate spectrum: bound not applicable");
  }
  const Bipartition part(spec.n, {subsystem_site});
  const std::int64_t ds = part.dim_s();
  const std::int64_t db = part.dim_b();
  if (basis_state < 0 || basis_state >= ds) {
    throw std::invalid_argument("subsystem basis state out of range");
  }
  const ReducedEigenstateCache cache = reduced_eigenstate_cache(sd, part);
  const DeltaResult delta = geometric_entanglement_delta(cache);

  // With psi0_s fixed to |i><i| the per-eigenstate distances do not depend on
  // the bath draw, so compute them once.
  Matrix psi0_s = Matrix::Zero(ds, ds);
  psi0_s(basis_state, basis_state) = 1.0;
  RealVector dist(sd.dim());
  for (std::int64_t k = 0; k < sd.dim(); ++k) {
    dist(k) = trace_distance(cache.reduced[static_cast<std::size_t>(k)], psi0_s);
  }

  std::vector<double> r_values;
  r_values.reserve(static_cast<std::size_t>(n_samples));
  Vector psi0(sd.dim());
  for (int m = 0; m < n_samples; ++m) {
    const Vector phi_b =
        haar_random_state(db, derive_seed(seed, {static_cast<std::uint64_t>(Stream::Haar),
                                                 static_cast<std::uint64_t>(m)}));
    psi0.setZero();
    for (std::int64_t ib = 0; ib < db; ++ib) {
      psi0(part.fuse(basis_state, ib)) = phi_b(ib);
    }
    const Vector c = overlaps(sd, psi0);
    double r = 0.0;
    for (std::int64_t k = 0; k < sd.dim(); ++k) r += std::norm(c(k)) * dist(k);
    r_values.push_back(r);
  }

  Theorem2Result result;
  result.n_samples = n_samples;
  result.delta = delta.delta;
  result.bound = 2.0 * delta.delta * static_cast<double>(ds);
  result.mean_r = sample_mean(r_values);
  result.std_error =
      sample_std(r_values, result.mean_r) / std::sqrt(static_cast<double>(n_samples));
  result.pass = result.mean_r <= result.bound + 3.0 * result.std_error;
  return result;
}

double von_neumann_entropy(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("operator must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const RealVector lambda = clamp_spectrum(solver.eigenvalues());
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 0.0) s -= lambda(i) * std::log(lambda(i));
  }
  return s;
}

double sigma_z_alignment(const Matrix& diff) {
  if (diff.rows() != diff.cols()) throw std::invalid_argument("operator must be square");
  const double total = diff.norm();
  if (total == 0.0) return 1.0;
  return diff.diagonal().norm() / total;
}

}  // namespace quench
