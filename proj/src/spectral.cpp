#include "quench/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace quench {

namespace {

void check_dimension(const SpectralData& sd, const Vector& psi) {
  if (psi.size() != sd.dim()) throw std::invalid_argument("state dimension mismatch");
}

std::vector<std::pair<int, int>> find_blocks(const RealVector& e, double tol) {
  std::vector<std::pair<int, int>> blocks;
  const int d = static_cast<int>(e.size());
  int start = 0;
  for (int k = 1; k < d; ++k) {
    if (e(k) - e(k - 1) > tol) {
      blocks.emplace_back(start, k);
      start = k;
    }
  }
  blocks.emplace_back(start, d);
  return blocks;
}

bool detect_gap_degeneracy(const RealVector& e, double tol) {
  const int d = static_cast<int>(e.size());
  if (d < 2) return false;
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
  for (int k = 1; k < d; ++k) {
    for (int l = 0; l < k; ++l) gaps.push_back(e(k) - e(l));
  }
  std::sort(gaps.begin(), gaps.end());
  if (gaps.front() <= tol) return true;  // a vanishing gap = degenerate pair
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] - gaps[i - 1] <= tol) return true;
  }
  return false;
}

}  // namespace

SpectralData diagonalize(const Matrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("matrix must be square and nonempty");
  }
  const double scale = h.norm();
  if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, scale)) {
    throw std::invalid_argument("matrix is not Hermitian");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge");
  }

  SpectralData sd;
  sd.eigenvalues = solver.eigenvalues();
  sd.eigenvectors = solver.eigenvectors();

  const std::int64_t d = sd.dim();
  for (std::int64_t k = 0; k < d; ++k) {
    std::int64_t imax = 0;
    double best = 0.0;
    for (std::int64_t i = 0; i < d; ++i) {
      const double a = std::abs(sd.eigenvectors(i, k));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) {
      const Complex phase = std::conj(sd.eigenvectors(imax, k)) / best;
      sd.eigenvectors.col(k) *= phase;
    }
  }

  const double range = sd.eigenvalues(d - 1) - sd.eigenvalues(0);
  sd.degeneracy_tolerance = kDegeneracyTolRel * range;
  sd.blocks = find_blocks(sd.eigenvalues, sd.degeneracy_tolerance);
  sd.gap_degenerate = detect_gap_degeneracy(sd.eigenvalues, sd.degeneracy_tolerance);
  return sd;
}

Vector overlaps(const SpectralData& sd, const Vector& psi0) {
  check_dimension(sd, psi0);
  return sd.eigenvectors.adjoint() * psi0;
}

Vector basis_state_overlaps(const SpectralData& sd, std::int64_t configuration) {
  if (configuration < 0 || configuration >= sd.dim()) {
    throw std::invalid_argument("basis state index out of range");
  }
  return sd.eigenvectors.row(configuration).conjugate().transpose();
}

Matrix dephase(const SpectralData& sd, const Vector& psi0) {
  check_dimension(sd, psi0);
  const Vector c = overlaps(sd, psi0);
  // omega = W W^dag with one column pi_J|psi0> per block.
  Matrix w(sd.dim(), static_cast<Eigen::Index>(sd.blocks.size()));
  for (std::size_t j = 0; j < sd.blocks.size(); ++j) {
    const auto [b, e] = sd.blocks[j];
    w.col(static_cast<Eigen::Index>(j)) =
        sd.eigenvectors.middleCols(b, e - b) * c.segment(b, e - b);
  }
  return w * w.adjoint();
}

Matrix pinch(const SpectralData& sd, const Matrix& rho) {
  if (rho.rows() != sd.dim() || rho.cols() != sd.dim()) {
    throw std::invalid_argument("operator dimension mismatch");
  }
  Matrix a = sd.eigenvectors.adjoint() * rho * sd.eigenvectors;
  Matrix pinched = Matrix::Zero(sd.dim(), sd.dim());
  for (const auto& [b, e] : sd.blocks) {
    pinched.block(b, b, e - b, e - b) = a.block(b, b, e - b, e - b);
  }
  return sd.eigenvectors * pinched * sd.eigenvectors.adjoint();
}

Vector evolve(const SpectralData& sd, const Vector& psi0, double t) {
  check_dimension(sd, psi0);
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  Vector c = overlaps(sd, psi0);
  for (std::int64_t k = 0; k < sd.dim(); ++k) {
    c(k) *= std::exp(Complex(0.0, -sd.eigenvalues(k) * t));
  }
  return sd.eigenvectors * c;
}

Matrix evolve_overlaps_batch(const SpectralData& sd, const Vector& c,
                             const std::vector<double>& times) {
  check_dimension(sd, c);
  const std::int64_t d = sd.dim();
  Matrix phases(d, static_cast<Eigen::Index>(times.size()));
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!std::isfinite(times[j])) throw std::invalid_argument("time must be finite");
    for (std::int64_t k = 0; k < d; ++k) {
      phases(k, static_cast<Eigen::Index>(j)) =
          c(k) * std::exp(Complex(0.0, -sd.eigenvalues(k) * times[j]));
    }
  }
  return sd.eigenvectors * phases;
}

ReducedEigenstateCache reduced_eigenstate_cache(const SpectralData& sd,
                                                const Bipartition& part) {
  if (part.dim() != sd.dim()) throw std::invalid_argument("bipartition dimension mismatch");
  ReducedEigenstateCache cache{part, {}};
  cache.reduced.reserve(static_cast<std::size_t>(sd.dim()));
  for (std::int64_t k = 0; k < sd.dim(); ++k) {
    cache.reduced.push_back(partial_trace_pure(sd.eigenvectors.col(k), part));
  }
  return cache;
}

Matrix dephased_reduced(const SpectralData& sd, const ReducedEigenstateCache& cache,
                        const Vector& c) {
  check_dimension(sd, c);
  if (cache.part.dim() != sd.dim()) {
    throw std::invalid_argument("cache dimension mismatch");
  }
  const std::int64_t ds = cache.part.dim_s();
  Matrix omega_s = Matrix::Zero(ds, ds);
  for (const auto& [b, e] : sd.blocks) {
    if (e - b == 1) {
      omega_s += std::norm(c(b)) * cache.reduced[static_cast<std::size_t>(b)];
    } else {
      const Vector w = sd.eigenvectors.middleCols(b, e - b) * c.segment(b, e - b);
      omega_s += partial_trace_pure(w, cache.part);
    }
  }
  return omega_s;
}

}  // namespace quench
