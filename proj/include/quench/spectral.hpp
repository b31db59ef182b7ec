#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "quench/hilbert.hpp"
#include "quench/types.hpp"

namespace quench {

// Relative tolerance used to merge eigenvalues into degeneracy blocks:
// epsilon = kDegeneracyTolRel * (E_max - E_min).
inline constexpr double kDegeneracyTolRel = 1e-9;

struct SpectralData {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // column k is |E_k>, phase-fixed
  // Half-open index ranges [first, second) of equal-eigenvalue groups.
  std::vector<std::pair<int, int>> blocks;
  // True when two distinct eigenvalue gaps coincide within tolerance
  // (includes the case of a degenerate spectrum itself).
  bool gap_degenerate = false;
  double degeneracy_tolerance = 0.0;

  std::int64_t dim() const { return eigenvalues.size(); }
  bool nondegenerate() const {
    return static_cast<std::int64_t>(blocks.size()) == dim();
  }
};

// Dense Hermitian eigendecomposition with deterministic output: eigenvalues
// ascending, each eigenvector's largest-magnitude component made real
// positive (first such component on ties).
SpectralData diagonalize(const Matrix& h);

// c_k = <E_k|psi0>.
Vector overlaps(const SpectralData& sd, const Vector& psi0);

// Overlaps of a computational basis state: c_k = conj(V(config, k)).
Vector basis_state_overlaps(const SpectralData& sd, std::int64_t configuration);

// Time-averaged (dephased) state omega = sum_j pi_j |psi0><psi0| pi_j.
Matrix dephase(const SpectralData& sd, const Vector& psi0);

// Mixed-state pinching sum_j pi_j rho pi_j over the same blocks.
Matrix pinch(const SpectralData& sd, const Matrix& rho);

// psi_t = sum_k e^{-i E_k t} c_k |E_k>.
Vector evolve(const SpectralData& sd, const Vector& psi0, double t);

// Columns psi_{t_j} for a batch of times, from precomputed overlaps c.
Matrix evolve_overlaps_batch(const SpectralData& sd, const Vector& c,
                             const std::vector<double>& times);

struct ReducedEigenstateCache {
  Bipartition part;
  std::vector<Matrix> reduced;  // entry k = Tr_B |E_k><E_k|
};

ReducedEigenstateCache reduced_eigenstate_cache(const SpectralData& sd,
                                                const Bipartition& part);

// omega^S = Tr_B[dephase(psi0)] computed from overlaps and the cache without
// forming the full d x d dephased state. Degenerate blocks are reduced from
// the unnormalized block vector pi_J |psi0>.
Matrix dephased_reduced(const SpectralData& sd, const ReducedEigenstateCache& cache,
                        const Vector& c);

}  // namespace quench
