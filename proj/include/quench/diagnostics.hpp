#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "quench/model.hpp"
#include "quench/spectral.hpp"
#include "quench/types.hpp"

namespace quench {

// Thrown when a computation that assumes a nondegenerate spectrum is asked to
// run on a sample whose degeneracy blocks are not all singletons.
class DegenerateSpectrumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// D(rho, sigma) = (1/2) sum |eigenvalues(rho - sigma)|. Has an analytic 2x2
// path; larger dimensions go through a Hermitian eigensolver.
double trace_distance(const Matrix& rho, const Matrix& sigma);

// Projector onto the nonnegative eigenspace of (rho - sigma) and the achieved
// bias Tr[A (rho - sigma)], which equals the trace distance. Returns the zero
// operator when rho == sigma.
std::pair<Matrix, double> optimal_distinguisher(const Matrix& rho, const Matrix& sigma);

// p_J = sum_{k in J} |c_k|^2 per degeneracy block.
RealVector block_weights(const Vector& c, const std::vector<std::pair<int, int>>& blocks);

// d_eff = 1 / sum_J p_J^2 = 1 / Tr[omega^2].
double effective_dimension(const Vector& c, const std::vector<std::pair<int, int>>& blocks);

// Infinite-time average of the Loschmidt echo |<psi0|psi_t>|^2; equals
// 1/d_eff by the same sum.
double loschmidt_time_average(const Vector& c, const std::vector<std::pair<int, int>>& blocks);

// C_eq = (1/2) sqrt(d_S^2 / d_eff).
double equilibration_coefficient(const Vector& c, const std::vector<std::pair<int, int>>& blocks,
                                 std::int64_t d_s);

// R = sum_k |c_k|^2 D(Tr_B |E_k><E_k|, psi0_s); degenerate blocks use the
// normalized reduced block state weighted by the block probability, and
// blocks with weight below kBlockWeightFloor contribute zero.
inline constexpr double kBlockWeightFloor = 1e-14;
double effective_entanglement_R(const SpectralData& sd, const ReducedEigenstateCache& cache,
                                const Vector& c, const Matrix& psi0_s);

struct DeltaResult {
  std::vector<double> delta_k;  // per eigenstate
  double delta = 0.0;           // max_k delta_k
};

// delta_k = min_i D(Tr_B |E_k><E_k|, |i><i|) over the computational product
// basis of S; the overload takes an arbitrary orthonormal basis (columns).
DeltaResult geometric_entanglement_delta(const ReducedEigenstateCache& cache);
DeltaResult geometric_entanglement_delta(const ReducedEigenstateCache& cache,
                                         const Matrix& basis);

// Theorem-1 style lower bound on the distinguishability of the two
// time-averaged reduced states.
double theorem1_bound(double d_init, double r1, double r2);

// Normalized vector of i.i.d. complex standard Gaussians.
Vector haar_random_state(std::int64_t dim, std::uint64_t seed);

struct Theorem2Result {
  double mean_r = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // 2 * delta * d_S
  double delta = 0.0;
  int n_samples = 0;
  bool pass = false;  // mean_r <= bound + 3 * std_error
};

// Draws Haar bath states phi_B, computes R(|basis_state><basis_state| (x)
// phi_B) for the chain's Hamiltonian, and compares the empirical mean with
// the bound 2*delta*d_S. Refuses degenerate samples.
Theorem2Result theorem2_montecarlo(const SpinChainSpec& spec, int subsystem_site,
                                   std::int64_t basis_state, int n_samples,
                                   std::uint64_t seed);

// S = -sum lambda ln lambda, eigenvalues clamped per the shared policy.
double von_neumann_entropy(const Matrix& rho);

// Frobenius-norm fraction of a Hermitian operator lying in the diagonal
// subalgebra; 1.0 for the zero operator by convention.
double sigma_z_alignment(const Matrix& diff);

}  // namespace quench
