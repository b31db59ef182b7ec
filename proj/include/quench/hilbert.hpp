#pragma once

#include <cstdint>
#include <vector>

#include "quench/types.hpp"

namespace quench {

// Tensor-product bookkeeping for a chain of n spin-1/2 sites.
//
// Convention (fixed for all serialized output): site i in {1..n} lives on bit
// (i-1) of the basis-state index, site 1 being the least significant bit.
// Bit value 0 is spin up, i.e. the +1 eigenstate of sigma^Z at that site.
struct SiteIndexing {
  int n;

  explicit SiteIndexing(int sites);

  std::int64_t dim() const { return std::int64_t{1} << n; }

  // Bit of `index` carrying site `site` (1-based).
  static int bit(std::int64_t index, int site) {
    return static_cast<int>((index >> (site - 1)) & 1);
  }

  // sigma^Z eigenvalue (+1/-1) of site `site` in basis state `index`.
  static int z_value(std::int64_t index, int site) { return 1 - 2 * bit(index, site); }

  static std::int64_t toggle(std::int64_t index, int site) {
    return index ^ (std::int64_t{1} << (site - 1));
  }
};

// Split of the chain into a subsystem S (an increasing list of sites) and the
// bath B (everything else). Provides the index maps between the full basis
// index and the (subsystem, bath) index pair.
class Bipartition {
 public:
  Bipartition(int n, std::vector<int> subsystem_sites);

  int n() const { return n_; }
  const std::vector<int>& subsystem_sites() const { return subsystem_sites_; }

  std::int64_t dim() const { return std::int64_t{1} << n_; }
  std::int64_t dim_s() const { return std::int64_t{1} << subsystem_bits_.size(); }
  std::int64_t dim_b() const { return dim() / dim_s(); }

  // Full basis index assembled from a subsystem index and a bath index.
  std::int64_t fuse(std::int64_t s_index, std::int64_t b_index) const;

  std::int64_t extract_s(std::int64_t full_index) const;
  std::int64_t extract_b(std::int64_t full_index) const;

 private:
  int n_ = 0;
  std::vector<int> subsystem_sites_;
  std::vector<int> subsystem_bits_;  // 0-based bit positions, ascending
  std::vector<int> bath_bits_;
};

enum class Pauli { X, Y, Z };
enum class Keep { Subsystem, Bath };

// 2x2 Pauli matrix.
Matrix pauli_matrix(Pauli axis);

// I (x) ... (x) sigma^axis (x) ... (x) I with the Pauli at `site`.
Matrix embed_pauli(int n, int site, Pauli axis);

// General embedding: operator `op` acting on the listed sites, identity
// elsewhere. op must be square with dimension 2^|sites|.
Matrix embed_operator(int n, const std::vector<int>& sites, const Matrix& op);

// Partial trace of a density operator over the complement of the kept part.
Matrix partial_trace(const Matrix& rho, const Bipartition& part, Keep keep = Keep::Subsystem);

// Tr_B |psi><psi| without forming the outer product; O(d * d_S) storage work.
Matrix partial_trace_pure(const Vector& psi, const Bipartition& part);

// Computational basis vector |configuration> of an n-site chain.
Vector basis_vector(int n, std::int64_t configuration);

// Eigenvalue clamp policy for reduced states. Floating point can push reduced
// eigenvalues slightly below zero; values in [-kNegativeEigTol, 0) are clamped
// to 0 and the spectrum renormalized to unit sum. Anything below the threshold
// is a real error and throws.
inline constexpr double kNegativeEigTol = 1e-10;

RealVector clamp_spectrum(const RealVector& eigenvalues);

}  // namespace quench
