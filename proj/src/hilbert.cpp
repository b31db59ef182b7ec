#include "quench/hilbert.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace quench {

namespace {

constexpr int kMaxSites = 62;  // keeps 2^n inside int64

void check_site_count(int n) {
  if (n < 1 || n > kMaxSites) {
    throw std::invalid_argument("site count must be in [1, " + std::to_string(kMaxSites) +
                                "], got " + std::to_string(n));
  }
}

}  // namespace

SiteIndexing::SiteIndexing(int sites) : n(sites) { check_site_count(sites); }

Bipartition::Bipartition(int n, std::vector<int> subsystem_sites)
    : n_(n), subsystem_sites_(std::move(subsystem_sites)) {
  check_site_count(n);
  if (subsystem_sites_.empty()) {
    throw std::invalid_argument("subsystem must contain at least one site");
  }
  int previous = 0;
  for (int site : subsystem_sites_) {
    if (site < 1 || site > n_) {
      throw std::invalid_argument("subsystem site " + std::to_string(site) +
                                  " outside chain of " + std::to_string(n_) + " sites");
    }
    if (site <= previous) {
      throw std::invalid_argument("subsystem sites must be strictly increasing");
    }
    previous = site;
    subsystem_bits_.push_back(site - 1);
  }
  for (int bit = 0; bit < n_; ++bit) {
    if (!std::binary_search(subsystem_bits_.begin(), subsystem_bits_.end(), bit)) {
      bath_bits_.push_back(bit);
    }
  }
}

std::int64_t Bipartition::fuse(std::int64_t s_index, std::int64_t b_index) const {
  std::int64_t full = 0;
  for (std::size_t i = 0; i < subsystem_bits_.size(); ++i) {
    full |= ((s_index >> i) & 1) << subsystem_bits_[i];
  }
  for (std::size_t i = 0; i < bath_bits_.size(); ++i) {
    full |= ((b_index >> i) & 1) << bath_bits_[i];
  }
  return full;
}

std::int64_t Bipartition::extract_s(std::int64_t full_index) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < subsystem_bits_.size(); ++i) {
    s |= ((full_index >> subsystem_bits_[i]) & 1) << i;
  }
  return s;
}

std::int64_t Bipartition::extract_b(std::int64_t full_index) const {
  std::int64_t b = 0;
  for (std::size_t i = 0; i < bath_bits_.size(); ++i) {
    b |= ((full_index >> bath_bits_[i]) & 1) << i;
  }
  return b;
}

Matrix pauli_matrix(Pauli axis) {
  Matrix m(2, 2);
  switch (axis) {
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

Matrix embed_pauli(int n, int site, Pauli axis) {
  check_site_count(n);
  if (site < 1 || site > n) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside chain of " +
                                std::to_string(n) + " sites");
  }
  return embed_operator(n, {site}, pauli_matrix(axis));
}

Matrix embed_operator(int n, const std::vector<int>& sites, const Matrix& op) {
  const Bipartition part(n, sites);
  const std::int64_t d_s = part.dim_s();
  const std::int64_t d_b = part.dim_b();
  if (op.rows() != op.cols() || op.rows() != d_s) {
    throw std::invalid_argument("operator dimension does not match 2^|sites|");
  }
  Matrix out = Matrix::Zero(part.dim(), part.dim());
  for (std::int64_t s_row = 0; s_row < d_s; ++s_row) {
    for (std::int64_t s_col = 0; s_col < d_s; ++s_col) {
      const Complex value = op(s_row, s_col);
      if (value == Complex(0, 0)) continue;
      for (std::int64_t b = 0; b < d_b; ++b) {
        out(part.fuse(s_row, b), part.fuse(s_col, b)) = value;
      }
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& rho, const Bipartition& part, Keep keep) {
  if (rho.rows() != rho.cols() || rho.rows() != part.dim()) {
    throw std::invalid_argument("density operator dimension does not match the bipartition");
  }
  const bool keep_s = (keep == Keep::Subsystem);
  const std::int64_t d_keep = keep_s ? part.dim_s() : part.dim_b();
  const std::int64_t d_sum = keep_s ? part.dim_b() : part.dim_s();
  Matrix out = Matrix::Zero(d_keep, d_keep);
  for (std::int64_t row = 0; row < d_keep; ++row) {
    for (std::int64_t col = 0; col < d_keep; ++col) {
      Complex sum(0, 0);
      for (std::int64_t t = 0; t < d_sum; ++t) {
        const std::int64_t full_row = keep_s ? part.fuse(row, t) : part.fuse(t, row);
        const std::int64_t full_col = keep_s ? part.fuse(col, t) : part.fuse(t, col);
        sum += rho(full_row, full_col);
      }
      out(row, col) = sum;
    }
  }
  return out;
}

Matrix partial_trace_pure(const Vector& psi, const Bipartition& part) {
  if (psi.size() != part.dim()) {
    throw std::invalid_argument("state dimension does not match the bipartition");
  }
  const std::int64_t d_s = part.dim_s();
  const std::int64_t d_b = part.dim_b();
  // Reshape |psi> into a d_S x d_B array, then rho_S = Psi Psi^dagger.
  Matrix reshaped(d_s, d_b);
  for (std::int64_t s = 0; s < d_s; ++s) {
    for (std::int64_t b = 0; b < d_b; ++b) {
      reshaped(s, b) = psi(part.fuse(s, b));
    }
  }
  return reshaped * reshaped.adjoint();
}

Vector basis_vector(int n, std::int64_t configuration) {
  check_site_count(n);
  const std::int64_t d = std::int64_t{1} << n;
  if (configuration < 0 || configuration >= d) {
    throw std::invalid_argument("basis configuration out of range");
  }
  Vector v = Vector::Zero(d);
  v(configuration) = Complex(1, 0);
  return v;
}

RealVector clamp_spectrum(const RealVector& eigenvalues) {
  RealVector out = eigenvalues;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < -kNegativeEigTol) {
      throw std::runtime_error("spectrum entry " + std::to_string(out(i)) +
                               " below the negative-eigenvalue tolerance");
    }
    if (out(i) < 0.0) out(i) = 0.0;
    sum += out(i);
  }
  if (sum > 0.0) out /= sum;
  return out;
}

}  // namespace quench
