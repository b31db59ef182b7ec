#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "quench/types.hpp"

namespace quench {

// One disorder realization of the random XYZ chain
//   H = H0 + H1 = sum_i h_i sigma^Z_i
//              + sum_{i<n} (b_i^X XX + b_i^Y YY + b_i^Z ZZ)  on bond (i, i+1),
// open boundary. h_i ~ N(0, sigma0^2), b_i components ~ N(0, sigma1^2).
// The drawn values are a pure function of (n, sigma0, sigma1, seed).
struct SpinChainSpec {
  int n = 0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> h;                 // n on-site fields
  std::vector<std::array<double, 3>> b;  // n-1 coupling vectors (X, Y, Z)

  std::int64_t dim() const { return std::int64_t{1} << n; }
};

// Draws the disorder. Fields and couplings come from separate substreams of
// `seed` (Stream::Fields, Stream::Couplings), each consumed in site order.
SpinChainSpec sample_spec(int n, double sigma0, double sigma1, std::uint64_t seed);

// JSON round-trip; doubles survive bit-exactly.
nlohmann::json spec_to_json(const SpinChainSpec& spec);
SpinChainSpec spec_from_json(const nlohmann::json& j);

struct HamiltonianParts {
  Matrix h;            // full H = H0 + H1
  RealVector h0_diag;  // H0 is diagonal in the computational basis

  Matrix h0() const;
  Matrix h1() const { return h - h0(); }
};

HamiltonianParts build_hamiltonian(const SpinChainSpec& spec);

// Eigenstate of H0: a computational basis configuration with its field energy
// sum_i h_i z_i, z_i = +1 for bit 0 (spin up) and -1 for bit 1.
struct ProductEigenstate {
  std::uint64_t configuration = 0;
  double energy0 = 0.0;
};

// All 2^n configurations in basis-index order.
std::vector<ProductEigenstate> product_eigenbasis(const SpinChainSpec& spec);

std::uint64_t flipped_configuration(std::uint64_t configuration, int n, int site);

// sigma^X_site applied to the basis state: the vector with bit (site-1) toggled.
Vector flip_subsystem(const ProductEigenstate& state, int n, int site);

}  // namespace quench
