#include "quench/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "quench/hilbert.hpp"
#include "quench/rng.hpp"

namespace quench {

SpinChainSpec sample_spec(int n, double sigma0, double sigma1, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("chain needs at least 2 sites");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");
  if (!(sigma1 >= 0.0)) throw std::invalid_argument("sigma1 must be nonnegative");

  SpinChainSpec spec;
  spec.n = n;
  spec.sigma0 = sigma0;
  spec.sigma1 = sigma1;
  spec.seed = seed;

  Rng fields(substream_seed(seed, Stream::Fields));
  spec.h.resize(n);
  for (int i = 0; i < n; ++i) spec.h[i] = sigma0 * fields.gaussian();

  Rng couplings(substream_seed(seed, Stream::Couplings));
  spec.b.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    for (int a = 0; a < 3; ++a) spec.b[i][a] = sigma1 * couplings.gaussian();
  }

  for (double v : spec.h) {
    if (!std::isfinite(v)) throw std::runtime_error("drawn field is not finite");
  }
  for (const auto& bond : spec.b) {
    for (double v : bond) {
      if (!std::isfinite(v)) throw std::runtime_error("drawn coupling is not finite");
    }
  }
  return spec;
}

nlohmann::json spec_to_json(const SpinChainSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n;
  j["sigma0"] = spec.sigma0;
  j["sigma1"] = spec.sigma1;
  j["seed"] = spec.seed;
  j["h"] = spec.h;
  j["b"] = nlohmann::json::array();
  for (const auto& bond : spec.b) {
    j["b"].push_back({bond[0], bond[1], bond[2]});
  }
  return j;
}

SpinChainSpec spec_from_json(const nlohmann::json& j) {
  SpinChainSpec spec;
  spec.n = j.at("n").get<int>();
  spec.sigma0 = j.at("sigma0").get<double>();
  spec.sigma1 = j.at("sigma1").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.h = j.at("h").get<std::vector<double>>();
  for (const auto& bond : j.at("b")) {
    if (bond.size() != 3) throw std::invalid_argument("coupling vector must have 3 components");
    spec.b.push_back({bond[0].get<double>(), bond[1].get<double>(), bond[2].get<double>()});
  }
  if (static_cast<int>(spec.h.size()) != spec.n ||
      static_cast<int>(spec.b.size()) != spec.n - 1) {
    throw std::invalid_argument("field/coupling array lengths inconsistent with n");
  }
  return spec;
}

Matrix HamiltonianParts::h0() const {
  Matrix m = Matrix::Zero(h0_diag.size(), h0_diag.size());
  for (Eigen::Index i = 0; i < h0_diag.size(); ++i) m(i, i) = h0_diag(i);
  return m;
}

HamiltonianParts build_hamiltonian(const SpinChainSpec& spec) {
  if (spec.n < 2 || static_cast<int>(spec.h.size()) != spec.n ||
      static_cast<int>(spec.b.size()) != spec.n - 1) {
    throw std::invalid_argument("invalid spin chain spec");
  }
  const std::int64_t d = spec.dim();
  HamiltonianParts parts;
  parts.h = Matrix::Zero(d, d);
  parts.h0_diag = RealVector::Zero(d);

  for (std::int64_t idx = 0; idx < d; ++idx) {
    double field_energy = 0.0;
    for (int site = 1; site <= spec.n; ++site) {
      field_energy += spec.h[site - 1] * SiteIndexing::z_value(idx, site);
    }
    parts.h0_diag(idx) = field_energy;

    double diagonal = field_energy;
    for (int site = 1; site < spec.n; ++site) {
      diagonal += spec.b[site - 1][2] * SiteIndexing::z_value(idx, site) *
                  SiteIndexing::z_value(idx, site + 1);
    }
    parts.h(idx, idx) = diagonal;

    // XX flips both bond bits with amplitude +1; YY flips them with amplitude
    // -1 when the bits agree and +1 when they differ.
    for (int site = 1; site < spec.n; ++site) {
      const std::int64_t flipped =
          SiteIndexing::toggle(SiteIndexing::toggle(idx, site), site + 1);
      const bool equal_bits =
          SiteIndexing::bit(idx, site) == SiteIndexing::bit(idx, site + 1);
      const double xx = spec.b[site - 1][0];
      const double yy = equal_bits ? -spec.b[site - 1][1] : spec.b[site - 1][1];
      parts.h(flipped, idx) += Complex(xx + yy, 0);
    }
  }
  return parts;
}

std::vector<ProductEigenstate> product_eigenbasis(const SpinChainSpec& spec) {
  if (static_cast<int>(spec.h.size()) != spec.n) {
    throw std::invalid_argument("invalid spin chain spec");
  }
  const std::int64_t d = spec.dim();
  std::vector<ProductEigenstate> states(d);
  for (std::int64_t idx = 0; idx < d; ++idx) {
    double energy = 0.0;
    for (int site = 1; site <= spec.n; ++site) {
      energy += spec.h[site - 1] * SiteIndexing::z_value(idx, site);
    }
    states[idx] = {static_cast<std::uint64_t>(idx), energy};
  }
  return states;
}

std::uint64_t flipped_configuration(std::uint64_t configuration, int n, int site) {
  if (site < 1 || site > n) {
    throw std::invalid_argument("site " + std::to_string(site) + " outside chain of " +
                                std::to_string(n) + " sites");
  }
  return configuration ^ (std::uint64_t{1} << (site - 1));
}

Vector flip_subsystem(const ProductEigenstate& state, int n, int site) {
  const std::uint64_t flipped = flipped_configuration(state.configuration, n, site);
  return basis_vector(n, static_cast<std::int64_t>(flipped));
}

}  // namespace quench
