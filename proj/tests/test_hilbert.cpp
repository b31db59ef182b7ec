#include <doctest.h>

#include <stdexcept>

#include "oracles.hpp"
#include "quench/hilbert.hpp"

using namespace quench;

TEST_CASE("site indexing maps site 1 to the least significant bit") {
  SiteIndexing idx(3);
  CHECK(idx.dim() == 8);

  // z pattern of site 2 across indices 0..7: + + - - + + - -
  const int expected[] = {1, 1, -1, -1, 1, 1, -1, -1};
  for (std::int64_t i = 0; i < 8; ++i) {
    CHECK(SiteIndexing::z_value(i, 2) == expected[i]);
    CHECK(SiteIndexing::bit(i, 2) == (expected[i] == 1 ? 0 : 1));
  }

  CHECK(SiteIndexing::toggle(0, 1) == 1);  // X on site 1 of |00>
  CHECK(SiteIndexing::toggle(5, 3) == 1);
  CHECK(SiteIndexing::toggle(SiteIndexing::toggle(6, 2), 2) == 6);
}

TEST_CASE("site indexing rejects invalid site counts") {
  CHECK_THROWS_AS(SiteIndexing(0), std::invalid_argument);
  CHECK_THROWS_AS(SiteIndexing(-2), std::invalid_argument);
  CHECK_THROWS_AS(SiteIndexing(63), std::invalid_argument);
}

TEST_CASE("bipartition index maps are a bijection") {
  Bipartition part(5, {2, 4});
  CHECK(part.dim() == 32);
  CHECK(part.dim_s() == 4);
  CHECK(part.dim_b() == 8);

  for (std::int64_t full = 0; full < 32; ++full) {
    const std::int64_t s = part.extract_s(full);
    const std::int64_t b = part.extract_b(full);
    CHECK(part.fuse(s, b) == full);
  }
  // subsystem bit order follows the ascending site list
  CHECK(part.extract_s(0b01010) == 3);
  CHECK(part.extract_s(0b00010) == 1);
  CHECK(part.extract_s(0b01000) == 2);
}

TEST_CASE("bipartition validates its site list") {
  CHECK_THROWS_AS(Bipartition(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition(3, {0}), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition(3, {4}), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition(3, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Bipartition(3, {3, 1}), std::invalid_argument);

  // trivial bath is allowed: the reduction is the state itself
  const Bipartition whole(2, {1, 2});
  CHECK(whole.dim_b() == 1);
  const Vector psi = basis_vector(2, 3);
  CHECK((partial_trace_pure(psi, whole) - psi * psi.adjoint()).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("pauli matrices satisfy their algebra") {
  const Matrix x = pauli_matrix(Pauli::X);
  const Matrix y = pauli_matrix(Pauli::Y);
  const Matrix z = pauli_matrix(Pauli::Z);
  const Matrix eye = Matrix::Identity(2, 2);

  CHECK((x * x - eye).norm() == doctest::Approx(0.0));
  CHECK((x * y - Complex(0, 1) * z).norm() == doctest::Approx(0.0));
  CHECK((y * z - Complex(0, 1) * x).norm() == doctest::Approx(0.0));
  CHECK((z * x - Complex(0, 1) * y).norm() == doctest::Approx(0.0));
  CHECK((x * y + y * x).norm() == doctest::Approx(0.0));
}

TEST_CASE("embedded paulis match explicit kronecker products") {
  for (int n = 2; n <= 4; ++n) {
    for (int site = 1; site <= n; ++site) {
      CHECK((embed_pauli(n, site, Pauli::X) - oracles::site_operator(n, site, oracles::pauli(0)))
                .norm() == doctest::Approx(0.0));
      CHECK((embed_pauli(n, site, Pauli::Y) - oracles::site_operator(n, site, oracles::pauli(1)))
                .norm() == doctest::Approx(0.0));
      CHECK((embed_pauli(n, site, Pauli::Z) - oracles::site_operator(n, site, oracles::pauli(2)))
                .norm() == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("embed_operator places a two-site operator correctly") {
  Rng rng(11);
  const Matrix op = oracles::random_hermitian(rng, 4);
  // op acting on sites {1,3} of a 3-site chain, checked against the kron
  // assembly of its Pauli expansion. Use matrix units instead: op = sum_kl
  // op(k,l) |k><l| with |k> = |k_site3 k_site1>.
  const Matrix full = embed_operator(3, {1, 3}, op);
  Matrix expected = Matrix::Zero(8, 8);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      // subsystem index bit 0 -> site 1 (full bit 0), bit 1 -> site 3 (full bit 2)
      for (int bath = 0; bath < 2; ++bath) {
        const int row = (r & 1) | ((r >> 1) << 2) | (bath << 1);
        const int col = (c & 1) | ((c >> 1) << 2) | (bath << 1);
        expected(row, col) = op(r, c);
      }
    }
  }
  CHECK((full - expected).norm() == doctest::Approx(0.0));

  CHECK_THROWS_AS(embed_operator(3, {1, 2}, Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
  Vector bell = Vector::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  const Bipartition part(2, {1});

  const Matrix rho_s = partial_trace_pure(bell, part);
  CHECK((rho_s - 0.5 * Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0).epsilon(1e-14));

  const Matrix rho = bell * bell.adjoint();
  CHECK((partial_trace(rho, part) - rho_s).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("partial trace agrees with the digit-bookkeeping oracle") {
  Rng rng(23);
  const int n = 4;
  const Bipartition part(n, {1, 3});
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix rho = oracles::random_density(rng, 16);
    const Matrix expected_s = oracles::partial_trace_keep(rho, n, {1, 3});
    const Matrix expected_b = oracles::partial_trace_keep(rho, n, {2, 4});
    CHECK((partial_trace(rho, part) - expected_s).norm() < 1e-13);
    CHECK((partial_trace(rho, part, Keep::Bath) - expected_b).norm() < 1e-13);
  }
}

TEST_CASE("pure-state partial trace matches the density-matrix route") {
  Rng rng(37);
  const Bipartition part(5, {2, 3});
  for (int trial = 0; trial < 3; ++trial) {
    const Vector psi = oracles::random_state(rng, 32);
    const Matrix direct = partial_trace_pure(psi, part);
    const Matrix via_rho = partial_trace(Matrix(psi * psi.adjoint()), part);
    CHECK((direct - via_rho).norm() < 1e-13);
    CHECK(std::abs(direct.trace().real() - 1.0) < 1e-13);
    CHECK((direct - direct.adjoint()).norm() < 1e-13);
  }
}

TEST_CASE("product basis states reduce to basis projectors") {
  const Bipartition part(3, {2});
  const Vector psi = basis_vector(3, 0b110);  // site2 down -> subsystem index 1
  const Matrix rho_s = partial_trace_pure(psi, part);
  Matrix expected = Matrix::Zero(2, 2);
  expected(1, 1) = 1.0;
  CHECK((rho_s - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("observable duality: Tr[(A (x) I) rho] = Tr[A Tr_B rho]") {
  Rng rng(41);
  const int n = 3;
  const Bipartition part(n, {2});
  const Matrix a = oracles::random_hermitian(rng, 2);
  const Matrix a_full = embed_operator(n, {2}, a);
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix rho = oracles::random_density(rng, 8);
    const Complex lhs = (a_full * rho).trace();
    const Complex rhs = (a * partial_trace(rho, part)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("basis_vector validates and fills correctly") {
  const Vector v = basis_vector(2, 2);
  CHECK(v.size() == 4);
  CHECK(v(2) == Complex(1.0, 0.0));
  CHECK(v.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(basis_vector(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(basis_vector(2, -1), std::invalid_argument);
}

TEST_CASE("spectrum clamp policy") {
  RealVector ok(3);
  ok << 0.5, 0.5, -5e-11;
  const RealVector clamped = clamp_spectrum(ok);
  CHECK(clamped(2) == 0.0);
  CHECK(clamped.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(clamped(0) == doctest::Approx(0.5).epsilon(1e-9));

  RealVector bad(2);
  bad << 1.0, -1e-9;
  CHECK_THROWS_AS(clamp_spectrum(bad), std::runtime_error);
}
