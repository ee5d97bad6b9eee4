// Copyright 2026 The floqopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "floqopt/entanglement.hpp"
#include "floqopt/validation.hpp"

using namespace floqopt;

namespace {

Vector bell_phi_plus() {
  Vector psi = Vector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return psi;
}

Matrix random_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = complexd(n(rng), n(rng));
  const Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  return q;
}

}  // namespace

TEST_CASE("tangle of pure two-qubit states") {
  SECTION("Bell state") {
    REQUIRE(tangle_pure(bell_phi_plus()) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("computational product state") {
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0;
    REQUIRE(tangle_pure(psi) == Catch::Approx(0.0).margin(1e-14));
  }
  SECTION("uniform superposition is a product state") {
    Vector psi = Vector::Constant(4, 0.5);
    REQUIRE(tangle_pure(psi) == Catch::Approx(0.0).margin(1e-14));
  }
  SECTION("local-unitary invariance") {
    auto rng = make_rng(99, Stream::validation);
    for (int i = 0; i < 100; ++i) {
      const Vector psi = testgen::random_state(rng, 4);
      const Matrix u = kron(random_unitary2(rng), random_unitary2(rng));
      REQUIRE(std::abs(tangle_pure(psi) - tangle_pure(u * psi)) < 1e-10);
    }
  }
  SECTION("norm violation") {
    Vector psi = Vector::Zero(4);
    psi(0) = 1.1;
    REQUIRE_THROWS_AS(tangle_pure(psi), std::invalid_argument);
  }
}

TEST_CASE("reduced density matrices") {
  SECTION("product state stays pure") {
    const Vector psi = bloch_product_state({{0.7, 2.1}, {0.3, 4.0}});
    const Matrix rho = reduced_density(psi, {1}, 2);
    REQUIRE((rho * rho).trace().real() == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("Bell state reduces to the maximally mixed qubit") {
    const Matrix rho = reduced_density(bell_phi_plus(), {1}, 2);
    REQUIRE(max_abs(rho - 0.5 * Matrix::Identity(2, 2)) < 1e-12);
  }
  SECTION("GHZ end pair by hand") {
    Vector ghz = Vector::Zero(8);
    ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
    const Matrix rho = reduced_density(ghz, {1, 3}, 3);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 0.5;
    REQUIRE(max_abs(rho - expected) < 1e-12);
  }
  SECTION("partial trace consistency") {
    auto rng = make_rng(7, Stream::validation);
    for (int i = 0; i < 20; ++i) {
      const Vector psi = testgen::random_state(rng, 8);
      const Matrix rho_13 = reduced_density(psi, {1, 3}, 3);
      const Matrix rho_1 = reduced_density(psi, {1}, 3);
      // trace out the second factor of rho_13
      Matrix traced = Matrix::Zero(2, 2);
      for (int i1 = 0; i1 < 2; ++i1)
        for (int j1 = 0; j1 < 2; ++j1)
          for (int b = 0; b < 2; ++b)
            traced(i1, j1) += rho_13(2 * i1 + b, 2 * j1 + b);
      REQUIRE(max_abs(traced - rho_1) < 1e-12);
    }
  }
  SECTION("positive semidefinite with unit trace") {
    auto rng = make_rng(8, Stream::validation);
    const Vector psi = testgen::random_state(rng, 16);
    const Matrix rho = reduced_density(psi, {2, 3}, 4);
    REQUIRE(std::abs(rho.trace().real() - 1.0) < 1e-12);
    auto es = hermitian_eigensystem(rho);
    REQUIRE(es.values.minCoeff() > -1e-10);
  }
  SECTION("invalid subsets") {
    const Vector psi = bell_phi_plus();
    REQUIRE_THROWS_AS(reduced_density(psi, {}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(reduced_density(psi, {3}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(reduced_density(psi, {2, 1}, 2), std::invalid_argument);
  }
}

TEST_CASE("tangle lower bound") {
  SECTION("Bell pair saturates at one") {
    REQUIRE(tangle_lower_bound(bell_phi_plus(), 2) ==
            Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("product states give zero") {
    const Vector psi =
        bloch_product_state({{0.4, 1.2, 2.8}, {0.1, 3.3, 5.1}});
    REQUIRE(std::abs(tangle_lower_bound(psi, 3)) < 1e-12);
  }
  SECTION("equals the tangle for two-spin pure states") {
    auto rng = make_rng(21, Stream::validation);
    for (int i = 0; i < 50; ++i) {
      const Vector psi = testgen::random_state(rng, 4);
      REQUIRE(std::abs(tangle_lower_bound(psi, 2) - tangle_pure(psi)) < 1e-10);
    }
  }
  SECTION("bounded by the end-pair concurrence squared") {
    auto rng = make_rng(22, Stream::validation);
    for (int i = 0; i < 100; ++i) {
      const Vector psi = testgen::random_state(rng, 8);
      const double c = concurrence(reduced_density(psi, {1, 3}, 3));
      REQUIRE(tangle_lower_bound(psi, 3) <= c * c + 1e-9);
    }
  }
}

TEST_CASE("Wootters concurrence and entanglement of formation") {
  SECTION("Bell projector") {
    const Vector psi = bell_phi_plus();
    const Matrix rho = psi * psi.adjoint();
    REQUIRE(concurrence(rho) == Catch::Approx(1.0).margin(1e-10));
    REQUIRE(eof_wootters(rho) == Catch::Approx(1.0).margin(1e-10));
  }
  SECTION("maximally mixed state is separable") {
    const Matrix rho = 0.25 * Matrix::Identity(4, 4);
    REQUIRE(concurrence(rho) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(eof_wootters(rho) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("Werner state against the closed form") {
    const double p = 0.9;
    const Vector psi = bell_phi_plus();
    const Matrix rho =
        p * psi * psi.adjoint() + (1.0 - p) * 0.25 * Matrix::Identity(4, 4);
    const double c_expected = (3.0 * p - 1.0) / 2.0;
    REQUIRE(concurrence(rho) == Catch::Approx(c_expected).margin(1e-10));
    const double eof_expected = binary_entropy(
        0.5 * (1.0 + std::sqrt(1.0 - c_expected * c_expected)));
    REQUIRE(eof_wootters(rho) == Catch::Approx(eof_expected).margin(1e-10));
  }
  SECTION("binary entropy endpoints") {
    REQUIRE(binary_entropy(0.0) == 0.0);
    REQUIRE(binary_entropy(1.0) == 0.0);
    REQUIRE(binary_entropy(0.5) == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("rejects matrices that are not density matrices") {
    // diag(0.6, 0.6, 0, -0.2): the Wootters product acquires eigenvalues
    // near -0.12, far beyond the clipping tolerance.
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = rho(1, 1) = 0.6;
    rho(3, 3) = -0.2;
    REQUIRE_THROWS(concurrence(rho));
  }
}
