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

#include <random>

#include "floqopt/spin_system.hpp"

using namespace floqopt;

TEST_CASE("pauli matrices on a register") {
  SECTION("single-spin sigma_z") {
    const Matrix z = pauli(Axis::z, 1, 1);
    REQUIRE(std::abs(z(0, 0) - 1.0) < 1e-15);
    REQUIRE(std::abs(z(1, 1) + 1.0) < 1e-15);
    REQUIRE(std::abs(z(0, 1)) < 1e-15);
  }
  SECTION("involution") {
    const Matrix x = pauli(Axis::x, 1, 2);
    REQUIRE(max_abs(x * x - Matrix::Identity(4, 4)) < 1e-15);
  }
  SECTION("anticommutation on the same site") {
    const Matrix x = pauli(Axis::x, 1, 2);
    const Matrix y = pauli(Axis::y, 1, 2);
    REQUIRE(max_abs(x * y + y * x) < 1e-15);
  }
  SECTION("properties") {
    for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
      for (int site = 1; site <= 3; ++site) {
        const Matrix p = pauli(axis, site, 3);
        REQUIRE(is_hermitian(p));
        REQUIRE(std::abs(p.trace()) < 1e-14);
        REQUIRE(max_abs(p * p - Matrix::Identity(8, 8)) < 1e-14);
      }
    }
  }
  SECTION("site out of range") {
    REQUIRE_THROWS_AS(pauli(Axis::x, 0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(pauli(Axis::x, 3, 2), std::invalid_argument);
  }
}

TEST_CASE("two-spin hamiltonian") {
  SECTION("pure exchange spectrum") {
    // omega = 0, gx = gy = g: H = 2g(|01><10| + h.c.), eigenvalues
    // {+2g, -2g, 0, 0} by hand diagonalization.
    const double g = 1.7;
    const Matrix h = two_spin_hamiltonian({0.0, 0.0, g, g});
    auto es = hermitian_eigensystem(h);
    RealVector expected(4);
    expected << -2.0 * g, 0.0, 0.0, 2.0 * g;
    REQUIRE((es.values - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("decoupled spins are diagonal") {
    const double w1 = 0.8, w2 = 0.3;
    const Matrix h = two_spin_hamiltonian({w1, w2, 0.0, 0.0});
    Matrix diag = Matrix::Zero(4, 4);
    diag(0, 0) = (w1 + w2) / 2.0;
    diag(1, 1) = (w1 - w2) / 2.0;
    diag(2, 2) = (-w1 + w2) / 2.0;
    diag(3, 3) = (-w1 - w2) / 2.0;
    REQUIRE(max_abs(h - diag) < 1e-14);
  }
  SECTION("caption parameters") {
    const Matrix h = two_spin_hamiltonian({0.13, 0.26, 5.40, 9.95});
    REQUIRE(is_hermitian(h));
    REQUIRE(std::abs(h.trace()) < 1e-12);
  }
}

TEST_CASE("chain hamiltonian") {
  SECTION("N = 2 reduces to the two-spin form") {
    TwoSpinParams p{0.4, 0.9, 2.2, 3.1};
    ChainParams c{{p.omega1, p.omega2}, {p.gx}, {p.gy}};
    REQUIRE(max_abs(chain_hamiltonian(c) - two_spin_hamiltonian(p)) < 1e-14);
  }
  SECTION("three-spin caption parameters") {
    ChainParams c{{0.91, 0.97, 0.40}, {0.78, 1.48}, {1.27, 2.65}};
    const Matrix h = chain_hamiltonian(c);
    REQUIRE(h.rows() == 8);
    REQUIRE(is_hermitian(h));
    REQUIRE(std::abs(h.trace()) < 1e-12);
  }
  SECTION("all parameters zero") {
    ChainParams c{{0.0, 0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    REQUIRE(max_abs(chain_hamiltonian(c)) == 0.0);
  }
  SECTION("inconsistent array lengths") {
    ChainParams c{{0.1, 0.2, 0.3}, {1.0}, {1.0, 2.0}};
    REQUIRE_THROWS_AS(chain_hamiltonian(c), std::invalid_argument);
  }
  SECTION("spin-count cap") {
    ChainParams c{{0.1, 0.1, 0.1, 0.1, 0.1},
                  {1, 1, 1, 1},
                  {1, 1, 1, 1}};
    REQUIRE_THROWS_AS(chain_hamiltonian(c), std::invalid_argument);
    REQUIRE_NOTHROW(chain_hamiltonian(c, 5));
  }
}

TEST_CASE("canonical two-qubit gate") {
  SECTION("identity at zero angles") {
    REQUIRE(max_abs(canonical_gate({0, 0, 0}) - Matrix::Identity(4, 4)) <
            1e-14);
  }
  SECTION("quarter xx rotation on |00>") {
    // exp(-i a sx sx)|00> = cos(a)|00> - i sin(a)|11>; at a = pi/4 this is
    // (|00> - i|11>)/sqrt(2).
    Vector psi0 = Vector::Zero(4);
    psi0(0) = 1.0;
    const Vector out = canonical_gate({kPi / 4, 0, 0}) * psi0;
    Vector expected = Vector::Zero(4);
    expected(0) = 1.0 / std::sqrt(2.0);
    expected(3) = -kI / std::sqrt(2.0);
    REQUIRE((out - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("unitarity for random angle triples") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int i = 0; i < 100; ++i) {
      const Matrix g = canonical_gate({u(rng), u(rng), u(rng)});
      REQUIRE(max_abs(g.adjoint() * g - Matrix::Identity(4, 4)) < 1e-12);
    }
  }
  SECTION("joint exponential equals the product of single-axis factors") {
    const std::array<double, 3> alpha{0.5, 0.4, 0.3};
    Matrix product = Matrix::Identity(4, 4);
    const Axis axes[3] = {Axis::x, Axis::y, Axis::z};
    for (int k = 0; k < 3; ++k) {
      const Matrix ss = pauli(axes[k], 1, 2) * pauli(axes[k], 2, 2);
      product = product * (std::cos(alpha[k]) * Matrix::Identity(4, 4) -
                           kI * std::sin(alpha[k]) * ss);
    }
    REQUIRE(max_abs(canonical_gate(alpha) - product) < 1e-12);
  }
  SECTION("target gate is maximally entangling") {
    // alpha_x + alpha_y >= pi/4 and alpha_y + alpha_z <= pi/4
    REQUIRE(0.5 + 0.4 >= kPi / 4);
    REQUIRE(0.4 + 0.3 <= kPi / 4);
  }
}

TEST_CASE("bloch product states") {
  SECTION("all theta zero gives |0...0>") {
    const Vector psi = bloch_product_state({{0, 0, 0}, {0, 0, 0}});
    REQUIRE(std::abs(psi(0) - 1.0) < 1e-15);
    REQUIRE(psi.tail(7).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("theta = pi flips a single spin") {
    const Vector psi = bloch_product_state({{kPi}, {0}});
    REQUIRE(std::abs(psi(1) - 1.0) < 1e-12);
    REQUIRE(std::abs(psi(0)) < 1e-12);
  }
  SECTION("paper initial state is a normalized product state") {
    const Vector psi = bloch_product_state({{1.59, 2.10}, {5.23, 0.57}});
    REQUIRE(std::abs(psi.norm() - 1.0) < 1e-12);
  }
  SECTION("mismatched angle arrays") {
    REQUIRE_THROWS_AS(bloch_product_state({{0.1}, {0.2, 0.3}}),
                      std::invalid_argument);
  }
}
