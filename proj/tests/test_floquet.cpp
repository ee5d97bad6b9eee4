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

#include "floqopt/floquet.hpp"
#include "floqopt/ode_oracle.hpp"
#include "floqopt/validation.hpp"

using namespace floqopt;

namespace {

ControlModel fig1_model(double t_f = 0.11) {
  const Matrix drift = two_spin_hamiltonian({0.13, 0.26, 5.40, 9.95});
  std::vector<ControlChannel> channels;
  RealVector a(3);
  a << 1.1, -0.7, 0.4;
  RealVector b(3);
  b << 0.5, 0.9, -0.3;
  RealVector c(3);
  c << -0.8, 0.2, 0.6;
  RealVector d(3);
  d << 0.3, -0.5, 1.0;
  channels.push_back({pauli(Axis::x, 1, 2), a});
  channels.push_back({pauli(Axis::y, 1, 2), b});
  channels.push_back({pauli(Axis::x, 2, 2), c});
  channels.push_back({pauli(Axis::y, 2, 2), d});
  return ControlModel(drift, channels, kPi / t_f);
}

}  // namespace

TEST_CASE("fourier block structure") {
  const Matrix h = pauli(Axis::x, 1, 1);
  SECTION("sine coupling populates the +-n side diagonals") {
    const int nu_max = 2, n = 1;
    const Matrix block = fourier_block(h, 1.0, n, nu_max);
    const Matrix upper = h / (2.0 * kI);
    for (int nu = -nu_max; nu <= nu_max; ++nu) {
      for (int mu = -nu_max; mu <= nu_max; ++mu) {
        const Matrix sub =
            block.block((nu + nu_max) * 2, (mu + nu_max) * 2, 2, 2);
        if (nu - mu == n)
          REQUIRE(max_abs(sub - upper) < 1e-15);
        else if (nu - mu == -n)
          REQUIRE(max_abs(sub + upper) < 1e-15);
        else
          REQUIRE(max_abs(sub) < 1e-15);
      }
    }
  }
  SECTION("hermitian overall") {
    const Matrix block = fourier_block(h, 0.7, 2, 4);
    REQUIRE(is_hermitian(block));
  }
  SECTION("zero amplitude gives the zero matrix") {
    REQUIRE(max_abs(fourier_block(h, 0.0, 1, 2)) == 0.0);
  }
  SECTION("harmonic outside the truncation range") {
    REQUIRE_THROWS_AS(fourier_block(h, 1.0, 3, 2), std::invalid_argument);
  }
}

TEST_CASE("floquet operator assembly") {
  SECTION("zero control is block diagonal with ladder shifts") {
    ControlModel m = fig1_model();
    RealVector p = RealVector::Zero(m.num_amplitudes());
    m.set_parameters(p, false);
    const auto op = assemble(m, 3);
    for (int nu = -3; nu <= 3; ++nu) {
      const Matrix d = op.matrix.block(op.block_start(nu), op.block_start(nu),
                                       4, 4);
      REQUIRE(max_abs(d - m.drift() - nu * m.omega() * Matrix::Identity(4, 4)) <
              1e-14);
    }
    REQUIRE(is_hermitian(op.matrix));
  }
  SECTION("zero drift leaves zero central blocks") {
    std::vector<ControlChannel> ch;
    RealVector a(1);
    a << 1.0;
    ch.push_back({pauli(Axis::x, 1, 1), a});
    ControlModel m(Matrix::Zero(2, 2), ch, 5.0);
    const auto op = assemble(m, 2);
    for (int nu = -2; nu <= 2; ++nu) {
      const Matrix d = op.matrix.block(op.block_start(nu), op.block_start(nu),
                                       2, 2);
      REQUIRE(max_abs(d - nu * 5.0 * Matrix::Identity(2, 2)) < 1e-15);
    }
  }
  SECTION("caption parameters at nu_max 32") {
    const auto op = assemble(fig1_model(), 32);
    REQUIRE(op.dim() == 4 * 65);
    REQUIRE(is_hermitian(op.matrix));
  }
  SECTION("nu_max below n_max is rejected") {
    REQUIRE_THROWS_AS(assemble(fig1_model(), 2), std::invalid_argument);
  }
  SECTION("hermiticity for random models") {
    auto rng = make_rng(3, Stream::validation);
    for (int i = 0; i < 10; ++i) {
      const ControlModel m = testgen::random_two_spin_model(rng);
      const auto op = assemble(m, 10);
      REQUIRE(max_abs(op.matrix - op.matrix.adjoint()) < 1e-12);
    }
  }
}

TEST_CASE("brillouin zone selection") {
  SECTION("drift-only quasi-energies fold the drift spectrum") {
    ControlModel m = fig1_model(0.11);
    m.set_parameters(RealVector::Zero(m.num_amplitudes()), false);
    const auto es = eigensystem(assemble(m, 16));
    auto drift = hermitian_eigensystem(m.drift());
    std::vector<double> folded;
    const double w = m.omega();
    for (int k = 0; k < 4; ++k) {
      const double e = drift.values(k);
      folded.push_back(e - w * std::ceil(e / w - 0.5));
    }
    std::sort(folded.begin(), folded.end());
    for (int k = 0; k < 4; ++k)
      REQUIRE(es.quasi_energies(k) == Catch::Approx(folded[k]).margin(1e-10));
  }
  SECTION("selected modes are orthonormal") {
    const auto es = eigensystem(assemble(fig1_model(), 16));
    const Matrix overlap = es.modes.adjoint() * es.modes;
    REQUIRE(max_abs(overlap - Matrix::Identity(4, 4)) < 1e-10);
  }
  SECTION("caption parameters converge to tiny completeness defect") {
    const auto es = eigensystem(assemble(fig1_model(), 32));
    REQUIRE(es.completeness_defect < 1e-9);
  }
  SECTION("centroid fallback on a planted spectrum") {
    // Diagonal operator, d = 2, nu_max = 1, Omega = 1. Three eigenvalues in
    // the zone force the fallback; the central-block pair must win.
    FloquetOperator op;
    op.dim_sys = 2;
    op.nu_max = 1;
    op.omega = 1.0;
    RealVector diag(6);
    diag << -1.3, 0.45, 0.1, 0.3, 1.1, -0.6;
    op.matrix = diag.cast<complexd>().asDiagonal();
    const auto es = eigensystem(op);
    REQUIRE(es.fallback_used);
    REQUIRE(es.quasi_energies(0) == Catch::Approx(0.1).margin(1e-12));
    REQUIRE(es.quasi_energies(1) == Catch::Approx(0.3).margin(1e-12));
  }
  SECTION("duplicate replicas raise a miscount") {
    FloquetOperator op;
    op.dim_sys = 2;
    op.nu_max = 1;
    op.omega = 1.0;
    RealVector diag(6);
    diag << -1.3, 0.45, 0.1, 0.1 + 1e-12, 1.1, -0.6;
    op.matrix = diag.cast<complexd>().asDiagonal();
    REQUIRE_THROWS_AS(eigensystem(op), BrillouinZoneMiscountError);
  }
}

TEST_CASE("propagator reconstruction") {
  const ControlModel m = fig1_model();
  const auto es = eigensystem(assemble(m, 32));
  SECTION("identity at t = 0") {
    REQUIRE(max_abs(propagator(es, 0.0) - Matrix::Identity(4, 4)) < 1e-10);
  }
  SECTION("drift-only limit") {
    ControlModel m0 = m;
    m0.set_parameters(RealVector::Zero(m.num_amplitudes()), false);
    const auto es0 = eigensystem(assemble(m0, 16));
    for (double t : {0.05, 0.11, 0.4}) {
      REQUIRE(max_abs(propagator(es0, t) -
                      hermitian_evolution(m0.drift(), t)) < 1e-10);
    }
  }
  SECTION("unitary at arbitrary times") {
    for (double t : {0.03, 0.11, 0.25}) {
      const Matrix u = propagator(es, t);
      REQUIRE(max_abs(u.adjoint() * u - Matrix::Identity(4, 4)) < 1e-9);
    }
  }
  SECTION("floquet modes are periodic") {
    const double t = 0.037;
    for (int k = 0; k < 4; ++k) {
      const Vector a = es.floquet_mode(k, t);
      const Vector b = es.floquet_mode(k, t + m.period());
      REQUIRE((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("analytic time derivatives") {
  const ControlModel m = fig1_model();
  const auto es = eigensystem(assemble(m, 32));
  SECTION("drift-only first derivative at t = 0") {
    ControlModel m0 = m;
    m0.set_parameters(RealVector::Zero(m.num_amplitudes()), false);
    const auto es0 = eigensystem(assemble(m0, 16));
    REQUIRE(max_abs(time_derivative(es0, 0.0, 1) + kI * m0.drift()) < 1e-9);
  }
  SECTION("first derivative matches central differences") {
    const double t = 0.07, h = 1e-5;
    const Matrix fd = (propagator(es, t + h) - propagator(es, t - h)) / (2 * h);
    REQUIRE(max_abs(time_derivative(es, t, 1) - fd) < 1e-6);
  }
  SECTION("second derivative matches central differences") {
    const double t = 0.07, h = 1e-5;
    const Matrix fd = (propagator(es, t + h) - 2.0 * propagator(es, t) +
                       propagator(es, t - h)) /
                      (h * h);
    REQUIRE(max_abs(time_derivative(es, t, 2) - fd) < 1e-4);
  }
  SECTION("schrodinger equation") {
    const double t = 0.09;
    const Matrix lhs = time_derivative(es, t, 1);
    const Matrix rhs = -kI * m.hamiltonian(t) * propagator(es, t);
    REQUIRE(max_abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("ode oracle") {
  const ControlModel m = fig1_model();
  SECTION("identity at t = 0") {
    REQUIRE(max_abs(ode_oracle(m, 0.0) - Matrix::Identity(4, 4)) == 0.0);
  }
  SECTION("drift-only closed form") {
    ControlModel m0 = m;
    m0.set_parameters(RealVector::Zero(m.num_amplitudes()), false);
    const double t = 0.23;
    REQUIRE(max_abs(ode_oracle(m0, t) - hermitian_evolution(m0.drift(), t)) <
            1e-10);
  }
  SECTION("unitarity") {
    const Matrix u = ode_oracle(m, m.t_final());
    REQUIRE(max_abs(u.adjoint() * u - Matrix::Identity(4, 4)) < 1e-10);
  }
  SECTION("agrees with the floquet propagator") {
    const auto es = eigensystem(assemble(m, 32));
    const double tf = m.t_final();
    REQUIRE(max_abs(propagator(es, tf) - ode_oracle(m, tf)) < 1e-8);
  }
}

TEST_CASE("adaptive truncation") {
  SECTION("zero control returns the minimum tested order") {
    ControlModel m = fig1_model();
    m.set_parameters(RealVector::Zero(m.num_amplitudes()), false);
    REQUIRE(adaptive_truncation(m, 1e-10) == 2 * m.n_max());
  }
  SECTION("weak control converges at small orders") {
    ControlModel m = fig1_model();
    RealVector p = m.parameters(false) * 0.05;
    m.set_parameters(p, false);
    REQUIRE(adaptive_truncation(m, 1e-9) <= 12);
  }
  SECTION("strong control needs more sidebands, defect decreases") {
    ControlModel m = fig1_model();
    RealVector p = m.parameters(false) * 12.0;
    m.set_parameters(p, false);
    const int nu = adaptive_truncation(m, 1e-9);
    REQUIRE(nu > 6);
    const double tf = m.t_final();
    const Matrix ref = propagator(eigensystem(assemble(m, 2 * nu)), tf);
    double prev = 1e300;
    for (int trial = 6; trial <= nu; trial *= 2) {
      const double defect =
          max_abs(propagator(eigensystem(assemble(m, trial)), tf) - ref);
      REQUIRE(defect < prev + 1e-12);
      prev = defect;
    }
  }
  SECTION("cap exceeded") {
    ControlModel m = fig1_model();
    RealVector p = m.parameters(false) * 40.0;
    m.set_parameters(p, false);
    REQUIRE_THROWS(adaptive_truncation(m, 1e-12, 16));
  }
}
