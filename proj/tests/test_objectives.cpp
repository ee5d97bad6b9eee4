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

#include "floqopt/objectives.hpp"
#include "floqopt/validation.hpp"

using namespace floqopt;

namespace {

ControlModel two_spin_base(const TwoSpinParams& p, int n_max, double omega) {
  std::vector<ControlChannel> ch;
  for (auto [axis, site] : {std::pair{Axis::x, 1}, std::pair{Axis::y, 1},
                            std::pair{Axis::x, 2}, std::pair{Axis::y, 2}})
    ch.push_back({pauli(axis, site, 2), RealVector::Zero(n_max)});
  return ControlModel(two_spin_hamiltonian(p), ch, omega);
}

ControlModel chain_base(const ChainParams& p, int n_max, double omega) {
  const int n = p.num_spins();
  std::vector<ControlChannel> ch;
  for (int site : {1, n})
    for (Axis axis : {Axis::x, Axis::y})
      ch.push_back({pauli(axis, site, n), RealVector::Zero(n_max)});
  return ControlModel(chain_hamiltonian(p), ch, omega);
}

RealVector random_params(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RealVector p(n);
  for (int i = 0; i < n; ++i) p(i) = u(rng);
  return p;
}

// Central finite difference of an objective's value along every parameter.
RealVector fd_gradient(Objective& obj, const RealVector& params,
                       double h = 1e-5) {
  RealVector g(params.size());
  for (int i = 0; i < params.size(); ++i) {
    RealVector pp = params, pm = params;
    pp(i) += h;
    pm(i) -= h;
    g(i) = (obj.value(pp) - obj.value(pm)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("gate fidelity") {
  const Matrix ud = canonical_gate({0.5, 0.4, 0.3});
  SECTION("exact match and phase flip") {
    REQUIRE(gate_fidelity(ud, ud) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(gate_fidelity(-ud, ud) == Catch::Approx(-1.0).margin(1e-14));
    REQUIRE(gate_fidelity_modulus(std::exp(kI * 0.7) * ud, ud) ==
            Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("invariant under simultaneous left multiplication") {
    auto rng = make_rng(4, Stream::validation);
    for (int i = 0; i < 20; ++i) {
      const Matrix h =
          two_spin_hamiltonian({0.1 * i, 0.2, 1.0 + 0.1 * i, 2.0});
      const Matrix v = hermitian_evolution(h, 0.3);
      const Matrix u = hermitian_evolution(h, 0.8);
      REQUIRE(std::abs(gate_fidelity(v * u, v * ud) - gate_fidelity(u, ud)) <
              1e-12);
    }
  }
  SECTION("drift-only evolution reaches the target with modest fidelity") {
    const Matrix h = two_spin_hamiltonian({0.13, 0.26, 5.40, 9.95});
    REQUIRE(gate_fidelity(hermitian_evolution(h, 0.11), ud) < 0.9);
  }
  SECTION("dimension mismatch") {
    REQUIRE_THROWS_AS(gate_fidelity(Matrix::Identity(2, 2), ud),
                      std::invalid_argument);
  }
}

TEST_CASE("duration penalty") {
  REQUIRE(duration_penalty(0.0, 0.5) == 0.0);
  REQUIRE(duration_penalty(1.0, 0.11) == Catch::Approx(0.11));
  REQUIRE_THROWS_AS(duration_penalty(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("gate objective gradients match finite differences") {
  auto rng = make_rng(41, Stream::validation);
  const Matrix ud = canonical_gate({0.5, 0.4, 0.3});
  ControlModel base = two_spin_base({0.13, 0.26, 5.40, 9.95}, 2, kPi / 0.2);
  SECTION("fixed duration") {
    GateObjective obj(base, ud, 16, false);
    for (int inst = 0; inst < 5; ++inst) {
      const RealVector p = random_params(obj.num_params(), rng, 1.5);
      const auto ev = obj.evaluate(p, true);
      const RealVector fd = fd_gradient(obj, p);
      REQUIRE((fd - ev.grad).norm() / std::max(ev.grad.norm(), 1e-12) < 1e-5);
    }
  }
  SECTION("with omega and duration penalty") {
    GateObjective obj(base, ud, 16, true);
    obj.set_penalty(0.03);
    for (int inst = 0; inst < 5; ++inst) {
      RealVector p(obj.num_params());
      p.head(8) = random_params(8, rng, 1.5);
      p(8) = kPi / 0.2 * (1.0 + 0.05 * inst);
      const auto ev = obj.evaluate(p, true);
      const RealVector fd = fd_gradient(obj, p, 1e-6);
      REQUIRE((fd - ev.grad).norm() / ev.grad.norm() < 1e-5);
    }
  }
}

TEST_CASE("tangle objective") {
  const Vector psi0 = bloch_product_state({{1.59, 2.10}, {5.23, 0.57}});
  ControlModel base = two_spin_base({0.3, 0.2, 2.7, 6.2}, 2, kPi / 0.4);
  SECTION("uncontrolled evolution never reaches maximal entanglement") {
    const auto es = eigensystem(assemble(base, 16));
    double mx = 0.0;
    for (int i = 0; i <= 800; ++i)
      mx = std::max(mx, tangle_pure(propagator(es, 0.8 * i / 800.0) * psi0));
    REQUIRE(mx < 0.999);
  }
  SECTION("value stays within bounds and the penalty is nonnegative") {
    auto rng = make_rng(42, Stream::validation);
    TangleObjective obj(base, psi0, {0.4}, 1e-4, 16);
    for (int i = 0; i < 5; ++i) {
      const auto ev = obj.evaluate(random_params(8, rng, 2.0), false);
      REQUIRE(ev.F0 >= 0.0);
      REQUIRE(ev.F0 <= 1.0);
      REQUIRE(ev.Fp >= 0.0);
    }
  }
  SECTION("curvature matches a time finite difference for drift evolution") {
    const auto es = eigensystem(assemble(base, 16));
    const double t = 0.23, h = 1e-4;
    auto c2 = [&](double tt) {
      return tangle_pure(propagator(es, tt) * psi0);
    };
    const double fd = (c2(t + h) - 2.0 * c2(t) + c2(t - h)) / (h * h);
    REQUIRE(std::abs(tangle_curvature(es, psi0, t) - fd) < 1e-4);
  }
  SECTION("gradients match finite differences, with curvature penalty") {
    auto rng = make_rng(43, Stream::validation);
    for (double penalty : {0.0, 1e-4, 1e-2}) {
      TangleObjective obj(base, psi0, {0.4}, penalty, 16);
      const RealVector p = random_params(8, rng, 1.5);
      const auto ev = obj.evaluate(p, true);
      const RealVector fd = fd_gradient(obj, p);
      REQUIRE((fd - ev.grad).norm() / std::max(ev.grad.norm(), 1e-12) < 1e-5);
    }
  }
  SECTION("multi-time average") {
    auto rng = make_rng(44, Stream::validation);
    const RealVector p = random_params(8, rng, 1.0);
    TangleObjective single(base, psi0, {0.4}, 1e-4, 16);
    TangleObjective twice(base, psi0, {0.4, 0.4}, 1e-4, 16);
    REQUIRE(single.value(p) == Catch::Approx(twice.value(p)).margin(1e-14));
    TangleObjective multi(base, psi0, {0.3, 0.4}, 1e-4, 16);
    TangleObjective at03(base, psi0, {0.3}, 1e-4, 16);
    REQUIRE(multi.value(p) ==
            Catch::Approx(0.5 * (single.value(p) + at03.value(p)))
                .margin(1e-12));
    const auto gm = multi.evaluate(p, true).grad;
    const auto g1 = single.evaluate(p, true).grad;
    const auto g2 = at03.evaluate(p, true).grad;
    REQUIRE((gm - 0.5 * (g1 + g2)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("chain bound objective") {
  ChainParams chain{{0.91, 0.97, 0.40}, {0.78, 1.48}, {1.27, 2.65}};
  ControlModel base = chain_base(chain, 2, kPi / 1.5);
  const Vector psi0 =
      bloch_product_state({{1.39, 1.28, 0.71}, {6.03, 0.95, 5.30}});
  SECTION("uncontrolled dynamics generate little end-spin entanglement") {
    const auto es = eigensystem(assemble(base, 16));
    double mx = 0.0;
    for (int i = 0; i <= 600; ++i) {
      const Vector psi = propagator(es, 3.0 * i / 600.0) * psi0;
      mx = std::max(mx,
                    eof_wootters(partial_trace_outer(psi, psi, {1, 3}, 3)));
    }
    REQUIRE(mx < 0.5);
  }
  SECTION("value equals the lower bound of the evolved state") {
    auto rng = make_rng(45, Stream::validation);
    ChainBoundObjective obj(base, psi0, 3, 16);
    const RealVector p = random_params(8, rng, 1.0);
    const auto ev = obj.evaluate(p, false);
    ControlModel m = base;
    m.set_parameters(p, false);
    const auto es = eigensystem(assemble(m, 16));
    Vector psi = propagator(es, m.t_final()) * psi0;
    psi /= psi.norm();
    REQUIRE(ev.F0 == Catch::Approx(tangle_lower_bound(psi, 3)).margin(1e-9));
  }
  SECTION("gradients match finite differences") {
    auto rng = make_rng(46, Stream::validation);
    ChainBoundObjective obj(base, psi0, 3, 16);
    const RealVector p = random_params(8, rng, 1.0);
    const auto ev = obj.evaluate(p, true);
    const RealVector fd = fd_gradient(obj, p);
    REQUIRE((fd - ev.grad).norm() / ev.grad.norm() < 1e-5);
  }
  SECTION("directional curvature matches a second difference") {
    auto rng = make_rng(47, Stream::validation);
    ChainBoundObjective obj(base, psi0, 3, 16);
    const RealVector p = random_params(8, rng, 1.0);
    RealVector b = random_params(8, rng, 1.0);
    b /= b.norm();
    const double exact = obj.curvature_along(p, b);
    const double h = 1e-2;
    const double fd =
        (obj.value(p + h * b) - 2.0 * obj.value(p) + obj.value(p - h * b)) /
        (h * h);
    REQUIRE(std::abs(fd - exact) / std::max(std::abs(exact), 1e-10) < 1e-3);
  }
}

TEST_CASE("ensemble objective") {
  ChainParams chain{{0.91, 0.97, 0.40}, {0.78, 1.48}, {1.27, 2.65}};
  ControlModel base = chain_base(chain, 2, kPi / 1.5);
  const Vector psi0 =
      bloch_product_state({{1.39, 1.28, 0.71}, {6.03, 0.95, 5.30}});
  auto rng = make_rng(48, Stream::validation);
  const RealVector p = random_params(8, rng, 1.0);

  SECTION("zero error reproduces the single-configuration objective") {
    std::vector<ControlModel> members = {base, base, base};
    EnsembleObjective ens(members, psi0, 3, 16);
    ChainBoundObjective single(base, psi0, 3, 16);
    REQUIRE(ens.value(p) == Catch::Approx(single.value(p)).margin(1e-13));
    const auto ge = ens.evaluate(p, true).grad;
    const auto gs = single.evaluate(p, true).grad;
    REQUIRE((ge - gs).cwiseAbs().maxCoeff() < 1e-13);
  }
  SECTION("single member equals that member") {
    ChainParams perturbed = chain;
    perturbed.gx[0] *= 1.07;
    ControlModel member = chain_base(perturbed, 2, kPi / 1.5);
    EnsembleObjective ens({member}, psi0, 3, 16);
    ChainBoundObjective single(member, psi0, 3, 16);
    REQUIRE(ens.value(p) == Catch::Approx(single.value(p)).margin(1e-14));
  }
  SECTION("deterministic mean over members") {
    ChainParams pa = chain, pb = chain;
    pa.gy[1] *= 0.93;
    pb.gx[1] *= 1.04;
    std::vector<ControlModel> members = {chain_base(pa, 2, kPi / 1.5),
                                         chain_base(pb, 2, kPi / 1.5)};
    EnsembleObjective e1(members, psi0, 3, 16);
    EnsembleObjective e2(members, psi0, 3, 16);
    const auto v1 = e1.evaluate(p, true);
    const auto v2 = e2.evaluate(p, true);
    REQUIRE(v1.F == v2.F);  // bit-identical
    REQUIRE((v1.grad - v2.grad).cwiseAbs().maxCoeff() == 0.0);
    ChainBoundObjective sa(members[0], psi0, 3, 16);
    ChainBoundObjective sb(members[1], psi0, 3, 16);
    REQUIRE(v1.F ==
            Catch::Approx(0.5 * (sa.value(p) + sb.value(p))).margin(1e-13));
  }
  SECTION("gradient of the mean matches finite differences") {
    ChainParams pa = chain;
    pa.gx[0] *= 1.05;
    std::vector<ControlModel> members = {base, chain_base(pa, 2, kPi / 1.5)};
    EnsembleObjective ens(members, psi0, 3, 16);
    const auto ev = ens.evaluate(p, true);
    const RealVector fd = fd_gradient(ens, p);
    REQUIRE((fd - ev.grad).norm() / ev.grad.norm() < 1e-5);
  }
}

TEST_CASE("gate objective curvature along a direction") {
  auto rng = make_rng(49, Stream::validation);
  ControlModel base = two_spin_base({0.13, 0.26, 5.40, 9.95}, 2, kPi / 0.2);
  GateObjective obj(base, canonical_gate({0.5, 0.4, 0.3}), 16, false);
  const RealVector p = random_params(8, rng, 1.5);
  RealVector b = random_params(8, rng, 1.0);
  b /= b.norm();
  const double exact = obj.curvature_along(p, b);
  const double h = 1e-2;
  const double fd =
      (obj.value(p + h * b) - 2.0 * obj.value(p) + obj.value(p - h * b)) /
      (h * h);
  REQUIRE(std::abs(fd - exact) / std::max(std::abs(exact), 1e-10) < 1e-3);
}
