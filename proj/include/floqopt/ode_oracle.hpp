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

#pragma once

#include <algorithm>
#include <cmath>

#include "floqopt/common.hpp"
#include "floqopt/control_model.hpp"

namespace floqopt {

// Time-ordered integration of dU/dt = -i H(t) U with an adaptive
// Dormand-Prince 5(4) pair. Serves as an oracle for the Floquet
// reconstruction; it shares no code with that path.
inline Matrix ode_oracle(const ControlModel& model, double t_end,
                         double tol = 1e-12) {
  const int d = model.dim();
  Matrix u = Matrix::Identity(d, d);
  if (t_end == 0.0) return u;

  auto rhs = [&](double t, const Matrix& y) -> Matrix {
    return -kI * (model.hamiltonian(t) * y);
  };

  // Dormand-Prince coefficients (FSAL pair).
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  double t = 0.0;
  double h = t_end / 64.0;
  const double h_min = std::abs(t_end) * 1e-14;
  Matrix k1 = rhs(t, u);

  while (t < t_end) {
    h = std::min(h, t_end - t);
    const Matrix k2 = rhs(t + c2 * h, u + h * (a21 * k1));
    const Matrix k3 = rhs(t + c3 * h, u + h * (a31 * k1 + a32 * k2));
    const Matrix k4 = rhs(t + c4 * h, u + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix k5 =
        rhs(t + c5 * h, u + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix k6 = rhs(
        t + h, u + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix y5 =
        u + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Matrix k7 = rhs(t + h, y5);
    const Matrix err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = tol * std::max(1.0, max_abs(u));
    const double err_norm = max_abs(err) / scale;
    if (err_norm <= 1.0) {
      t += h;
      u = y5;
      k1 = k7;  // FSAL
    }
    const double factor =
        (err_norm > 0.0) ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < h_min)
      throw std::runtime_error("ode_oracle: step size underflow");
  }
  return u;
}

}  // namespace floqopt
