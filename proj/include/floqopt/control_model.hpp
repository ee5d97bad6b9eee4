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

#include <cmath>
#include <utility>
#include <vector>

#include "floqopt/common.hpp"

namespace floqopt {

// One control field: coupling operator h_i and sine-series amplitudes
// a_{i,n}, n = 1..n_max, so that f_i(t) = sum_n a_{i,n} sin(n Omega t).
struct ControlChannel {
  Matrix coupling;
  RealVector amplitudes;
};

// Drift Hamiltonian plus sine-parametrized control fields with fundamental
// frequency Omega. The sine basis makes every pulse vanish at t = 0 and at
// t_f = pi/Omega, the natural control window.
class ControlModel {
 public:
  ControlModel() = default;
  ControlModel(Matrix drift, std::vector<ControlChannel> channels, double omega)
      : drift_(std::move(drift)), channels_(std::move(channels)), omega_(omega) {
    require_hermitian(drift_, "ControlModel drift");
    if (omega_ <= 0.0) throw std::invalid_argument("ControlModel: Omega must be positive");
    for (const auto& ch : channels_) {
      require_hermitian(ch.coupling, "ControlModel channel coupling");
      if (ch.coupling.rows() != drift_.rows())
        throw std::invalid_argument("ControlModel: channel dimension mismatch");
      if (ch.amplitudes.size() != n_max())
        throw std::invalid_argument("ControlModel: channels must share n_max");
    }
  }

  int dim() const { return static_cast<int>(drift_.rows()); }
  int num_channels() const { return static_cast<int>(channels_.size()); }
  int n_max() const {
    return channels_.empty() ? 0 : static_cast<int>(channels_.front().amplitudes.size());
  }
  double omega() const { return omega_; }
  void set_omega(double w) {
    if (w <= 0.0) throw std::invalid_argument("ControlModel: Omega must be positive");
    omega_ = w;
  }
  double period() const { return 2.0 * kPi / omega_; }
  double t_final() const { return kPi / omega_; }

  const Matrix& drift() const { return drift_; }
  const std::vector<ControlChannel>& channels() const { return channels_; }

  double pulse(int channel, double t) const {
    const auto& a = channels_[channel].amplitudes;
    double f = 0.0;
    for (int n = 1; n <= a.size(); ++n) f += a(n - 1) * std::sin(n * omega_ * t);
    return f;
  }

  Matrix hamiltonian(double t) const {
    Matrix h = drift_;
    for (int i = 0; i < num_channels(); ++i)
      h += pulse(i, t) * channels_[i].coupling;
    return h;
  }

  double max_amplitude() const {
    double m = 0.0;
    for (const auto& ch : channels_) m = std::max(m, ch.amplitudes.cwiseAbs().maxCoeff());
    return m;
  }

  // Flattened amplitude vector, channel-major; optionally with Omega
  // appended (the layout used by objectives and the optimizer).
  RealVector parameters(bool with_omega) const {
    const int per = n_max();
    RealVector p(num_channels() * per + (with_omega ? 1 : 0));
    for (int i = 0; i < num_channels(); ++i)
      p.segment(i * per, per) = channels_[i].amplitudes;
    if (with_omega) p(p.size() - 1) = omega_;
    return p;
  }

  void set_parameters(const RealVector& p, bool with_omega) {
    const int per = n_max();
    if (p.size() != num_channels() * per + (with_omega ? 1 : 0))
      throw std::invalid_argument("ControlModel: parameter vector size mismatch");
    for (int i = 0; i < num_channels(); ++i)
      channels_[i].amplitudes = p.segment(i * per, per);
    if (with_omega) set_omega(p(p.size() - 1));
  }

  int num_amplitudes() const { return num_channels() * n_max(); }

 private:
  Matrix drift_;
  std::vector<ControlChannel> channels_;
  double omega_ = 1.0;
};

}  // namespace floqopt
