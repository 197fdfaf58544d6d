// Copyright 2026 The ampwit Authors
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

#include "ampwit/hermite.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ampwit {

void oscillator_wavefunctions(double x, std::span<double> out) {
    if (out.empty()) {
        return;
    }
    // pi^(-1/4) exp(-x^2/2)
    out[0] = std::exp(-0.5 * x * x - 0.25 * std::log(std::numbers::pi));
    if (out.size() == 1) {
        return;
    }
    out[1] = std::numbers::sqrt2 * x * out[0];
    for (size_t n = 1; n + 1 < out.size(); n++) {
        double nd = static_cast<double>(n);
        out[n + 1] = std::sqrt(2 / (nd + 1)) * x * out[n] - std::sqrt(nd / (nd + 1)) * out[n - 1];
    }
}

double oscillator_wavefunction(size_t n, double x) {
    std::vector<double> psi(n + 1);
    oscillator_wavefunctions(x, psi);
    return psi[n];
}

QuadratureSampler::QuadratureSampler(size_t n, size_t cells) : n_(n) {
    double extent = std::sqrt(2 * static_cast<double>(n) + 1) + 9;
    step_ = extent / static_cast<double>(cells);
    density_.resize(cells + 1);
    cdf_.resize(cells + 1);
    std::vector<double> psi(n + 1);
    for (size_t i = 0; i <= cells; i++) {
        oscillator_wavefunctions(static_cast<double>(i) * step_, psi);
        density_[i] = psi[n] * psi[n];
    }
    cdf_[0] = 0;
    for (size_t i = 1; i <= cells; i++) {
        cdf_[i] = cdf_[i - 1] + 0.5 * (density_[i] + density_[i - 1]) * step_;
    }
}

double QuadratureSampler::square_from_uniform(double u) const {
    double target = u * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    size_t cell = std::clamp<size_t>(static_cast<size_t>(it - cdf_.begin()), 1, cdf_.size() - 1) - 1;
    double f0 = density_[cell];
    double f1 = density_[cell + 1];
    double need = target - cdf_[cell];
    // Solve f0 s + (f1 - f0) s^2 / (2 h) = need for the offset s in [0, h].
    double slope = (f1 - f0) / step_;
    double s;
    if (need <= 0) {
        s = 0;
    } else if (std::abs(slope) * step_ < 1e-12 * std::max(f0, 1e-300)) {
        s = f0 > 0 ? need / f0 : 0;
    } else {
        double disc = std::max(0.0, f0 * f0 + 2 * slope * need);
        // Stable root of (slope/2) s^2 + f0 s - need = 0.
        s = 2 * need / (f0 + std::sqrt(disc));
    }
    double x = static_cast<double>(cell) * step_ + std::clamp(s, 0.0, step_);
    return x * x;
}

}  // namespace ampwit
