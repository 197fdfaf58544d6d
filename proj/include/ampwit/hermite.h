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

#ifndef AMPWIT_HERMITE_H
#define AMPWIT_HERMITE_H

#include <cstddef>
#include <span>
#include <vector>

namespace ampwit {

/// Harmonic-oscillator eigenfunctions psi_0..psi_{out.size()-1} at x, in the
/// dimensionless convention where the vacuum quadrature variance is 1/2:
///
///     psi_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2 / 2)
///
/// Evaluated with the normalized three-term recurrence
///     psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1},
/// which never forms n! or H_n explicitly.
void oscillator_wavefunctions(double x, std::span<double> out);

/// Single eigenfunction psi_n(x).
double oscillator_wavefunction(size_t n, double x);

/// Draws x^2 for x distributed as |psi_n(x)|^2.
///
/// The density is tabulated on [0, L] with L = sqrt(2n + 1) + 9, where the
/// remaining mass is below 1e-30, and sampled by inverting the piecewise
/// linear interpolant of the density exactly inside each cell.
class QuadratureSampler {
   public:
    explicit QuadratureSampler(size_t n, size_t cells = 8192);

    /// Maps a uniform variate u in [0, 1) to x^2.
    double square_from_uniform(double u) const;

    size_t fock_number() const {
        return n_;
    }

   private:
    size_t n_;
    double step_;
    std::vector<double> density_;
    std::vector<double> cdf_;
};

}  // namespace ampwit

#endif
