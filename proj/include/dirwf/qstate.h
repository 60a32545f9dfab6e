// Copyright 2026 The dirwf Authors
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

#ifndef DIRWF_QSTATE_H
#define DIRWF_QSTATE_H

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dirwf/errors.h"

namespace dirwf {

using Complex = std::complex<double>;

/// States whose amplitude sum is smaller than this are flagged `psi_tilde_zero`.
inline constexpr double kPsiTildeZeroTol = 1e-10;

/// A normalized pure state of a d-level system.
///
/// The global phase is fixed so that the amplitude sum (psi tilde) is real and
/// non-negative. When the sum vanishes the phase is left as given and the
/// state reports `psi_tilde_zero()`. Instances are immutable.
class WaveFunction {
   public:
    size_t dim() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    const Complex &operator[](size_t x) const {
        return amplitudes_[x];
    }

    /// Sum of all amplitudes as computed after phase fixing.
    Complex amplitude_sum() const {
        return sum_;
    }
    /// The real, non-negative amplitude sum. Zero for flagged states.
    double psi_tilde() const {
        return psi_tilde_zero_ ? 0.0 : sum_.real();
    }
    bool psi_tilde_zero() const {
        return psi_tilde_zero_;
    }

    bool operator==(const WaveFunction &other) const = default;

   private:
    friend WaveFunction make_state(std::span<const Complex> raw, size_t dim);

    std::vector<Complex> amplitudes_;
    Complex sum_{};
    bool psi_tilde_zero_ = false;
};

/// Normalizes `raw` and applies the phase convention.
inline WaveFunction make_state(std::span<const Complex> raw, size_t dim) {
    if (dim < 2) {
        throw DimensionMismatch("state dimension must be at least 2, got " + std::to_string(dim));
    }
    if (raw.size() != dim) {
        throw DimensionMismatch(
            "amplitude count " + std::to_string(raw.size()) + " does not match dimension " + std::to_string(dim));
    }
    double norm_sq = 0;
    for (const auto &c : raw) {
        norm_sq += std::norm(c);
    }
    if (!(norm_sq > 0) || !std::isfinite(norm_sq)) {
        throw ZeroVector("cannot normalize a zero (or non-finite) amplitude vector");
    }

    WaveFunction result;
    double inv_norm = 1.0 / std::sqrt(norm_sq);
    result.amplitudes_.reserve(dim);
    Complex sum{};
    for (const auto &c : raw) {
        result.amplitudes_.push_back(c * inv_norm);
        sum += result.amplitudes_.back();
    }

    if (std::abs(sum) < kPsiTildeZeroTol) {
        result.psi_tilde_zero_ = true;
        result.sum_ = sum;
        return result;
    }

    Complex rotation = std::conj(sum) / std::abs(sum);
    sum = 0;
    for (auto &c : result.amplitudes_) {
        c *= rotation;
        sum += c;
    }
    // Rounding leaves an imaginary residue of order 1e-17 in the sum.
    result.sum_ = Complex(sum.real(), 0.0);
    return result;
}

inline WaveFunction make_state(std::span<const Complex> raw) {
    return make_state(raw, raw.size());
}

/// Draws a Haar-random pure state: independent standard complex Gaussians,
/// normalized and phase fixed. Deterministic in `seed`.
inline WaveFunction haar_random_state(size_t dim, uint64_t seed) {
    if (dim < 2) {
        throw DimensionMismatch("state dimension must be at least 2, got " + std::to_string(dim));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> raw(dim);
    for (auto &c : raw) {
        double re = gauss(rng);
        double im = gauss(rng);
        c = Complex(re, im);
    }
    return make_state(raw, dim);
}

struct StateMetrics {
    double fidelity = 0;
    /// L2 distance minimized over a global phase.
    double aligned_l2 = 0;
};

/// <a|b> with the first argument conjugated.
inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("inner product of vectors with different lengths");
    }
    Complex acc{};
    for (size_t k = 0; k < a.size(); k++) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

/// Fidelity |<truth|estimate>|^2 and the phase-aligned L2 distance.
///
/// The distance is evaluated as ||truth - e^{ia} estimate|| at the optimal
/// phase rather than through sqrt(2 - 2|<truth|estimate>|), which loses half
/// of the significant digits for nearly identical states.
inline StateMetrics metrics(const WaveFunction &truth, const WaveFunction &estimate) {
    if (truth.dim() != estimate.dim()) {
        throw DimensionMismatch(
            "metrics of states with dimensions " + std::to_string(truth.dim()) + " and " +
            std::to_string(estimate.dim()));
    }
    Complex overlap = inner_product(truth.amplitudes(), estimate.amplitudes());
    double magnitude = std::abs(overlap);
    Complex phase = magnitude > 0 ? std::conj(overlap) / magnitude : Complex(1.0, 0.0);

    double dist_sq = 0;
    for (size_t k = 0; k < truth.dim(); k++) {
        dist_sq += std::norm(truth[k] - phase * estimate[k]);
    }
    StateMetrics m;
    m.fidelity = std::min(1.0, magnitude * magnitude);
    m.aligned_l2 = std::sqrt(dist_sq);
    return m;
}

}  // namespace dirwf

#endif  // DIRWF_QSTATE_H
