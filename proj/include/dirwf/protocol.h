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

// Strength-theta pointer coupling followed by post-selection of the system on
// the uniform superposition (1/sqrt(d)) sum_x |x>.
//
// At position x the pointer qubit is rotated |0> -> cos(t)|0> + sin(t)|1>;
// every other position leaves the pointer in |0>. After post-selection the
// pointer is left in the unnormalized state
//
//     a = (psi_tilde - (1 - cos t) psi_x) / sqrt(d),   b = sin(t) psi_x / sqrt(d),
//
// whose squared norm is the post-selection success probability
//
//     N_x = (|psi_tilde|^2 - 2(1 - cos t) psi_tilde Re(psi_x) + 2(1 - cos t)|psi_x|^2) / d.

#ifndef DIRWF_PROTOCOL_H
#define DIRWF_PROTOCOL_H

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dirwf/errors.h"
#include "dirwf/qstate.h"

namespace dirwf {

/// Pointers whose squared norm is below this never survive post-selection.
inline constexpr double kDegeneratePointerTol = 1e-30;

/// 1 - cos(theta) without cancellation for small theta.
inline double one_minus_cos(double theta) {
    double s = std::sin(theta / 2);
    return 2 * s * s;
}

inline void check_theta(double theta) {
    if (!(theta > 0 && theta <= std::numbers::pi)) {
        throw ThetaOutOfRange("coupling strength must lie in (0, pi], got " + std::to_string(theta));
    }
}

inline void check_position(const WaveFunction &psi, size_t x) {
    if (x >= psi.dim()) {
        throw IndexOutOfRange(
            "position " + std::to_string(x) + " out of range for dimension " + std::to_string(psi.dim()));
    }
}

/// Post-selected pointer qubit amplitudes (a, b) = (<0|phi>, <1|phi>).
struct PointerState {
    Complex a;
    Complex b;
    size_t x = 0;
    double theta = 0;
    /// False for the raw post-selected amplitude.
    bool normalized = false;

    double norm_sq() const {
        return std::norm(a) + std::norm(b);
    }

    PointerState normalized_copy() const {
        double n = std::sqrt(norm_sq());
        if (!(n * n > kDegeneratePointerTol)) {
            throw DegeneratePointer("cannot normalize a pointer that never survives post-selection");
        }
        return PointerState{a / n, b / n, x, theta, true};
    }
};

enum class ProbabilityKind { joint, conditional };

inline const char *to_string(ProbabilityKind kind) {
    return kind == ProbabilityKind::joint ? "joint" : "conditional";
}

/// Outcome probabilities of the three dichotomic pointer measurements.
///
/// X basis: |+-> = (|0> +- |1>)/sqrt(2).
/// Y basis: |L> = (|0> + i|1>)/sqrt(2), |R> = (|0> - i|1>)/sqrt(2).
/// Z basis: |0>, |1>.
struct OutcomeProbabilities {
    double p_plus = 0;
    double p_minus = 0;
    double p_zero = 0;
    double p_one = 0;
    double p_left = 0;
    double p_right = 0;
    ProbabilityKind kind = ProbabilityKind::joint;
    size_t x = 0;
    double theta = 0;

    /// Slots in the fixed order plus, minus, zero, one, left, right.
    std::array<double, 6> slots() const {
        return {p_plus, p_minus, p_zero, p_one, p_left, p_right};
    }

    OutcomeProbabilities scaled(double factor, ProbabilityKind new_kind) const {
        OutcomeProbabilities r = *this;
        r.p_plus *= factor;
        r.p_minus *= factor;
        r.p_zero *= factor;
        r.p_one *= factor;
        r.p_left *= factor;
        r.p_right *= factor;
        r.kind = new_kind;
        return r;
    }
};

inline PointerState pointer_state(const WaveFunction &psi, size_t x, double theta) {
    check_position(psi, x);
    check_theta(theta);
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(psi.dim()));
    Complex amp = psi[x];
    PointerState phi;
    phi.a = (psi.amplitude_sum() - one_minus_cos(theta) * amp) * inv_sqrt_d;
    phi.b = std::sin(theta) * amp * inv_sqrt_d;
    phi.x = x;
    phi.theta = theta;
    phi.normalized = false;
    return phi;
}

/// Closed-form post-selection success probability <phi|phi> at position x.
///
/// Written with Re(conj(psi_tilde) psi_x), which is psi_tilde Re(psi_x) under
/// the phase convention and stays correct for flagged states.
inline double norm_factor(const WaveFunction &psi, size_t x, double theta) {
    check_position(psi, x);
    check_theta(theta);
    Complex sum = psi.amplitude_sum();
    Complex amp = psi[x];
    double k = one_minus_cos(theta);
    double bracket = std::norm(sum) - 2 * k * (std::conj(sum) * amp).real() + 2 * k * std::norm(amp);
    return bracket / static_cast<double>(psi.dim());
}

inline OutcomeProbabilities joint_probabilities(const PointerState &phi) {
    if (phi.normalized) {
        throw NormalizedInputRejected("joint probabilities require the raw post-selected pointer amplitude");
    }
    const Complex &a = phi.a;
    const Complex &b = phi.b;
    const Complex i(0.0, 1.0);
    OutcomeProbabilities p;
    p.p_plus = std::norm(a + b) / 2;
    p.p_minus = std::norm(a - b) / 2;
    p.p_zero = std::norm(a);
    p.p_one = std::norm(b);
    // <L|phi> = (a - i b)/sqrt(2), <R|phi> = (a + i b)/sqrt(2).
    p.p_left = std::norm(a - i * b) / 2;
    p.p_right = std::norm(a + i * b) / 2;
    p.kind = ProbabilityKind::joint;
    p.x = phi.x;
    p.theta = phi.theta;
    return p;
}

/// Outcome probabilities given post-selection success.
inline OutcomeProbabilities conditional_probabilities(const PointerState &phi) {
    double n = phi.norm_sq();
    if (!(n > kDegeneratePointerTol)) {
        throw DegeneratePointer(
            "post-selection never succeeds at position " + std::to_string(phi.x) + "; conditionals undefined");
    }
    PointerState raw = phi;
    raw.normalized = false;
    return joint_probabilities(raw).scaled(1.0 / n, ProbabilityKind::conditional);
}

/// Outcome probabilities at every position, ordered by x.
inline std::vector<OutcomeProbabilities> all_positions(const WaveFunction &psi, double theta, ProbabilityKind kind) {
    check_theta(theta);
    std::vector<OutcomeProbabilities> out;
    out.reserve(psi.dim());
    for (size_t x = 0; x < psi.dim(); x++) {
        PointerState phi = pointer_state(psi, x, theta);
        out.push_back(kind == ProbabilityKind::joint ? joint_probabilities(phi) : conditional_probabilities(phi));
    }
    return out;
}

/// max_x N_x - min_x N_x.
inline double norm_spread(const WaveFunction &psi, double theta) {
    double lo = norm_factor(psi, 0, theta);
    double hi = lo;
    for (size_t x = 1; x < psi.dim(); x++) {
        double n = norm_factor(psi, x, theta);
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    return hi - lo;
}

}  // namespace dirwf

#endif  // DIRWF_PROTOCOL_H
