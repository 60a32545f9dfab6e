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

#ifndef DIRWF_RECONSTRUCT_H
#define DIRWF_RECONSTRUCT_H

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dirwf/errors.h"
#include "dirwf/protocol.h"
#include "dirwf/qstate.h"

namespace dirwf {

/// Raw amplitudes with every magnitude below this are treated as degenerate.
inline constexpr double kReconstructionDegenerateTol = 1e-14;

enum class Mode { strong_joint, strong_conditional, strong_oracle_scaled, weak_value };

inline constexpr std::array<Mode, 4> kAllModes = {
    Mode::strong_joint, Mode::strong_conditional, Mode::strong_oracle_scaled, Mode::weak_value};

inline const char *to_string(Mode mode) {
    switch (mode) {
        case Mode::strong_joint:
            return "strong_joint";
        case Mode::strong_conditional:
            return "strong_conditional";
        case Mode::strong_oracle_scaled:
            return "strong_oracle_scaled";
        case Mode::weak_value:
            return "weak_value";
    }
    return "?";
}

inline std::optional<Mode> parse_mode(std::string_view name) {
    for (Mode m : kAllModes) {
        if (name == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

struct ReconstructionReport {
    WaveFunction estimate;
    Mode mode = Mode::strong_joint;
    /// Absent for weak_value.
    std::optional<double> theta;
    /// Amplitudes before normalization and phase fixing.
    std::vector<Complex> raw_amplitudes;
    std::optional<StateMetrics> metrics_vs_truth;
};

namespace detail {

inline WaveFunction normalize_raw(std::span<const Complex> raw) {
    bool all_small = true;
    for (const auto &c : raw) {
        if (std::abs(c) >= kReconstructionDegenerateTol) {
            all_small = false;
            break;
        }
    }
    if (all_small) {
        throw ReconstructionDegenerate("every reconstructed raw amplitude vanishes");
    }
    return make_state(raw);
}

}  // namespace detail

/// Inverts the pointer map at one position:
///
///     raw = (p_+ - p_- + i(p_L - p_R)) / (2 sin t) + (1 - cos t) p_1 / sin^2 t.
///
/// With joint probabilities raw = psi_tilde psi_x / d exactly.
inline Complex strong_raw_amplitude(const OutcomeProbabilities &p, double theta) {
    double s = std::sin(theta);
    Complex interference(p.p_plus - p.p_minus, p.p_left - p.p_right);
    return interference / (2 * s) + one_minus_cos(theta) * p.p_one / (s * s);
}

/// Strong-coupling reconstruction from outcome probabilities over all positions.
///
/// `probs` must be ordered by x. strong_joint expects joint probabilities;
/// strong_conditional and strong_oracle_scaled expect conditionals. The oracle
/// mode rescales each conditional by the true N_x of `truth`, which an
/// experimenter cannot know. When `truth` is given the report carries metrics.
inline ReconstructionReport strong_reconstruct(
    std::span<const OutcomeProbabilities> probs, double theta, Mode mode, const WaveFunction *truth = nullptr) {
    if (!(theta > 0 && theta < std::numbers::pi)) {
        throw ThetaOutOfRange("strong reconstruction needs sin(theta) != 0, got theta=" + std::to_string(theta));
    }
    ProbabilityKind expected;
    switch (mode) {
        case Mode::strong_joint:
            expected = ProbabilityKind::joint;
            break;
        case Mode::strong_conditional:
        case Mode::strong_oracle_scaled:
            expected = ProbabilityKind::conditional;
            break;
        default:
            throw KindMismatch(std::string("mode ") + to_string(mode) + " is not a strong-measurement mode");
    }
    if (mode == Mode::strong_oracle_scaled && truth == nullptr) {
        throw TruthRequired("strong_oracle_scaled needs the true state to compute the normalization factor");
    }
    if (truth != nullptr && truth->dim() != probs.size()) {
        throw DimensionMismatch("probability table does not match the dimension of the true state");
    }

    ReconstructionReport report;
    report.mode = mode;
    report.theta = theta;
    report.raw_amplitudes.reserve(probs.size());
    for (size_t x = 0; x < probs.size(); x++) {
        const OutcomeProbabilities &p = probs[x];
        if (p.kind != expected) {
            throw KindMismatch(
                std::string("mode ") + to_string(mode) + " needs " + to_string(expected) + " probabilities, got " +
                to_string(p.kind));
        }
        if (p.x != x) {
            throw InvalidArgument("outcome probabilities must be ordered by position");
        }
        if (mode == Mode::strong_oracle_scaled) {
            report.raw_amplitudes.push_back(
                strong_raw_amplitude(p.scaled(norm_factor(*truth, x, theta), ProbabilityKind::joint), theta));
        } else {
            report.raw_amplitudes.push_back(strong_raw_amplitude(p, theta));
        }
    }
    report.estimate = detail::normalize_raw(report.raw_amplitudes);
    if (truth != nullptr) {
        report.metrics_vs_truth = metrics(*truth, report.estimate);
    }
    return report;
}

/// Weak value <p0|P_x|psi> / <p0|psi> = psi_x / psi_tilde of the projector
/// onto |x>, post-selected on the uniform superposition p0.
inline Complex weak_value(const WaveFunction &psi, size_t x) {
    check_position(psi, x);
    if (psi.psi_tilde_zero()) {
        throw PostSelectionDegenerate("weak values are undefined when the state is orthogonal to the post-selection");
    }
    return psi[x] / psi.amplitude_sum();
}

/// |psi> = sum_x <P_x>_W |x>, normalized.
inline ReconstructionReport weak_reconstruct(const WaveFunction &psi) {
    ReconstructionReport report;
    report.mode = Mode::weak_value;
    report.raw_amplitudes.reserve(psi.dim());
    for (size_t x = 0; x < psi.dim(); x++) {
        report.raw_amplitudes.push_back(weak_value(psi, x));
    }
    report.estimate = detail::normalize_raw(report.raw_amplitudes);
    report.metrics_vs_truth = metrics(psi, report.estimate);
    return report;
}

/// Exact-probability reconstruction of `psi` in any mode.
inline ReconstructionReport reconstruct_exact(const WaveFunction &psi, double theta, Mode mode) {
    switch (mode) {
        case Mode::weak_value:
            return weak_reconstruct(psi);
        case Mode::strong_joint: {
            auto probs = all_positions(psi, theta, ProbabilityKind::joint);
            return strong_reconstruct(probs, theta, mode, &psi);
        }
        case Mode::strong_conditional:
        case Mode::strong_oracle_scaled: {
            auto probs = all_positions(psi, theta, ProbabilityKind::conditional);
            return strong_reconstruct(probs, theta, mode, &psi);
        }
    }
    throw KindMismatch("unknown mode");
}

}  // namespace dirwf

#endif  // DIRWF_RECONSTRUCT_H
