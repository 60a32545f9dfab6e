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

#ifndef DIRWF_ANALYSIS_H
#define DIRWF_ANALYSIS_H

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirwf/errors.h"
#include "dirwf/experiment.h"
#include "dirwf/protocol.h"
#include "dirwf/qstate.h"
#include "dirwf/reconstruct.h"

namespace dirwf {

/// Tolerance used by identity audits.
inline constexpr double kIdentityTol = 1e-12;

/// Errors below this are numerical floor and are left out of exponent fits.
inline constexpr double kFitErrorFloor = 1e-12;

struct SweepRecord {
    double theta = 0;
    Mode mode = Mode::strong_joint;
    double fidelity = 0;
    double aligned_l2 = 0;
    /// max_x N_x - min_x N_x.
    double max_norm_spread = 0;
    /// Present only for finite-shot records.
    std::optional<uint64_t> shots;
    std::optional<double> mean_std_err;
    std::optional<double> max_std_err;
};

/// 12 points, geometric from 1e-3 to pi/2.
inline std::vector<double> default_theta_grid() {
    constexpr size_t n = 12;
    double lo = 1e-3;
    double hi = std::numbers::pi / 2;
    std::vector<double> grid(n);
    for (size_t k = 0; k < n; k++) {
        grid[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(n - 1));
    }
    grid.back() = hi;
    return grid;
}

namespace detail {

inline SweepRecord sweep_point(
    const WaveFunction &psi, double theta, Mode mode, std::optional<uint64_t> shots, uint64_t seed) {
    SweepRecord rec;
    rec.theta = theta;
    rec.mode = mode;
    rec.max_norm_spread = norm_spread(psi, theta);

    ReconstructionReport report;
    if (!shots.has_value()) {
        report = reconstruct_exact(psi, theta, mode);
    } else {
        if (mode == Mode::weak_value) {
            throw InvalidArgument("weak_value reconstruction has no finite-shot simulation");
        }
        auto empirical = run_experiment(psi, theta, *shots, seed);
        std::vector<OutcomeProbabilities> probs =
            mode == Mode::strong_joint ? success_rate_scaled_joint(empirical) : frequencies_of(empirical);
        report = strong_reconstruct(probs, theta, mode, &psi);

        double sum = 0;
        double worst = 0;
        size_t count = 0;
        for (const auto &e : empirical) {
            for (double se : e.std_errors) {
                sum += se;
                worst = std::max(worst, se);
                count++;
            }
        }
        rec.shots = shots;
        rec.mean_std_err = sum / static_cast<double>(count);
        rec.max_std_err = worst;
    }
    rec.fidelity = report.metrics_vs_truth->fidelity;
    rec.aligned_l2 = report.metrics_vs_truth->aligned_l2;
    return rec;
}

}  // namespace detail

/// Reconstruction error of `psi` over a list of coupling strengths.
///
/// Exact probabilities are used unless `shots` is given. With shots, the
/// strong_joint mode is fed conditionals rescaled by the observed success
/// rate. Each theta gets its own substream of `seed`, indexed by its rank in
/// the sorted grid, so records do not depend on evaluation order.
inline std::vector<SweepRecord> theta_sweep(
    const WaveFunction &psi,
    std::span<const double> thetas,
    Mode mode,
    std::optional<uint64_t> shots = std::nullopt,
    uint64_t seed = 0) {
    if (thetas.empty()) {
        throw InvalidArgument("theta sweep needs at least one coupling strength");
    }
    std::vector<double> sorted(thetas.begin(), thetas.end());
    std::sort(sorted.begin(), sorted.end());
    for (double t : sorted) {
        if (!(t > 0 && t < std::numbers::pi)) {
            throw ThetaOutOfRange("sweep coupling strengths must lie in (0, pi), got " + std::to_string(t));
        }
    }
    std::vector<SweepRecord> records;
    records.reserve(sorted.size());
    for (size_t k = 0; k < sorted.size(); k++) {
        records.push_back(detail::sweep_point(psi, sorted[k], mode, shots, substream_seed(seed, k)));
    }
    return records;
}

/// Least-squares slope of log(aligned_l2) against log(theta).
inline double fit_scaling_exponent(std::span<const SweepRecord> records) {
    if (records.size() < 4) {
        throw InvalidArgument("exponent fit needs at least 4 records");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &r : records) {
        if (r.shots.has_value()) {
            throw InvalidArgument("exponent fit uses exact-probability records only");
        }
        if (r.aligned_l2 < kFitErrorFloor) {
            continue;
        }
        xs.push_back(std::log(r.theta));
        ys.push_back(std::log(r.aligned_l2));
    }
    if (xs.size() < 2) {
        throw DegenerateFit("fewer than two records above the numerical error floor");
    }
    double n = static_cast<double>(xs.size());
    double mx = 0;
    double my = 0;
    for (size_t k = 0; k < xs.size(); k++) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0;
    double sxy = 0;
    for (size_t k = 0; k < xs.size(); k++) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (!(sxx > 0)) {
        throw DegenerateFit("all fitted records share the same coupling strength");
    }
    return sxy / sxx;
}

/// Maximum deviations of the closed-form identities at one coupling strength.
struct IdentityAudit {
    double theta = 0;
    /// |closed-form N_x - <phi|phi>|
    double norm_identity_dev = 0;
    /// |each joint dichotomic sum - <phi|phi>|
    double joint_sum_dev = 0;
    /// |each conditional dichotomic sum - 1|
    double conditional_sum_dev = 0;
    /// Positions where the pointer never survives post-selection.
    size_t conditional_skipped = 0;
    /// |sum_x weak value - 1|; empty when the state is flagged psi_tilde_zero.
    std::optional<double> weak_sum_dev;

    bool passed() const {
        return norm_identity_dev <= kIdentityTol && joint_sum_dev <= kIdentityTol &&
               conditional_sum_dev <= kIdentityTol && (!weak_sum_dev.has_value() || *weak_sum_dev <= kIdentityTol);
    }
};

inline IdentityAudit verify_identities(const WaveFunction &psi, double theta) {
    check_theta(theta);
    IdentityAudit audit;
    audit.theta = theta;
    for (size_t x = 0; x < psi.dim(); x++) {
        PointerState phi = pointer_state(psi, x, theta);
        double n = phi.norm_sq();
        audit.norm_identity_dev = std::max(audit.norm_identity_dev, std::abs(norm_factor(psi, x, theta) - n));

        OutcomeProbabilities joint = joint_probabilities(phi);
        for (double s : {joint.p_plus + joint.p_minus, joint.p_zero + joint.p_one, joint.p_left + joint.p_right}) {
            audit.joint_sum_dev = std::max(audit.joint_sum_dev, std::abs(s - n));
        }

        if (!(n > kDegeneratePointerTol)) {
            audit.conditional_skipped++;
            continue;
        }
        OutcomeProbabilities cond = conditional_probabilities(phi);
        for (double s : {cond.p_plus + cond.p_minus, cond.p_zero + cond.p_one, cond.p_left + cond.p_right}) {
            audit.conditional_sum_dev = std::max(audit.conditional_sum_dev, std::abs(s - 1));
        }
    }
    if (!psi.psi_tilde_zero()) {
        Complex total{};
        for (size_t x = 0; x < psi.dim(); x++) {
            total += weak_value(psi, x);
        }
        audit.weak_sum_dev = std::abs(total - 1.0);
    }
    return audit;
}

}  // namespace dirwf

#endif  // DIRWF_ANALYSIS_H
