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

// Finite-shot simulation of the post-selected pointer experiment. Every trial
// either fails post-selection or yields one of the two outcomes of the chosen
// pointer basis; failures are tallied so the success rate stays available.

#ifndef DIRWF_EXPERIMENT_H
#define DIRWF_EXPERIMENT_H

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dirwf/errors.h"
#include "dirwf/protocol.h"
#include "dirwf/qstate.h"

namespace dirwf {

enum class Basis { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Basis, 3> kAllBases = {Basis::X, Basis::Y, Basis::Z};

inline const char *to_string(Basis basis) {
    switch (basis) {
        case Basis::X:
            return "X";
        case Basis::Y:
            return "Y";
        case Basis::Z:
            return "Z";
    }
    return "?";
}

/// Joint probabilities of the two outcomes of `basis`: (+,-), (L,R) or (0,1).
inline std::array<double, 2> basis_pair(const OutcomeProbabilities &p, Basis basis) {
    switch (basis) {
        case Basis::X:
            return {p.p_plus, p.p_minus};
        case Basis::Y:
            return {p.p_left, p.p_right};
        case Basis::Z:
            return {p.p_zero, p.p_one};
    }
    return {0, 0};
}

/// Counter-based substream seed for one setting of an experiment.
inline uint64_t substream_seed(uint64_t master_seed, uint64_t index) {
    std::seed_seq seq{
        static_cast<uint32_t>(master_seed),
        static_cast<uint32_t>(master_seed >> 32),
        static_cast<uint32_t>(index),
        static_cast<uint32_t>(index >> 32)};
    std::array<uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<uint64_t>(words[0]) << 32) | words[1];
}

/// Substream index of the (x, basis) setting.
inline uint64_t setting_index(size_t x, Basis basis) {
    return static_cast<uint64_t>(x) * 3 + static_cast<uint64_t>(basis);
}

/// One (x, basis) row of a counts table.
struct CountsRow {
    size_t x = 0;
    Basis basis = Basis::Z;
    uint64_t shots = 0;
    uint64_t successes = 0;
    /// (n_plus, n_minus), (n_left, n_right) or (n_zero, n_one).
    std::array<uint64_t, 2> outcome_counts{};
    uint64_t seed = 0;

    bool operator==(const CountsRow &) const = default;
};

struct CountsTable {
    double theta = 0;
    uint64_t seed = 0;
    uint64_t shots_per_setting = 0;
    /// Ordered by x, then basis X, Y, Z.
    std::vector<CountsRow> rows;

    const CountsRow &at(size_t x, Basis basis) const {
        size_t k = static_cast<size_t>(setting_index(x, basis));
        if (k >= rows.size()) {
            throw IndexOutOfRange("no counts recorded for position " + std::to_string(x));
        }
        return rows[k];
    }
};

/// Simulates `shots` trials of one setting with its own generator.
///
/// Each trial is a single categorical draw over {outcome 1, outcome 2, fail}
/// with probabilities {joint_1, joint_2, 1 - N_x}.
inline CountsRow run_trials(const WaveFunction &psi, double theta, size_t x, Basis basis, uint64_t shots, uint64_t seed) {
    if (shots < 1) {
        throw InvalidArgument("at least one shot per setting is required");
    }
    auto joint = basis_pair(joint_probabilities(pointer_state(psi, x, theta)), basis);
    double first = joint[0];
    double either = joint[0] + joint[1];

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    CountsRow row;
    row.x = x;
    row.basis = basis;
    row.shots = shots;
    row.seed = seed;
    for (uint64_t k = 0; k < shots; k++) {
        double u = uniform(rng);
        if (u < first) {
            row.outcome_counts[0]++;
        } else if (u < either) {
            row.outcome_counts[1]++;
        }
    }
    row.successes = row.outcome_counts[0] + row.outcome_counts[1];
    return row;
}

/// Runs every (x, basis) setting with `shots` trials each. The substream for
/// setting (x, basis) is derived from `seed` and x*3 + basis.
inline CountsTable sample_counts(const WaveFunction &psi, double theta, uint64_t shots, uint64_t seed) {
    check_theta(theta);
    CountsTable table;
    table.theta = theta;
    table.seed = seed;
    table.shots_per_setting = shots;
    table.rows.reserve(psi.dim() * 3);
    for (size_t x = 0; x < psi.dim(); x++) {
        for (Basis basis : kAllBases) {
            table.rows.push_back(
                run_trials(psi, theta, x, basis, shots, substream_seed(seed, setting_index(x, basis))));
        }
    }
    return table;
}

/// Empirical conditional frequencies at one position with their standard errors.
struct EmpiricalProbabilities {
    /// kind is always conditional.
    OutcomeProbabilities frequencies;
    /// sqrt(f (1 - f) / successes), in the slot order of OutcomeProbabilities::slots().
    std::array<double, 6> std_errors{};
    /// successes / shots per basis X, Y, Z.
    std::array<double, 3> success_rates{};
};

namespace detail {

inline std::array<double, 2> frequencies(const CountsRow &row) {
    if (row.successes == 0) {
        throw InsufficientStatistics(
            std::string("no post-selected trials at position ") + std::to_string(row.x) + " basis " +
            to_string(row.basis));
    }
    double n = static_cast<double>(row.successes);
    return {row.outcome_counts[0] / n, row.outcome_counts[1] / n};
}

inline double std_error(double f, uint64_t successes) {
    return std::sqrt(f * (1 - f) / static_cast<double>(successes));
}

}  // namespace detail

/// Frequency estimates of the conditional probabilities for every position.
inline std::vector<EmpiricalProbabilities> empirical_conditional(const CountsTable &counts) {
    if (counts.rows.size() % 3 != 0) {
        throw InvalidArgument("counts table must hold all three bases for every position");
    }
    size_t dim = counts.rows.size() / 3;
    std::vector<EmpiricalProbabilities> out;
    out.reserve(dim);
    for (size_t x = 0; x < dim; x++) {
        const CountsRow &rx = counts.at(x, Basis::X);
        const CountsRow &ry = counts.at(x, Basis::Y);
        const CountsRow &rz = counts.at(x, Basis::Z);
        auto fx = detail::frequencies(rx);
        auto fy = detail::frequencies(ry);
        auto fz = detail::frequencies(rz);

        EmpiricalProbabilities e;
        e.frequencies.p_plus = fx[0];
        e.frequencies.p_minus = fx[1];
        e.frequencies.p_zero = fz[0];
        e.frequencies.p_one = fz[1];
        e.frequencies.p_left = fy[0];
        e.frequencies.p_right = fy[1];
        e.frequencies.kind = ProbabilityKind::conditional;
        e.frequencies.x = x;
        e.frequencies.theta = counts.theta;
        e.std_errors = {
            detail::std_error(fx[0], rx.successes), detail::std_error(fx[1], rx.successes),
            detail::std_error(fz[0], rz.successes), detail::std_error(fz[1], rz.successes),
            detail::std_error(fy[0], ry.successes), detail::std_error(fy[1], ry.successes)};
        e.success_rates = {
            static_cast<double>(rx.successes) / static_cast<double>(rx.shots),
            static_cast<double>(ry.successes) / static_cast<double>(ry.shots),
            static_cast<double>(rz.successes) / static_cast<double>(rz.shots)};
        out.push_back(e);
    }
    return out;
}

/// Conditional frequencies rescaled by the per-basis success rate.
///
/// This estimates the joint probabilities only if the absolute number of
/// trials is known to the experimenter. It is not used unless requested.
inline std::vector<OutcomeProbabilities> success_rate_scaled_joint(std::span<const EmpiricalProbabilities> empirical) {
    std::vector<OutcomeProbabilities> out;
    out.reserve(empirical.size());
    for (const auto &e : empirical) {
        OutcomeProbabilities p = e.frequencies;
        p.p_plus *= e.success_rates[0];
        p.p_minus *= e.success_rates[0];
        p.p_left *= e.success_rates[1];
        p.p_right *= e.success_rates[1];
        p.p_zero *= e.success_rates[2];
        p.p_one *= e.success_rates[2];
        p.kind = ProbabilityKind::joint;
        out.push_back(p);
    }
    return out;
}

inline std::vector<OutcomeProbabilities> frequencies_of(std::span<const EmpiricalProbabilities> empirical) {
    std::vector<OutcomeProbabilities> out;
    out.reserve(empirical.size());
    for (const auto &e : empirical) {
        out.push_back(e.frequencies);
    }
    return out;
}

/// Full experiment: counts for every setting, then conditional frequencies.
inline std::vector<EmpiricalProbabilities> run_experiment(
    const WaveFunction &psi, double theta, uint64_t shots_per_setting, uint64_t seed) {
    return empirical_conditional(sample_counts(psi, theta, shots_per_setting, seed));
}

}  // namespace dirwf

#endif  // DIRWF_EXPERIMENT_H
