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

// Acceptance checks. Usage: dirwf_acceptance [criterion ...]
// With no arguments every criterion runs. One PASS/FAIL line per criterion;
// the exit status is non-zero if any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dirwf/analysis.h"
#include "dirwf/cli.h"
#include "dirwf/experiment.h"
#include "dirwf/protocol.h"
#include "dirwf/qstate.h"
#include "dirwf/reconstruct.h"
#include "oracles.h"

using namespace dirwf;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExactTol = 1e-12;

const std::vector<size_t> kGridDims = {2, 4, 16, 64};
const std::vector<double> kGridThetas = {0.01, 0.1, 0.5, 1.0, kPi / 2, kPi};
constexpr uint64_t kStatesPerDim = 100;

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

template <typename F>
void for_each_grid_state(F &&body) {
    for (size_t d : kGridDims) {
        for (uint64_t s = 0; s < kStatesPerDim; s++) {
            body(haar_random_state(d, 1000 * d + s));
        }
    }
}

// 1. Closed-form normalization factor equals the post-selected pointer norm.
Outcome criterion_norm_identity() {
    double worst_closed_vs_pointer = 0;
    double worst_closed_vs_dense = 0;
    for_each_grid_state([&](const WaveFunction &psi) {
        for (double theta : kGridThetas) {
            for (size_t x = 0; x < psi.dim(); x++) {
                double closed = norm_factor(psi, x, theta);
                double pointer = pointer_state(psi, x, theta).norm_sq();
                auto dense = oracle::post_selected_pointer(psi.amplitudes(), x, theta);
                worst_closed_vs_pointer = std::max(worst_closed_vs_pointer, std::abs(closed - pointer));
                worst_closed_vs_dense =
                    std::max(worst_closed_vs_dense, std::abs(closed - std::norm(dense.a) - std::norm(dense.b)));
            }
        }
    });
    bool ok = worst_closed_vs_pointer <= kExactTol && worst_closed_vs_dense <= kExactTol;
    return {ok, "max |N_x - <phi|phi>| = " + fmt(worst_closed_vs_pointer) + " (dense oracle " +
                    fmt(worst_closed_vs_dense) + "), tol 1e-12"};
}

// 2. Joint dichotomic sums equal <phi|phi> (not 1); conditional sums equal 1.
Outcome criterion_dichotomic_sums() {
    double joint_dev = 0;
    double cond_dev = 0;
    for_each_grid_state([&](const WaveFunction &psi) {
        for (double theta : kGridThetas) {
            for (size_t x = 0; x < psi.dim(); x++) {
                auto phi = pointer_state(psi, x, theta);
                double n = phi.norm_sq();
                auto j = joint_probabilities(phi);
                for (double s : {j.p_plus + j.p_minus, j.p_zero + j.p_one, j.p_left + j.p_right}) {
                    joint_dev = std::max(joint_dev, std::abs(s - n));
                }
                auto c = conditional_probabilities(phi);
                for (double s : {c.p_plus + c.p_minus, c.p_zero + c.p_one, c.p_left + c.p_right}) {
                    cond_dev = std::max(cond_dev, std::abs(s - 1));
                }
            }
        }
    });
    auto psi8 = haar_random_state(8, 2);
    double max_off_one = 0;
    for (const auto &p : all_positions(psi8, kPi / 2, ProbabilityKind::joint)) {
        max_off_one = std::max(max_off_one, std::abs(p.p_plus + p.p_minus - 1));
    }
    bool ok = joint_dev <= kExactTol && cond_dev <= kExactTol && max_off_one > 1e-6;
    return {ok, "joint dev " + fmt(joint_dev) + ", conditional dev " + fmt(cond_dev) +
                    ", d=8 max |P+ + P- - 1| = " + fmt(max_off_one) + " (> 1e-6)"};
}

// 3. Joint-probability reconstruction is exact.
Outcome criterion_exact_recovery() {
    double worst = 1;
    for_each_grid_state([&](const WaveFunction &psi) {
        for (double theta : kGridThetas) {
            if (theta >= kPi) {
                continue;
            }
            auto r = reconstruct_exact(psi, theta, Mode::strong_joint);
            worst = std::min(worst, r.metrics_vs_truth->fidelity);
        }
    });
    return {worst >= 1 - 1e-10, "min fidelity " + fmt(worst) + " (1 - " + fmt(1 - worst) + "), need >= 1 - 1e-10"};
}

// 4. Conditionals times the true normalization factor reproduce joint mode.
Outcome criterion_oracle_correction() {
    double worst_raw = 0;
    double worst_est = 0;
    for_each_grid_state([&](const WaveFunction &psi) {
        for (double theta : kGridThetas) {
            if (theta >= kPi) {
                continue;
            }
            auto joint = reconstruct_exact(psi, theta, Mode::strong_joint);
            auto scaled = reconstruct_exact(psi, theta, Mode::strong_oracle_scaled);
            for (size_t x = 0; x < psi.dim(); x++) {
                worst_raw = std::max(worst_raw, std::abs(joint.raw_amplitudes[x] - scaled.raw_amplitudes[x]));
                worst_est = std::max(worst_est, std::abs(joint.estimate[x] - scaled.estimate[x]));
            }
        }
    });
    bool ok = worst_raw <= kExactTol && worst_est <= kExactTol;
    return {ok, "max elementwise diff raw " + fmt(worst_raw) + ", estimate " + fmt(worst_est) + ", tol 1e-12"};
}

// 5. Conditional-mode bias on the fixed regression state.
Outcome criterion_conditional_bias() {
    // Frozen from the dense oracle: for d = 2, N_0 = N_1 for every state and
    // coupling, so the conditional estimate carries no bias.
    constexpr double kFrozenOracleL2 = 0.0;

    std::vector<Complex> raw{std::sqrt(0.8), std::sqrt(0.2)};
    auto psi = make_state(raw);
    double theta = kPi / 2;
    auto cond = reconstruct_exact(psi, theta, Mode::strong_conditional);
    auto joint = reconstruct_exact(psi, theta, Mode::strong_joint);
    double cond_l2 = cond.metrics_vs_truth->aligned_l2;
    double joint_l2 = joint.metrics_vs_truth->aligned_l2;

    bool regression_ok = std::abs(cond_l2 - kFrozenOracleL2) <= 1e-14;
    bool ok = cond_l2 > 1e-4 && cond_l2 > 1e4 * joint_l2 && regression_ok;
    return {ok, "d=2 state (sqrt 0.8, sqrt 0.2), theta=pi/2: conditional l2 " + fmt(cond_l2) + " (need > 1e-4), joint l2 " +
                    fmt(joint_l2) + ", N spread " + fmt(norm_spread(psi, theta)) + ", frozen oracle value " +
                    fmt(kFrozenOracleL2)};
}

// 6. Conditional-mode error vanishes as theta^2 in the weak limit.
Outcome criterion_weak_limit() {
    auto psi = haar_random_state(8, 7);
    std::vector<double> thetas;
    constexpr int n = 9;
    for (int k = 0; k < n; k++) {
        thetas.push_back(1e-3 * std::pow(300.0, static_cast<double>(k) / (n - 1)));
    }
    auto records = theta_sweep(psi, thetas, Mode::strong_conditional);
    double slope = fit_scaling_exponent(records);
    std::vector<double> tiny{1e-4};
    double fidelity = theta_sweep(psi, tiny, Mode::strong_conditional)[0].fidelity;
    bool ok = std::abs(slope - 2.0) <= 0.2 && fidelity >= 1 - 1e-6;
    return {ok, "fitted exponent " + fmt(slope) + " over [1e-3, 0.3] (need 2.0 +- 0.2); fidelity at 1e-4 = 1 - " +
                    fmt(1 - fidelity)};
}

// 7. Weak values sum to one and reconstruct the state.
Outcome criterion_weak_values() {
    double worst_sum = 0;
    double worst_fid = 1;
    for (size_t d : {2u, 8u, 32u}) {
        for (uint64_t s = 0; s < 100; s++) {
            auto psi = haar_random_state(d, 5000 + 100 * d + s);
            Complex total{};
            for (size_t x = 0; x < d; x++) {
                total += weak_value(psi, x);
            }
            worst_sum = std::max(worst_sum, std::abs(total - 1.0));
            worst_fid = std::min(worst_fid, weak_reconstruct(psi).metrics_vs_truth->fidelity);
        }
    }
    bool ok = worst_sum <= kExactTol && worst_fid >= 1 - 1e-12;
    return {ok, "max |sum W - 1| " + fmt(worst_sum) + ", min fidelity 1 - " + fmt(1 - worst_fid)};
}

// 8. Finite-shot frequencies agree with exact conditionals; error ~ 1/sqrt(shots).
Outcome criterion_monte_carlo() {
    auto psi = haar_random_state(8, 11);
    double theta = 1.0;
    auto exact = all_positions(psi, theta, ProbabilityKind::conditional);
    auto empirical = run_experiment(psi, theta, 1000000, 77);
    double worst_z = 0;
    bool within = true;
    for (size_t x = 0; x < psi.dim(); x++) {
        auto f = empirical[x].frequencies.slots();
        auto p = exact[x].slots();
        for (size_t k = 0; k < 6; k++) {
            double se = empirical[x].std_errors[k];
            double dev = std::abs(f[k] - p[k]);
            if (dev > 5 * se) {
                within = false;
            }
            if (se > 0) {
                worst_z = std::max(worst_z, dev / se);
            }
        }
    }

    // Sampling error of the conditional-mode estimate, measured against its
    // infinite-shot limit, root-mean-square over independent seeds.
    auto limit = reconstruct_exact(psi, theta, Mode::strong_conditional).estimate;
    auto rms_error = [&](uint64_t shots) {
        constexpr int seeds = 8;
        double acc = 0;
        for (int s = 0; s < seeds; s++) {
            auto e = run_experiment(psi, theta, shots, 3000 + static_cast<uint64_t>(s) + shots);
            auto probs = frequencies_of(e);
            auto r = strong_reconstruct(probs, theta, Mode::strong_conditional);
            double l2 = metrics(limit, r.estimate).aligned_l2;
            acc += l2 * l2;
        }
        return std::sqrt(acc / seeds);
    };
    double err_small = rms_error(250000);
    double err_large = rms_error(1000000);
    double ratio = err_small / err_large;
    bool halves = std::abs(ratio - 2.0) <= 0.6;
    return {within && halves, "max |f - p| / se = " + fmt(worst_z) + " (need <= 5); error ratio 250k/1M shots = " +
                                  fmt(ratio) + " (need 2 +- 0.6)"};
}

// 9. Identical configs and seeds give byte-identical output files.
Outcome criterion_determinism() {
    using namespace dirwf::cli;
    auto tmp = std::filesystem::temp_directory_path();
    struct Case {
        Command command;
        const char *config;
    };
    const Case cases[] = {
        {Command::verify, R"({"state": {"type": "haar", "dim": 16, "seed": 7}, "theta_grid": "default"})"},
        {Command::reconstruct,
         R"({"state": {"type": "haar", "dim": 8, "seed": 3}, "theta": 0.7,
             "modes": ["strong_joint", "strong_conditional"], "shots_per_setting": 20000, "seed": 5})"},
        {Command::sweep,
         R"({"state": {"type": "haar", "dim": 8, "seed": 3}, "theta_grid": "default",
             "modes": ["strong_conditional"], "shots_per_setting": 20000, "seed": 9,
             "output": {"format": "json"}})"},
        {Command::sample,
         R"({"state": {"type": "explicit", "dim": 2, "amplitudes": [[1, 0], [0, 0]]},
             "theta": 1.5707963267948966, "shots_per_setting": 100000, "seed": 1})"},
    };
    bool ok = true;
    std::string detail;
    for (const auto &c : cases) {
        auto cfg = parse_config(Json::parse(c.config));
        std::string contents[2];
        for (int run = 0; run < 2; run++) {
            auto path = tmp / ("dirwf_acceptance_" + std::string(to_string(c.command)) + std::to_string(run));
            cfg.output_path = path.string();
            std::ostringstream err;
            int code = execute(c.command, cfg, err);
            if (code != kExitOk) {
                ok = false;
            }
            std::ifstream f(path, std::ios::binary);
            std::ostringstream s;
            s << f.rdbuf();
            contents[run] = s.str();
            std::filesystem::remove(path);
        }
        bool same = !contents[0].empty() && contents[0] == contents[1];
        ok = ok && same;
        detail += std::string(to_string(c.command)) + (same ? " identical; " : " DIFFER; ");
    }
    return {ok, detail};
}

struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> criteria = {
        {1, "normalization factor identity", criterion_norm_identity},
        {2, "joint and conditional dichotomic sums", criterion_dichotomic_sums},
        {3, "exact recovery from joint probabilities", criterion_exact_recovery},
        {4, "oracle-corrected conditionals match joint mode", criterion_oracle_correction},
        {5, "conditional bias on the d=2 regression state", criterion_conditional_bias},
        {6, "weak-limit vanishing of conditional bias", criterion_weak_limit},
        {7, "weak-value identities", criterion_weak_values},
        {8, "Monte Carlo consistency", criterion_monte_carlo},
        {9, "byte-identical outputs", criterion_determinism},
    };

    std::vector<int> selected;
    for (int k = 1; k < argc; k++) {
        selected.push_back(std::stoi(argv[k]));
    }

    int failures = 0;
    for (const auto &c : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  C%d  %s: %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        if (!o.passed) {
            failures++;
        }
    }
    return failures == 0 ? 0 : 1;
}
