// Quantitative estimators over many sessions: QBER, detection, sift rate,
// forgery frequency. The campaign driver runs trials OpenMP-parallel with a
// serial reference path kept for testing; both reduce identically.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qkd/session.hpp"

namespace qkd {

// Hamming distance over length; lengths must match and be nonzero.
double qber(const BitVector& alice_sample, const BitVector& bob_sample);

struct StatsReport {
    std::uint64_t trials = 0;
    double attack_success_rate = 0.0;  // adversary present, keys match, undetected
    double attack_success_stderr = 0.0;
    double mean_qber = 0.0;  // mean of per-trial sampled QBER, over trials with a sample
    double qber_stderr = 0.0;
    double detection_rate = 0.0;
    double sift_rate = 0.0;  // mean sifted length / qubit count
    double exact_forgery_rate = 0.0;
    double abort_rate = 0.0;
    // Pooled sample tallies across all trials.
    std::uint64_t sampled_bits = 0;
    double pooled_qber = 0.0;
    // Physical multi-copy listening: misclassified bases / superposed positions.
    double basis_misid_rate = 0.0;

    static std::string csv_header();
    std::string csv_row(std::string_view label) const;
    std::string json(std::string_view label) const;
};

// Runs `trials` independent sessions of the scenario, with per-trial seeds
// derived from `seed`. `jobs` <= 0 uses all available threads, 1 is serial.
// The result is identical regardless of thread count.
StatsReport run_campaign(const ScenarioConfig& scenario, std::uint64_t trials, std::uint64_t seed,
                         int jobs = 0);

// Plain-loop reference implementation used to cross-check the parallel path.
StatsReport run_campaign_serial(const ScenarioConfig& scenario, std::uint64_t trials,
                                std::uint64_t seed);

}  // namespace qkd
