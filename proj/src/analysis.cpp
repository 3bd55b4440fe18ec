#include "qkd/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

namespace qkd {

double qber(const BitVector& alice_sample, const BitVector& bob_sample) {
    if (alice_sample.size() != bob_sample.size()) {
        throw std::invalid_argument("qber: sample length mismatch");
    }
    if (alice_sample.empty()) {
        throw std::invalid_argument("qber: empty sample is undefined");
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < alice_sample.size(); ++i) {
        if (alice_sample[i] != bob_sample[i]) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(alice_sample.size());
}

namespace {

struct TrialStats {
    bool aborted = false;
    bool has_sample = false;
    double qber_value = 0.0;
    std::uint64_t sample_bits = 0;
    std::uint64_t sample_errors = 0;
    bool detected = false;
    std::size_t sifted_len = 0;
    bool success = false;
    bool exact_forgery = false;
    std::uint64_t superposed = 0;
    std::uint64_t misids = 0;
};

TrialStats run_trial(const ScenarioConfig& scenario, std::uint64_t trial_seed) {
    ScenarioConfig cfg = scenario;
    cfg.seed = trial_seed;
    const SessionTranscript t = run_session(cfg);

    TrialStats s;
    s.aborted = t.aborted;
    s.sifted_len = t.alice_sifted.size();
    s.detected = t.detected;
    if (t.sample) {
        s.has_sample = true;
        s.qber_value = t.sample->qber;
        s.sample_bits = t.sample->alice_bits.size();
        for (std::size_t i = 0; i < t.sample->alice_bits.size(); ++i) {
            if (t.sample->alice_bits[i] != t.sample->bob_bits[i]) ++s.sample_errors;
        }
    }
    if (t.attack) {
        s.success = !t.aborted && t.attack->keys_match && !t.attack->detected;
        s.exact_forgery = t.attack->exact_forgery;
        s.superposed = t.attack->superposed_positions;
        s.misids = t.attack->misidentified_bases;
    }
    return s;
}

// Order-independent reduction: plain sums accumulated in trial order, so the
// parallel and serial paths produce the same report bit for bit.
StatsReport reduce(const std::vector<TrialStats>& trials, std::size_t qubits) {
    StatsReport r;
    r.trials = trials.size();
    if (trials.empty()) return r;

    std::uint64_t successes = 0;
    std::uint64_t detections = 0;
    std::uint64_t forgeries = 0;
    std::uint64_t aborts = 0;
    std::uint64_t completed = 0;
    std::uint64_t with_sample = 0;
    double qber_sum = 0.0;
    double sift_sum = 0.0;
    std::uint64_t sample_bits = 0;
    std::uint64_t sample_errors = 0;
    std::uint64_t superposed = 0;
    std::uint64_t misids = 0;

    for (const TrialStats& t : trials) {
        successes += t.success ? 1 : 0;
        detections += t.detected ? 1 : 0;
        forgeries += t.exact_forgery ? 1 : 0;
        aborts += t.aborted ? 1 : 0;
        if (!t.aborted) {
            ++completed;
            sift_sum += static_cast<double>(t.sifted_len) / static_cast<double>(qubits);
        }
        if (t.has_sample) {
            ++with_sample;
            qber_sum += t.qber_value;
        }
        sample_bits += t.sample_bits;
        sample_errors += t.sample_errors;
        superposed += t.superposed;
        misids += t.misids;
    }

    const auto n = static_cast<double>(trials.size());
    r.attack_success_rate = static_cast<double>(successes) / n;
    r.attack_success_stderr =
        std::sqrt(r.attack_success_rate * (1.0 - r.attack_success_rate) / n);
    r.detection_rate = static_cast<double>(detections) / n;
    r.exact_forgery_rate = static_cast<double>(forgeries) / n;
    r.abort_rate = static_cast<double>(aborts) / n;
    r.sift_rate = completed > 0 ? sift_sum / static_cast<double>(completed) : 0.0;

    if (with_sample > 0) {
        r.mean_qber = qber_sum / static_cast<double>(with_sample);
        if (with_sample > 1) {
            double var = 0.0;
            for (const TrialStats& t : trials) {
                if (!t.has_sample) continue;
                const double d = t.qber_value - r.mean_qber;
                var += d * d;
            }
            var /= static_cast<double>(with_sample - 1);
            r.qber_stderr = std::sqrt(var / static_cast<double>(with_sample));
        }
    }
    r.sampled_bits = sample_bits;
    r.pooled_qber = sample_bits > 0
                        ? static_cast<double>(sample_errors) / static_cast<double>(sample_bits)
                        : 0.0;
    r.basis_misid_rate =
        superposed > 0 ? static_cast<double>(misids) / static_cast<double>(superposed) : 0.0;
    return r;
}

std::vector<TrialStats> collect_trials(const ScenarioConfig& scenario, std::uint64_t trials,
                                       std::uint64_t seed, int jobs) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    validate_config(scenario);

    // Per-trial seeds are fixed up front so scheduling cannot change them.
    const SeededRng root(seed);
    std::vector<std::uint64_t> trial_seeds(trials);
    for (std::uint64_t i = 0; i < trials; ++i) trial_seeds[i] = root.stream("trial", i).key();

    std::vector<TrialStats> results(trials);
    const auto count = static_cast<std::int64_t>(trials);

#ifdef _OPENMP
    int threads = jobs > 0 ? jobs : omp_get_max_threads();
    if (threads < 1) threads = 1;
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
        results[static_cast<std::size_t>(i)] =
            run_trial(scenario, trial_seeds[static_cast<std::size_t>(i)]);
    }
#else
    (void)jobs;
    for (std::int64_t i = 0; i < count; ++i) {
        results[static_cast<std::size_t>(i)] =
            run_trial(scenario, trial_seeds[static_cast<std::size_t>(i)]);
    }
#endif
    return results;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

StatsReport run_campaign(const ScenarioConfig& scenario, std::uint64_t trials, std::uint64_t seed,
                         int jobs) {
    return reduce(collect_trials(scenario, trials, seed, jobs), scenario.qubits);
}

StatsReport run_campaign_serial(const ScenarioConfig& scenario, std::uint64_t trials,
                                std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    validate_config(scenario);
    const SeededRng root(seed);
    std::vector<TrialStats> results(trials);
    for (std::uint64_t i = 0; i < trials; ++i) {
        results[i] = run_trial(scenario, root.stream("trial", i).key());
    }
    return reduce(results, scenario.qubits);
}

std::string StatsReport::csv_header() {
    return "scenario,trials,attack_success_rate,attack_success_stderr,mean_qber,qber_stderr,"
           "detection_rate,sift_rate,exact_forgery_rate,abort_rate,sampled_bits,pooled_qber,"
           "basis_misid_rate";
}

std::string StatsReport::csv_row(std::string_view label) const {
    std::string row(label);
    row += ',' + std::to_string(trials);
    for (const double v : {attack_success_rate, attack_success_stderr, mean_qber, qber_stderr,
                           detection_rate, sift_rate, exact_forgery_rate, abort_rate}) {
        row += ',' + format_double(v);
    }
    row += ',' + std::to_string(sampled_bits);
    row += ',' + format_double(pooled_qber);
    row += ',' + format_double(basis_misid_rate);
    return row;
}

std::string StatsReport::json(std::string_view label) const {
    nlohmann::ordered_json j;
    j["scenario"] = std::string(label);
    j["trials"] = trials;
    j["attack_success_rate"] = attack_success_rate;
    j["attack_success_stderr"] = attack_success_stderr;
    j["mean_qber"] = mean_qber;
    j["qber_stderr"] = qber_stderr;
    j["detection_rate"] = detection_rate;
    j["sift_rate"] = sift_rate;
    j["exact_forgery_rate"] = exact_forgery_rate;
    j["abort_rate"] = abort_rate;
    j["sampled_bits"] = sampled_bits;
    j["pooled_qber"] = pooled_qber;
    j["basis_misid_rate"] = basis_misid_rate;
    return j.dump(2);
}

}  // namespace qkd
