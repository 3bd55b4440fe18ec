#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "qkd/analysis.hpp"

using namespace qkd;

namespace {

ScenarioConfig honest_config(std::size_t qubits = 64) {
    ScenarioConfig cfg;
    cfg.qubits = qubits;
    cfg.mode = Mode::symbolic;
    return cfg;
}

ScenarioConfig intercept_random_physical(std::size_t qubits = 64) {
    ScenarioConfig cfg;
    cfg.qubits = qubits;
    cfg.mode = Mode::physical;
    cfg.adversary = EveStrategy{EveStrategy::Kind::intercept_random, 1};
    return cfg;
}

}  // namespace

TEST_CASE("qber is the normalized hamming distance") {
    CHECK(qber(BitVector::from_string("1011"), BitVector::from_string("1011")) == 0.0);
    CHECK(qber(BitVector::from_string("1011"), BitVector::from_string("0100")) == 1.0);
    CHECK(qber(BitVector::from_string("1100"), BitVector::from_string("1000")) == 0.25);
    CHECK_THROWS_AS(qber(BitVector(), BitVector()), std::invalid_argument);
    CHECK_THROWS_AS(qber(BitVector::from_string("10"), BitVector::from_string("1")),
                    std::invalid_argument);
}

TEST_CASE("campaigns are deterministic and the parallel path matches the serial one") {
    const ScenarioConfig cfg = intercept_random_physical(16);
    const StatsReport a = run_campaign(cfg, 400, 99, 4);
    const StatsReport b = run_campaign(cfg, 400, 99, 2);
    const StatsReport c = run_campaign_serial(cfg, 400, 99);
    CHECK(a.csv_row("x") == b.csv_row("x"));
    CHECK(a.csv_row("x") == c.csv_row("x"));

    const StatsReport other = run_campaign(cfg, 400, 100, 4);
    CHECK(other.csv_row("x") != a.csv_row("x"));
}

TEST_CASE("honest campaign: zero qber, half the positions sift through") {
    const StatsReport r = run_campaign(honest_config(), 2000, 7);
    CHECK(r.mean_qber == 0.0);
    CHECK(r.detection_rate == 0.0);
    CHECK(r.abort_rate == 0.0);
    CHECK(r.sift_rate > 0.48);
    CHECK(r.sift_rate < 0.52);
    CHECK(r.attack_success_rate == 0.0);  // nothing to succeed at
}

TEST_CASE("attack2 campaign succeeds silently in both modes") {
    for (const Mode mode : {Mode::symbolic, Mode::physical}) {
        ScenarioConfig cfg;
        cfg.qubits = 8;
        cfg.mode = mode;
        cfg.ordering = MessageOrdering::early_basis();
        cfg.adversary = EveStrategy{EveStrategy::Kind::attack2, 1};
        const StatsReport r = run_campaign(cfg, 1000, 11);
        CHECK(r.attack_success_rate == 1.0);
        CHECK(r.detection_rate == 0.0);
    }
}

TEST_CASE("attack1 symbolic campaign succeeds with exact forgeries") {
    ScenarioConfig cfg;
    cfg.qubits = 8;
    cfg.mode = Mode::symbolic;
    cfg.ordering = MessageOrdering::retransmit(2);
    cfg.adversary = EveStrategy{EveStrategy::Kind::attack1, 1};
    const StatsReport r = run_campaign(cfg, 500, 13);
    CHECK(r.attack_success_rate == 1.0);
    CHECK(r.exact_forgery_rate == 1.0);
    CHECK(r.detection_rate == 0.0);
    CHECK(r.mean_qber == 0.0);
}

TEST_CASE("fixed-basis intercept on the worked example forges exactly 1/16 of the time") {
    ScenarioConfig cfg;
    cfg.qubits = 8;
    cfg.mode = Mode::symbolic;
    cfg.adversary = EveStrategy{EveStrategy::Kind::intercept_all_i, 1};
    cfg.fixture = named_fixture("paper-table-1");
    const StatsReport r = run_campaign(cfg, 5000, 17);
    CHECK(r.exact_forgery_rate > 0.0625 - 0.015);
    CHECK(r.exact_forgery_rate < 0.0625 + 0.015);
}

TEST_CASE("random-basis intercept drives the sampled qber to one quarter") {
    const StatsReport r = run_campaign(intercept_random_physical(), 1000, 19);
    CHECK(r.sampled_bits > 10000);
    CHECK(r.pooled_qber > 0.23);
    CHECK(r.pooled_qber < 0.27);
    CHECK(r.mean_qber > 0.23);
    CHECK(r.mean_qber < 0.27);
}

TEST_CASE("quadrupling the trial count roughly halves the qber stderr") {
    const ScenarioConfig cfg = intercept_random_physical(16);
    const StatsReport small = run_campaign(cfg, 1000, 23);
    const StatsReport large = run_campaign(cfg, 4000, 23);
    REQUIRE(small.qber_stderr > 0.0);
    const double ratio = large.qber_stderr / small.qber_stderr;
    CHECK(ratio > 0.375);
    CHECK(ratio < 0.625);
}

TEST_CASE("detection rate is non-decreasing in the sample fraction") {
    ScenarioConfig cfg = intercept_random_physical();
    double previous = -1.0;
    for (const double fraction : {0.1, 0.3, 0.5}) {
        cfg.policy.sample_fraction = fraction;
        const StatsReport r = run_campaign(cfg, 2000, 29);
        CHECK(r.detection_rate >= previous);
        previous = r.detection_rate;
    }
    CHECK(previous > 0.9);  // at fraction 0.5 detection is near-certain
}

TEST_CASE("aborted campaigns report the abort rate") {
    ScenarioConfig cfg;
    cfg.qubits = 8;
    cfg.ordering = MessageOrdering::retransmit(2);
    cfg.adversary = EveStrategy{EveStrategy::Kind::attack1, 1};
    cfg.policy.single_send = true;
    const StatsReport r = run_campaign(cfg, 200, 31);
    CHECK(r.abort_rate == 1.0);
    CHECK(r.attack_success_rate == 0.0);
}

TEST_CASE("reports serialize to csv and json") {
    const StatsReport r = run_campaign(honest_config(8), 50, 37);
    const std::string header = StatsReport::csv_header();
    const std::string row = r.csv_row("bb84");
    CHECK(header.substr(0, 8) == "scenario");
    CHECK(row.substr(0, 4) == "bb84");
    CHECK(std::count(header.begin(), header.end(), ',') ==
          std::count(row.begin(), row.end(), ','));

    const nlohmann::json j = nlohmann::json::parse(r.json("bb84"));
    CHECK(j["scenario"] == "bb84");
    CHECK(j["trials"] == 50);
}

TEST_CASE("zero trials is rejected") {
    CHECK_THROWS_AS(run_campaign(honest_config(), 0, 1), std::invalid_argument);
}
