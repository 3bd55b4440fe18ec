#include <string>
#include <vector>

#include "doctest.h"
#include "qkd/adversary.hpp"
#include "qkd/fixtures.hpp"
#include "qkd/session.hpp"

using namespace qkd;

namespace {

QuantumSignal worked_example_signal(Mode mode = Mode::symbolic) {
    return encode(BitVector::from_string("11001001"), ControlVector::from_string("HIHIHIHI"),
                  mode);
}

std::string outcome_string(const std::vector<MeasurementOutcome>& outcomes) {
    std::string s;
    for (const auto& o : outcomes) s += outcome_symbol(o);
    return s;
}

std::string signal_string(const QuantumSignal& s) {
    std::string out;
    for (const SymbolicQubit q : s.symbolic()) {
        if (!out.empty()) out += ' ';
        out += state_symbol(q);
    }
    return out;
}

std::vector<MeasurementOutcome> outcomes_from(const std::string& symbols) {
    std::vector<MeasurementOutcome> v;
    for (const char c : symbols) {
        if (c == 'U') {
            v.push_back(MeasurementOutcome::uniform());
        } else {
            v.push_back(MeasurementOutcome::definite(c == '1' ? Bit::one : Bit::zero));
        }
    }
    return v;
}

}  // namespace

TEST_CASE("all-computational intercept record matches the worked example") {
    SeededRng rng(3);
    const InterceptResult r = intercept_fixed_basis(worked_example_signal(), Basis::I, rng);
    CHECK(outcome_string(r.record.outcomes) == "U1U0U0U1");
    CHECK(r.record.bases.to_string() == "IIIIIIII");
}

TEST_CASE("all-hadamard intercept record matches the worked example") {
    SeededRng rng(3);
    const InterceptResult r = intercept_fixed_basis(worked_example_signal(), Basis::H, rng);
    CHECK(outcome_string(r.record.outcomes) == "1U0U1U0U");
    CHECK(r.record.bases.to_string() == "HHHHHHHH");
}

TEST_CASE("forced guesses reproduce the forged rows of the worked examples") {
    SeededRng rng(3);
    const InterceptResult all_i = intercept_fixed_basis(
        worked_example_signal(), Basis::I, rng, named_fixture("paper-table-2").eve_guesses);
    CHECK(signal_string(all_i.forged) == "U- 1 U+ 0 U+ 0 U- 1");

    const InterceptResult all_h = intercept_fixed_basis(
        worked_example_signal(), Basis::H, rng, named_fixture("paper-table-3").eve_guesses);
    CHECK(signal_string(all_h.forged) == "U- 1 U+ 1 U- 0 U+ 0");
}

TEST_CASE("intercept re-prepares eigenstates exactly") {
    SeededRng rng(4);
    const QuantumSignal zeros =
        encode(BitVector::from_string("0000"), ControlVector::from_string("IIII"), Mode::symbolic);
    const InterceptResult r = intercept_fixed_basis(zeros, Basis::I, rng);
    for (const auto& o : r.record.outcomes) {
        CHECK(o == MeasurementOutcome::definite(Bit::zero));
    }
    CHECK(signals_equal(r.forged, zeros));
}

TEST_CASE("two-pass reconstruction recovers the worked-example payload and controls") {
    const EveRecord record_i{outcomes_from("U1U0U0U1"), ControlVector::constant(8, Basis::I)};
    const EveRecord record_h{outcomes_from("1U0U1U0U"), ControlVector::constant(8, Basis::H)};
    const Reconstruction rec = attack1_reconstruct(record_i, record_h);
    CHECK(rec.payload.to_string() == "11001001");
    CHECK(rec.controls.to_string() == "HIHIHIHI");
}

TEST_CASE("reconstruction with an all-definite computational record is all-I") {
    const EveRecord record_i{outcomes_from("1010"), ControlVector::constant(4, Basis::I)};
    const EveRecord record_h{outcomes_from("UUUU"), ControlVector::constant(4, Basis::H)};
    const Reconstruction rec = attack1_reconstruct(record_i, record_h);
    CHECK(rec.payload.to_string() == "1010");
    CHECK(rec.controls.to_string() == "IIII");
}

TEST_CASE("reconstruction rejects contradictory or empty evidence") {
    const ControlVector all_i = ControlVector::constant(2, Basis::I);
    const ControlVector all_h = ControlVector::constant(2, Basis::H);
    CHECK_THROWS_AS(
        attack1_reconstruct({outcomes_from("11"), all_i}, {outcomes_from("1U"), all_h}),
        ReconstructionError);
    CHECK_THROWS_AS(
        attack1_reconstruct({outcomes_from("U1"), all_i}, {outcomes_from("U0"), all_h}),
        ReconstructionError);
    // records must come from the two fixed-basis passes
    CHECK_THROWS_AS(
        attack1_reconstruct({outcomes_from("11"), all_h}, {outcomes_from("UU"), all_h}),
        std::invalid_argument);
}

TEST_CASE("round-trip: encode, listen twice, reconstruct, for random pairs") {
    SeededRng rng(31);
    for (int round = 0; round < 1000; ++round) {
        SeededRng gen = rng.stream("gen", round);
        const BitVector payload = generate_payload(gen, 8);
        const ControlVector controls = generate_controls(gen, 8);
        const QuantumSignal qt = encode(payload, controls, Mode::symbolic);

        SeededRng pass_rng = rng.stream("pass", round);
        const SignalReadout pass_i = measure_signal(qt, ControlVector::constant(8, Basis::I), pass_rng);
        const SignalReadout pass_h = measure_signal(qt, ControlVector::constant(8, Basis::H), pass_rng);
        const Reconstruction rec =
            attack1_reconstruct({pass_i.outcomes, ControlVector::constant(8, Basis::I)},
                                {pass_h.outcomes, ControlVector::constant(8, Basis::H)});
        CHECK(rec.payload == payload);
        CHECK(rec.controls == controls);
        CHECK(signals_equal(attack1_forge(rec.payload, rec.controls, Mode::symbolic), qt));
    }
}

TEST_CASE("attack1 forge equals the honest encoding of the worked example") {
    const QuantumSignal forged = attack1_forge(BitVector::from_string("11001001"),
                                               ControlVector::from_string("HIHIHIHI"),
                                               Mode::symbolic);
    CHECK(signal_string(forged) == "U- 1 U+ 0 U- 0 U+ 1");
    CHECK(signals_equal(forged, worked_example_signal()));
}

TEST_CASE("attack1 full-session replay is exact and undetected") {
    for (int seed = 0; seed < 50; ++seed) {
        ScenarioConfig cfg;
        cfg.qubits = 8;
        cfg.mode = Mode::symbolic;
        cfg.ordering = MessageOrdering::retransmit(2);
        cfg.adversary = EveStrategy{EveStrategy::Kind::attack1, 1};
        cfg.seed = static_cast<std::uint64_t>(seed);
        const SessionTranscript t = run_session(cfg);
        REQUIRE(t.attack.has_value());
        CHECK(t.attack->reconstructed_payload == t.alice_payload);
        CHECK(t.attack->reconstructed_controls == t.alice_controls);
        CHECK(t.attack->exact_forgery);
        CHECK(t.attack->keys_match);
        CHECK_FALSE(t.attack->detected);
    }
}

TEST_CASE("attack2 forge reproduces the worked-example forged row") {
    SeededRng rng(1);
    const QuantumSignal forged =
        attack2_forge(outcomes_from("1UU01UU1"), ControlVector::from_string("HHIIHHII"),
                      Mode::symbolic, rng, named_fixture("paper-table-4").eve_guesses);
    CHECK(signal_string(forged) == "U- 0 U- 0 U- 0 U- 1");
}

TEST_CASE("attack2 deterministic positions do not depend on the rng") {
    const auto outcomes = outcomes_from("1UU01UU1");
    const ControlVector leaked = ControlVector::from_string("HHIIHHII");
    for (int seed = 0; seed < 20; ++seed) {
        SeededRng rng(static_cast<std::uint64_t>(seed));
        const QuantumSignal forged = attack2_forge(outcomes, leaked, Mode::symbolic, rng);
        CHECK(forged.symbolic_at(0) == SymbolicQubit::minus);  // q7
        CHECK(forged.symbolic_at(3) == SymbolicQubit::zero);   // q4
        CHECK(forged.symbolic_at(4) == SymbolicQubit::minus);  // q3
        CHECK(forged.symbolic_at(7) == SymbolicQubit::one);    // q0
    }
}

TEST_CASE("attack2 sessions stay stealthy in both modes") {
    for (const Mode mode : {Mode::symbolic, Mode::physical}) {
        for (int seed = 0; seed < 100; ++seed) {
            ScenarioConfig cfg;
            cfg.qubits = 16;
            cfg.mode = mode;
            cfg.ordering = MessageOrdering::early_basis();
            cfg.adversary = EveStrategy{EveStrategy::Kind::attack2, 1};
            cfg.seed = static_cast<std::uint64_t>(seed);
            const SessionTranscript t = run_session(cfg);
            REQUIRE(t.attack.has_value());
            CHECK(t.alice_sifted == t.bob_sifted);
            CHECK(t.attack->keys_match);
            CHECK_FALSE(t.attack->detected);
        }
    }
}

TEST_CASE("multi-copy classification: agreement in the computational readouts wins") {
    const ControlVector all_i = ControlVector::constant(2, Basis::I);
    const ControlVector all_h = ControlVector::constant(2, Basis::H);
    // position 0: computational readouts all agree -> I; position 1: they
    // disagree -> H, payload from the hadamard readouts.
    const std::vector<EveRecord> records_i = {{outcomes_from("10"), all_i},
                                              {outcomes_from("11"), all_i},
                                              {outcomes_from("10"), all_i}};
    const std::vector<EveRecord> records_h = {{outcomes_from("01"), all_h},
                                              {outcomes_from("11"), all_h},
                                              {outcomes_from("01"), all_h}};
    const Reconstruction rec = attack1_classify(records_i, records_h);
    CHECK(rec.controls.to_string() == "IH");
    CHECK(rec.payload[0] == Bit::one);
    CHECK(rec.payload[1] == Bit::one);

    CHECK_THROWS_AS(attack1_classify({}, records_h), std::invalid_argument);
    CHECK_THROWS_AS(attack1_classify({{outcomes_from("UU"), all_i}}, records_h),
                    std::invalid_argument);
}

TEST_CASE("multi-copy misidentification rate approaches 2^(1-k)") {
    // k = 3 listening passes per basis; a superposed qubit passes the
    // agreement test with probability 2 * (1/2)^3 = 0.25.
    ScenarioConfig cfg;
    cfg.qubits = 64;
    cfg.mode = Mode::physical;
    cfg.ordering = MessageOrdering::retransmit(6);
    cfg.adversary = EveStrategy{EveStrategy::Kind::attack1, 3};

    std::size_t superposed = 0;
    std::size_t misids = 0;
    for (int seed = 0; seed < 500; ++seed) {
        cfg.seed = static_cast<std::uint64_t>(seed) + 1000;
        const SessionTranscript t = run_session(cfg);
        REQUIRE(t.attack.has_value());
        superposed += t.attack->superposed_positions;
        misids += t.attack->misidentified_bases;
    }
    REQUIRE(superposed > 10000);
    const double rate = static_cast<double>(misids) / static_cast<double>(superposed);
    CHECK(rate > 0.23);
    CHECK(rate < 0.27);
}

TEST_CASE("fixed-basis forgery succeeds with probability 2^-m over the guessed positions") {
    // Worked-example fixture: four positions are hadamard-encoded, so an
    // all-computational Eve must guess all four to forge exactly.
    const QuantumSignal qt = worked_example_signal();
    SeededRng rng(202);
    int exact = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        SeededRng t = rng.stream("t", i);
        const InterceptResult r = intercept_fixed_basis(qt, Basis::I, t);
        if (signals_equal(r.forged, qt)) ++exact;
    }
    const double rate = static_cast<double>(exact) / trials;
    CHECK(rate > 0.0625 - 0.02);
    CHECK(rate < 0.0625 + 0.02);
}

TEST_CASE("guess sources are validated") {
    SeededRng rng(5);
    // too few forced guesses for the undetermined positions
    CHECK_THROWS_AS(intercept_fixed_basis(worked_example_signal(), Basis::I, rng,
                                          BitVector::from_string("10")),
                    std::invalid_argument);
    CHECK_THROWS_AS(attack2_forge(outcomes_from("1U"), ControlVector::from_string("HHI"),
                                  Mode::symbolic, rng),
                    std::invalid_argument);
}
