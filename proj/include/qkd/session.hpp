// Quantum/classical channel events, message orderings, the defense
// policies, and the session orchestrator that ties the roles together.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qkd/adversary.hpp"
#include "qkd/fixtures.hpp"
#include "qkd/protocol.hpp"

namespace qkd {

// Invalid or incompatible scenario configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Channel : std::uint8_t { quantum, classical };
enum class Direction : std::uint8_t { alice_to_bob, bob_to_alice };

struct ChannelEvent {
    std::uint64_t seq = 0;
    Channel channel = Channel::quantum;
    Direction direction = Direction::alice_to_bob;
    std::variant<QuantumSignal, ControlVector, MatchVector> payload;
    bool tampered = false;  // injected or altered by the adversary
};

struct MessageOrdering {
    enum class Kind {
        standard,     // signal, then receiver bases, then match vector
        early_basis,  // receiver announces bases before the quantum signal
        retransmit,   // sender emits the same signal `transmissions` times
    };

    Kind kind = Kind::standard;
    int transmissions = 1;  // retransmit only; must be >= 2

    static MessageOrdering standard() { return {Kind::standard, 1}; }
    static MessageOrdering early_basis() { return {Kind::early_basis, 1}; }
    static MessageOrdering retransmit(int transmissions) {
        return {Kind::retransmit, transmissions};
    }
};

struct PolicyConfig {
    bool single_send = false;    // reject a repeated emission of the same signal
    bool ordered_basis = false;  // receiver bases only after measurement
    double sample_fraction = 0.5;
    double qber_threshold = 0.0;
};

struct ScenarioConfig {
    std::size_t qubits = 8;
    Mode mode = Mode::symbolic;
    MessageOrdering ordering = MessageOrdering::standard();
    std::optional<EveStrategy> adversary;
    PolicyConfig policy;
    std::uint64_t seed = 0;
    std::optional<Fixture> fixture;
};

// One entry per quantum-signal instance put on the wire; a measurement
// consumes the instance, so no entry is ever measured twice.
struct SignalLedgerEntry {
    std::string origin;                      // "alice.pass1", "eve.forge", ...
    std::optional<std::string> measured_by;  // consuming role, if any
};

struct KeySampleRecord {
    std::vector<std::size_t> positions;
    BitVector alice_bits;
    BitVector bob_bits;
    double qber = 0.0;
};

struct SessionTranscript {
    ScenarioConfig config;
    std::vector<ChannelEvent> events;

    // Role-internal records.
    BitVector alice_payload;      // Q_A
    ControlVector alice_controls; // A
    ControlVector bob_controls;   // B
    std::optional<QuantumSignal> alice_signal;  // Q_T as encoded by Alice
    std::optional<QuantumSignal> bob_received;  // the signal Bob measured
    std::optional<QuantumSignal> bob_post;      // Bob's retained post-states
    std::vector<MeasurementOutcome> bob_outcomes;
    std::optional<std::uint64_t> bob_measured_seq;  // logical time of Bob's readout
    MatchVector matches;  // C
    SiftedKey alice_sifted;
    SiftedKey bob_sifted;
    std::optional<KeySampleRecord> sample;
    SiftedKey alice_final;
    SiftedKey bob_final;
    bool detected = false;

    std::optional<AttackReport> attack;
    std::vector<SignalLedgerEntry> signal_ledger;

    // Policy outcome.
    bool aborted = false;
    std::optional<std::uint64_t> violation_seq;
    std::string violation_policy;

    // Wire format: one JSON object per event, fields seq, channel,
    // direction, payload_kind, payload, tampered.
    std::string events_jsonl() const;
    // Full structured dump (config, events, role records, attack, verdicts).
    std::string to_json_string(bool pretty = false) const;
};

struct PolicyVerdict {
    bool ok = true;
    std::uint64_t violation_seq = 0;
    std::string detail;
};

// Sender-side rule: no two untampered quantum events may carry the same
// signal encoding. Reports the earliest repeat.
PolicyVerdict enforce_single_send(const SessionTranscript& transcript);

// Receiver-side rule: the receiver's control announcement must come after
// its measurement completed.
PolicyVerdict enforce_basis_ordering(const SessionTranscript& transcript);

// Run one full session: encode, transmit under the configured ordering and
// adversary, measure, compare, sift, sample. Policies are checked as events
// are appended; a violation marks the transcript aborted at that event.
SessionTranscript run_session(const ScenarioConfig& config);

// Validates lengths, fractions and adversary/ordering compatibility.
void validate_config(const ScenarioConfig& config);

}  // namespace qkd
