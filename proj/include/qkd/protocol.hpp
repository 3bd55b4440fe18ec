// BB84 role logic: payload/control generation, encoding, signal measurement,
// control comparison, sifting and the post-sift key sample.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qkd/quantum.hpp"
#include "qkd/rng.hpp"

namespace qkd {

// Raised when sifting keeps a position whose outcome is not definite; in a
// well-formed session that indicates a semantics bug or adversary artifact.
struct ProtocolCorruption : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bit sequence in the display convention used throughout: element 0 is the
// highest-indexed qubit q_{2n-1}, the last element is q_0.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::vector<Bit> bits) : bits_(std::move(bits)) {}
    static BitVector from_string(std::string_view s);  // e.g. "11001001"

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    Bit operator[](std::size_t i) const { return bits_.at(i); }
    void push_back(Bit b) { bits_.push_back(b); }
    std::string to_string() const;

    auto begin() const { return bits_.begin(); }
    auto end() const { return bits_.end(); }

    bool operator==(const BitVector&) const = default;

private:
    std::vector<Bit> bits_;
};

// Per-qubit basis choices, same display order as BitVector.
class ControlVector {
public:
    ControlVector() = default;
    explicit ControlVector(std::vector<Basis> signals) : signals_(std::move(signals)) {}
    static ControlVector from_string(std::string_view s);  // e.g. "HIHIHIHI"
    static ControlVector constant(std::size_t length, Basis b);

    std::size_t size() const { return signals_.size(); }
    Basis operator[](std::size_t i) const { return signals_.at(i); }
    void push_back(Basis b) { signals_.push_back(b); }
    std::string to_string() const;

    auto begin() const { return signals_.begin(); }
    auto end() const { return signals_.end(); }

    bool operator==(const ControlVector&) const = default;

private:
    std::vector<Basis> signals_;
};

// Comparison result C: c_i = 1 exactly where the two control vectors agree.
class MatchVector {
public:
    MatchVector() = default;
    explicit MatchVector(std::vector<bool> matches) : matches_(std::move(matches)) {}
    static MatchVector from_string(std::string_view s);  // e.g. "10011001"

    std::size_t size() const { return matches_.size(); }
    bool operator[](std::size_t i) const { return matches_.at(i); }
    std::size_t count() const;
    std::string to_string() const;

    bool operator==(const MatchVector&) const = default;

private:
    std::vector<bool> matches_;
};

// The retained subsequence is an ordinary bit sequence (its length is the
// match count, which need not be even).
using SiftedKey = BitVector;

// In-flight qubit sequence; symbolic or amplitude-vector representation
// depending on the session mode.
class QuantumSignal {
public:
    QuantumSignal() = default;
    explicit QuantumSignal(std::vector<SymbolicQubit> qubits) : qubits_(std::move(qubits)) {}
    explicit QuantumSignal(std::vector<PureState> qubits) : qubits_(std::move(qubits)) {}

    Mode mode() const {
        return std::holds_alternative<std::vector<SymbolicQubit>>(qubits_) ? Mode::symbolic
                                                                           : Mode::physical;
    }
    std::size_t size() const;

    SymbolicQubit symbolic_at(std::size_t i) const;
    const PureState& physical_at(std::size_t i) const;

    const std::vector<SymbolicQubit>& symbolic() const;
    const std::vector<PureState>& physical() const;

private:
    std::variant<std::vector<SymbolicQubit>, std::vector<PureState>> qubits_;
};

// Elementwise equality; physical amplitudes compared within tol.
bool signals_equal(const QuantumSignal& a, const QuantumSignal& b, double tol = kAmpTolerance);

// Uniform random payload bits. Length must be even and >= 2.
BitVector generate_payload(SeededRng& rng, std::size_t length);

// Uniform random control signals. Length must be even and >= 2.
ControlVector generate_controls(SeededRng& rng, std::size_t length);

// Position i carries H applied iff controls[i] == H to prepare(payload[i]).
QuantumSignal encode(const BitVector& payload, const ControlVector& controls, Mode mode);

struct SignalReadout {
    std::vector<MeasurementOutcome> outcomes;
    QuantumSignal post;  // retained post-states, for forwarding scenarios
};

// Per-position measurement in the signal's own representation. Physical
// readouts are always definite; rng is consumed once per position there.
SignalReadout measure_signal(const QuantumSignal& signal, const ControlVector& controls,
                             SeededRng& rng);

MatchVector compare_controls(const ControlVector& a, const ControlVector& b);

// Subsequence at the matching positions, order preserved.
SiftedKey sift(const BitVector& values, const MatchVector& matches);
SiftedKey sift(const std::vector<MeasurementOutcome>& outcomes, const MatchVector& matches);

struct KeySample {
    std::vector<std::size_t> positions;  // indices into the sifted key, ascending
    BitVector alice_bits;
    BitVector bob_bits;
    BitVector alice_remaining;
    BitVector bob_remaining;
};

// Publicly compared fraction of the sifted key; the compared bits are
// discarded from the remaining key. Sample size is round(fraction * length).
KeySample sample_key(const SiftedKey& alice, const SiftedKey& bob, double fraction,
                     SeededRng& rng);

}  // namespace qkd
