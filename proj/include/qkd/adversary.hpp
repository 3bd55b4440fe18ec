// Eve strategies: fixed-basis intercept-resend, two-pass payload/basis
// reconstruction against retransmitted signals, and per-qubit forging
// against an early basis announcement.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qkd/protocol.hpp"

namespace qkd {

struct EveStrategy {
    enum class Kind {
        intercept_all_i,
        intercept_all_h,
        intercept_random,
        attack1,  // listen across retransmissions, then impersonate the sender
        attack2,  // forge per-qubit from a leaked receiver basis vector
    };

    Kind kind = Kind::intercept_random;
    // attack1 only: listening passes per basis; the session ordering must be
    // retransmit with 2 * copies_per_basis transmissions.
    int copies_per_basis = 1;
};

// One listening pass: what Eve measured and which bases she used.
struct EveRecord {
    std::vector<MeasurementOutcome> outcomes;
    ControlVector bases;
};

struct AttackReport {
    std::vector<EveRecord> records;
    std::optional<BitVector> reconstructed_payload;
    std::optional<ControlVector> reconstructed_controls;
    std::optional<QuantumSignal> forged_signal;
    bool exact_forgery = false;  // forged equals the original signal elementwise
    bool keys_match = false;     // both sifted keys agree
    bool detected = false;       // sampled QBER above threshold
    // Physical multi-copy bookkeeping, filled by the session against ground
    // truth: how many positions carried a superposed state, and how many of
    // those Eve classified into the wrong basis.
    std::size_t superposed_positions = 0;
    std::size_t misidentified_bases = 0;
};

struct InterceptResult {
    EveRecord record;
    QuantumSignal forged;
};

struct ReconstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Measure every position in the given bases and re-prepare a replacement:
// definite readouts are re-encoded exactly; undetermined positions get a
// uniformly guessed state from the opposite basis (that is the only basis
// the original can have been in). forced_guesses, when present, supplies
// the guess bits in display order instead of the rng.
InterceptResult intercept_with_bases(const QuantumSignal& signal, const ControlVector& bases,
                                     SeededRng& rng,
                                     const std::optional<BitVector>& forced_guesses = {});
InterceptResult intercept_fixed_basis(const QuantumSignal& signal, Basis basis, SeededRng& rng,
                                      const std::optional<BitVector>& forced_guesses = {});

struct Reconstruction {
    BitVector payload;
    ControlVector controls;
};

// Combine an all-I pass and an all-H pass over the same symbolic signal:
// whichever pass read a definite bit names both the payload bit and the
// sender's control at that position.
Reconstruction attack1_reconstruct(const EveRecord& record_i, const EveRecord& record_h);

// Physical-mode extension with k listening passes per basis. A position is
// classified computational iff all k computational readouts agree; a
// superposed qubit slips through that test with probability 2^(1-k).
Reconstruction attack1_classify(const std::vector<EveRecord>& records_i,
                                const std::vector<EveRecord>& records_h);

// Re-encode the reconstructed pair; identical to the honest encoding.
QuantumSignal attack1_forge(const BitVector& payload, const ControlVector& controls, Mode mode);

// Forge from a measurement taken in the leaked receiver bases: definite
// bits are re-encoded under the leaked basis, undetermined positions get a
// uniformly guessed state from the opposite basis.
QuantumSignal attack2_forge(const std::vector<MeasurementOutcome>& outcomes,
                            const ControlVector& leaked_bases, Mode mode, SeededRng& rng,
                            const std::optional<BitVector>& forced_guesses = {});

}  // namespace qkd
