// Single-qubit states, the X and H gates, and the two measurement semantics
// (symbolic table bookkeeping vs. Born-rule sampling).

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "qkd/rng.hpp"

namespace qkd {

// Tolerance for unit-norm and involution checks on amplitude vectors.
inline constexpr double kAmpTolerance = 1e-12;

enum class Bit : std::uint8_t { zero = 0, one = 1 };

constexpr int to_int(Bit b) { return b == Bit::one ? 1 : 0; }
constexpr Bit flip(Bit b) { return b == Bit::one ? Bit::zero : Bit::one; }
Bit bit_from_int(int v);  // rejects anything outside {0, 1}

// Control signal: H applies a Hadamard before send/readout, I leaves the
// qubit in the computational basis.
enum class Basis : std::uint8_t { I = 0, H = 1 };

constexpr Basis conjugate(Basis b) { return b == Basis::I ? Basis::H : Basis::I; }

// The four BB84 states plus a post-measurement marker. `uniform` is never
// produced by prepare/encode; it is the stored post-state after a
// mismatched-basis readout and behaves like the maximally mixed state:
// gates leave it in place and any measurement of it reads out uniform again.
enum class SymbolicQubit : std::uint8_t { zero, one, plus, minus, uniform };

// Two-component amplitude vector (amp0, amp1), unit norm enforced.
class PureState {
public:
    PureState(std::complex<double> amp0, std::complex<double> amp1);

    std::complex<double> amp0() const { return amp0_; }
    std::complex<double> amp1() const { return amp1_; }

    bool operator==(const PureState&) const = default;

private:
    std::complex<double> amp0_;
    std::complex<double> amp1_;
};

bool approx_equal(const PureState& a, const PureState& b, double tol = kAmpTolerance);

// A recorded readout: a definite bit, or the uniform symbol "U" a symbolic
// measurement yields when the bases do not match.
class MeasurementOutcome {
public:
    static MeasurementOutcome definite(Bit b) { return MeasurementOutcome(b); }
    static MeasurementOutcome uniform() { return MeasurementOutcome(std::nullopt); }

    bool is_definite() const { return bit_.has_value(); }
    bool is_uniform() const { return !bit_.has_value(); }
    Bit bit() const;  // throws std::logic_error on a uniform outcome

    bool operator==(const MeasurementOutcome&) const = default;

private:
    explicit MeasurementOutcome(std::optional<Bit> b) : bit_(b) {}
    std::optional<Bit> bit_;
};

// State representation a session runs under.
enum class Mode : std::uint8_t { symbolic, physical };

SymbolicQubit prepare(Bit b);

// Pauli-X. Symbolic states are tracked up to global phase, so `minus` is a
// fixed point even though the amplitude vector picks up a sign.
SymbolicQubit apply_x(SymbolicQubit q);
PureState apply_x(const PureState& s);

// Hadamard; its own inverse.
SymbolicQubit apply_h(SymbolicQubit q);
PureState apply_h(const PureState& s);

// Amplitude vector of a symbolic state; rejects the uniform marker.
PureState to_vector(SymbolicQubit q);

// prepare(b) followed by H iff basis == H.
SymbolicQubit encode_state(Bit b, Basis basis);

struct SymbolicReadout {
    MeasurementOutcome outcome;
    SymbolicQubit post;
};

// Measurement as optional H followed by a computational-basis readout.
// Matched combinations give a definite bit and leave the state unchanged;
// mismatched ones record "U" and leave the uniform marker behind, so a
// repeat measurement reproduces the first outcome.
SymbolicReadout measure_symbolic(SymbolicQubit q, Basis basis);

struct PhysicalReadout {
    Bit outcome;
    PureState post;
};

// Born-rule readout. With basis == H the state is rotated through H first
// and the collapsed eigenstate is expressed back through H, so measuring
// the post-state again in the same basis repeats the outcome.
PhysicalReadout measure_physical(const PureState& s, Basis basis, SeededRng& rng);

// Display symbols: "0", "1", "U+", "U-", "U" (or ket glyphs with unicode).
std::string state_symbol(SymbolicQubit q, bool unicode = false);
std::string outcome_symbol(const MeasurementOutcome& o, bool unicode = false);
char basis_symbol(Basis b);

}  // namespace qkd
