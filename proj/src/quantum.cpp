#include "qkd/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

Bit bit_from_int(int v) {
    if (v != 0 && v != 1) throw std::invalid_argument("bit value must be 0 or 1");
    return v == 1 ? Bit::one : Bit::zero;
}

PureState::PureState(std::complex<double> amp0, std::complex<double> amp1)
    : amp0_(amp0), amp1_(amp1) {
    const double norm = std::norm(amp0_) + std::norm(amp1_);
    if (std::abs(norm - 1.0) > kAmpTolerance) {
        throw std::invalid_argument("amplitude vector is not unit norm");
    }
}

bool approx_equal(const PureState& a, const PureState& b, double tol) {
    return std::abs(a.amp0() - b.amp0()) <= tol && std::abs(a.amp1() - b.amp1()) <= tol;
}

Bit MeasurementOutcome::bit() const {
    if (!bit_) throw std::logic_error("uniform outcome carries no bit");
    return *bit_;
}

SymbolicQubit prepare(Bit b) {
    return b == Bit::one ? SymbolicQubit::one : SymbolicQubit::zero;
}

SymbolicQubit apply_x(SymbolicQubit q) {
    switch (q) {
        case SymbolicQubit::zero: return SymbolicQubit::one;
        case SymbolicQubit::one: return SymbolicQubit::zero;
        case SymbolicQubit::plus: return SymbolicQubit::plus;
        case SymbolicQubit::minus: return SymbolicQubit::minus;  // up to global phase
        case SymbolicQubit::uniform: return SymbolicQubit::uniform;
    }
    throw std::logic_error("unreachable");
}

PureState apply_x(const PureState& s) {
    return PureState(s.amp1(), s.amp0());
}

SymbolicQubit apply_h(SymbolicQubit q) {
    switch (q) {
        case SymbolicQubit::zero: return SymbolicQubit::plus;
        case SymbolicQubit::one: return SymbolicQubit::minus;
        case SymbolicQubit::plus: return SymbolicQubit::zero;
        case SymbolicQubit::minus: return SymbolicQubit::one;
        case SymbolicQubit::uniform: return SymbolicQubit::uniform;
    }
    throw std::logic_error("unreachable");
}

PureState apply_h(const PureState& s) {
    return PureState((s.amp0() + s.amp1()) * kInvSqrt2, (s.amp0() - s.amp1()) * kInvSqrt2);
}

PureState to_vector(SymbolicQubit q) {
    switch (q) {
        case SymbolicQubit::zero: return PureState(1.0, 0.0);
        case SymbolicQubit::one: return PureState(0.0, 1.0);
        case SymbolicQubit::plus: return PureState(kInvSqrt2, kInvSqrt2);
        case SymbolicQubit::minus: return PureState(kInvSqrt2, -kInvSqrt2);
        case SymbolicQubit::uniform:
            throw std::invalid_argument("uniform marker has no amplitude vector");
    }
    throw std::logic_error("unreachable");
}

SymbolicQubit encode_state(Bit b, Basis basis) {
    const SymbolicQubit q = prepare(b);
    return basis == Basis::H ? apply_h(q) : q;
}

SymbolicReadout measure_symbolic(SymbolicQubit q, Basis basis) {
    if (q == SymbolicQubit::uniform) {
        return {MeasurementOutcome::uniform(), SymbolicQubit::uniform};
    }
    const SymbolicQubit rotated = basis == Basis::H ? apply_h(q) : q;
    switch (rotated) {
        case SymbolicQubit::zero:
            return {MeasurementOutcome::definite(Bit::zero), q};
        case SymbolicQubit::one:
            return {MeasurementOutcome::definite(Bit::one), q};
        default:
            return {MeasurementOutcome::uniform(), SymbolicQubit::uniform};
    }
}

PhysicalReadout measure_physical(const PureState& s, Basis basis, SeededRng& rng) {
    const PureState rotated = basis == Basis::H ? apply_h(s) : s;
    const double p0 = std::norm(rotated.amp0());
    const Bit outcome = rng.next_unit() < p0 ? Bit::zero : Bit::one;
    PureState post = to_vector(prepare(outcome));
    if (basis == Basis::H) post = apply_h(post);
    return {outcome, post};
}

std::string state_symbol(SymbolicQubit q, bool unicode) {
    switch (q) {
        case SymbolicQubit::zero: return unicode ? "|0⟩" : "0";
        case SymbolicQubit::one: return unicode ? "|1⟩" : "1";
        case SymbolicQubit::plus: return unicode ? "|U⁺⟩" : "U+";
        case SymbolicQubit::minus: return unicode ? "|U⁻⟩" : "U-";
        case SymbolicQubit::uniform: return unicode ? "|U⟩" : "U";
    }
    throw std::logic_error("unreachable");
}

std::string outcome_symbol(const MeasurementOutcome& o, bool unicode) {
    if (o.is_uniform()) return unicode ? "|U⟩" : "U";
    return o.bit() == Bit::one ? "1" : "0";
}

char basis_symbol(Basis b) {
    return b == Basis::H ? 'H' : 'I';
}

}  // namespace qkd
