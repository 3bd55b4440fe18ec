#include "qkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qkd {

namespace {

void require_protocol_length(std::size_t length) {
    if (length < 2 || length % 2 != 0) {
        throw std::invalid_argument("qubit count must be even and >= 2");
    }
}

void require_equal_length(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("sequence length mismatch");
}

}  // namespace

BitVector BitVector::from_string(std::string_view s) {
    std::vector<Bit> bits;
    bits.reserve(s.size());
    for (const char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string must be 0/1");
        bits.push_back(c == '1' ? Bit::one : Bit::zero);
    }
    return BitVector(std::move(bits));
}

std::string BitVector::to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (const Bit b : bits_) out.push_back(b == Bit::one ? '1' : '0');
    return out;
}

ControlVector ControlVector::from_string(std::string_view s) {
    std::vector<Basis> signals;
    signals.reserve(s.size());
    for (const char c : s) {
        if (c != 'I' && c != 'H') throw std::invalid_argument("control string must be I/H");
        signals.push_back(c == 'H' ? Basis::H : Basis::I);
    }
    return ControlVector(std::move(signals));
}

ControlVector ControlVector::constant(std::size_t length, Basis b) {
    return ControlVector(std::vector<Basis>(length, b));
}

std::string ControlVector::to_string() const {
    std::string out;
    out.reserve(signals_.size());
    for (const Basis b : signals_) out.push_back(basis_symbol(b));
    return out;
}

MatchVector MatchVector::from_string(std::string_view s) {
    std::vector<bool> matches;
    matches.reserve(s.size());
    for (const char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("match string must be 0/1");
        matches.push_back(c == '1');
    }
    return MatchVector(std::move(matches));
}

std::size_t MatchVector::count() const {
    return static_cast<std::size_t>(std::count(matches_.begin(), matches_.end(), true));
}

std::string MatchVector::to_string() const {
    std::string out;
    out.reserve(matches_.size());
    for (const bool m : matches_) out.push_back(m ? '1' : '0');
    return out;
}

std::size_t QuantumSignal::size() const {
    return std::visit([](const auto& v) { return v.size(); }, qubits_);
}

SymbolicQubit QuantumSignal::symbolic_at(std::size_t i) const {
    return symbolic().at(i);
}

const PureState& QuantumSignal::physical_at(std::size_t i) const {
    return physical().at(i);
}

const std::vector<SymbolicQubit>& QuantumSignal::symbolic() const {
    if (mode() != Mode::symbolic) throw std::logic_error("signal is not symbolic");
    return std::get<std::vector<SymbolicQubit>>(qubits_);
}

const std::vector<PureState>& QuantumSignal::physical() const {
    if (mode() != Mode::physical) throw std::logic_error("signal is not physical");
    return std::get<std::vector<PureState>>(qubits_);
}

bool signals_equal(const QuantumSignal& a, const QuantumSignal& b, double tol) {
    if (a.mode() != b.mode() || a.size() != b.size()) return false;
    if (a.mode() == Mode::symbolic) return a.symbolic() == b.symbolic();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!approx_equal(a.physical_at(i), b.physical_at(i), tol)) return false;
    }
    return true;
}

BitVector generate_payload(SeededRng& rng, std::size_t length) {
    require_protocol_length(length);
    std::vector<Bit> bits(length);
    for (auto& b : bits) b = rng.next_bit() ? Bit::one : Bit::zero;
    return BitVector(std::move(bits));
}

ControlVector generate_controls(SeededRng& rng, std::size_t length) {
    require_protocol_length(length);
    std::vector<Basis> signals(length);
    for (auto& s : signals) s = rng.next_bit() ? Basis::H : Basis::I;
    return ControlVector(std::move(signals));
}

QuantumSignal encode(const BitVector& payload, const ControlVector& controls, Mode mode) {
    require_equal_length(payload.size(), controls.size());
    if (mode == Mode::symbolic) {
        std::vector<SymbolicQubit> qubits;
        qubits.reserve(payload.size());
        for (std::size_t i = 0; i < payload.size(); ++i) {
            qubits.push_back(encode_state(payload[i], controls[i]));
        }
        return QuantumSignal(std::move(qubits));
    }
    std::vector<PureState> qubits;
    qubits.reserve(payload.size());
    for (std::size_t i = 0; i < payload.size(); ++i) {
        PureState s = to_vector(prepare(payload[i]));
        if (controls[i] == Basis::H) s = apply_h(s);
        qubits.push_back(s);
    }
    return QuantumSignal(std::move(qubits));
}

SignalReadout measure_signal(const QuantumSignal& signal, const ControlVector& controls,
                             SeededRng& rng) {
    require_equal_length(signal.size(), controls.size());
    SignalReadout out;
    out.outcomes.reserve(signal.size());
    if (signal.mode() == Mode::symbolic) {
        std::vector<SymbolicQubit> post;
        post.reserve(signal.size());
        for (std::size_t i = 0; i < signal.size(); ++i) {
            const SymbolicReadout r = measure_symbolic(signal.symbolic_at(i), controls[i]);
            out.outcomes.push_back(r.outcome);
            post.push_back(r.post);
        }
        out.post = QuantumSignal(std::move(post));
        return out;
    }
    std::vector<PureState> post;
    post.reserve(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const PhysicalReadout r = measure_physical(signal.physical_at(i), controls[i], rng);
        out.outcomes.push_back(MeasurementOutcome::definite(r.outcome));
        post.push_back(r.post);
    }
    out.post = QuantumSignal(std::move(post));
    return out;
}

MatchVector compare_controls(const ControlVector& a, const ControlVector& b) {
    require_equal_length(a.size(), b.size());
    std::vector<bool> matches(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) matches[i] = a[i] == b[i];
    return MatchVector(std::move(matches));
}

SiftedKey sift(const BitVector& values, const MatchVector& matches) {
    require_equal_length(values.size(), matches.size());
    SiftedKey key;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (matches[i]) key.push_back(values[i]);
    }
    return key;
}

SiftedKey sift(const std::vector<MeasurementOutcome>& outcomes, const MatchVector& matches) {
    require_equal_length(outcomes.size(), matches.size());
    SiftedKey key;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!matches[i]) continue;
        if (outcomes[i].is_uniform()) {
            throw ProtocolCorruption("uniform outcome at retained position " + std::to_string(i));
        }
        key.push_back(outcomes[i].bit());
    }
    return key;
}

KeySample sample_key(const SiftedKey& alice, const SiftedKey& bob, double fraction,
                     SeededRng& rng) {
    require_equal_length(alice.size(), bob.size());
    if (fraction < 0.0 || fraction > 1.0) {
        throw std::invalid_argument("sample fraction must lie in [0, 1]");
    }
    const std::size_t n = alice.size();
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));

    // Partial Fisher-Yates over the index range, then sort for a stable record.
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.next_below(n - i);
        std::swap(indices[i], indices[j]);
    }
    KeySample sample;
    sample.positions.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(sample.positions.begin(), sample.positions.end());

    std::vector<bool> sampled(n, false);
    for (const std::size_t p : sample.positions) sampled[p] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (sampled[i]) {
            sample.alice_bits.push_back(alice[i]);
            sample.bob_bits.push_back(bob[i]);
        } else {
            sample.alice_remaining.push_back(alice[i]);
            sample.bob_remaining.push_back(bob[i]);
        }
    }
    return sample;
}

}  // namespace qkd
