#include "qkd/adversary.hpp"

namespace qkd {

namespace {

// Hands out guess bits either from the fixture override or from the rng.
class GuessSource {
public:
    GuessSource(SeededRng& rng, const std::optional<BitVector>& forced)
        : rng_(rng), forced_(forced) {}

    Bit next() {
        if (forced_) {
            if (cursor_ >= forced_->size()) {
                throw std::invalid_argument("fixture guess list exhausted");
            }
            return (*forced_)[cursor_++];
        }
        return rng_.next_bit() ? Bit::one : Bit::zero;
    }

private:
    SeededRng& rng_;
    const std::optional<BitVector>& forced_;
    std::size_t cursor_ = 0;
};

// Definite readouts restore the original state exactly; undetermined ones
// can only have come from the opposite basis, so guess uniformly there.
SymbolicQubit replacement_state(const MeasurementOutcome& outcome, Basis measured_in,
                                GuessSource& guesses) {
    if (outcome.is_definite()) return encode_state(outcome.bit(), measured_in);
    return encode_state(guesses.next(), conjugate(measured_in));
}

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("sequence length mismatch");
}

}  // namespace

InterceptResult intercept_with_bases(const QuantumSignal& signal, const ControlVector& bases,
                                     SeededRng& rng,
                                     const std::optional<BitVector>& forced_guesses) {
    require_same_length(signal.size(), bases.size());
    GuessSource guesses(rng, forced_guesses);
    InterceptResult result;
    result.record.bases = bases;
    result.record.outcomes.reserve(signal.size());

    if (signal.mode() == Mode::symbolic) {
        std::vector<SymbolicQubit> forged;
        forged.reserve(signal.size());
        for (std::size_t i = 0; i < signal.size(); ++i) {
            const SymbolicReadout r = measure_symbolic(signal.symbolic_at(i), bases[i]);
            result.record.outcomes.push_back(r.outcome);
            forged.push_back(replacement_state(r.outcome, bases[i], guesses));
        }
        result.forged = QuantumSignal(std::move(forged));
        return result;
    }

    std::vector<PureState> forged;
    forged.reserve(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const PhysicalReadout r = measure_physical(signal.physical_at(i), bases[i], rng);
        result.record.outcomes.push_back(MeasurementOutcome::definite(r.outcome));
        forged.push_back(to_vector(encode_state(r.outcome, bases[i])));
    }
    result.forged = QuantumSignal(std::move(forged));
    return result;
}

InterceptResult intercept_fixed_basis(const QuantumSignal& signal, Basis basis, SeededRng& rng,
                                      const std::optional<BitVector>& forced_guesses) {
    return intercept_with_bases(signal, ControlVector::constant(signal.size(), basis), rng,
                                forced_guesses);
}

Reconstruction attack1_reconstruct(const EveRecord& record_i, const EveRecord& record_h) {
    require_same_length(record_i.outcomes.size(), record_h.outcomes.size());
    for (std::size_t i = 0; i < record_i.bases.size(); ++i) {
        if (record_i.bases[i] != Basis::I || record_h.bases[i] != Basis::H) {
            throw std::invalid_argument("records must come from an all-I and an all-H pass");
        }
    }
    Reconstruction rec;
    for (std::size_t i = 0; i < record_i.outcomes.size(); ++i) {
        const MeasurementOutcome& in_i = record_i.outcomes[i];
        const MeasurementOutcome& in_h = record_h.outcomes[i];
        if (in_i.is_definite() && in_h.is_definite()) {
            throw ReconstructionError("both passes definite at position " + std::to_string(i) +
                                      ": input is not a BB84 signal");
        }
        if (in_i.is_uniform() && in_h.is_uniform()) {
            throw ReconstructionError("both passes uniform at position " + std::to_string(i));
        }
        if (in_i.is_definite()) {
            rec.payload.push_back(in_i.bit());
            rec.controls.push_back(Basis::I);
        } else {
            rec.payload.push_back(in_h.bit());
            rec.controls.push_back(Basis::H);
        }
    }
    return rec;
}

Reconstruction attack1_classify(const std::vector<EveRecord>& records_i,
                                const std::vector<EveRecord>& records_h) {
    if (records_i.empty() || records_h.empty()) {
        throw std::invalid_argument("need at least one pass per basis");
    }
    const std::size_t n = records_i.front().outcomes.size();
    for (const auto* group : {&records_i, &records_h}) {
        for (const EveRecord& r : *group) {
            require_same_length(r.outcomes.size(), n);
            for (const MeasurementOutcome& o : r.outcomes) {
                if (o.is_uniform()) {
                    throw std::invalid_argument("classification expects definite readouts");
                }
            }
        }
    }

    Reconstruction rec;
    for (std::size_t i = 0; i < n; ++i) {
        bool i_agree = true;
        const Bit first_i = records_i.front().outcomes[i].bit();
        for (const EveRecord& r : records_i) i_agree &= r.outcomes[i].bit() == first_i;
        if (i_agree) {
            rec.payload.push_back(first_i);
            rec.controls.push_back(Basis::I);
            continue;
        }
        const Bit first_h = records_h.front().outcomes[i].bit();
        for (const EveRecord& r : records_h) {
            if (r.outcomes[i].bit() != first_h) {
                throw ReconstructionError("both bases disagree at position " + std::to_string(i));
            }
        }
        rec.payload.push_back(first_h);
        rec.controls.push_back(Basis::H);
    }
    return rec;
}

QuantumSignal attack1_forge(const BitVector& payload, const ControlVector& controls, Mode mode) {
    return encode(payload, controls, mode);
}

QuantumSignal attack2_forge(const std::vector<MeasurementOutcome>& outcomes,
                            const ControlVector& leaked_bases, Mode mode, SeededRng& rng,
                            const std::optional<BitVector>& forced_guesses) {
    require_same_length(outcomes.size(), leaked_bases.size());
    GuessSource guesses(rng, forced_guesses);
    if (mode == Mode::symbolic) {
        std::vector<SymbolicQubit> forged;
        forged.reserve(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            forged.push_back(replacement_state(outcomes[i], leaked_bases[i], guesses));
        }
        return QuantumSignal(std::move(forged));
    }
    std::vector<PureState> forged;
    forged.reserve(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        forged.push_back(to_vector(replacement_state(outcomes[i], leaked_bases[i], guesses)));
    }
    return QuantumSignal(std::move(forged));
}

}  // namespace qkd
