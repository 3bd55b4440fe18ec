#include "qkd/session.hpp"

#include <utility>

#include "json.hpp"

namespace qkd {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* channel_name(Channel c) {
    return c == Channel::quantum ? "quantum" : "classical";
}

const char* direction_name(Direction d) {
    return d == Direction::alice_to_bob ? "alice_to_bob" : "bob_to_alice";
}

ordered_json signal_json(const QuantumSignal& s) {
    ordered_json arr = ordered_json::array();
    if (s.mode() == Mode::symbolic) {
        for (const SymbolicQubit q : s.symbolic()) arr.push_back(state_symbol(q));
    } else {
        for (const PureState& q : s.physical()) {
            arr.push_back({{q.amp0().real(), q.amp0().imag()},
                           {q.amp1().real(), q.amp1().imag()}});
        }
    }
    return arr;
}

std::string outcomes_string(const std::vector<MeasurementOutcome>& outcomes) {
    std::string out;
    out.reserve(outcomes.size());
    for (const MeasurementOutcome& o : outcomes) out += outcome_symbol(o);
    return out;
}

ordered_json event_json(const ChannelEvent& e) {
    ordered_json j;
    j["seq"] = e.seq;
    j["channel"] = channel_name(e.channel);
    j["direction"] = direction_name(e.direction);
    if (const auto* sig = std::get_if<QuantumSignal>(&e.payload)) {
        j["payload_kind"] = "quantum_signal";
        j["payload"] = signal_json(*sig);
    } else if (const auto* cv = std::get_if<ControlVector>(&e.payload)) {
        j["payload_kind"] = "control_vector";
        j["payload"] = cv->to_string();
    } else {
        j["payload_kind"] = "match_vector";
        j["payload"] = std::get<MatchVector>(e.payload).to_string();
    }
    j["tampered"] = e.tampered;
    return j;
}

const char* strategy_name(EveStrategy::Kind k) {
    switch (k) {
        case EveStrategy::Kind::intercept_all_i: return "intercept_all_i";
        case EveStrategy::Kind::intercept_all_h: return "intercept_all_h";
        case EveStrategy::Kind::intercept_random: return "intercept_random";
        case EveStrategy::Kind::attack1: return "attack1";
        case EveStrategy::Kind::attack2: return "attack2";
    }
    return "unknown";
}

const char* ordering_name(MessageOrdering::Kind k) {
    switch (k) {
        case MessageOrdering::Kind::standard: return "standard";
        case MessageOrdering::Kind::early_basis: return "early_basis";
        case MessageOrdering::Kind::retransmit: return "retransmit";
    }
    return "unknown";
}

ordered_json config_json(const ScenarioConfig& c) {
    ordered_json j;
    j["qubits"] = c.qubits;
    j["mode"] = c.mode == Mode::symbolic ? "symbolic" : "physical";
    j["ordering"] = {{"kind", ordering_name(c.ordering.kind)},
                     {"transmissions", c.ordering.transmissions}};
    if (c.adversary) {
        j["adversary"] = {{"kind", strategy_name(c.adversary->kind)},
                          {"copies_per_basis", c.adversary->copies_per_basis}};
    } else {
        j["adversary"] = nullptr;
    }
    j["policy"] = {{"single_send", c.policy.single_send},
                   {"ordered_basis", c.policy.ordered_basis},
                   {"sample_fraction", c.policy.sample_fraction},
                   {"qber_threshold", c.policy.qber_threshold}};
    j["seed"] = c.seed;
    if (c.fixture) {
        ordered_json f;
        f["name"] = c.fixture->name;
        if (c.fixture->payload) f["payload"] = c.fixture->payload->to_string();
        if (c.fixture->alice_controls) {
            f["alice_controls"] = c.fixture->alice_controls->to_string();
        }
        if (c.fixture->bob_controls) f["bob_controls"] = c.fixture->bob_controls->to_string();
        if (c.fixture->eve_guesses) f["eve_guesses"] = c.fixture->eve_guesses->to_string();
        j["fixture"] = f;
    } else {
        j["fixture"] = nullptr;
    }
    return j;
}

double sample_error_rate(const BitVector& a, const BitVector& b) {
    std::size_t errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(a.size());
}

class SessionRunner {
public:
    explicit SessionRunner(const ScenarioConfig& config) : cfg_(config), rng_(config.seed) {}

    SessionTranscript run() {
        validate_config(cfg_);
        t_.config = cfg_;
        prepare_role_inputs();
        switch (cfg_.ordering.kind) {
            case MessageOrdering::Kind::standard: run_standard(); break;
            case MessageOrdering::Kind::early_basis: run_early_basis(); break;
            case MessageOrdering::Kind::retransmit: run_retransmit(); break;
        }
        return std::move(t_);
    }

private:
    void prepare_role_inputs() {
        const auto& fx = cfg_.fixture;
        if (fx && fx->payload) {
            t_.alice_payload = *fx->payload;
        } else {
            SeededRng r = rng_.stream("alice.payload");
            t_.alice_payload = generate_payload(r, cfg_.qubits);
        }
        if (fx && fx->alice_controls) {
            t_.alice_controls = *fx->alice_controls;
        } else {
            SeededRng r = rng_.stream("alice.controls");
            t_.alice_controls = generate_controls(r, cfg_.qubits);
        }
        if (fx && fx->bob_controls) {
            t_.bob_controls = *fx->bob_controls;
        } else {
            SeededRng r = rng_.stream("bob.controls");
            t_.bob_controls = generate_controls(r, cfg_.qubits);
        }
    }

    // Appends an event and runs the enabled policy checks; returns false
    // once the session is aborted.
    template <typename Payload>
    bool emit(Channel channel, Direction direction, Payload payload, bool tampered) {
        ChannelEvent e;
        e.seq = ++clock_;
        e.channel = channel;
        e.direction = direction;
        e.payload = std::move(payload);
        e.tampered = tampered;
        t_.events.push_back(std::move(e));

        if (cfg_.policy.single_send) {
            const PolicyVerdict v = enforce_single_send(t_);
            if (!v.ok) return abort_session(v, "single-send");
        }
        if (cfg_.policy.ordered_basis) {
            const PolicyVerdict v = enforce_basis_ordering(t_);
            if (!v.ok) return abort_session(v, "ordered-basis");
        }
        return true;
    }

    bool abort_session(const PolicyVerdict& verdict, const char* policy) {
        t_.aborted = true;
        t_.violation_seq = verdict.violation_seq;
        t_.violation_policy = policy;
        return false;
    }

    std::size_t register_signal(std::string origin) {
        t_.signal_ledger.push_back({std::move(origin), std::nullopt});
        return t_.signal_ledger.size() - 1;
    }

    void mark_measured(std::size_t ledger_index, const char* who) {
        auto& entry = t_.signal_ledger.at(ledger_index);
        if (entry.measured_by) {
            throw std::logic_error("quantum signal instance measured twice: " + entry.origin);
        }
        entry.measured_by = who;
    }

    void bob_measure(const QuantumSignal& delivered, std::size_t ledger_index) {
        SeededRng r = rng_.stream("bob.measure");
        SignalReadout readout = measure_signal(delivered, t_.bob_controls, r);
        mark_measured(ledger_index, "bob");
        t_.bob_received = delivered;
        t_.bob_outcomes = std::move(readout.outcomes);
        t_.bob_post = std::move(readout.post);
        t_.bob_measured_seq = ++clock_;  // internal event on the same logical clock
    }

    bool announce_bob_controls() {
        return emit(Channel::classical, Direction::bob_to_alice, t_.bob_controls, false);
    }

    void finish_comparison_and_sift() {
        t_.matches = compare_controls(t_.alice_controls, t_.bob_controls);
        if (!emit(Channel::classical, Direction::alice_to_bob, t_.matches, false)) return;
        t_.alice_sifted = sift(t_.alice_payload, t_.matches);
        t_.bob_sifted = sift(t_.bob_outcomes, t_.matches);
        run_key_sample();
        if (t_.attack) {
            t_.attack->keys_match = t_.alice_sifted == t_.bob_sifted;
            t_.attack->detected = t_.detected;
            if (t_.attack->forged_signal && t_.alice_signal) {
                t_.attack->exact_forgery =
                    signals_equal(*t_.attack->forged_signal, *t_.alice_signal);
            }
        }
    }

    void run_key_sample() {
        t_.alice_final = t_.alice_sifted;
        t_.bob_final = t_.bob_sifted;
        if (cfg_.policy.sample_fraction <= 0.0 || t_.alice_sifted.empty()) return;
        SeededRng r = rng_.stream("qber.sample");
        KeySample ks = sample_key(t_.alice_sifted, t_.bob_sifted, cfg_.policy.sample_fraction, r);
        if (ks.positions.empty()) return;
        KeySampleRecord rec;
        rec.positions = ks.positions;
        rec.alice_bits = ks.alice_bits;
        rec.bob_bits = ks.bob_bits;
        rec.qber = sample_error_rate(ks.alice_bits, ks.bob_bits);
        t_.detected = rec.qber > cfg_.policy.qber_threshold;
        t_.sample = std::move(rec);
        t_.alice_final = ks.alice_remaining;
        t_.bob_final = ks.bob_remaining;
    }

    void run_standard() {
        QuantumSignal qt = encode(t_.alice_payload, t_.alice_controls, cfg_.mode);
        t_.alice_signal = qt;
        std::size_t delivered_idx = register_signal("alice.signal");
        if (!emit(Channel::quantum, Direction::alice_to_bob, qt, false)) return;
        QuantumSignal delivered = qt;

        if (cfg_.adversary) {
            AttackReport report;
            ControlVector eve_bases = intercept_bases();
            SeededRng eve_rng = rng_.stream("eve.intercept");
            const auto& guesses =
                cfg_.fixture ? cfg_.fixture->eve_guesses : std::optional<BitVector>{};
            InterceptResult res = intercept_with_bases(delivered, eve_bases, eve_rng, guesses);
            mark_measured(delivered_idx, "eve");
            report.records.push_back(res.record);
            report.forged_signal = res.forged;
            t_.attack = std::move(report);

            delivered_idx = register_signal("eve.forge");
            if (!emit(Channel::quantum, Direction::alice_to_bob, res.forged, true)) return;
            delivered = std::move(res.forged);
        }

        bob_measure(delivered, delivered_idx);
        if (!announce_bob_controls()) return;
        finish_comparison_and_sift();
    }

    ControlVector intercept_bases() {
        switch (cfg_.adversary->kind) {
            case EveStrategy::Kind::intercept_all_i:
                return ControlVector::constant(cfg_.qubits, Basis::I);
            case EveStrategy::Kind::intercept_all_h:
                return ControlVector::constant(cfg_.qubits, Basis::H);
            default: {
                SeededRng r = rng_.stream("eve.bases");
                return generate_controls(r, cfg_.qubits);
            }
        }
    }

    void run_early_basis() {
        if (!announce_bob_controls()) return;

        QuantumSignal qt = encode(t_.alice_payload, t_.alice_controls, cfg_.mode);
        t_.alice_signal = qt;
        std::size_t delivered_idx = register_signal("alice.signal");
        if (!emit(Channel::quantum, Direction::alice_to_bob, qt, false)) return;
        QuantumSignal delivered = qt;

        if (cfg_.adversary) {
            AttackReport report;
            SeededRng eve_rng = rng_.stream("eve.measure");
            SignalReadout readout = measure_signal(delivered, t_.bob_controls, eve_rng);
            mark_measured(delivered_idx, "eve");
            report.records.push_back({readout.outcomes, t_.bob_controls});

            SeededRng guess_rng = rng_.stream("eve.guess");
            const auto& guesses =
                cfg_.fixture ? cfg_.fixture->eve_guesses : std::optional<BitVector>{};
            QuantumSignal forged =
                attack2_forge(readout.outcomes, t_.bob_controls, cfg_.mode, guess_rng, guesses);
            report.forged_signal = forged;
            t_.attack = std::move(report);

            delivered_idx = register_signal("eve.forge");
            if (!emit(Channel::quantum, Direction::alice_to_bob, forged, true)) return;
            delivered = std::move(forged);
        }

        bob_measure(delivered, delivered_idx);
        finish_comparison_and_sift();
    }

    void run_retransmit() {
        QuantumSignal qt = encode(t_.alice_payload, t_.alice_controls, cfg_.mode);
        t_.alice_signal = qt;
        const bool eavesdropping = cfg_.adversary.has_value();
        const int copies = eavesdropping ? cfg_.adversary->copies_per_basis : 0;

        AttackReport report;
        std::vector<EveRecord> records_i;
        std::vector<EveRecord> records_h;
        std::size_t last_idx = 0;

        for (int pass = 0; pass < cfg_.ordering.transmissions; ++pass) {
            const std::size_t idx = register_signal("alice.pass" + std::to_string(pass + 1));
            if (!emit(Channel::quantum, Direction::alice_to_bob, qt, false)) {
                if (eavesdropping) t_.attack = std::move(report);
                return;
            }
            if (eavesdropping) {
                const Basis basis = pass < copies ? Basis::I : Basis::H;
                SeededRng pass_rng = rng_.stream("eve.pass", static_cast<std::uint64_t>(pass));
                SignalReadout readout =
                    measure_signal(qt, ControlVector::constant(cfg_.qubits, basis), pass_rng);
                mark_measured(idx, "eve");
                EveRecord rec{std::move(readout.outcomes),
                              ControlVector::constant(cfg_.qubits, basis)};
                report.records.push_back(rec);
                (basis == Basis::I ? records_i : records_h).push_back(std::move(rec));
            } else {
                last_idx = idx;
            }
        }

        if (eavesdropping) {
            const Reconstruction rec = cfg_.mode == Mode::symbolic
                                           ? attack1_reconstruct(records_i.front(), records_h.front())
                                           : attack1_classify(records_i, records_h);
            report.reconstructed_payload = rec.payload;
            report.reconstructed_controls = rec.controls;
            for (std::size_t i = 0; i < cfg_.qubits; ++i) {
                if (t_.alice_controls[i] == Basis::H) ++report.superposed_positions;
                if (rec.controls[i] != t_.alice_controls[i]) ++report.misidentified_bases;
            }
            QuantumSignal forged = attack1_forge(rec.payload, rec.controls, cfg_.mode);
            report.forged_signal = forged;
            t_.attack = std::move(report);

            const std::size_t forged_idx = register_signal("eve.forge");
            if (!emit(Channel::quantum, Direction::alice_to_bob, forged, true)) return;
            bob_measure(forged, forged_idx);
        } else {
            // Bob measures the final copy; earlier ones go unconsumed.
            bob_measure(qt, last_idx);
        }

        if (!announce_bob_controls()) return;
        finish_comparison_and_sift();
    }

    ScenarioConfig cfg_;
    SeededRng rng_;
    SessionTranscript t_;
    std::uint64_t clock_ = 0;
};

}  // namespace

std::string SessionTranscript::events_jsonl() const {
    std::string out;
    for (const ChannelEvent& e : events) {
        out += event_json(e).dump();
        out += '\n';
    }
    return out;
}

std::string SessionTranscript::to_json_string(bool pretty) const {
    ordered_json j;
    j["config"] = config_json(config);
    ordered_json evs = ordered_json::array();
    for (const ChannelEvent& e : events) evs.push_back(event_json(e));
    j["events"] = evs;

    ordered_json alice;
    alice["payload"] = alice_payload.to_string();
    alice["controls"] = alice_controls.to_string();
    alice["sifted_key"] = alice_sifted.to_string();
    alice["final_key"] = alice_final.to_string();
    j["alice"] = alice;

    ordered_json bob;
    bob["controls"] = bob_controls.to_string();
    bob["outcomes"] = outcomes_string(bob_outcomes);
    bob["sifted_key"] = bob_sifted.to_string();
    bob["final_key"] = bob_final.to_string();
    j["bob"] = bob;

    j["matches"] = matches.to_string();
    if (sample) {
        j["sample"] = {{"positions", sample->positions},
                       {"alice_bits", sample->alice_bits.to_string()},
                       {"bob_bits", sample->bob_bits.to_string()},
                       {"qber", sample->qber}};
    } else {
        j["sample"] = nullptr;
    }
    j["detected"] = detected;

    if (attack) {
        ordered_json a;
        ordered_json recs = ordered_json::array();
        for (const EveRecord& r : attack->records) {
            recs.push_back(
                {{"bases", r.bases.to_string()}, {"outcomes", outcomes_string(r.outcomes)}});
        }
        a["records"] = recs;
        a["reconstructed_payload"] = attack->reconstructed_payload
                                         ? ordered_json(attack->reconstructed_payload->to_string())
                                         : ordered_json(nullptr);
        a["reconstructed_controls"] =
            attack->reconstructed_controls
                ? ordered_json(attack->reconstructed_controls->to_string())
                : ordered_json(nullptr);
        a["forged_signal"] = attack->forged_signal ? signal_json(*attack->forged_signal)
                                                   : ordered_json(nullptr);
        a["exact_forgery"] = attack->exact_forgery;
        a["keys_match"] = attack->keys_match;
        a["detected"] = attack->detected;
        a["superposed_positions"] = attack->superposed_positions;
        a["misidentified_bases"] = attack->misidentified_bases;
        j["attack"] = a;
    } else {
        j["attack"] = nullptr;
    }

    ordered_json ledger = ordered_json::array();
    for (const SignalLedgerEntry& entry : signal_ledger) {
        ledger.push_back({{"origin", entry.origin},
                          {"measured_by", entry.measured_by ? ordered_json(*entry.measured_by)
                                                            : ordered_json(nullptr)}});
    }
    j["signal_ledger"] = ledger;

    j["aborted"] = aborted;
    j["violation_seq"] = violation_seq ? ordered_json(*violation_seq) : ordered_json(nullptr);
    j["violation_policy"] = violation_policy;

    return pretty ? j.dump(2) : j.dump();
}

PolicyVerdict enforce_single_send(const SessionTranscript& transcript) {
    std::vector<const QuantumSignal*> seen;
    for (const ChannelEvent& e : transcript.events) {
        if (e.channel != Channel::quantum || e.tampered) continue;
        const auto& sig = std::get<QuantumSignal>(e.payload);
        for (const QuantumSignal* earlier : seen) {
            if (signals_equal(*earlier, sig)) {
                return {false, e.seq, "repeated quantum signal emission"};
            }
        }
        seen.push_back(&sig);
    }
    return {};
}

PolicyVerdict enforce_basis_ordering(const SessionTranscript& transcript) {
    for (const ChannelEvent& e : transcript.events) {
        if (e.channel != Channel::classical || e.direction != Direction::bob_to_alice) continue;
        if (!std::holds_alternative<ControlVector>(e.payload)) continue;
        const bool measured_first =
            transcript.bob_measured_seq && *transcript.bob_measured_seq < e.seq;
        if (!measured_first) {
            return {false, e.seq, "receiver bases announced before measurement"};
        }
        return {};
    }
    return {};
}

void validate_config(const ScenarioConfig& config) {
    if (config.qubits < 2 || config.qubits % 2 != 0) {
        throw ConfigError("qubit count must be even and >= 2");
    }
    if (config.policy.sample_fraction < 0.0 || config.policy.sample_fraction > 1.0) {
        throw ConfigError("sample_fraction must lie in [0, 1]");
    }
    if (config.policy.qber_threshold < 0.0 || config.policy.qber_threshold > 1.0) {
        throw ConfigError("qber_threshold must lie in [0, 1]");
    }
    if (config.ordering.kind == MessageOrdering::Kind::retransmit &&
        config.ordering.transmissions < 2) {
        throw ConfigError("retransmit ordering needs at least 2 transmissions");
    }
    if (config.fixture) {
        const Fixture& f = *config.fixture;
        if ((f.payload && f.payload->size() != config.qubits) ||
            (f.alice_controls && f.alice_controls->size() != config.qubits) ||
            (f.bob_controls && f.bob_controls->size() != config.qubits)) {
            throw ConfigError("fixture length does not match qubit count");
        }
    }
    if (!config.adversary) return;
    switch (config.adversary->kind) {
        case EveStrategy::Kind::attack1: {
            if (config.ordering.kind != MessageOrdering::Kind::retransmit) {
                throw ConfigError("attack1 requires the retransmit ordering");
            }
            const int copies = config.adversary->copies_per_basis;
            if (copies < 1) throw ConfigError("attack1 needs at least one pass per basis");
            if (config.ordering.transmissions != 2 * copies) {
                throw ConfigError("attack1 needs transmissions == 2 * copies_per_basis");
            }
            break;
        }
        case EveStrategy::Kind::attack2:
            if (config.ordering.kind != MessageOrdering::Kind::early_basis) {
                throw ConfigError("attack2 requires the early-basis ordering");
            }
            break;
        default:
            if (config.ordering.kind != MessageOrdering::Kind::standard) {
                throw ConfigError("intercept strategies require the standard ordering");
            }
            break;
    }
}

SessionTranscript run_session(const ScenarioConfig& config) {
    return SessionRunner(config).run();
}

}  // namespace qkd
