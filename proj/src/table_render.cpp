#include "qkd/table_render.hpp"

#include <algorithm>
#include <cstdio>

namespace qkd {

namespace {

// The noiseless pipeline only ever puts the four BB84 states on the wire,
// so physical cells can be labeled with their symbolic counterpart.
std::string physical_symbol(const PureState& s, bool unicode) {
    for (const SymbolicQubit q : {SymbolicQubit::zero, SymbolicQubit::one, SymbolicQubit::plus,
                                  SymbolicQubit::minus}) {
        if (approx_equal(s, to_vector(q), 1e-9)) return state_symbol(q, unicode);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(%.3f,%.3f)", s.amp0().real(), s.amp1().real());
    return buf;
}

std::vector<std::string> signal_cells(const QuantumSignal& s, bool unicode) {
    std::vector<std::string> cells;
    cells.reserve(s.size());
    if (s.mode() == Mode::symbolic) {
        for (const SymbolicQubit q : s.symbolic()) cells.push_back(state_symbol(q, unicode));
    } else {
        for (const PureState& q : s.physical()) cells.push_back(physical_symbol(q, unicode));
    }
    return cells;
}

std::vector<std::string> bit_cells(const BitVector& bits) {
    std::vector<std::string> cells;
    cells.reserve(bits.size());
    for (const Bit b : bits) cells.emplace_back(1, b == Bit::one ? '1' : '0');
    return cells;
}

std::vector<std::string> control_cells(const ControlVector& controls) {
    std::vector<std::string> cells;
    cells.reserve(controls.size());
    for (const Basis b : controls) cells.emplace_back(1, basis_symbol(b));
    return cells;
}

std::vector<std::string> outcome_cells(const std::vector<MeasurementOutcome>& outcomes,
                                       bool unicode) {
    std::vector<std::string> cells;
    cells.reserve(outcomes.size());
    for (const MeasurementOutcome& o : outcomes) cells.push_back(outcome_symbol(o, unicode));
    return cells;
}

// Sifted-key row: kept positions show their bit, discarded ones stay blank.
std::vector<std::string> sifted_cells(const BitVector& values, const MatchVector& matches) {
    std::vector<std::string> cells(matches.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        if (matches[i]) cells[i] = values[k++] == Bit::one ? "1" : "0";
    }
    return cells;
}

// Codepoints, not bytes, so unicode ket glyphs line up.
std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (const unsigned char c : s) {
        if ((c & 0xc0) != 0x80) ++w;
    }
    return w;
}

std::string pad_left(const std::string& s, std::size_t width) {
    const std::size_t w = display_width(s);
    return std::string(width > w ? width - w : 0, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    const std::size_t w = display_width(s);
    return s + std::string(width > w ? width - w : 0, ' ');
}

}  // namespace

std::vector<TableRow> table_rows(const SessionTranscript& t, bool unicode) {
    std::vector<TableRow> rows;
    const bool early = t.config.ordering.kind == MessageOrdering::Kind::early_basis;
    const bool have_bob_controls_row = !t.aborted || t.bob_measured_seq.has_value() || early;

    const TableRow row_a{"(a) Alice payload Q_A", bit_cells(t.alice_payload)};
    const TableRow row_b{"(b) Alice controls A", control_cells(t.alice_controls)};
    TableRow row_d{"(d) Bob controls B", control_cells(t.bob_controls)};
    if (early) row_d.label += " (announced early)";

    if (early && have_bob_controls_row) rows.push_back(row_d);
    rows.push_back(row_a);
    rows.push_back(row_b);

    if (t.alice_signal) {
        std::string label = "(c) quantum signal Q_T";
        if (t.config.ordering.kind == MessageOrdering::Kind::retransmit) {
            label += " (sent " + std::to_string(t.config.ordering.transmissions) + "x)";
        }
        rows.push_back({label, signal_cells(*t.alice_signal, unicode)});
    }

    if (t.attack) {
        const AttackReport& a = *t.attack;
        if (a.records.size() == 1) {
            rows.push_back({"Eve bases", control_cells(a.records.front().bases)});
            rows.push_back({"Eve record", outcome_cells(a.records.front().outcomes, unicode)});
        } else {
            for (std::size_t p = 0; p < a.records.size(); ++p) {
                const std::string tag = "Eve pass " + std::to_string(p + 1);
                rows.push_back({tag + " bases", control_cells(a.records[p].bases)});
                rows.push_back({tag + " record", outcome_cells(a.records[p].outcomes, unicode)});
            }
        }
        if (a.reconstructed_payload) {
            rows.push_back({"Eve reconstructed payload", bit_cells(*a.reconstructed_payload)});
        }
        if (a.reconstructed_controls) {
            rows.push_back({"Eve reconstructed controls", control_cells(*a.reconstructed_controls)});
        }
        if (a.forged_signal) {
            rows.push_back({"Eve forged signal", signal_cells(*a.forged_signal, unicode)});
        }
    }

    if (!early && have_bob_controls_row) rows.push_back(row_d);

    if (!t.bob_outcomes.empty()) {
        rows.push_back({"(e) Bob outcomes Q_B", outcome_cells(t.bob_outcomes, unicode)});
    }
    if (t.matches.size() > 0) {
        rows.push_back({"(f) match vector C", [&] {
                            std::vector<std::string> cells(t.matches.size());
                            for (std::size_t i = 0; i < t.matches.size(); ++i) {
                                cells[i] = t.matches[i] ? "1" : "0";
                            }
                            return cells;
                        }()});
        rows.push_back({"(g) Bob sifted key", sifted_cells(t.bob_sifted, t.matches)});
    }
    return rows;
}

std::string render_table(const SessionTranscript& t, bool unicode) {
    const std::vector<TableRow> rows = table_rows(t, unicode);
    const std::size_t n = t.config.qubits;

    std::vector<std::string> headers(n);
    for (std::size_t i = 0; i < n; ++i) headers[i] = "q" + std::to_string(n - 1 - i);

    std::size_t label_width = 4;
    for (const TableRow& r : rows) label_width = std::max(label_width, display_width(r.label));
    std::vector<std::size_t> col_width(n);
    for (std::size_t i = 0; i < n; ++i) {
        col_width[i] = display_width(headers[i]);
        for (const TableRow& r : rows) {
            if (i < r.cells.size()) col_width[i] = std::max(col_width[i], display_width(r.cells[i]));
        }
    }

    std::string out = pad_right("step", label_width);
    for (std::size_t i = 0; i < n; ++i) out += "  " + pad_left(headers[i], col_width[i]);
    out += '\n';
    for (const TableRow& r : rows) {
        out += pad_right(r.label, label_width);
        for (std::size_t i = 0; i < n; ++i) {
            out += "  " + pad_left(i < r.cells.size() ? r.cells[i] : "", col_width[i]);
        }
        out += '\n';
    }

    if (t.aborted) {
        out += "aborted at event " + std::to_string(t.violation_seq.value_or(0)) +
               " (policy: " + t.violation_policy + ")\n";
        return out;
    }
    out += "final key: " + t.bob_sifted.to_string() + "\n";
    if (t.sample) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "qber sample (%zu bits): qber=%.4f, detected=%s\n",
                      t.sample->alice_bits.size(), t.sample->qber,
                      t.detected ? "yes" : "no");
        out += buf;
        out += "remaining secret bits: " + t.bob_final.to_string() + "\n";
    }
    return out;
}

}  // namespace qkd
