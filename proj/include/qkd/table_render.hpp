// Step-by-step session tables in the worked-example layout: one column per
// qubit (highest index first), one row per protocol step plus Eve rows when
// an adversary took part.

#pragma once

#include <string>
#include <vector>

#include "qkd/session.hpp"

namespace qkd {

struct TableRow {
    std::string label;
    std::vector<std::string> cells;  // one per qubit, display order
};

// Row set for a transcript; cells use ASCII symbols (0, 1, U+, U-, U, H, I)
// unless unicode ket glyphs are requested.
std::vector<TableRow> table_rows(const SessionTranscript& transcript, bool unicode = false);

// Aligned text table with a q_{2n-1} .. q_0 header and a trailing key line.
std::string render_table(const SessionTranscript& transcript, bool unicode = false);

}  // namespace qkd
