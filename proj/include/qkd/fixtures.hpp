// Named golden-trace fixtures: fixed payload/control vectors and forced
// adversary guesses, so table reproductions need no RNG coupling.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkd/protocol.hpp"

namespace qkd {

struct Fixture {
    std::string name;
    std::optional<BitVector> payload;             // Q_A override
    std::optional<ControlVector> alice_controls;  // A override
    std::optional<ControlVector> bob_controls;    // B override
    // Forced guesses for Eve's undetermined positions, consumed in display
    // order (highest qubit first). Absent = draw from the session RNG.
    std::optional<BitVector> eve_guesses;
};

// Built-in fixtures: paper-table-1 .. paper-table-4.
const Fixture& named_fixture(std::string_view name);  // throws on unknown name
std::vector<std::string> fixture_names();

// Parse the JSON fixture schema (fields: name, payload, alice_controls,
// bob_controls, eve_guesses; all but name optional).
Fixture fixture_from_json_text(std::string_view text);
Fixture load_fixture_file(const std::string& path);

}  // namespace qkd
