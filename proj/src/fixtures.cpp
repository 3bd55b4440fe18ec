#include "qkd/fixtures.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qkd {

namespace {

Fixture make_fixture(std::string name, std::string_view payload, std::string_view alice,
                     std::string_view bob, std::string_view guesses) {
    Fixture f;
    f.name = std::move(name);
    f.payload = BitVector::from_string(payload);
    f.alice_controls = ControlVector::from_string(alice);
    f.bob_controls = ControlVector::from_string(bob);
    if (!guesses.empty()) f.eve_guesses = BitVector::from_string(guesses);
    return f;
}

// The shared 8-qubit worked example. The per-table guess strings pin Eve's
// random choices at her undetermined positions, highest qubit first.
const std::array<Fixture, 4>& builtins() {
    static const std::array<Fixture, 4> fixtures = {
        make_fixture("paper-table-1", "11001001", "HIHIHIHI", "HHIIHHII", ""),
        make_fixture("paper-table-2", "11001001", "HIHIHIHI", "HHIIHHII", "1001"),
        make_fixture("paper-table-3", "11001001", "HIHIHIHI", "HHIIHHII", "1100"),
        make_fixture("paper-table-4", "11001001", "HIHIHIHI", "HHIIHHII", "0101"),
    };
    return fixtures;
}

}  // namespace

const Fixture& named_fixture(std::string_view name) {
    for (const Fixture& f : builtins()) {
        if (f.name == name) return f;
    }
    throw std::invalid_argument("unknown fixture: " + std::string(name));
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const Fixture& f : builtins()) names.push_back(f.name);
    return names;
}

Fixture fixture_from_json_text(std::string_view text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Fixture f;
    f.name = j.at("name").get<std::string>();
    if (j.contains("payload")) f.payload = BitVector::from_string(j["payload"].get<std::string>());
    if (j.contains("alice_controls")) {
        f.alice_controls = ControlVector::from_string(j["alice_controls"].get<std::string>());
    }
    if (j.contains("bob_controls")) {
        f.bob_controls = ControlVector::from_string(j["bob_controls"].get<std::string>());
    }
    if (j.contains("eve_guesses")) {
        f.eve_guesses = BitVector::from_string(j["eve_guesses"].get<std::string>());
    }
    return f;
}

Fixture load_fixture_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open fixture file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fixture_from_json_text(buf.str());
}

}  // namespace qkd
