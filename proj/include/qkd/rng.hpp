// Deterministic, splittable random source for reproducible simulation runs.

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string_view>

namespace qkd {

// Every random draw in a session (payload bits, control signals, Born-rule
// outcomes, Eve's guesses) comes from a named substream derived from the
// session key, so substreams are independent of draw order and traces replay
// bit-identically.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : key_(seed), engine_(mix64(seed)) {}

    // Child stream keyed by name; independent of this stream's draw position.
    SeededRng stream(std::string_view name) const {
        return SeededRng(derive(key_, name));
    }

    // Indexed child stream, e.g. one per trial or per listening pass.
    SeededRng stream(std::string_view name, std::uint64_t index) const {
        return SeededRng(mix64(derive(key_, name) + (index + 1) * 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() { return engine_(); }

    bool next_bit() { return (engine_() & 1ULL) != 0; }

    // Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); unbiased via rejection.
    std::size_t next_below(std::size_t n) {
        if (n == 0) throw std::invalid_argument("next_below: empty range");
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<std::size_t>(r % n);
    }

private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static constexpr std::uint64_t derive(std::uint64_t key, std::string_view name) {
        std::uint64_t h = key ^ 0xcbf29ce484222325ULL;  // FNV offset basis
        for (const char c : name) {
            h = (h ^ static_cast<std::uint8_t>(c)) * 0x100000001b3ULL;
        }
        return mix64(h);
    }

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

}  // namespace qkd
