#pragma once

// Deterministic, splittable random source for randomized identity tests.
// A stream is a std::mt19937_64 seeded through std::seed_seq from
// (seed, path...), both fully specified by the standard, so every report is
// replayable across platforms. Doubles are built from the top 53 bits.

#include <cstdint>
#include <random>
#include <vector>

namespace fk {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : Rng(std::vector<std::uint32_t>{lo(seed), hi(seed)}) {}

    // Independent child stream; split(i) is a pure function of (path, i).
    Rng split(std::uint64_t index) const {
        std::vector<std::uint32_t> p = path_;
        p.push_back(lo(index));
        p.push_back(hi(index));
        return Rng(std::move(p));
    }

    std::uint64_t next() { return eng_(); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int a, int b) {
        const auto span = static_cast<std::uint64_t>(b - a + 1);
        return a + static_cast<int>(next() % span);
    }

private:
    explicit Rng(std::vector<std::uint32_t> path) : path_(std::move(path)) {
        std::seed_seq seq(path_.begin(), path_.end());
        eng_.seed(seq);
    }
    static std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
    static std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

    std::vector<std::uint32_t> path_;
    std::mt19937_64 eng_;
};

}  // namespace fk
