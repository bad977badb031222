#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace homesim {

// ---------------------------------------------------------------------------
// Errors

/// Input text could not be parsed. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A named structural invariant that some entity violates.
struct Violation {
    std::string invariant;  // stable name, e.g. "DuplicateId"
    std::string entity;     // offending id / edge / field, may be empty
    std::string message;
};

std::string describe(const std::vector<Violation>& violations);

/// Thrown when a value fails validation; wraps the violation list.
class SemanticError : public std::runtime_error {
public:
    explicit SemanticError(std::vector<Violation> violations)
        : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Hashing and deterministic RNG

inline constexpr uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr uint64_t kFnvPrime = 1099511628211ull;

constexpr uint64_t fnv1a(std::string_view s, uint64_t h = kFnvOffset) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

constexpr uint64_t fnv1a_u64(uint64_t v, uint64_t h = kFnvOffset) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
    return h;
}

uint64_t splitmix64(uint64_t& state);

/// Finalizer-only uniform draw in [0,1) from a precomputed hash.
double hash_uniform01(uint64_t h);

/// Deterministic, platform-independent PRNG (splitmix64 stream).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}
    uint64_t next() { return splitmix64(state_); }
    double uniform01();
    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi);

private:
    uint64_t state_;
};

// ---------------------------------------------------------------------------
// Formatting

/// Shortest decimal representation that round-trips (std::to_chars).
std::string format_double(double v);

/// Round to two decimals, ties away from zero (half-up for positives).
double round2_half_up(double v);

/// Fixed two-decimal rendering of round2_half_up(v), e.g. "16.67".
std::string format_fixed2(double v);

// ---------------------------------------------------------------------------
// Strings and files

std::string_view trim(std::string_view s);
std::vector<std::string> split_ws(std::string_view line);
bool parse_int(std::string_view tok, int& out);
bool parse_double(std::string_view tok, double& out);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace homesim
