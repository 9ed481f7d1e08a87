#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elastica {

using Index = std::int64_t;

// Error taxonomy shared by all modules. Every failure path throws one of
// these; the CLI maps Error subclasses to exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

class UndefinedRequest : public Error {
public:
    explicit UndefinedRequest(const std::string& what) : Error("undefined-request", what) {}
};

class ImmersionViolation : public Error {
public:
    explicit ImmersionViolation(const std::string& what) : Error("immersion-violation", what) {}
};

class SingularConfiguration : public Error {
public:
    explicit SingularConfiguration(const std::string& what)
        : Error("singular-configuration", what) {}
};

class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& what) : Error("non-convergence", what) {}
};

class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what) : Error("contract-violation", what) {}
};

class UnsupportedDimension : public Error {
public:
    explicit UnsupportedDimension(const std::string& what)
        : Error("unsupported-dimension", what) {}
};

// Compensated (Kahan) accumulator. Norm and energy sums feed convergence
// studies that measure differences near rounding level.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double x = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidArgument("not a floating point number: '" + std::string(s) + "'");
    return x;
}

// Deterministic per-task seed derivation (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (task + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace elastica
