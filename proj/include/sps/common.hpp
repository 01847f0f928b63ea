#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sps {

using Vertex = std::uint32_t;
using Seed = std::uint64_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (edge lists, Matrix Market, vectors).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Two vertices with no connecting path where one is required.
class DisconnectedError : public Error {
public:
    using Error::Error;
};

/// ceil(log2(n)) with the convention log2(1) = 0. This is the "log n"
/// used by every bound in the library.
inline unsigned ceil_log2(std::uint64_t n) {
    unsigned k = 0;
    std::uint64_t p = 1;
    while (p < n) {
        p <<= 1;
        ++k;
    }
    return k;
}

/// Spanner parameter k = max(1, ceil(log2 n)); stretch bound 2k - 1.
inline unsigned log_spanner_k(std::uint64_t n) {
    unsigned k = ceil_log2(n);
    return k == 0 ? 1 : k;
}

}  // namespace sps
