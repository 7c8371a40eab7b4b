#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genlab {

// Bad arguments / violated preconditions.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed external data (IDX files, CSV, checkpoints). Carries the byte
// offset at which parsing gave up.
struct FormatError : std::runtime_error {
    std::size_t byte_offset;
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
          byte_offset(offset) {}
};

// Training loss blew up; carries the last finite loss seen.
struct DivergedError : std::runtime_error {
    double last_finite_loss;
    std::size_t epoch;
    DivergedError(double loss, std::size_t ep)
        : std::runtime_error("training diverged at epoch " + std::to_string(ep) +
                             " (last finite loss " + std::to_string(loss) + ")"),
          last_finite_loss(loss), epoch(ep) {}
};

// A bound term hit a zero denominator; carries which term failed.
struct DivisionByZero : std::runtime_error {
    std::string term;
    explicit DivisionByZero(const std::string& t)
        : std::runtime_error("division by zero in term: " + t), term(t) {}
};

}  // namespace genlab
