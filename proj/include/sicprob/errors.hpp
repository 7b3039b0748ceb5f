#pragma once

#include <stdexcept>
#include <string>

namespace sicprob {

// Shape/dimension mismatch between otherwise valid operands.
struct shape_error : std::invalid_argument {
    explicit shape_error(const std::string& what) : std::invalid_argument(what) {}
};

// Operand violates a value-level invariant (non-Hermitian density, incomplete
// POVM, probability vector that is not a valid state, ...).
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Result would exceed a configured size cap.
struct size_error : std::length_error {
    explicit size_error(const std::string& what) : std::length_error(what) {}
};

// Conditioning on a zero-probability event.
struct conditioning_error : std::runtime_error {
    explicit conditioning_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or schema-violating input file.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sicprob
