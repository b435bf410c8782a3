#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyclap {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based line number.
struct ParseError : Error {
    ParseError(std::size_t line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
    std::size_t line;
};

/// A named operation precondition was violated.
struct PreconditionError : Error {
    using Error::Error;
};

struct FieldMismatch : PreconditionError {
    FieldMismatch() : PreconditionError("field mismatch") {}
};

struct CycleMismatch : PreconditionError {
    CycleMismatch() : PreconditionError("cycle length (n) mismatch") {}
};

struct NotNilpotent : PreconditionError {
    NotNilpotent() : PreconditionError("representation is not locally nilpotent") {}
};

struct SaturatedNotEmpty : PreconditionError {
    SaturatedNotEmpty() : PreconditionError("operation requires an empty saturated multiset") {}
};

// extension module

struct HeightMismatch : PreconditionError {
    HeightMismatch() : PreconditionError("HeightMismatch: paired vectors have different heights") {}
};

struct AlreadyPresent : PreconditionError {
    AlreadyPresent() : PreconditionError("AlreadyPresent: pair already lies in the graph") {}
};

struct NotAdapted : PreconditionError {
    explicit NotAdapted(const std::string& side)
        : PreconditionError("NotAdapted: " + side + " vector is not adapted to its projection") {}
};

struct ImageNotCaught : PreconditionError {
    ImageNotCaught() : PreconditionError("ImageNotCaught: image pair is not in the next graph fiber") {}
};

/// No witness vector exists on the target side; signals unequal invariant tables.
struct NoWitness : Error {
    NoWitness() : Error("NoWitness: target side has no matching kernel vector") {}
};

/// Defensive branch for the limit-ordinal case of the simple extension step.
/// Unreachable on finite matrix data; see extension.hpp.
struct LimitOrdinalUnreachable : Error {
    LimitOrdinalUnreachable() : Error("LimitOrdinalUnreachable: limit-ordinal height in finite data") {}
};

// terminal / admissible / classify modules

struct PropertyAViolated : PreconditionError {
    PropertyAViolated(std::size_t stage_, std::size_t alpha_)
        : PreconditionError("PropertyAViolated: augmentation stage " + std::to_string(stage_) +
                            " fails at height " + std::to_string(alpha_)),
          stage(stage_), alpha(alpha_) {}
    std::size_t stage;
    std::size_t alpha;
};

struct UnsupportedTransfinite : PreconditionError {
    UnsupportedTransfinite()
        : PreconditionError("UnsupportedTransfinite: realization needs a finite-ordinal support") {}
};

struct Unrepresentable : PreconditionError {
    Unrepresentable()
        : PreconditionError("Unrepresentable: finite-support multiplicities must be finite") {}
};

}  // namespace cyclap
