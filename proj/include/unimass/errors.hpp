#pragma once

#include <stdexcept>
#include <string>

namespace unimass {

// Three failure classes, kept distinct so callers (and the CLI exit codes)
// can tell bad input, a refused-but-valid request, and a broken internal
// identity apart.

// Malformed or out-of-domain input: wrong parity, non-squarefree m,
// a matrix that is not Hermitian, a prime where none is allowed, ...
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Valid input that this implementation declines to process: enumeration
// caps exceeded, level primes sharing a factor with the discriminant, ...
struct unsupported_error : std::runtime_error {
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal cross-check failed: a division that must be exact was not,
// a factor recombination disagreed with the value it was derived from.
// Seeing one of these means a bug, not a user mistake.
struct consistency_error : std::logic_error {
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace unimass
