#pragma once

#include <stdexcept>
#include <string>

namespace qbi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Division by a series whose constant term is (numerically) zero.
class ZeroConstantTerm : public Error {
public:
    explicit ZeroConstantTerm(const std::string& what) : Error(what) {}
};

/// Composition with an inner series that does not vanish at the origin.
class NonzeroInnerConstant : public Error {
public:
    explicit NonzeroInnerConstant(const std::string& what) : Error(what) {}
};

/// A function expected to be of the form z + a2 z^2 + ... is not.
class NotNormalized : public Error {
public:
    explicit NotNormalized(const std::string& what) : Error(what) {}
};

/// A target series violates phi(0) = 1, phi'(0) > 0.
class BadNormalization : public Error {
public:
    explicit BadNormalization(const std::string& what) : Error(what) {}
};

/// Subordination was requested for a target without an image-region predicate.
class NoRegionOracle : public Error {
public:
    explicit NoRegionOracle(const std::string& what) : Error(what) {}
};

/// The relation bracket vanishes, so a2^2 cannot be recovered.
class Degenerate : public Error {
public:
    explicit Degenerate(const std::string& what) : Error(what) {}
};

}  // namespace qbi
