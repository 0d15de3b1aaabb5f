#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncfield {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DegreeTooHigh : public Error {
public:
    using Error::Error;
};

class StarredLetter : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A(X) failed the invertibility tolerance; carries the smallest singular value.
class OutOfDomain : public Error {
public:
    OutOfDomain(const std::string& what, double sigma_min, double threshold)
        : Error(what), sigma_min_(sigma_min), threshold_(threshold) {}
    double sigma_min() const noexcept { return sigma_min_; }
    double threshold() const noexcept { return threshold_; }

private:
    double sigma_min_;
    double threshold_;
};

/// Substitution estimates did not settle on one integer (or a spectral gap was too small).
class NoConsensus : public Error {
public:
    NoConsensus(const std::string& what, std::vector<std::string> diagnostics)
        : Error(what), diagnostics_(std::move(diagnostics)) {}
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

class Inconclusive : public Error {
public:
    using Error::Error;
};

class ZeroPencil : public Error {
public:
    using Error::Error;
};

/// Two independent rank/fullness engines disagreed. Never resolved silently.
class EngineDisagreement : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class SizeGuard : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace ncfield
