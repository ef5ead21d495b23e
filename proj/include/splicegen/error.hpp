#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splicegen {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad dimensions, channel counts, out-of-range parameters.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InfeasiblePlacementError : public Error {
public:
    using Error::Error;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

// Manifest schema violation; line is 1-based, field may be empty.
class ManifestError : public Error {
public:
    ManifestError(std::size_t line, std::string field, const std::string& what)
        : Error("manifest line " + std::to_string(line) +
                (field.empty() ? std::string() : " field '" + field + "'") + ": " + what),
          line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

class AdapterError : public Error {
public:
    using Error::Error;
};

}  // namespace splicegen
