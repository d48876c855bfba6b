#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xsc {

/// Parameter outside the documented domain of an operation.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sample cannot support the requested operation (e.g. all radii zero).
class DegenerateSample : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation requires the latent factor matrix but the sample has none.
class MissingLatents : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Graph has an isolated node, so the normalized Laplacian is undefined.
class IsolatedNode : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative kernel failed to converge; carries the final residual.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Filesystem failure; carries the path involved.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& what, std::string path)
        : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace xsc
