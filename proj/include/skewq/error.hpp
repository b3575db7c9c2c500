#pragma once

#include <stdexcept>
#include <string>

namespace skewq {

/// Base class of every error raised by the library. `name()` is the stable
/// identifier written into reports (e.g. "NotASkewMap").
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& message);
};

class NotPositiveSemidefinite : public Error {
public:
    NotPositiveSemidefinite(double min_eigenvalue, const std::string& context);
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

/// T does not admit a skew convolution factor for the given pair of laws.
/// For Gaussian pairs `value()` is lambda_min(Q2 - T Q1 T^T); for jump pairs it
/// is the most negative residual atom weight.
class NotASkewMap : public Error {
public:
    NotASkewMap(double value, const std::string& message);
    double value() const noexcept { return value_; }

private:
    double value_;
};

class AtomMismatch : public Error {
public:
    explicit AtomMismatch(const std::string& message);
};

class AtomSetMismatch : public Error {
public:
    explicit AtomSetMismatch(const std::string& message);
};

class NotAContraction : public Error {
public:
    explicit NotAContraction(double norm);
    double norm() const noexcept { return norm_; }

private:
    double norm_;
};

class NotStable : public Error {
public:
    explicit NotStable(double spectral_abscissa);
    double spectral_abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

class UnsupportedQuadrature : public Error {
public:
    explicit UnsupportedQuadrature(const std::string& message);
};

class InconsistentDirection : public Error {
public:
    explicit InconsistentDirection(const std::string& message);
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message);
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message);
};

} // namespace skewq
