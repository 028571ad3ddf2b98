#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace winlsq {

/// Base class for every error reported by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// A pivot whose magnitude is too small to divide by (< pivot_abort_abs).
class SingularPivot : public Error {
public:
    SingularPivot(std::size_t index, double value)
        : Error("singular pivot at index " + std::to_string(index) + " (value " +
                std::to_string(value) + ")"),
          index_(index),
          value_(value) {}
    std::size_t index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

private:
    std::size_t index_;
    double value_;
};

class NotSymmetric : public Error {
public:
    explicit NotSymmetric(double worst_asymmetry)
        : Error("matrix is not symmetric (worst off-diagonal mismatch " +
                std::to_string(worst_asymmetry) + ")") {}
};

class WindowTooSmall : public Error {
public:
    WindowTooSmall(std::size_t w, std::size_t m)
        : Error("window size " + std::to_string(w) + " is smaller than the regressor dimension " +
                std::to_string(m)) {}
};

class ZeroVector : public Error {
public:
    ZeroVector() : Error("matrix annihilated the iteration vector") {}
};

/// The shift beta = lam_max_hat + eps left the shifted matrix indefinite,
/// i.e. lam_max_hat underestimated the true maximal eigenvalue.
class ShiftTooSmall : public Error {
public:
    explicit ShiftTooSmall(double beta)
        : Error("shifted matrix is not positive semidefinite (beta " + std::to_string(beta) + ")") {}
};

class SNearSingular : public Error {
public:
    SNearSingular(double det, double scale)
        : Error("2x2 gain matrix near singular (det " + std::to_string(det) + ", scale " +
                std::to_string(scale) + ")") {}
};

class BadSpectrum : public Error {
public:
    explicit BadSpectrum(const std::string& why) : Error("bad spectrum: " + why) {}
};

class Diverging : public Error {
public:
    explicit Diverging(double before, double after)
        : Error("inversion error grew from " + std::to_string(before) + " to " +
                std::to_string(after)) {}
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& why)
        : Error("parse error at line " + std::to_string(line) + ": " + why), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace winlsq
