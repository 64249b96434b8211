#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Wavelength outside a dispersion model's valid interval.
class RangeError : public Error {
  public:
    RangeError(const std::string& what, double lower_nm, double upper_nm)
        : Error(what), lower_nm_(lower_nm), upper_nm_(upper_nm) {}

    double lower_nm() const noexcept { return lower_nm_; }
    double upper_nm() const noexcept { return upper_nm_; }

  private:
    double lower_nm_;
    double upper_nm_;
};

/// No type-II phase-matching solution exists for the requested cut angle.
class PhaseMatchError : public Error {
  public:
    PhaseMatchError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    /// Longitudinal wavevector mismatch (in units of 2*pi/lambda_dc) at the
    /// collinear point; negative means the cones do not open.
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Grazing or backward ray that cannot traverse a slab.
class GeometryError : public Error {
  public:
    using Error::Error;
};

/// Parameters that make the coincidence-rate model singular.
class DegenerateParametersError : public Error {
  public:
    using Error::Error;
};

/// Invalid argument to an operation (bad sweep, empty box, short grid).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Visibility asked of a series with max + min == 0.
class UndefinedVisibilityError : public Error {
  public:
    using Error::Error;
};

/// Malformed configuration or material file.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// File-system failure while reading or writing outputs.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace spdc
