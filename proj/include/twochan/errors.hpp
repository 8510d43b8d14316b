#pragma once

#include <stdexcept>
#include <string>

namespace twochan {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative energy,
/// grid that does not cover the packet, ...).
class domain_error : public error {
public:
  using error::error;
};

/// Amplitudes are indeterminate at this wavenumber (k = 0 without coupling).
class threshold_error : public error {
public:
  using error::error;
};

/// The pole quartic collapses to a repeated root.
class degenerate_error : public error {
public:
  using error::error;
};

/// An asymptotic series was requested outside the parameter range where its
/// summands are defined.
class regime_error : public error {
public:
  using error::error;
};

/// Linear solve or quadrature failure.
class numerical_error : public error {
public:
  using error::error;
};

/// Experiment configuration is missing fields or violates invariants.
class config_error : public error {
public:
  using error::error;
};

class io_error : public error {
public:
  using error::error;
};

} // namespace twochan
