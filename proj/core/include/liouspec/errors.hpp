// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace liouspec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrum : public Error {
 public:
  DegenerateSpectrum() : Error("all energies coincide; spectral gap undefined") {}
};

class PoleProximity : public Error {
 public:
  using Error::Error;
};

class QuadratureDivergence : public Error {
 public:
  using Error::Error;
};

class StripViolation : public Error {
 public:
  using Error::Error;
};

class BranchJump : public Error {
 public:
  using Error::Error;
};

class GapUndefined : public Error {
 public:
  GapUndefined() : Error("Gamma_0 has a single eigenvalue; gap undefined") {}
};

class NotInDomain : public Error {
 public:
  using Error::Error;
};

class NotNormal : public Error {
 public:
  using Error::Error;
};

class NoIsolatedResonance : public Error {
 public:
  using Error::Error;
};

class EqualTemperatures : public Error {
 public:
  EqualTemperatures() : Error("beta1 == beta2: the instability certificate needs delta_beta > 0") {}
};

/// QR iteration gave up; eigenvalues deflated so far are kept.
class NoConvergence : public Error {
 public:
  NoConvergence(std::string what, std::vector<std::complex<double>> partial, int deflated)
      : Error(std::move(what)), partial_(std::move(partial)), deflated_(deflated) {}
  const std::vector<std::complex<double>>& partial() const { return partial_; }
  int deflated() const { return deflated_; }

 private:
  std::vector<std::complex<double>> partial_;
  int deflated_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace liouspec
