#pragma once

#include <stdexcept>
#include <string>

namespace duality {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A projective postselection succeeded with probability below the
/// configured floor, so the conditional state is undefined.
class ZeroProbabilityPostselection : public Error {
public:
  explicit ZeroProbabilityPostselection(double probability);
  double probability() const noexcept { return probability_; }

private:
  double probability_;
};

/// An angular window of an azimuthal profile received no pixels.
class EmptyBin : public Error {
public:
  explicit EmptyBin(std::size_t bin);
  std::size_t bin() const noexcept { return bin_; }

private:
  std::size_t bin_;
};

class DegenerateProfile : public Error {
public:
  using Error::Error;
};

class ZeroIntensity : public Error {
public:
  using Error::Error;
};

class InvalidCoupling : public Error {
public:
  using Error::Error;
};

/// File-system failure; the message carries the offending path.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace duality
