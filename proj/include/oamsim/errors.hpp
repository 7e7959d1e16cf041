#pragma once

#include <stdexcept>
#include <string>

namespace oamsim {

/// Base class for all simulator errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MixedDirectionsError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class LowAmplitudeError : public Error {
 public:
  using Error::Error;
};

class NonIntegerWindingError : public Error {
 public:
  using Error::Error;
};

class NegativeTimeError : public Error {
 public:
  using Error::Error;
};

class InvalidFError : public Error {
 public:
  using Error::Error;
};

class EmptyGridError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure; message always names the offending path.
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(what + ": " + path), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace oamsim
