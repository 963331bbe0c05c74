#pragma once

#include <stdexcept>
#include <string>

namespace qiw {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class Singular : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SearchFailed : public Error {
 public:
  using Error::Error;
};

// Raised when 1 (x) Lambda(rho) has no negative eigenvalue, i.e. the map does
// not detect the state (every PPT state under the transposition).
class NoNegativeEigenvalue : public Error {
 public:
  using Error::Error;
};

class NotInformationallyComplete : public Error {
 public:
  using Error::Error;
};

}  // namespace qiw
