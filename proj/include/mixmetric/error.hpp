#pragma once

#include <stdexcept>
#include <string>

namespace mixmetric {

// Base for every failure raised by the library. The message is a complete
// one-line diagnostic suitable for printing as-is.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

// Raised when two records share no attribute that can be compared.
class NoComparableAttributes : public Error {
 public:
  using Error::Error;
};

}  // namespace mixmetric
