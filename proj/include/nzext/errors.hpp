#pragma once

#include <stdexcept>
#include <string>

namespace nzext {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FieldMismatch : public Error {
 public:
  FieldMismatch() : Error("field mismatch between operands") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class AlgebraMismatch : public Error {
 public:
  AlgebraMismatch() : Error("modules live over different algebras") {}
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class InvalidModule : public Error {
 public:
  using Error::Error;
};

class NotAnExtension : public Error {
 public:
  // position: index of the first term at which exactness fails.
  NotAnExtension(std::string what, int position)
      : Error(std::move(what)), position_(position) {}
  int position() const { return position_; }

 private:
  int position_;
};

class UnsupportedEnumeration : public Error {
 public:
  using Error::Error;
};

class NotConstructible : public Error {
 public:
  using Error::Error;
};

/// A hypothesis (n-cluster tilting, nZ, ...) needed by an operation is not met.
class Refused : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace nzext
