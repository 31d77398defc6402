// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weylab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic left the domain of a function, or a point violated a chart exclusion.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two jets with different variable counts or truncation orders were combined.
class SpecMismatch : public Error {
 public:
  using Error::Error;
};

/// A computation asked for more derivatives than the supplied jets carry.
class OrderDeficit : public Error {
 public:
  OrderDeficit(const std::string& what, int deficit)
      : Error(what + " (short by " + std::to_string(deficit) + " order(s))"), deficit_(deficit) {}
  int deficit() const noexcept { return deficit_; }

 private:
  int deficit_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UndeclaredIdentifier : public Error {
 public:
  explicit UndeclaredIdentifier(std::string name)
      : Error("undeclared identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Bad catalog name, incompatible inputs, or malformed request.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace weylab
