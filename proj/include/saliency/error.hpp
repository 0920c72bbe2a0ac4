#pragma once

#include <stdexcept>
#include <string>

namespace saliency {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File contents are not a decodable PNG or JPEG.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition (sizes, ranges, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The ranking system could not be solved.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Seed selection produced no seeds at all.
class EmptySeedError : public Error {
 public:
  using Error::Error;
};

/// AUC requested for a ground truth holding a single class.
class UndefinedAucError : public Error {
 public:
  using Error::Error;
};

/// Configuration document failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace saliency
