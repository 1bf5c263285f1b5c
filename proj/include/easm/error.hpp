#pragma once

#include <stdexcept>
#include <string>

namespace easm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input documents (GraphML, scenario files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid topologies or network states.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PlannerError : public Error {
 public:
  using Error::Error;
};

// Zero controller load where a ratio is required.
class DegenerateLoadError : public Error {
 public:
  using Error::Error;
};

}  // namespace easm
