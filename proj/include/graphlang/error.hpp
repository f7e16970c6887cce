#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphlang {

/// Base class for every error raised by the library. Callers that only care
/// about "something went wrong" catch this; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& node)
      : Error("unknown node '" + node + "'"), node_(node) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

struct SourcePosition {
  std::size_t line = 1;
  std::size_t column = 1;
};

class UnparseableGraph : public Error {
 public:
  UnparseableGraph(SourcePosition pos, const std::string& message)
      : Error("line " + std::to_string(pos.line) + ", column " +
              std::to_string(pos.column) + ": " + message),
        position_(pos) {}
  SourcePosition position() const { return position_; }

 private:
  SourcePosition position_;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class NotBipartite : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

class NegativeWeight : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

class InsufficientMaterial : public Error {
 public:
  using Error::Error;
};

class WrongScenario : public Error {
 public:
  using Error::Error;
};

class EmptyPool : public Error {
 public:
  using Error::Error;
};

class MissingComponent : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class IdMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

class EmptyBatch : public Error {
 public:
  using Error::Error;
};

class EmptyGoldSet : public Error {
 public:
  using Error::Error;
};

}  // namespace graphlang
