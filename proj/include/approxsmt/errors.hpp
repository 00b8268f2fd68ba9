#ifndef APPROXSMT_ERRORS_HPP
#define APPROXSMT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace approxsmt {

/** Base class of every error raised by this library. */
class Error : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/** Input uses a command, symbol or sort outside the supported fragment. */
class UnsupportedConstruct : public Error
{
 public:
  explicit UnsupportedConstruct(const std::string& name)
      : Error("unsupported construct: " + name), d_name(name)
  {
  }
  const std::string& name() const { return d_name; }

 private:
  std::string d_name;
};

class SortMismatch : public Error
{
 public:
  using Error::Error;
};

/** Malformed SMT-LIB text (bad parentheses, tokens, undeclared symbols). */
class ParseError : public Error
{
 public:
  using Error::Error;
};

class ModelParseError : public Error
{
 public:
  ModelParseError(const std::string& what, std::size_t offset)
      : Error("model parse error at offset " + std::to_string(offset) + ": " + what),
        d_offset(offset)
  {
  }
  std::size_t offset() const { return d_offset; }

 private:
  std::size_t d_offset;
};

class SortTooLarge : public Error
{
 public:
  using Error::Error;
};

/// A value the approximation cannot represent (e.g. NaN in fixed point).
class UnsupportedValue : public Error
{
 public:
  using Error::Error;
};

/// An operation the approximation has no encoding for.
class UnsupportedOp : public Error
{
 public:
  using Error::Error;
};

/// Bad command-line input: unknown names, malformed precision, missing directory.
class UsageError : public Error
{
 public:
  using Error::Error;
};

class RangeError : public Error
{
 public:
  using Error::Error;
};

class BackendFailure : public Error
{
 public:
  using Error::Error;
};

}  // namespace approxsmt

#endif
