#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mathfind {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unsupported LaTeX or unbalanced grouping; `offset` is a byte offset into the input.
class ParseError : public Error {
  public:
    ParseError(std::string const& what, std::size_t offset)
        : Error(what + " at byte " + std::to_string(offset)), m_offset(offset)
    {}
    [[nodiscard]] std::size_t offset() const noexcept { return m_offset; }

  private:
    std::size_t m_offset;
};

class TranslateError : public Error {
  public:
    using Error::Error;
};

class DuplicateDocId : public Error {
  public:
    using Error::Error;
};

class UnknownTerm : public Error {
  public:
    using Error::Error;
};

class EmptyQuery : public Error {
  public:
    EmptyQuery() : Error("empty query") {}
};

/// Malformed qrels/run/TSV input; `line` is 1-based.
class FormatError : public Error {
  public:
    FormatError(std::string const& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), m_line(line)
    {}
    [[nodiscard]] std::size_t line() const noexcept { return m_line; }

  private:
    std::size_t m_line;
};

class IndexFormatError : public Error {
  public:
    using Error::Error;
};

class MalformedSequence : public Error {
  public:
    using Error::Error;
};

class EvalError : public Error {
  public:
    using Error::Error;
};

class NonLinear : public Error {
  public:
    using Error::Error;
};

class UnknownVerb : public Error {
  public:
    using Error::Error;
};

class Unsolvable : public Error {
  public:
    using Error::Error;
};

}  // namespace mathfind
