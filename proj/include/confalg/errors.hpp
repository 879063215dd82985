#pragma once

#include <stdexcept>
#include <string>

namespace confalg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Laurent window cannot answer the question asked of it: a coefficient
// outside the tracked window was requested, or an operation produced an
// empty window. Never a silent zero.
class WindowError : public Error {
 public:
  enum class Kind { OutOfWindow, EmptyWindow, TooSmall };
  WindowError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input; line/column are 1-based, 0 when unknown.
class InputError : public Error {
 public:
  InputError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace confalg
