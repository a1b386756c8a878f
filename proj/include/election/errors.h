#ifndef ELECTION_ERRORS_H_
#define ELECTION_ERRORS_H_

#include <stdexcept>
#include <string>

namespace election {

// A caller violated a documented precondition (shape mismatch, wrong tape,
// non-scalar backward root, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed text input. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input that describes an invalid object (self-loop, bad config).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary file with a bad magic, version, or truncated payload.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written. The message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace election

#endif  // ELECTION_ERRORS_H_
