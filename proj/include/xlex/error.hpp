#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xlex {

// Unreadable or unwritable files. The CLI maps this to exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data that violates a domain contract (bad vocabulary, degenerate matrix,
// invalid displacement, ...). The CLI maps this to exit code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text; carries the byte offset of the offending sequence.
class InputError : public DomainError {
 public:
  InputError(const std::string& what, std::size_t offset)
      : DomainError(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace xlex
