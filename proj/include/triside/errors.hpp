#pragma once

#include <stdexcept>
#include <string>

namespace triside {

// Malformed or inconsistent caller input: unknown ids, missing or duplicate
// tensor entries, negative quantities, unparsable documents.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An exhaustive-search size guard was exceeded. Callers should switch to a
// structured solver or raise the cap explicitly.
class CapError : public std::runtime_error {
 public:
  explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

// A constructed object failed its own consistency check. Always a bug in
// this library, never a caller error.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace triside
