#pragma once

#include <stdexcept>
#include <string>

namespace inqkit {

// Base of every error raised by the toolkit. `kind()` is a stable,
// machine-readable tag used by the CLI error object.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error("SyntaxError", what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
public:
  explicit UnknownIdentifier(const std::string& name)
      : Error("UnknownIdentifier", "unknown identifier '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

class CapExceeded : public Error {
public:
  CapExceeded(const std::string& what, unsigned long long requested, unsigned long long cap)
      : Error("CapExceeded", what + ": " + std::to_string(requested) + " exceeds cap " +
                                 std::to_string(cap)),
        requested_(requested), cap_(cap) {}
  unsigned long long requested() const noexcept { return requested_; }
  unsigned long long cap() const noexcept { return cap_; }

private:
  unsigned long long requested_;
  unsigned long long cap_;
};

class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error("InputError", what) {}
};

class InvalidModel : public Error {
public:
  explicit InvalidModel(const std::string& what) : Error("InvalidModel", what) {}
};

class InsufficientRichness : public Error {
public:
  explicit InsufficientRichness(const std::string& what)
      : Error("InsufficientRichness", what) {}
};

class PostVerificationFailure : public Error {
public:
  explicit PostVerificationFailure(const std::string& what)
      : Error("PostVerificationFailure", what) {}
};

} // namespace inqkit
