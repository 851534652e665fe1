#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wsikit {

/// Base class of every error raised by the library.
class WsiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public WsiError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : WsiError("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Modality or coalition not available in the selected signature.
class SignatureError : public WsiError {
 public:
  using WsiError::WsiError;
};

/// Formula outside the fragment an operation requires (e.g. non-conjunctive lhs).
class FragmentError : public WsiError {
 public:
  using WsiError::WsiError;
};

/// Operation not offered for the signature (graded wsi, cl concretization, ...).
class UnsupportedError : public WsiError {
 public:
  using WsiError::WsiError;
};

/// Oracle bounds outside the documented envelope.
class BoundError : public WsiError {
 public:
  using WsiError::WsiError;
};

}  // namespace wsikit
