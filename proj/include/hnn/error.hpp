#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hnn {

enum class ErrorCode {
  ParseError,
  BadTable,
  NotAssociative,
  NoIdentity,
  NoInverse,
  UnknownName,
  BadParams,
  CapExceeded,
  NotASubgroup,
  NotAHomomorphism,
  NotConjugate,
  AlphaDoesNotPreserveH,
  EmptyIsoSet,
  BaseMismatch,
  HypothesisNotVerified,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace hnn
