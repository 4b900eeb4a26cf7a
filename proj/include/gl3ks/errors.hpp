#pragma once

#include <stdexcept>
#include <string>

namespace gl3ks {

/// Base class for every error raised by the library.  Each error carries the
/// process exit code the command-line tool reports for it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int exit_code = 2)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

// Invalid input (exit code 2).
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(w, 2) {}
};
struct NotInvertible : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};
struct ModuliNotCoprime : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};
struct InvalidDecomposition : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};
struct InvalidDivisors : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};
struct InvalidHRange : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};
struct NotPrimePower : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};
struct CoprimalityViolated : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};
struct Overflow : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

// Resource caps (exit code 3).
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& w) : Error(w, 3) {}
};
struct OrderOverflow : CapExceeded {
  using CapExceeded::CapExceeded;
};

// A verified identity or inequality did not hold (exit code 1).
struct CheckFailed : Error {
  explicit CheckFailed(const std::string& w) : Error(w, 1) {}
};

}  // namespace gl3ks
