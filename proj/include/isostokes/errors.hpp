#pragma once
#include <stdexcept>
#include <string>

namespace iso {

// Every failure carries a short machine-readable code (e.g. "OnWall").
// kind decides the CLI exit status: config problems vs numeric failures.
enum class ErrorKind { Input, Numeric };

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what, ErrorKind kind = ErrorKind::Input)
      : std::runtime_error(code + ": " + what), code_(std::move(code)), kind_(kind) {}
  const std::string& code() const { return code_; }
  ErrorKind kind() const { return kind_; }

 private:
  std::string code_;
  ErrorKind kind_;
};

inline Error input_error(const std::string& code, const std::string& what) {
  return Error(code, what, ErrorKind::Input);
}
inline Error numeric_error(const std::string& code, const std::string& what) {
  return Error(code, what, ErrorKind::Numeric);
}

}  // namespace iso
