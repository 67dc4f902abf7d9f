#pragma once

#include <stdexcept>
#include <string>

namespace smvm {

enum class ErrorKind {
    Validation,
    DanglingReference,
    AttributeNotFound,
    TypeMismatch,
    UnknownLocal,
    UnknownParam,
    DuplicateLocal,
    Delivery,
    NullTarget,
    MethodNotFound,
    FellOffEnd,
    Internal,
};

const char* toString(ErrorKind kind);

/// Every failure raised by the VM carries a kind so callers (tests, the CLI)
/// can tell model bugs apart from engine bugs.
class VmError : public std::runtime_error {
public:
    VmError(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace smvm
