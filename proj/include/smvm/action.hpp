#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "smvm/value.hpp"

namespace smvm {

// The action language. Operands are always locals; literals enter a method
// through NewLocal or LocalConst. Jump targets are indices into the method
// body.

enum class BinOpKind { Add, Sub, Mul, Eq, Lt };

const char* toString(BinOpKind op);

struct NewLocal {
    std::string name;
    TypeRef type;
    Value init;
    bool operator==(const NewLocal&) const = default;
};

struct LocalFromParam {
    std::string local;
    std::string param;
    bool operator==(const LocalFromParam&) const = default;
};

struct LocalFromAttr {
    std::string local;
    std::string attr;
    bool operator==(const LocalFromAttr&) const = default;
};

struct LocalConst {
    std::string local;
    Value value;
    bool operator==(const LocalConst&) const = default;
};

struct SetAttr {
    std::string attr;
    std::string local;
    bool operator==(const SetAttr&) const = default;
};

struct BinOp {
    BinOpKind op = BinOpKind::Add;
    std::string dst;
    std::string lhs;
    std::string rhs;
    bool operator==(const BinOp&) const = default;
};

struct Jump {
    std::size_t target = 0;
    bool operator==(const Jump&) const = default;
};

struct BranchIfFalse {
    std::string cond;
    std::size_t target = 0;
    bool operator==(const BranchIfFalse&) const = default;
};

struct NewObject {
    std::string dst;
    std::string class_name;
    bool operator==(const NewObject&) const = default;
};

/// Synchronous call: the sender blocks until the ReturnEvent arrives, and the
/// returned value lands in `result`.
struct Call {
    std::string target;
    OpSig op;
    std::vector<std::string> args;
    std::string result;
    bool operator==(const Call&) const = default;
};

/// Asynchronous signal; the sender continues immediately.
struct SendSignal {
    std::string target;
    OpSig op;
    std::vector<std::string> args;
    Prio prio = 0;
    bool operator==(const SendSignal&) const = default;
};

struct LocalRef {
    std::string name;
    bool operator==(const LocalRef&) const = default;
};

struct Return {
    std::variant<Value, LocalRef> source;
    bool operator==(const Return&) const = default;
};

using Action = std::variant<NewLocal, LocalFromParam, LocalFromAttr, LocalConst, SetAttr,
                            BinOp, Jump, BranchIfFalse, NewObject, Call, SendSignal, Return>;

}  // namespace smvm
