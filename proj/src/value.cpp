#include "smvm/value.hpp"

#include <algorithm>
#include <stdexcept>

#include "smvm/action.hpp"
#include "smvm/error.hpp"
#include "overloaded.hpp"

namespace smvm {

namespace {

using detail::Overloaded;

int familyOf(const Value& v) {
    if (v.is<NullOid>()) return static_cast<int>(v.data.index()) - 1;  // same as OidVal
    return static_cast<int>(v.data.index());
}

}  // namespace

const char* toString(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return "validation error";
        case ErrorKind::DanglingReference: return "dangling reference";
        case ErrorKind::AttributeNotFound: return "attribute not found";
        case ErrorKind::TypeMismatch: return "type error";
        case ErrorKind::UnknownLocal: return "unknown local";
        case ErrorKind::UnknownParam: return "unknown parameter";
        case ErrorKind::DuplicateLocal: return "duplicate local";
        case ErrorKind::Delivery: return "delivery error";
        case ErrorKind::NullTarget: return "null target";
        case ErrorKind::MethodNotFound: return "method not found";
        case ErrorKind::FellOffEnd: return "fell off end of method";
        case ErrorKind::Internal: return "internal error";
    }
    return "error";
}

const char* toString(BinOpKind op) {
    switch (op) {
        case BinOpKind::Add: return "add";
        case BinOpKind::Sub: return "sub";
        case BinOpKind::Mul: return "mul";
        case BinOpKind::Eq: return "eq";
        case BinOpKind::Lt: return "lt";
    }
    return "?";
}

std::string toString(const TypeRef& type) {
    return std::visit(Overloaded{
                          [](const IntType&) -> std::string { return "Int"; },
                          [](const BoolType&) -> std::string { return "Bool"; },
                          [](const VoidType&) -> std::string { return "Void"; },
                          [](const ClassType& c) { return c.name; },
                      },
                      type);
}

const Value* Record::find(std::string_view name) const {
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const Field& f) { return f.name == name; });
    return it == fields.end() ? nullptr : &it->value;
}

Value* Record::find(std::string_view name) {
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const Field& f) { return f.name == name; });
    return it == fields.end() ? nullptr : &it->value;
}

void Record::append(std::string name, Value value) {
    if (contains(name)) {
        throw VmError(ErrorKind::Internal, "record field '" + name + "' already exists");
    }
    fields.push_back(Field{std::move(name), std::move(value)});
}

bool sameKind(const Value& a, const Value& b) { return familyOf(a) == familyOf(b); }

std::string toString(const Value& value) {
    return std::visit(
        Overloaded{
            [](const IntVal& v) { return "VInt " + std::to_string(v.value); },
            [](const BoolVal& v) { return std::string(v.value ? "VBool True" : "VBool False"); },
            [](const VoidVal&) { return std::string("VVoid"); },
            [](const OidVal& v) { return "XOID " + std::to_string(v.oid.value); },
            [](const NullOid&) { return std::string("XNull"); },
            [](const Record& r) {
                std::string out = "VRec [";
                for (std::size_t i = 0; i < r.fields.size(); ++i) {
                    if (i) out += ",";
                    out += "(\"" + r.fields[i].name + "\"," + toString(r.fields[i].value) + ")";
                }
                return out + "]";
            },
        },
        value.data);
}

std::string toString(const OpSig& op) {
    std::string out = op.name + "(";
    for (std::size_t i = 0; i < op.params.size(); ++i) {
        if (i) out += ", ";
        out += toString(op.params[i]);
    }
    return out + "): " + toString(op.result);
}

}  // namespace smvm
