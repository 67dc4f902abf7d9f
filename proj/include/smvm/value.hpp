#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace smvm {

/// Simulation time counts executed steps.
using Time = std::int64_t;
using Prio = std::int64_t;

struct ObjectId {
    std::int64_t value = 0;
    auto operator<=>(const ObjectId&) const = default;
};

struct ThreadId {
    std::int64_t value = 0;
    auto operator<=>(const ThreadId&) const = default;
};

// ---------------------------------------------------------------------------
// Types

struct IntType {
    auto operator<=>(const IntType&) const = default;
};
struct BoolType {
    auto operator<=>(const BoolType&) const = default;
};
struct VoidType {
    auto operator<=>(const VoidType&) const = default;
};
struct ClassType {
    std::string name;
    auto operator<=>(const ClassType&) const = default;
};

using TypeRef = std::variant<IntType, BoolType, VoidType, ClassType>;

std::string toString(const TypeRef& type);

// ---------------------------------------------------------------------------
// Values

struct IntVal {
    std::int64_t value = 0;
    bool operator==(const IntVal&) const = default;
};
struct BoolVal {
    bool value = false;
    bool operator==(const BoolVal&) const = default;
};
struct VoidVal {
    bool operator==(const VoidVal&) const = default;
};
struct OidVal {
    ObjectId oid;
    bool operator==(const OidVal&) const = default;
};
/// The "no object" reference. Never encoded as a magic object id.
struct NullOid {
    bool operator==(const NullOid&) const = default;
};

struct Value;
struct Field;

/// Ordered, name-unique list of (name, value) pairs. Used for attribute
/// records, frame parameters and locals, and message arguments.
struct Record {
    std::vector<Field> fields;

    const Value* find(std::string_view name) const;
    Value* find(std::string_view name);
    bool contains(std::string_view name) const { return find(name) != nullptr; }
    std::size_t size() const { return fields.size(); }

    /// Appends a new field; the name must not exist yet.
    void append(std::string name, Value value);

    bool operator==(const Record& other) const;
};

struct Value {
    using Variant = std::variant<IntVal, BoolVal, VoidVal, OidVal, NullOid, Record>;
    Variant data;

    Value() : data(VoidVal{}) {}
    Value(IntVal v) : data(v) {}
    Value(BoolVal v) : data(v) {}
    Value(VoidVal v) : data(v) {}
    Value(OidVal v) : data(v) {}
    Value(NullOid v) : data(v) {}
    Value(Record v) : data(std::move(v)) {}

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(data);
    }
    template <class T>
    const T* as() const {
        return std::get_if<T>(&data);
    }

    bool operator==(const Value& other) const { return data == other.data; }
};

struct Field {
    std::string name;
    Value value;
    bool operator==(const Field&) const = default;
};

inline bool Record::operator==(const Record& other) const { return fields == other.fields; }

inline Value intVal(std::int64_t v) { return IntVal{v}; }
inline Value boolVal(bool v) { return BoolVal{v}; }
inline Value voidVal() { return VoidVal{}; }
inline Value oidVal(std::int64_t id) { return OidVal{ObjectId{id}}; }
inline Value nullOid() { return NullOid{}; }

/// True when both values belong to the same value family. Object references
/// and the null reference form one family.
bool sameKind(const Value& a, const Value& b);

/// Console rendering in the system-model notation: `VInt 10`, `XOID 3`, ...
std::string toString(const Value& value);

// ---------------------------------------------------------------------------
// Operation signatures

/// Operations are identified by their full signature so overloads by
/// parameter list are distinct.
struct OpSig {
    std::string name;
    std::vector<TypeRef> params;
    TypeRef result = VoidType{};

    auto operator<=>(const OpSig&) const = default;
};

std::string toString(const OpSig& op);

}  // namespace smvm
