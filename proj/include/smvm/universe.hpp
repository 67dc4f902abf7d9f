#pragma once

#include <map>
#include <string>
#include <vector>

#include "smvm/action.hpp"
#include "smvm/value.hpp"

namespace smvm {

struct DataStore;

struct AttrDecl {
    std::string name;
    TypeRef type;
    Value init;
    bool operator==(const AttrDecl&) const = default;
};

struct ClassDef {
    std::string name;
    std::vector<AttrDecl> attributes;
    bool operator==(const ClassDef&) const = default;
};

struct Param {
    std::string name;
    TypeRef type;
    bool operator==(const Param&) const = default;
};

struct MethodDef {
    OpSig implements;
    std::vector<Param> params;
    std::vector<Action> body;
    bool operator==(const MethodDef&) const = default;
};

using ClassTable = std::map<std::string, ClassDef>;
/// class -> direct superclasses, in declaration order. Classes without
/// superclasses have no entry.
using SubclassRel = std::map<std::string, std::vector<std::string>>;
/// class -> (operation -> implementing method)
using MethMap = std::map<std::string, std::map<OpSig, MethodDef>>;

/// The static part of a simulated system.
struct Model {
    ClassTable classes;
    SubclassRel subclasses;
    MethMap methods;
    bool operator==(const Model&) const = default;
};

/// Zero value of a type. Class types default to the null reference.
/// Throws VmError(Validation) for a class type that is not in `classes`.
Value defaultValue(const TypeRef& type, const ClassTable& classes);

/// Runtime type of a value. Object references are typed through the data
/// store; a reference to an unallocated object raises DanglingReference.
/// NullOid and records have no TypeRef and raise TypeMismatch.
TypeRef typeOfValue(const Value& value, const DataStore& ds);

/// `cls` followed by its superclasses, depth first in declaration order,
/// first occurrence kept. Throws VmError(Validation) on a cycle.
std::vector<std::string> superChain(const std::string& cls, const SubclassRel& scl);

/// True if `sub` is `super` or one of its (transitive) subclasses.
bool isSubclassOf(const std::string& sub, const std::string& super, const SubclassRel& scl);

/// Whether a type `from` may be stored where `to` is expected.
bool assignable(const TypeRef& from, const TypeRef& to, const SubclassRel& scl);

/// Runtime conformance of a value to a declared type. NullOid conforms to
/// every class type.
bool conformsTo(const Value& value, const TypeRef& type, const DataStore& ds,
                const SubclassRel& scl);

/// Attributes of `cls` including inherited ones: the root-most superclass
/// first, then down the chain to `cls` itself. A redeclared name keeps the
/// most derived declaration at the position of its first occurrence.
ClassDef flattenedClass(const Model& model, const std::string& cls);

/// Checks every structural invariant of the model. Returns one message per
/// violation; an empty result means the model is valid.
std::vector<std::string> validateModel(const Model& model);

/// Throws VmError(Validation) listing all problems reported by validateModel.
void requireValidModel(const Model& model);

}  // namespace smvm
