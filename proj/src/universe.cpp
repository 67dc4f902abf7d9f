#include "smvm/universe.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "overloaded.hpp"
#include "smvm/error.hpp"
#include "smvm/state.hpp"

namespace smvm {

using detail::Overloaded;

Value defaultValue(const TypeRef& type, const ClassTable& classes) {
    return std::visit(Overloaded{
                          [](const IntType&) { return intVal(0); },
                          [](const BoolType&) { return boolVal(false); },
                          [](const VoidType&) { return voidVal(); },
                          [&](const ClassType& c) {
                              if (!classes.contains(c.name)) {
                                  throw VmError(ErrorKind::Validation,
                                                "unknown class '" + c.name + "'");
                              }
                              return nullOid();
                          },
                      },
                      type);
}

TypeRef typeOfValue(const Value& value, const DataStore& ds) {
    return std::visit(
        Overloaded{
            [](const IntVal&) -> TypeRef { return IntType{}; },
            [](const BoolVal&) -> TypeRef { return BoolType{}; },
            [](const VoidVal&) -> TypeRef { return VoidType{}; },
            [&](const OidVal& o) -> TypeRef {
                const ObjectEntry* entry = ds.find(o.oid);
                if (!entry) {
                    throw VmError(ErrorKind::DanglingReference,
                                  "object " + std::to_string(o.oid.value) + " does not exist");
                }
                return ClassType{entry->class_name};
            },
            [](const NullOid&) -> TypeRef {
                throw VmError(ErrorKind::TypeMismatch, "the null reference has no class");
            },
            [](const Record&) -> TypeRef {
                throw VmError(ErrorKind::TypeMismatch, "records have no type reference");
            },
        },
        value.data);
}

namespace {

void walkSupers(const std::string& cls, const SubclassRel& scl, std::vector<std::string>& out,
                std::set<std::string>& done, std::vector<std::string>& path) {
    if (std::find(path.begin(), path.end(), cls) != path.end()) {
        std::string cycle;
        for (const auto& c : path) cycle += c + " -> ";
        throw VmError(ErrorKind::Validation, "inheritance cycle: " + cycle + cls);
    }
    if (done.contains(cls)) return;
    done.insert(cls);
    out.push_back(cls);
    path.push_back(cls);
    if (auto it = scl.find(cls); it != scl.end()) {
        for (const auto& super : it->second) walkSupers(super, scl, out, done, path);
    }
    path.pop_back();
}

}  // namespace

std::vector<std::string> superChain(const std::string& cls, const SubclassRel& scl) {
    std::vector<std::string> out;
    std::set<std::string> done;
    std::vector<std::string> path;
    walkSupers(cls, scl, out, done, path);
    return out;
}

bool isSubclassOf(const std::string& sub, const std::string& super, const SubclassRel& scl) {
    auto chain = superChain(sub, scl);
    return std::find(chain.begin(), chain.end(), super) != chain.end();
}

bool assignable(const TypeRef& from, const TypeRef& to, const SubclassRel& scl) {
    const auto* fromClass = std::get_if<ClassType>(&from);
    const auto* toClass = std::get_if<ClassType>(&to);
    if (fromClass && toClass) return isSubclassOf(fromClass->name, toClass->name, scl);
    return from == to;
}

bool conformsTo(const Value& value, const TypeRef& type, const DataStore& ds,
                const SubclassRel& scl) {
    if (value.is<NullOid>()) return std::holds_alternative<ClassType>(type);
    if (value.is<Record>()) return false;
    return assignable(typeOfValue(value, ds), type, scl);
}

ClassDef flattenedClass(const Model& model, const std::string& cls) {
    auto chain = superChain(cls, model.subclasses);
    ClassDef out{cls, {}};
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        auto def = model.classes.find(*it);
        if (def == model.classes.end()) {
            throw VmError(ErrorKind::Validation, "unknown class '" + *it + "'");
        }
        for (const auto& attr : def->second.attributes) {
            auto existing = std::find_if(out.attributes.begin(), out.attributes.end(),
                                         [&](const AttrDecl& a) { return a.name == attr.name; });
            if (existing != out.attributes.end()) {
                *existing = attr;
            } else {
                out.attributes.push_back(attr);
            }
        }
    }
    return out;
}

namespace {

struct Validator {
    const Model& model;
    std::vector<std::string> problems;

    void report(const std::string& where, const std::string& what) {
        problems.push_back(where + ": " + what);
    }

    bool typeOk(const TypeRef& t) const {
        const auto* c = std::get_if<ClassType>(&t);
        return !c || model.classes.contains(c->name);
    }

    bool initOk(const Value& init, const TypeRef& t) const {
        return std::visit(Overloaded{
                              [&](const IntType&) { return init.is<IntVal>(); },
                              [&](const BoolType&) { return init.is<BoolVal>(); },
                              [&](const VoidType&) { return init.is<VoidVal>(); },
                              [&](const ClassType&) { return init.is<NullOid>(); },
                          },
                          t);
    }

    void checkClasses() {
        for (const auto& [name, cls] : model.classes) {
            const std::string where = "class " + name;
            if (cls.name != name) report(where, "table key does not match class name '" + cls.name + "'");
            std::set<std::string> seen;
            for (const auto& attr : cls.attributes) {
                if (!seen.insert(attr.name).second) report(where, "duplicate attribute '" + attr.name + "'");
                if (!typeOk(attr.type)) {
                    report(where, "attribute '" + attr.name + "' has unknown type " + toString(attr.type));
                } else if (!initOk(attr.init, attr.type)) {
                    report(where, "attribute '" + attr.name + "' init value " + toString(attr.init) +
                                      " does not match type " + toString(attr.type));
                }
            }
        }
    }

    void checkSubclassing() {
        for (const auto& [sub, supers] : model.subclasses) {
            if (!model.classes.contains(sub)) report("subclass relation", "unknown class '" + sub + "'");
            for (const auto& super : supers) {
                if (!model.classes.contains(super)) {
                    report("subclass relation", "class '" + sub + "' extends unknown class '" + super + "'");
                }
            }
        }
        for (const auto& [name, cls] : model.classes) {
            try {
                superChain(name, model.subclasses);
            } catch (const VmError& e) {
                report("class " + name, e.what());
            }
        }
    }

    void checkBody(const std::string& where, const MethodDef& m) {
        if (m.body.empty()) {
            report(where, "method body is empty");
            return;
        }
        const auto size = m.body.size();
        for (std::size_t pc = 0; pc < size; ++pc) {
            const auto& action = m.body[pc];
            const std::string at = where + " pc " + std::to_string(pc);
            if (const auto* j = std::get_if<Jump>(&action); j && j->target >= size) {
                report(at, "jump target " + std::to_string(j->target) + " out of range");
            }
            if (const auto* b = std::get_if<BranchIfFalse>(&action); b && b->target >= size) {
                report(at, "branch target " + std::to_string(b->target) + " out of range");
            }
            if (const auto* n = std::get_if<NewLocal>(&action)) {
                if (!typeOk(n->type)) report(at, "unknown type " + toString(n->type));
                else if (!initOk(n->init, n->type)) report(at, "init value does not match local type");
            }
            if (const auto* n = std::get_if<NewObject>(&action); n && !model.classes.contains(n->class_name)) {
                report(at, "unknown class '" + n->class_name + "'");
            }
            if (const auto* c = std::get_if<Call>(&action); c && c->args.size() != c->op.params.size()) {
                report(at, "call of " + toString(c->op) + " passes " + std::to_string(c->args.size()) + " arguments");
            }
            if (const auto* c = std::get_if<SendSignal>(&action); c && c->args.size() != c->op.params.size()) {
                report(at, "signal " + toString(c->op) + " passes " + std::to_string(c->args.size()) + " arguments");
            }
        }
    }

    void checkMethods() {
        for (const auto& [cls, ops] : model.methods) {
            if (!model.classes.contains(cls)) report("method map", "unknown class '" + cls + "'");
            for (const auto& [op, m] : ops) {
                const std::string where = "method " + cls + "." + op.name;
                if (!(m.implements == op)) {
                    report(where, "implements " + toString(m.implements) + " but is registered for " + toString(op));
                }
                for (const auto& t : op.params) {
                    if (!typeOk(t)) report(where, "unknown parameter type " + toString(t));
                }
                if (!typeOk(op.result)) report(where, "unknown result type " + toString(op.result));
                if (m.params.size() != op.params.size()) {
                    report(where, "declares " + std::to_string(m.params.size()) + " parameters, signature has " +
                                      std::to_string(op.params.size()));
                } else {
                    std::set<std::string> seen;
                    for (std::size_t i = 0; i < m.params.size(); ++i) {
                        if (!(m.params[i].type == op.params[i])) {
                            report(where, "parameter '" + m.params[i].name + "' type differs from signature");
                        }
                        if (!seen.insert(m.params[i].name).second) {
                            report(where, "duplicate parameter '" + m.params[i].name + "'");
                        }
                    }
                }
                checkBody(where, m);
            }
        }
    }
};

}  // namespace

std::vector<std::string> validateModel(const Model& model) {
    Validator v{model, {}};
    v.checkClasses();
    v.checkSubclassing();
    v.checkMethods();
    return std::move(v.problems);
}

void requireValidModel(const Model& model) {
    auto problems = validateModel(model);
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "invalid model:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw VmError(ErrorKind::Validation, msg.str());
}

}  // namespace smvm
