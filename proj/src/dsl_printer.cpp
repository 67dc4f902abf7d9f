#include <set>
#include <sstream>

#include "overloaded.hpp"
#include "smvm/dsl.hpp"

namespace smvm {

using detail::Overloaded;

namespace {

std::string sigSuffix(const OpSig& op) {
    std::string out = " as (";
    for (std::size_t i = 0; i < op.params.size(); ++i) {
        if (i) out += ", ";
        out += toString(op.params[i]);
    }
    return out + "): " + toString(op.result);
}

std::string joined(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

std::string label(std::size_t pc) { return "L" + std::to_string(pc); }

/// Renders one action; `targets` turns jump indices into labels when given.
std::string renderAction(const Action& action, bool useLabels) {
    auto target = [&](std::size_t pc) { return useLabels ? label(pc) : std::to_string(pc); };
    return std::visit(
        Overloaded{
            [](const NewLocal& a) {
                return "local " + a.name + ": " + toString(a.type) + " = " + printLiteral(a.init);
            },
            [](const LocalFromParam& a) { return a.local + " := param " + a.param; },
            [](const LocalFromAttr& a) { return a.local + " := attr " + a.attr; },
            [](const LocalConst& a) { return a.local + " := " + printLiteral(a.value); },
            [](const SetAttr& a) { return "attr " + a.attr + " := " + a.local; },
            [](const BinOp& a) {
                return a.dst + " := " + toString(a.op) + " " + a.lhs + " " + a.rhs;
            },
            [&](const Jump& a) { return "goto " + target(a.target); },
            [&](const BranchIfFalse& a) { return "ifnot " + a.cond + " goto " + target(a.target); },
            [](const NewObject& a) { return a.dst + " := new " + a.class_name; },
            [](const Call& a) {
                return a.result + " := call " + a.target + "." + a.op.name + "(" + joined(a.args) + ")" +
                       sigSuffix(a.op);
            },
            [](const SendSignal& a) {
                return "signal " + a.target + "." + a.op.name + "(" + joined(a.args) + ")" + sigSuffix(a.op) +
                       " prio " + std::to_string(a.prio);
            },
            [](const Return& a) {
                return std::visit(Overloaded{
                                      [](const Value& v) { return "return " + printLiteral(v); },
                                      [](const LocalRef& r) { return "return " + r.name; },
                                  },
                                  a.source);
            },
        },
        action);
}

}  // namespace

std::string printLiteral(const Value& value) {
    return std::visit(Overloaded{
                          [](const IntVal& v) { return std::to_string(v.value); },
                          [](const BoolVal& v) { return std::string(v.value ? "true" : "false"); },
                          [](const VoidVal&) { return std::string("void"); },
                          [](const NullOid&) { return std::string("null"); },
                          [](const auto&) { return std::string("<no literal>"); },
                      },
                      value.data);
}

std::string printAction(const Action& action) { return renderAction(action, false); }

std::string printModel(const ModelDef& def) {
    std::ostringstream out;
    for (const auto& [name, cls] : def.model.classes) {
        out << "class " << name;
        if (auto supers = def.model.subclasses.find(name); supers != def.model.subclasses.end()) {
            out << " extends " << joined(supers->second);
        }
        out << " {\n";
        for (const auto& a : cls.attributes) {
            out << "    attr " << a.name << ": " << toString(a.type) << " = " << printLiteral(a.init) << ";\n";
        }
        out << "}\n\n";
    }
    for (const auto& [cls, ops] : def.model.methods) {
        for (const auto& [sig, m] : ops) {
            out << "op " << cls << "." << sig.name << "(";
            for (std::size_t i = 0; i < m.params.size(); ++i) {
                if (i) out << ", ";
                out << m.params[i].name << ": " << toString(m.params[i].type);
            }
            out << "): " << toString(sig.result) << " {\n";
            std::set<std::size_t> targets;
            for (const auto& a : m.body) {
                if (const auto* j = std::get_if<Jump>(&a)) targets.insert(j->target);
                if (const auto* b = std::get_if<BranchIfFalse>(&a)) targets.insert(b->target);
            }
            for (std::size_t pc = 0; pc < m.body.size(); ++pc) {
                out << (targets.contains(pc) ? label(pc) + ": " : std::string("    "));
                out << renderAction(m.body[pc], true) << ";\n";
            }
            out << "}\n\n";
        }
    }
    out << "setup {\n";
    for (const auto& e : def.setup) {
        out << "    " << e.name << ": " << e.class_name;
        std::visit(Overloaded{
                       [&](const Passive&) { out << " passive"; },
                       [&](const Active& a) {
                           out << " active " << a.op.name << sigSuffix(a.op) << " prio " << a.prio;
                       },
                   },
                   e.kind);
        if (!e.links.empty()) out << " links [" << joined(e.links) << "]";
        out << ";\n";
    }
    out << "}\n\n";
    out << "config {\n"
        << "    runnables: " << toString(def.config.runnables) << ";\n"
        << "    scheduler: " << toString(def.config.scheduler) << ";\n"
        << "    dispatch: " << toString(def.config.dispatch) << ";\n"
        << "    medium: " << toString(def.config.medium) << ";\n"
        << "}\n";
    return out.str();
}

}  // namespace smvm
