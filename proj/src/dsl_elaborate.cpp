#include <map>
#include <set>

#include "dsl_ast.hpp"
#include "smvm/error.hpp"

namespace smvm::dsl {

namespace {

class Elaborator {
public:
    Elaborator(const RawModel& raw, std::vector<Diagnostic>& diags) : raw_(raw), diags_(diags) {}

    std::optional<ModelDef> run() {
        declareClasses();
        resolveAttributes();
        resolveInheritance();
        declareOps();
        for (const auto& op : raw_.ops) elaborateBody(op);
        elaborateSetup();
        elaborateConfig();
        if (errors_ > 0) return std::nullopt;

        // Anything the checks above let through is an elaborator bug; report
        // it rather than hand an invalid model to the VM.
        for (const auto& p : validateModel(def_.model)) error(SourceLoc{1, 1}, p);
        Config cfg = makeConfig(def_.model, def_.config);
        if (errors_ == 0) {
            for (const auto& p : validateSetup(cfg, def_.setup)) error(SourceLoc{1, 1}, p);
        }
        if (errors_ > 0) return std::nullopt;
        return std::move(def_);
    }

private:
    const RawModel& raw_;
    std::vector<Diagnostic>& diags_;
    int errors_ = 0;
    ModelDef def_;
    bool hierarchyOk_ = true;

    struct OpInfo {
        OpSig sig;
        const RawOp* raw = nullptr;
    };
    // class -> ops declared directly in it
    std::map<std::string, std::vector<OpInfo>> opsByClass_;

    void error(SourceLoc loc, std::string message) {
        diags_.push_back(Diagnostic{loc, std::move(message)});
        ++errors_;
    }

    bool classExists(const std::string& name) const { return def_.model.classes.contains(name); }

    std::optional<TypeRef> resolveType(const RawType& t) {
        if (t.name == "Int") return IntType{};
        if (t.name == "Bool") return BoolType{};
        if (t.name == "Void") return VoidType{};
        if (classExists(t.name)) return ClassType{t.name};
        error(t.loc, "unknown type '" + t.name + "'");
        return std::nullopt;
    }

    static bool literalFits(const Value& v, const TypeRef& t) {
        if (std::holds_alternative<IntType>(t)) return v.is<IntVal>();
        if (std::holds_alternative<BoolType>(t)) return v.is<BoolVal>();
        if (std::holds_alternative<VoidType>(t)) return v.is<VoidVal>();
        return v.is<NullOid>();
    }

    bool isAssignable(const TypeRef& from, const TypeRef& to) const {
        if (!hierarchyOk_) return from == to;
        return assignable(from, to, def_.model.subclasses);
    }

    std::vector<std::string> chainOf(const std::string& cls) const {
        if (!hierarchyOk_) return {cls};
        return superChain(cls, def_.model.subclasses);
    }

    // -- classes -------------------------------------------------------------

    void declareClasses() {
        std::map<std::string, SourceLoc> seen;
        for (const auto& c : raw_.classes) {
            if (auto [it, fresh] = seen.emplace(c.name.text, c.name.loc); !fresh) {
                error(c.name.loc, "class '" + c.name.text + "' already declared at line " +
                                      std::to_string(it->second.line));
                continue;
            }
            def_.model.classes.emplace(c.name.text, ClassDef{c.name.text, {}});
        }
    }

    void resolveAttributes() {
        std::set<std::string> done;
        for (const auto& c : raw_.classes) {
            if (!done.insert(c.name.text).second) continue;
            ClassDef& cls = def_.model.classes.at(c.name.text);
            std::set<std::string> names;
            for (const auto& a : c.attrs) {
                if (!names.insert(a.name.text).second) {
                    error(a.name.loc, "duplicate attribute '" + a.name.text + "' in class " + c.name.text);
                    continue;
                }
                auto t = resolveType(a.type);
                if (!t) continue;
                if (std::holds_alternative<VoidType>(*t)) {
                    error(a.type.loc, "attribute '" + a.name.text + "' cannot have type Void");
                    continue;
                }
                if (!literalFits(a.init.value, *t)) {
                    error(a.init.loc, "initial value " + printLiteral(a.init.value) +
                                          " does not match type " + toString(*t));
                    continue;
                }
                cls.attributes.push_back(AttrDecl{a.name.text, *t, a.init.value});
            }
        }
    }

    void resolveInheritance() {
        std::set<std::string> done;
        for (const auto& c : raw_.classes) {
            if (!done.insert(c.name.text).second || c.supers.empty()) continue;
            std::vector<std::string> supers;
            for (const auto& s : c.supers) {
                if (!classExists(s.text)) {
                    error(s.loc, "class " + c.name.text + " extends unknown class '" + s.text + "'");
                } else if (std::find(supers.begin(), supers.end(), s.text) != supers.end()) {
                    error(s.loc, "class '" + s.text + "' listed twice in extends clause");
                } else {
                    supers.push_back(s.text);
                }
            }
            if (!supers.empty()) def_.model.subclasses[c.name.text] = std::move(supers);
        }
        for (const auto& c : raw_.classes) {
            try {
                superChain(c.name.text, def_.model.subclasses);
            } catch (const VmError& e) {
                error(c.name.loc, e.what());
                hierarchyOk_ = false;
                return;
            }
        }
    }

    // -- operations ----------------------------------------------------------

    void declareOps() {
        for (const auto& op : raw_.ops) {
            if (!classExists(op.cls.text)) {
                error(op.cls.loc, "operation '" + op.name.text + "' declared for unknown class '" +
                                      op.cls.text + "'");
                continue;
            }
            OpSig sig{op.name.text, {}, VoidType{}};
            bool ok = true;
            std::set<std::string> names;
            for (const auto& p : op.params) {
                if (!names.insert(p.name.text).second) {
                    error(p.name.loc, "duplicate parameter '" + p.name.text + "'");
                    ok = false;
                }
                auto t = resolveType(p.type);
                if (!t) {
                    ok = false;
                    continue;
                }
                if (std::holds_alternative<VoidType>(*t)) {
                    error(p.type.loc, "parameter '" + p.name.text + "' cannot have type Void");
                    ok = false;
                }
                sig.params.push_back(*t);
            }
            auto result = resolveType(op.result);
            if (!result) ok = false;
            if (!ok) continue;
            sig.result = *result;
            auto& ops = def_.model.methods[op.cls.text];
            if (ops.contains(sig)) {
                error(op.name.loc, "operation " + toString(sig) + " already defined for class " + op.cls.text);
                continue;
            }
            if (op.body.empty()) {
                error(op.body_end, "operation '" + op.name.text + "' has an empty body");
                continue;
            }
            std::vector<Param> params;
            for (std::size_t i = 0; i < op.params.size(); ++i) {
                params.push_back(Param{op.params[i].name.text, sig.params[i]});
            }
            ops.emplace(sig, MethodDef{sig, std::move(params), {}});
            opsByClass_[op.cls.text].push_back(OpInfo{sig, &op});
        }
        for (auto it = def_.model.methods.begin(); it != def_.model.methods.end();) {
            it = it->second.empty() ? def_.model.methods.erase(it) : std::next(it);
        }
    }

    /// Finds the operation `name` on `cls` or a superclass, by explicit
    /// signature or by name and arity.
    std::optional<OpSig> resolveOp(const std::string& cls, const Name& name, std::size_t arity,
                                   const std::optional<RawSig>& rawSig) {
        if (rawSig) {
            OpSig sig{name.text, {}, VoidType{}};
            for (const auto& p : rawSig->params) {
                auto t = resolveType(p);
                if (!t) return std::nullopt;
                sig.params.push_back(*t);
            }
            auto r = resolveType(rawSig->result);
            if (!r) return std::nullopt;
            sig.result = *r;
            for (const auto& c : chainOf(cls)) {
                auto ops = def_.model.methods.find(c);
                if (ops != def_.model.methods.end() && ops->second.contains(sig)) return sig;
            }
            error(name.loc, "class " + cls + " does not implement " + toString(sig));
            return std::nullopt;
        }
        std::vector<OpSig> found;
        for (const auto& c : chainOf(cls)) {
            auto ops = opsByClass_.find(c);
            if (ops == opsByClass_.end()) continue;
            for (const auto& info : ops->second) {
                if (info.sig.name == name.text && info.sig.params.size() == arity &&
                    std::find(found.begin(), found.end(), info.sig) == found.end()) {
                    found.push_back(info.sig);
                }
            }
        }
        if (found.empty()) {
            error(name.loc, "class " + cls + " has no operation '" + name.text + "' taking " +
                                std::to_string(arity) + " arguments");
            return std::nullopt;
        }
        if (found.size() > 1) {
            error(name.loc, "operation '" + name.text + "' is ambiguous on class " + cls +
                                "; add an 'as (...): T' signature");
            return std::nullopt;
        }
        return found.front();
    }

    // -- bodies --------------------------------------------------------------

    struct BodyScope {
        std::string cls;
        const OpSig* sig = nullptr;
        std::map<std::string, TypeRef> params;
        std::map<std::string, TypeRef> locals;
        std::map<std::string, TypeRef> attrs;
        std::map<std::string, std::size_t> labels;
        std::size_t size = 0;
    };

    std::optional<TypeRef> localType(BodyScope& scope, const Name& n) {
        auto it = scope.locals.find(n.text);
        if (it == scope.locals.end()) {
            error(n.loc, "unknown local '" + n.text + "'");
            return std::nullopt;
        }
        return it->second;
    }

    void expectType(const Name& n, const std::optional<TypeRef>& actual, const TypeRef& wanted) {
        if (actual && !isAssignable(*actual, wanted)) {
            error(n.loc, "'" + n.text + "' has type " + toString(*actual) + ", expected " + toString(wanted));
        }
    }

    std::optional<std::size_t> jumpTarget(BodyScope& scope, const RawTarget& t) {
        if (t.label) {
            auto it = scope.labels.find(t.label->text);
            if (it == scope.labels.end()) {
                error(t.label->loc, "unknown label '" + t.label->text + "'");
                return std::nullopt;
            }
            return it->second;
        }
        if (t.index < 0 || static_cast<std::size_t>(t.index) >= scope.size) {
            error(t.loc, "jump target " + std::to_string(t.index) + " is outside the body (0.." +
                             std::to_string(scope.size - 1) + ")");
            return std::nullopt;
        }
        return static_cast<std::size_t>(t.index);
    }

    std::optional<OpSig> resolveSend(BodyScope& scope, const RawAction& a) {
        auto targetType = localType(scope, a.src);
        if (!targetType) return std::nullopt;
        const auto* cls = std::get_if<ClassType>(&*targetType);
        if (!cls) {
            error(a.src.loc, "'" + a.src.text + "' is not an object reference");
            return std::nullopt;
        }
        auto sig = resolveOp(cls->name, a.op, a.args.size(), a.sig);
        if (!sig) return std::nullopt;
        if (sig->params.size() != a.args.size()) {
            error(a.op.loc, toString(*sig) + " takes " + std::to_string(sig->params.size()) + " arguments");
            return std::nullopt;
        }
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            expectType(a.args[i], localType(scope, a.args[i]), sig->params[i]);
        }
        return sig;
    }

    static std::vector<std::string> names(const std::vector<Name>& ns) {
        std::vector<std::string> out;
        for (const auto& n : ns) out.push_back(n.text);
        return out;
    }

    void elaborateBody(const RawOp& op) {
        auto owner = opsByClass_.find(op.cls.text);
        if (owner == opsByClass_.end()) return;
        auto info = std::find_if(owner->second.begin(), owner->second.end(),
                                 [&](const OpInfo& i) { return i.raw == &op; });
        if (info == owner->second.end()) return;
        MethodDef& method = def_.model.methods.at(op.cls.text).at(info->sig);

        BodyScope scope;
        scope.cls = op.cls.text;
        scope.sig = &info->sig;
        scope.size = op.body.size();
        for (const auto& p : method.params) scope.params.emplace(p.name, p.type);
        if (hierarchyOk_) {
            for (const auto& a : flattenedClass(def_.model, op.cls.text).attributes) {
                scope.attrs.emplace(a.name, a.type);
            }
        }

        // Labels and local declarations are visible throughout the body.
        for (std::size_t pc = 0; pc < op.body.size(); ++pc) {
            const auto& stmt = op.body[pc];
            if (stmt.label && !scope.labels.emplace(stmt.label->text, pc).second) {
                error(stmt.label->loc, "duplicate label '" + stmt.label->text + "'");
            }
            const auto& a = stmt.action;
            if (a.kind != RawActionKind::NewLocal) continue;
            auto t = resolveType(a.type);
            if (!t) continue;
            if (!scope.locals.emplace(a.dst.text, *t).second) {
                error(a.dst.loc, "local '" + a.dst.text + "' declared twice");
            }
        }
        // Call results introduce locals typed by the callee's result.
        std::map<std::size_t, OpSig> sendSigs;
        for (std::size_t pc = 0; pc < op.body.size(); ++pc) {
            const auto& a = op.body[pc].action;
            if (a.kind != RawActionKind::Call && a.kind != RawActionKind::SendSignal) continue;
            auto sig = resolveSend(scope, a);
            if (!sig) continue;
            sendSigs.emplace(pc, *sig);
            if (a.kind != RawActionKind::Call) continue;
            auto [it, fresh] = scope.locals.emplace(a.dst.text, sig->result);
            if (!fresh && !(it->second == sig->result)) {
                error(a.dst.loc, "result local '" + a.dst.text + "' has type " + toString(it->second) +
                                     " but " + sig->name + " returns " + toString(sig->result));
            }
        }

        for (std::size_t pc = 0; pc < op.body.size(); ++pc) {
            auto action = elaborateAction(scope, op.body[pc].action, pc, sendSigs);
            if (action) method.body.push_back(std::move(*action));
        }
    }

    std::optional<Action> elaborateAction(BodyScope& scope, const RawAction& a, std::size_t pc,
                                          const std::map<std::size_t, OpSig>& sendSigs) {
        switch (a.kind) {
            case RawActionKind::NewLocal: {
                auto t = scope.locals.find(a.dst.text);
                if (t == scope.locals.end()) return std::nullopt;
                if (std::holds_alternative<VoidType>(t->second) && !a.literal.value.is<VoidVal>()) {
                    error(a.literal.loc, "Void local must be initialized with void");
                    return std::nullopt;
                }
                if (!literalFits(a.literal.value, t->second)) {
                    error(a.literal.loc, "initial value " + printLiteral(a.literal.value) +
                                             " does not match type " + toString(t->second));
                    return std::nullopt;
                }
                return NewLocal{a.dst.text, t->second, a.literal.value};
            }
            case RawActionKind::LocalFromParam: {
                auto lt = localType(scope, a.dst);
                auto p = scope.params.find(a.src.text);
                if (p == scope.params.end()) {
                    error(a.src.loc, "unknown parameter '" + a.src.text + "'");
                    return std::nullopt;
                }
                if (lt) expectType(a.src, p->second, *lt);
                return LocalFromParam{a.dst.text, a.src.text};
            }
            case RawActionKind::LocalFromAttr: {
                auto lt = localType(scope, a.dst);
                auto at = scope.attrs.find(a.src.text);
                if (at == scope.attrs.end()) {
                    error(a.src.loc, "class " + scope.cls + " has no attribute '" + a.src.text + "'");
                    return std::nullopt;
                }
                if (lt) expectType(a.src, at->second, *lt);
                return LocalFromAttr{a.dst.text, a.src.text};
            }
            case RawActionKind::LocalConst: {
                auto lt = localType(scope, a.dst);
                if (lt && !literalFits(a.literal.value, *lt)) {
                    error(a.literal.loc, "literal " + printLiteral(a.literal.value) + " does not match type " +
                                             toString(*lt) + " of '" + a.dst.text + "'");
                }
                return LocalConst{a.dst.text, a.literal.value};
            }
            case RawActionKind::SetAttr: {
                auto at = scope.attrs.find(a.dst.text);
                auto lt = localType(scope, a.src);
                if (at == scope.attrs.end()) {
                    error(a.dst.loc, "class " + scope.cls + " has no attribute '" + a.dst.text + "'");
                    return std::nullopt;
                }
                expectType(a.src, lt, at->second);
                return SetAttr{a.dst.text, a.src.text};
            }
            case RawActionKind::BinOp: {
                auto dt = localType(scope, a.dst);
                auto lt = localType(scope, a.src);
                auto rt = localType(scope, a.rhs);
                if (a.binop == BinOpKind::Eq) {
                    if (lt && rt && !sameFamily(*lt, *rt)) {
                        error(a.rhs.loc, "cannot compare " + toString(*lt) + " with " + toString(*rt));
                    }
                    expectType(a.dst, dt, BoolType{});
                } else {
                    expectType(a.src, lt, IntType{});
                    expectType(a.rhs, rt, IntType{});
                    expectType(a.dst, dt,
                               a.binop == BinOpKind::Lt ? TypeRef{BoolType{}} : TypeRef{IntType{}});
                }
                return BinOp{a.binop, a.dst.text, a.src.text, a.rhs.text};
            }
            case RawActionKind::Jump: {
                auto target = jumpTarget(scope, a.target);
                if (!target) return std::nullopt;
                return Jump{*target};
            }
            case RawActionKind::BranchIfFalse: {
                expectType(a.src, localType(scope, a.src), BoolType{});
                auto target = jumpTarget(scope, a.target);
                if (!target) return std::nullopt;
                return BranchIfFalse{a.src.text, *target};
            }
            case RawActionKind::NewObject: {
                auto dt = localType(scope, a.dst);
                if (!classExists(a.src.text)) {
                    error(a.src.loc, "unknown class '" + a.src.text + "'");
                    return std::nullopt;
                }
                if (dt && !isAssignable(ClassType{a.src.text}, *dt)) {
                    error(a.dst.loc, "local '" + a.dst.text + "' of type " + toString(*dt) +
                                         " cannot hold a " + a.src.text);
                }
                return NewObject{a.dst.text, a.src.text};
            }
            case RawActionKind::Call: {
                auto sig = sendSigs.find(pc);
                if (sig == sendSigs.end()) return std::nullopt;
                return Call{a.src.text, sig->second, names(a.args), a.dst.text};
            }
            case RawActionKind::SendSignal: {
                auto sig = sendSigs.find(pc);
                if (sig == sendSigs.end()) return std::nullopt;
                if (a.prio < 0) error(a.loc, "signal priority must not be negative");
                return SendSignal{a.src.text, sig->second, names(a.args), a.prio};
            }
            case RawActionKind::ReturnConst: {
                if (!literalFits(a.literal.value, scope.sig->result)) {
                    error(a.literal.loc, "returns " + printLiteral(a.literal.value) + " but " + scope.sig->name +
                                             " returns " + toString(scope.sig->result));
                }
                return Return{a.literal.value};
            }
            case RawActionKind::ReturnLocal: {
                expectType(a.src, localType(scope, a.src), scope.sig->result);
                return Return{LocalRef{a.src.text}};
            }
        }
        return std::nullopt;
    }

    static bool sameFamily(const TypeRef& a, const TypeRef& b) {
        if (std::holds_alternative<ClassType>(a) && std::holds_alternative<ClassType>(b)) return true;
        return a.index() == b.index();
    }

    // -- setup and config ----------------------------------------------------

    void elaborateSetup() {
        if (!raw_.setup) return;
        std::map<std::string, SourceLoc> seen;
        for (const auto& e : *raw_.setup) {
            if (auto [it, fresh] = seen.emplace(e.name.text, e.name.loc); !fresh) {
                error(e.name.loc, "object '" + e.name.text + "' already defined at line " +
                                      std::to_string(it->second.line));
            }
        }
        for (const auto& e : *raw_.setup) {
            if (!classExists(e.cls.text)) {
                error(e.cls.loc, "unknown class '" + e.cls.text + "'");
                continue;
            }
            SetupEntry entry{e.name.text, e.cls.text, Passive{}, {}};
            for (const auto& l : e.links) {
                if (!seen.contains(l.text)) {
                    error(l.loc, "link to unknown object '" + l.text + "'");
                } else {
                    entry.links.push_back(l.text);
                }
            }
            if (e.active) {
                if (e.prio < 0) error(e.prio_loc, "priority must not be negative");
                auto sig = resolveOp(e.cls.text, e.op, 0, e.sig);
                if (!sig) continue;
                if (!sig->params.empty()) {
                    error(e.op.loc, "start operation " + toString(*sig) + " must take no parameters");
                    continue;
                }
                entry.kind = Active{*sig, e.prio};
            }
            def_.setup.push_back(std::move(entry));
        }
    }

    void elaborateConfig() {
        if (!raw_.config) return;
        std::set<std::string> seen;
        for (const auto& item : *raw_.config) {
            const auto& key = item.key.text;
            const auto& value = item.value.text;
            if (!seen.insert(key).second) {
                error(item.key.loc, "config key '" + key + "' given twice");
                continue;
            }
            bool known = true;
            if (key == "runnables") {
                if (auto v = parseRunnablesKind(value)) def_.config.runnables = *v;
                else known = false;
            } else if (key == "scheduler") {
                if (auto v = parseSchedulerKind(value)) def_.config.scheduler = *v;
                else known = false;
            } else if (key == "dispatch") {
                if (auto v = parseDispatchKind(value)) def_.config.dispatch = *v;
                else known = false;
            } else if (key == "medium") {
                if (auto v = parseMediumKind(value)) def_.config.medium = *v;
                else known = false;
            } else {
                error(item.key.loc, "unknown config key '" + key +
                                        "' (expected runnables, scheduler, dispatch or medium)");
                continue;
            }
            if (!known) error(item.value.loc, "unknown " + key + " strategy '" + value + "'");
        }
    }
};

}  // namespace

std::optional<ModelDef> elaborate(const RawModel& raw, std::vector<Diagnostic>& diags) {
    return Elaborator(raw, diags).run();
}

}  // namespace smvm::dsl

namespace smvm {

std::string formatDiagnostic(const Diagnostic& d, std::string_view file) {
    return std::string(file) + ":" + std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) +
           ": error: " + d.message;
}

ParseResult parseModel(std::string_view text) {
    ParseResult result;
    auto raw = dsl::parseSyntax(text, result.diagnostics);
    if (!raw) return result;
    result.model = dsl::elaborate(*raw, result.diagnostics);
    if (!result.diagnostics.empty()) result.model.reset();
    return result;
}

}  // namespace smvm
