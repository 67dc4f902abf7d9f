#include "smvm/interpreter.hpp"

#include "overloaded.hpp"
#include "smvm/error.hpp"

namespace smvm {

using detail::Overloaded;

namespace {

/// Execution context of one interpret call.
struct Step {
    SimState& s;
    ObjectId oid;
    ThreadId tid;
    const Config& cfg;

    Thread& thread() { return threadOf(s, oid, tid); }
    Frame& frame() { return thread().frames.back(); }

    const Value& local(const std::string& name) {
        const Value* v = frame().locals.find(name);
        if (!v) throw VmError(ErrorKind::UnknownLocal, "unknown local '" + name + "'");
        return *v;
    }

    /// Overwrites an existing local with a value of the same family.
    void assign(const std::string& name, Value value) {
        Value* slot = frame().locals.find(name);
        if (!slot) throw VmError(ErrorKind::UnknownLocal, "unknown local '" + name + "'");
        if (!sameKind(*slot, value)) {
            throw VmError(ErrorKind::TypeMismatch, "cannot assign " + toString(value) + " to local '" +
                                                       name + "' holding " + toString(*slot));
        }
        *slot = std::move(value);
    }

    std::int64_t intLocal(const std::string& name) {
        const auto* v = local(name).as<IntVal>();
        if (!v) throw VmError(ErrorKind::TypeMismatch, "local '" + name + "' is not an integer");
        return v->value;
    }

    void advance() { ++frame().pc; }

    ObjectId targetOf(const std::string& name) {
        const Value& v = local(name);
        if (v.is<NullOid>()) throw VmError(ErrorKind::NullTarget, "local '" + name + "' is null");
        const auto* o = v.as<OidVal>();
        if (!o) throw VmError(ErrorKind::TypeMismatch, "local '" + name + "' is not an object reference");
        return o->oid;
    }

    Record arguments(const OpSig& op, const std::vector<std::string>& args) {
        if (args.size() != op.params.size()) {
            throw VmError(ErrorKind::TypeMismatch, toString(op) + " expects " +
                                                       std::to_string(op.params.size()) + " arguments");
        }
        Record out;
        for (std::size_t i = 0; i < args.size(); ++i) {
            const Value& v = local(args[i]);
            if (!conformsTo(v, op.params[i], s.ds, cfg.subclassRel())) {
                throw VmError(ErrorKind::TypeMismatch, "argument '" + args[i] + "' does not match " +
                                                           toString(op.params[i]));
            }
            out.append("arg" + std::to_string(i), v);
        }
        return out;
    }

    void send(ObjectId receiver, decltype(Message::payload) payload, bool startsThread) {
        Message msg{oid, tid, receiver, std::move(payload)};
        std::optional<ThreadId> handler;
        if (startsThread) handler = reserveThreadId(s);
        cfg.medium(s.es, makeEvent(std::move(msg), s.next_seq++, s.now, handler));
    }

    void operator()(const NewLocal& a) {
        if (frame().locals.contains(a.name)) {
            throw VmError(ErrorKind::DuplicateLocal, "local '" + a.name + "' already exists");
        }
        if (!conformsTo(a.init, a.type, s.ds, cfg.subclassRel())) {
            throw VmError(ErrorKind::TypeMismatch, "init value of '" + a.name + "' does not match " +
                                                       toString(a.type));
        }
        frame().locals.append(a.name, a.init);
        advance();
    }

    void operator()(const LocalFromParam& a) {
        const Value* p = frame().params.find(a.param);
        if (!p) throw VmError(ErrorKind::UnknownParam, "unknown parameter '" + a.param + "'");
        assign(a.local, *p);
        advance();
    }

    void operator()(const LocalFromAttr& a) {
        assign(a.local, readAttr(s, oid, a.attr));
        advance();
    }

    void operator()(const LocalConst& a) {
        assign(a.local, a.value);
        advance();
    }

    void operator()(const SetAttr& a) {
        writeAttr(s, oid, a.attr, local(a.local), cfg.subclassRel());
        advance();
    }

    void operator()(const BinOp& a) {
        Value result;
        switch (a.op) {
            case BinOpKind::Add: result = intVal(intLocal(a.lhs) + intLocal(a.rhs)); break;
            case BinOpKind::Sub: result = intVal(intLocal(a.lhs) - intLocal(a.rhs)); break;
            case BinOpKind::Mul: result = intVal(intLocal(a.lhs) * intLocal(a.rhs)); break;
            case BinOpKind::Lt: result = boolVal(intLocal(a.lhs) < intLocal(a.rhs)); break;
            case BinOpKind::Eq: {
                const Value& l = local(a.lhs);
                const Value& r = local(a.rhs);
                if (!sameKind(l, r)) {
                    throw VmError(ErrorKind::TypeMismatch, "cannot compare '" + a.lhs + "' and '" + a.rhs + "'");
                }
                result = boolVal(l == r);
                break;
            }
        }
        assign(a.dst, std::move(result));
        advance();
    }

    void operator()(const Jump& a) { frame().pc = a.target; }

    void operator()(const BranchIfFalse& a) {
        const auto* c = local(a.cond).as<BoolVal>();
        if (!c) throw VmError(ErrorKind::TypeMismatch, "branch condition '" + a.cond + "' is not a boolean");
        if (c->value) {
            advance();
        } else {
            frame().pc = a.target;
        }
    }

    void operator()(const NewObject& a) {
        // Check the destination before allocating so a failed action leaves no object behind.
        if (!sameKind(local(a.dst), nullOid())) {
            throw VmError(ErrorKind::TypeMismatch, "local '" + a.dst + "' cannot hold an object");
        }
        ObjectId created = allocObject(s, flattenedClass(cfg.model, a.class_name));
        assign(a.dst, OidVal{created});
        advance();
    }

    void operator()(const Call& a) {
        ObjectId receiver = targetOf(a.target);
        Record args = arguments(a.op, a.args);
        Prio prio = thread().base_prio;
        send(receiver, CallPayload{a.op, std::move(args), a.result, prio}, true);
        thread().status = ThreadStatus::Waiting;
        advance();
    }

    void operator()(const SendSignal& a) {
        ObjectId receiver = targetOf(a.target);
        Record args = arguments(a.op, a.args);
        send(receiver, SignalPayload{a.op, std::move(args), a.prio}, true);
        advance();
    }

    void operator()(const Return& a) {
        Value value = std::visit(Overloaded{
                                     [](const Value& v) { return v; },
                                     [&](const LocalRef& r) { return local(r.name); },
                                 },
                                 a.source);
        const OpSig& op = frame().op;
        if (!conformsTo(value, op.result, s.ds, cfg.subclassRel())) {
            throw VmError(ErrorKind::TypeMismatch, "return value " + toString(value) + " does not match " +
                                                       toString(op.result));
        }
        std::optional<CallerRef> caller = frame().caller;
        if (caller) {
            send(caller->oid, ReturnPayload{std::move(value), caller->tid, caller->result_local}, false);
        }
        popFrame(s, oid, tid);
    }
};

}  // namespace

void interpret(const Action& action, SimState& s, ObjectId oid, ThreadId tid, const Config& cfg) {
    Step step{s, oid, tid, cfg};
    if (step.thread().status != ThreadStatus::Ready) {
        throw VmError(ErrorKind::Internal, "thread " + std::to_string(tid.value) + " is not ready");
    }
    if (step.thread().frames.empty()) {
        throw VmError(ErrorKind::Internal, "thread " + std::to_string(tid.value) + " has no frame");
    }
    std::visit(step, action);
}

}  // namespace smvm
