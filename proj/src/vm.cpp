#include "smvm/vm.hpp"

#include <set>
#include <sstream>

#include "smvm/error.hpp"
#include "smvm/interpreter.hpp"

namespace smvm {


namespace {

constexpr Time kSetupStep = -1;

std::string where(ObjectId oid, ThreadId tid) {
    return "object " + std::to_string(oid.value) + ", thread " + std::to_string(tid.value);
}

std::optional<EventKind> sentBy(const Action& action, bool hadCaller) {
    if (std::holds_alternative<Call>(action)) return EventKind::Call;
    if (std::holds_alternative<SendSignal>(action)) return EventKind::Signal;
    if (std::holds_alternative<Return>(action) && hadCaller) return EventKind::Return;
    return std::nullopt;
}

Frame frameFor(ObjectId oid, const MethodDef& m, const Record& args, std::optional<CallerRef> caller) {
    if (args.size() != m.params.size()) {
        throw VmError(ErrorKind::TypeMismatch, toString(m.implements) + " received " +
                                                   std::to_string(args.size()) + " arguments");
    }
    Frame f{oid, m.implements, {}, {}, 0, std::move(caller)};
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        f.params.append(m.params[i].name, args.fields[i].value);
    }
    return f;
}

}  // namespace

const char* toString(HaltReason reason) {
    switch (reason) {
        case HaltReason::AllDone: return "all-done";
        case HaltReason::Blocked: return "blocked";
        case HaltReason::StepLimit: return "step-limit";
    }
    return "?";
}

std::vector<std::string> validateSetup(const Config& cfg, const Setup& setup) {
    std::vector<std::string> problems;
    std::set<std::string> names;
    for (const auto& entry : setup) {
        if (!names.insert(entry.name).second) problems.push_back("setup: duplicate name '" + entry.name + "'");
    }
    for (const auto& entry : setup) {
        const std::string at = "setup entry '" + entry.name + "'";
        if (!cfg.classTable().contains(entry.class_name)) {
            problems.push_back(at + ": unknown class '" + entry.class_name + "'");
            continue;
        }
        for (const auto& link : entry.links) {
            if (!names.contains(link)) problems.push_back(at + ": link to unknown object '" + link + "'");
        }
        if (const auto* active = std::get_if<Active>(&entry.kind)) {
            if (active->prio < 0) problems.push_back(at + ": negative priority");
            if (!active->op.params.empty()) problems.push_back(at + ": start operation must take no parameters");
            bool implemented = false;
            try {
                for (const auto& cls : superChain(entry.class_name, cfg.subclassRel())) {
                    auto ops = cfg.methMap().find(cls);
                    if (ops != cfg.methMap().end() && ops->second.contains(active->op)) implemented = true;
                }
            } catch (const VmError& e) {
                problems.push_back(at + ": " + e.what());
            }
            if (!implemented) {
                problems.push_back(at + ": class " + entry.class_name + " does not implement " +
                                   toString(active->op));
            }
        }
    }
    return problems;
}

SimState initialState(const Config& cfg, const Setup& setup) {
    requireValidModel(cfg.model);
    auto problems = validateSetup(cfg, setup);
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid setup:";
        for (const auto& p : problems) msg << "\n  " << p;
        throw VmError(ErrorKind::Validation, msg.str());
    }

    SimState s = emptyState();
    s.now = kSetupStep;
    std::map<std::string, ObjectId> byName;
    for (const auto& entry : setup) {
        byName[entry.name] = allocObject(s, flattenedClass(cfg.model, entry.class_name));
    }
    for (const auto& entry : setup) {
        ObjectId self = byName.at(entry.name);
        for (const auto& link : entry.links) {
            ObjectId target = byName.at(link);
            putAttr(s, self, link, OidVal{target}, ClassType{s.ds.find(target)->class_name});
        }
    }
    for (const auto& entry : setup) {
        const auto* active = std::get_if<Active>(&entry.kind);
        if (!active) continue;
        ObjectId self = byName.at(entry.name);
        const MethodDef& m = cfg.dispatcher(cfg.subclassRel(), cfg.methMap(), s.ds, self, active->op);
        ThreadId tid = reserveThreadId(s);
        pushFrame(s, self, tid, frameFor(self, m, Record{}, std::nullopt));
        Thread& th = threadOf(s, self, tid);
        th.base_prio = active->prio;
        th.created = kSetupStep;
    }
    s.now = 0;
    return s;
}

RunResult runMain(const Config& cfg, const Setup& setup, const RunOptions& options) {
    return run(TimesMap{}, 0, cfg, initialState(cfg, setup), options);
}

std::vector<ObjectRunnable> collectRunnables(const RunnablesSel& sel, const SimState& s) {
    std::vector<ObjectRunnable> out;
    for (const auto& [oid, entry] : s.ds.objects) {
        for (const auto& r : sel(s, oid)) out.push_back(ObjectRunnable{oid, r.tid, r.prio, r.created});
    }
    return out;
}

std::vector<RunnableEntry> addLastExecInfo(const TimesMap& times,
                                           std::span<const ObjectRunnable> runnables) {
    std::vector<RunnableEntry> out;
    out.reserve(runnables.size());
    for (const auto& r : runnables) {
        auto it = times.find(r.tid);
        out.push_back(RunnableEntry{r.oid, r.tid, r.prio, it == times.end() ? r.created : it->second});
    }
    return out;
}

std::optional<EventKind> consumeEvent(SimState& s, const Config& cfg, ObjectId oid, ThreadId tid) {
    const Thread* existing = findThread(s, oid, tid);
    if (!existing) {
        // A pseudo-thread: materialize the handler of the event that reserved tid.
        auto event = takeMatchingEvent(s.es, oid, [&](const Event& e) {
            return e.kind != EventKind::Return && e.handler == tid;
        });
        if (!event) {
            throw VmError(ErrorKind::Internal, where(oid, tid) + ": no pending event for scheduled handler");
        }
        const Message& msg = event->msg;
        std::optional<CallerRef> caller;
        const OpSig* op = nullptr;
        const Record* args = nullptr;
        Prio prio = 0;
        if (const auto* call = std::get_if<CallPayload>(&msg.payload)) {
            caller = CallerRef{msg.sender, msg.sender_thread, call->result_local};
            op = &call->op;
            args = &call->args;
            prio = call->prio;
        } else {
            const auto& sig = std::get<SignalPayload>(msg.payload);
            op = &sig.op;
            args = &sig.args;
            prio = sig.prio;
        }
        const MethodDef& m = cfg.dispatcher(cfg.subclassRel(), cfg.methMap(), s.ds, oid, *op);
        Frame f = frameFor(oid, m, *args, std::move(caller));
        auto& threads = s.cs.threads[oid];
        Thread th{tid, prio, ThreadStatus::Ready, {}, event->sent_at};
        th.frames.push_back(std::move(f));
        threads.emplace(tid, std::move(th));
        return event->kind;
    }
    if (existing->status == ThreadStatus::Waiting) {
        auto event = takeMatchingEvent(s.es, oid, [&](const Event& e) {
            const auto* ret = std::get_if<ReturnPayload>(&e.msg.payload);
            return ret && ret->caller_thread == tid;
        });
        if (!event) return std::nullopt;
        auto& ret = std::get<ReturnPayload>(event->msg.payload);
        Thread& th = threadOf(s, oid, tid);
        Record& locals = th.frames.back().locals;
        if (Value* slot = locals.find(ret.result_local)) {
            if (!sameKind(*slot, ret.value)) {
                throw VmError(ErrorKind::TypeMismatch, where(oid, tid) + ": return value " +
                                                           toString(ret.value) + " does not fit local '" +
                                                           ret.result_local + "'");
            }
            *slot = std::move(ret.value);
        } else {
            locals.append(ret.result_local, std::move(ret.value));
        }
        th.status = ThreadStatus::Ready;
        return EventKind::Return;
    }
    return std::nullopt;
}

void exec(ObjectId oid, ThreadId tid, SimState& s, const Config& cfg, StepInfo* info) {
    std::size_t pc = 0;
    try {
        auto consumed = consumeEvent(s, cfg, oid, tid);
        const Thread& th = threadOf(s, oid, tid);
        if (th.status != ThreadStatus::Ready) {
            throw VmError(ErrorKind::Internal, "scheduled thread is still waiting");
        }
        const Frame& frame = th.frames.back();
        pc = frame.pc;
        const bool hadCaller = frame.caller.has_value();
        const MethodDef& m = cfg.dispatcher(cfg.subclassRel(), cfg.methMap(), s.ds, oid, frame.op);
        if (pc >= m.body.size()) {
            throw VmError(ErrorKind::FellOffEnd, "reached end of " + toString(m.implements) + " without return");
        }
        const Action& action = m.body[pc];
        interpret(action, s, oid, tid, cfg);
        if (info) {
            info->oid = oid;
            info->tid = tid;
            info->pc = pc;
            info->action = &action;
            info->consumed = consumed;
            info->sent = sentBy(action, hadCaller);
            info->after = &s;
        }
    } catch (const VmError& e) {
        throw VmError(e.kind(), where(oid, tid) + ", pc " + std::to_string(pc) + ": " + e.what());
    }
}

RunResult run(TimesMap times, Time t, const Config& cfg, SimState state, const RunOptions& options) {
    for (;;) {
        auto runnables = collectRunnables(cfg.runnables, state);
        if (runnables.empty()) {
            RunResult result{std::move(state), t, HaltReason::AllDone, {}};
            for (const auto& [oid, threads] : result.final_state.cs.threads) {
                for (const auto& [tid, th] : threads) {
                    if (th.status == ThreadStatus::Waiting) result.waiting.push_back(Scheduled{oid, tid});
                }
            }
            if (!result.waiting.empty()) result.halt = HaltReason::Blocked;
            return result;
        }
        if (options.max_steps && t >= *options.max_steps) {
            return RunResult{std::move(state), t, HaltReason::StepLimit, {}};
        }
        auto enriched = addLastExecInfo(times, runnables);
        Scheduled next = cfg.scheduler(t, enriched);
        bool offered = false;
        for (const auto& r : enriched) offered = offered || (r.oid == next.oid && r.tid == next.tid);
        if (!offered) throw VmError(ErrorKind::Internal, "scheduler picked a thread that was not offered");

        state.now = t;
        StepInfo info;
        info.t = t;
        exec(next.oid, next.tid, state, cfg, options.on_step ? &info : nullptr);
        if (options.on_step) options.on_step(info);
        times[next.tid] = t;
        ++t;
    }
}

}  // namespace smvm
