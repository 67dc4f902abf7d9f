#include "smvm/variation.hpp"

#include <algorithm>
#include <tuple>

#include "smvm/error.hpp"

namespace smvm {

namespace {

bool hasReturnFor(const std::deque<Event>& queue, ThreadId tid) {
    return std::any_of(queue.begin(), queue.end(), [&](const Event& e) {
        const auto* ret = std::get_if<ReturnPayload>(&e.msg.payload);
        return ret && ret->caller_thread == tid;
    });
}

Prio eventPrio(const Event& e) {
    if (const auto* call = std::get_if<CallPayload>(&e.msg.payload)) return call->prio;
    if (const auto* sig = std::get_if<SignalPayload>(&e.msg.payload)) return sig->prio;
    return 0;
}

bool startsThread(const Event& e) { return e.kind == EventKind::Call || e.kind == EventKind::Signal; }

/// Ready threads plus Waiting threads whose return value has arrived.
std::vector<Runnable> liveRunnables(const SimState& s, ObjectId oid, const std::deque<Event>& queue,
                                    bool& anyLive) {
    std::vector<Runnable> out;
    anyLive = false;
    auto it = s.cs.threads.find(oid);
    if (it == s.cs.threads.end()) return out;
    for (const auto& [tid, th] : it->second) {
        anyLive = true;
        if (th.status == ThreadStatus::Ready ||
            (th.status == ThreadStatus::Waiting && hasReturnFor(queue, tid))) {
            out.push_back(Runnable{tid, th.base_prio, th.created});
        }
    }
    return out;
}

const std::deque<Event>& queueOf(const SimState& s, ObjectId oid) {
    static const std::deque<Event> empty;
    auto it = s.es.queues.find(oid);
    return it == s.es.queues.end() ? empty : it->second;
}

Runnable pseudoThread(const Event& e) {
    if (!e.handler) throw VmError(ErrorKind::Internal, "call/signal event without reserved handler id");
    return Runnable{*e.handler, eventPrio(e), e.sent_at};
}

void requireNonEmpty(std::span<const RunnableEntry> runnables) {
    if (runnables.empty()) throw VmError(ErrorKind::Internal, "scheduler called with no runnables");
}

}  // namespace

std::vector<Runnable> runnablesRTC(const SimState& s, ObjectId oid) {
    const auto& queue = queueOf(s, oid);
    bool anyLive = false;
    auto out = liveRunnables(s, oid, queue, anyLive);
    if (!anyLive) {
        auto oldest = std::find_if(queue.begin(), queue.end(), startsThread);
        if (oldest != queue.end()) out.push_back(pseudoThread(*oldest));
    }
    return out;
}

std::vector<Runnable> runnablesCONC(const SimState& s, ObjectId oid) {
    const auto& queue = queueOf(s, oid);
    bool anyLive = false;
    auto out = liveRunnables(s, oid, queue, anyLive);
    for (const auto& e : queue) {
        if (startsThread(e)) out.push_back(pseudoThread(e));
    }
    return out;
}

Scheduled scheduleRR(Time /*now*/, std::span<const RunnableEntry> runnables) {
    requireNonEmpty(runnables);
    auto best = std::min_element(runnables.begin(), runnables.end(),
                                 [](const RunnableEntry& a, const RunnableEntry& b) {
                                     return std::tie(a.last_exec, a.oid, a.tid) <
                                            std::tie(b.last_exec, b.oid, b.tid);
                                 });
    return Scheduled{best->oid, best->tid};
}

Scheduled schedulePRIO(Time now, std::span<const RunnableEntry> runnables) {
    requireNonEmpty(runnables);
    auto effective = [now](const RunnableEntry& e) { return e.prio + (now - e.last_exec); };
    auto best = std::min_element(runnables.begin(), runnables.end(),
                                 [&](const RunnableEntry& a, const RunnableEntry& b) {
                                     // Higher effective priority sorts first.
                                     return std::make_tuple(-effective(a), a.last_exec, a.oid, a.tid) <
                                            std::make_tuple(-effective(b), b.last_exec, b.oid, b.tid);
                                 });
    return Scheduled{best->oid, best->tid};
}

const MethodDef& dispatchSingle(const SubclassRel& scl, const MethMap& mm, const DataStore& ds,
                                ObjectId oid, const OpSig& op) {
    const ObjectEntry* entry = ds.find(oid);
    if (!entry) {
        throw VmError(ErrorKind::DanglingReference,
                      "dispatch on missing object " + std::to_string(oid.value));
    }
    for (const auto& cls : superChain(entry->class_name, scl)) {
        auto ops = mm.find(cls);
        if (ops == mm.end()) continue;
        auto m = ops->second.find(op);
        if (m != ops->second.end()) return m->second;
    }
    throw VmError(ErrorKind::MethodNotFound,
                  "class " + entry->class_name + " does not implement " + toString(op));
}

void deliverReliable(EventStore& es, Event e) { enqueueEvent(es, std::move(e)); }

std::string_view toString(RunnablesKind k) { return k == RunnablesKind::Rtc ? "rtc" : "conc"; }
std::string_view toString(SchedulerKind k) { return k == SchedulerKind::RoundRobin ? "rr" : "prio"; }
std::string_view toString(DispatchKind) { return "single"; }
std::string_view toString(MediumKind) { return "reliable"; }

std::optional<RunnablesKind> parseRunnablesKind(std::string_view name) {
    if (name == "rtc") return RunnablesKind::Rtc;
    if (name == "conc") return RunnablesKind::Conc;
    return std::nullopt;
}

std::optional<SchedulerKind> parseSchedulerKind(std::string_view name) {
    if (name == "rr") return SchedulerKind::RoundRobin;
    if (name == "prio") return SchedulerKind::Priority;
    return std::nullopt;
}

std::optional<DispatchKind> parseDispatchKind(std::string_view name) {
    if (name == "single") return DispatchKind::Single;
    return std::nullopt;
}

std::optional<MediumKind> parseMediumKind(std::string_view name) {
    if (name == "reliable") return MediumKind::Reliable;
    return std::nullopt;
}

Config makeConfig(Model model, const Selections& selections) {
    Config cfg;
    cfg.model = std::move(model);
    cfg.runnables = selections.runnables == RunnablesKind::Rtc ? RunnablesSel(runnablesRTC)
                                                               : RunnablesSel(runnablesCONC);
    cfg.scheduler = selections.scheduler == SchedulerKind::RoundRobin ? Scheduler(scheduleRR)
                                                                      : Scheduler(schedulePRIO);
    cfg.dispatcher = dispatchSingle;
    cfg.medium = deliverReliable;
    return cfg;
}

}  // namespace smvm
