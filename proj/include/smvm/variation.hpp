#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smvm/state.hpp"
#include "smvm/universe.hpp"

namespace smvm {

/// One thread offered by a runnables selector. `created` is used as the last
/// execution time for threads that have not run yet.
struct Runnable {
    ThreadId tid;
    Prio prio = 0;
    Time created = 0;
    bool operator==(const Runnable&) const = default;
};

/// A runnable enriched with its object and last execution time.
struct RunnableEntry {
    ObjectId oid;
    ThreadId tid;
    Prio prio = 0;
    Time last_exec = 0;
    bool operator==(const RunnableEntry&) const = default;
};

struct Scheduled {
    ObjectId oid;
    ThreadId tid;
    bool operator==(const Scheduled&) const = default;
};

using RunnablesSel = std::function<std::vector<Runnable>(const SimState&, ObjectId)>;
using Scheduler = std::function<Scheduled(Time, std::span<const RunnableEntry>)>;
using MethodDispatcher = std::function<const MethodDef&(
    const SubclassRel&, const MethMap&, const DataStore&, ObjectId, const OpSig&)>;
using Medium = std::function<void(EventStore&, Event)>;

// Runnables selection ------------------------------------------------------

/// Run-to-completion: a new Call/Signal handler is offered only while the
/// object has no live thread. Blocked callers whose return value has arrived
/// are always offered.
std::vector<Runnable> runnablesRTC(const SimState& s, ObjectId oid);

/// Concurrent: every buffered Call/Signal event is offered as a handler.
std::vector<Runnable> runnablesCONC(const SimState& s, ObjectId oid);

// Scheduling ---------------------------------------------------------------

/// Least recently executed entry; ties go to the smallest (oid, tid).
Scheduled scheduleRR(Time now, std::span<const RunnableEntry> runnables);

/// Highest effective priority `prio + (now - last_exec)`; ties go to the
/// smallest last_exec, then the smallest (oid, tid).
Scheduled schedulePRIO(Time now, std::span<const RunnableEntry> runnables);

// Dispatch and medium -------------------------------------------------------

/// Looks the operation up in the object's class, then along its superclass
/// chain. Throws VmError(MethodNotFound) if no class implements it.
const MethodDef& dispatchSingle(const SubclassRel& scl, const MethMap& mm, const DataStore& ds,
                                ObjectId oid, const OpSig& op);

/// Lossless, order-preserving, zero-latency delivery.
void deliverReliable(EventStore& es, Event e);

// Config ---------------------------------------------------------------------

enum class RunnablesKind { Rtc, Conc };
enum class SchedulerKind { RoundRobin, Priority };
enum class DispatchKind { Single };
enum class MediumKind { Reliable };

/// Named strategy choices, as written in model files and on the command line.
struct Selections {
    RunnablesKind runnables = RunnablesKind::Conc;
    SchedulerKind scheduler = SchedulerKind::RoundRobin;
    DispatchKind dispatch = DispatchKind::Single;
    MediumKind medium = MediumKind::Reliable;
    bool operator==(const Selections&) const = default;
};

std::string_view toString(RunnablesKind k);
std::string_view toString(SchedulerKind k);
std::string_view toString(DispatchKind k);
std::string_view toString(MediumKind k);

std::optional<RunnablesKind> parseRunnablesKind(std::string_view name);
std::optional<SchedulerKind> parseSchedulerKind(std::string_view name);
std::optional<DispatchKind> parseDispatchKind(std::string_view name);
std::optional<MediumKind> parseMediumKind(std::string_view name);

struct Config {
    MethodDispatcher dispatcher;
    RunnablesSel runnables;
    Scheduler scheduler;
    Medium medium;
    Model model;

    const SubclassRel& subclassRel() const { return model.subclasses; }
    const MethMap& methMap() const { return model.methods; }
    const ClassTable& classTable() const { return model.classes; }
};

Config makeConfig(Model model, const Selections& selections);

}  // namespace smvm
