#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "smvm/state.hpp"
#include "smvm/variation.hpp"

namespace smvm {

struct Passive {
    bool operator==(const Passive&) const = default;
};

struct Active {
    OpSig op;
    Prio prio = 0;
    bool operator==(const Active&) const = default;
};

using OKind = std::variant<Active, Passive>;

struct SetupEntry {
    std::string name;
    std::string class_name;
    OKind kind;
    std::vector<std::string> links;
    bool operator==(const SetupEntry&) const = default;
};

/// Initial object network. Objects are allocated in list order.
using Setup = std::vector<SetupEntry>;

/// Last execution step per thread.
using TimesMap = std::map<ThreadId, Time>;

enum class HaltReason { AllDone, Blocked, StepLimit };

const char* toString(HaltReason reason);

struct RunResult {
    SimState final_state;
    Time time = 0;
    HaltReason halt = HaltReason::AllDone;
    /// Threads still blocked on a call when the run stopped, by (oid, tid).
    std::vector<Scheduled> waiting;
};

/// What one exec step did; handed to the step observer.
struct StepInfo {
    Time t = 0;
    ObjectId oid;
    ThreadId tid;
    std::size_t pc = 0;
    const Action* action = nullptr;
    /// Event removed from the object's buffer by this step, if any.
    std::optional<EventKind> consumed;
    /// Event sent by the interpreted action, if any.
    std::optional<EventKind> sent;
    const SimState* after = nullptr;
};

using StepObserver = std::function<void(const StepInfo&)>;

struct RunOptions {
    std::optional<Time> max_steps;
    StepObserver on_step;
};

struct ObjectRunnable {
    ObjectId oid;
    ThreadId tid;
    Prio prio = 0;
    Time created = 0;
    bool operator==(const ObjectRunnable&) const = default;
};

/// Checks setup entries against the model. Returns one message per problem.
std::vector<std::string> validateSetup(const Config& cfg, const Setup& setup);

/// Builds the initial state for `setup` without running it. Threads created
/// here carry creation step -1, i.e. they exist before the first step.
SimState initialState(const Config& cfg, const Setup& setup);

RunResult runMain(const Config& cfg, const Setup& setup, const RunOptions& options = {});

/// The main loop: select runnables, schedule one, exec it, repeat until no
/// runnables remain or the step limit is hit.
RunResult run(TimesMap times, Time t, const Config& cfg, SimState state,
              const RunOptions& options = {});

/// `sel(state, oid)` for every object in ascending oid order.
std::vector<ObjectRunnable> collectRunnables(const RunnablesSel& sel, const SimState& s);

std::vector<RunnableEntry> addLastExecInfo(const TimesMap& times,
                                           std::span<const ObjectRunnable> runnables);

/// Removes the event (if any) that thread `tid` is about to handle and
/// prepares its context: materializes a handler thread for a Call/Signal
/// event or resumes a Waiting thread with its return value.
std::optional<EventKind> consumeEvent(SimState& s, const Config& cfg, ObjectId oid, ThreadId tid);

/// One atomic step: consumeEvent, then interpret the action at the thread's pc.
void exec(ObjectId oid, ThreadId tid, SimState& s, const Config& cfg, StepInfo* info = nullptr);

}  // namespace smvm
