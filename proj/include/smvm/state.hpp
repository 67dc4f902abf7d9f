#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smvm/universe.hpp"
#include "smvm/value.hpp"

namespace smvm {

// ---------------------------------------------------------------------------
// Data store

struct ObjectEntry {
    std::string class_name;
    Record attrs;
    /// Declared type of each attribute, parallel to attrs.fields.
    std::vector<TypeRef> attr_types;
    bool operator==(const ObjectEntry&) const = default;
};

struct DataStore {
    std::map<ObjectId, ObjectEntry> objects;

    const ObjectEntry* find(ObjectId oid) const;
    ObjectEntry* find(ObjectId oid);
    bool operator==(const DataStore&) const = default;
};

// ---------------------------------------------------------------------------
// Control store

/// Who receives the return value of a frame. Frames of top-level active
/// threads and of signal handlers have no caller.
struct CallerRef {
    ObjectId oid;
    ThreadId tid;
    std::string result_local;
    bool operator==(const CallerRef&) const = default;
};

struct Frame {
    ObjectId self;
    OpSig op;
    Record params;
    Record locals;
    std::size_t pc = 0;
    std::optional<CallerRef> caller;
    bool operator==(const Frame&) const = default;
};

enum class ThreadStatus { Ready, Waiting, Terminated };

const char* toString(ThreadStatus status);

struct Thread {
    ThreadId id;
    Prio base_prio = 0;
    ThreadStatus status = ThreadStatus::Ready;
    std::vector<Frame> frames;  // back() is the top of the stack
    /// Step at which the thread came into existence; stands in for the last
    /// execution time until the thread first runs.
    Time created = 0;
    bool operator==(const Thread&) const = default;
};

using ThreadMap = std::map<ThreadId, Thread>;

struct ControlStore {
    std::map<ObjectId, ThreadMap> threads;
    bool operator==(const ControlStore&) const = default;
};

// ---------------------------------------------------------------------------
// Messages, events and the event store

struct CallPayload {
    OpSig op;
    Record args;
    std::string result_local;
    Prio prio = 0;
    bool operator==(const CallPayload&) const = default;
};

/// Routed back to the blocked caller thread, which binds `value` to
/// `result_local`.
struct ReturnPayload {
    Value value;
    ThreadId caller_thread;
    std::string result_local;
    bool operator==(const ReturnPayload&) const = default;
};

struct SignalPayload {
    OpSig op;
    Record args;
    Prio prio = 0;
    bool operator==(const SignalPayload&) const = default;
};

struct Message {
    ObjectId sender;
    ThreadId sender_thread;
    ObjectId receiver;
    std::variant<CallPayload, ReturnPayload, SignalPayload> payload;
    bool operator==(const Message&) const = default;
};

enum class EventKind { Call, Return, Signal };

const char* toString(EventKind kind);

struct Event {
    EventKind kind = EventKind::Call;
    Message msg;
    std::uint64_t seq = 0;
    Time sent_at = 0;
    /// Thread id reserved for the handler of a Call/Signal event. The
    /// runnables selectors offer this id before the thread exists.
    std::optional<ThreadId> handler;
    bool operator==(const Event&) const = default;
};

/// Builds an event of the kind matching the payload.
Event makeEvent(Message msg, std::uint64_t seq, Time sent_at,
                std::optional<ThreadId> handler = std::nullopt);

struct EventStore {
    std::map<ObjectId, std::deque<Event>> queues;
    bool operator==(const EventStore&) const = default;
};

// ---------------------------------------------------------------------------
// Simulation state

struct SimState {
    DataStore ds;
    ControlStore cs;
    EventStore es;

    // Bookkeeping: current step and the global id/sequence counters.
    Time now = 0;
    std::int64_t next_thread = 0;
    std::uint64_t next_seq = 0;

    bool operator==(const SimState&) const = default;
};

SimState emptyState();

/// Allocates the next object id with `cls`'s attributes at their init
/// values, and registers an empty thread map and event queue for it.
ObjectId allocObject(SimState& s, const ClassDef& cls);

const Value& readAttr(const SimState& s, ObjectId oid, const std::string& name);

/// Writes one attribute after checking the value against the declared type.
void writeAttr(SimState& s, ObjectId oid, const std::string& name, Value value,
               const SubclassRel& scl = {});

/// Adds an attribute if it does not exist, otherwise overwrites it. The
/// declared type is replaced as well. Used for setup links.
void putAttr(SimState& s, ObjectId oid, const std::string& name, Value value, TypeRef type);

/// Appends `e` to the queue of its receiver.
void enqueueEvent(EventStore& es, Event e);

using EventFilter = std::function<bool(const Event&)>;

/// Removes and returns the oldest event of `oid` accepted by `filter`.
std::optional<Event> takeMatchingEvent(EventStore& es, ObjectId oid, const EventFilter& filter);

ThreadId reserveThreadId(SimState& s);

Thread& threadOf(SimState& s, ObjectId oid, ThreadId tid);
const Thread& threadOf(const SimState& s, ObjectId oid, ThreadId tid);
const Thread* findThread(const SimState& s, ObjectId oid, ThreadId tid);

/// Pushes a frame, creating a Ready thread entry when none exists yet.
void pushFrame(SimState& s, ObjectId oid, ThreadId tid, Frame frame);

/// Pops the top frame. Popping the last frame terminates the thread and
/// removes it from the control store.
Frame popFrame(SimState& s, ObjectId oid, ThreadId tid);

/// Cross-store consistency check. Returns one message per violation.
std::vector<std::string> validateState(const SimState& s);

}  // namespace smvm
