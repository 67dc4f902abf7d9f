#include "smvm/state.hpp"

#include <set>

#include "overloaded.hpp"
#include "smvm/error.hpp"

namespace smvm {

using detail::Overloaded;

namespace {

std::string oidText(ObjectId oid) { return "object " + std::to_string(oid.value); }

ObjectEntry& entryOf(SimState& s, ObjectId oid) {
    ObjectEntry* entry = s.ds.find(oid);
    if (!entry) throw VmError(ErrorKind::DanglingReference, oidText(oid) + " does not exist");
    return *entry;
}

const ObjectEntry& entryOf(const SimState& s, ObjectId oid) {
    const ObjectEntry* entry = s.ds.find(oid);
    if (!entry) throw VmError(ErrorKind::DanglingReference, oidText(oid) + " does not exist");
    return *entry;
}

std::size_t attrIndex(const ObjectEntry& entry, ObjectId oid, const std::string& name) {
    for (std::size_t i = 0; i < entry.attrs.fields.size(); ++i) {
        if (entry.attrs.fields[i].name == name) return i;
    }
    throw VmError(ErrorKind::AttributeNotFound,
                  entry.class_name + "(" + oidText(oid) + ") has no attribute '" + name + "'");
}

}  // namespace

const char* toString(ThreadStatus status) {
    switch (status) {
        case ThreadStatus::Ready: return "ready";
        case ThreadStatus::Waiting: return "waiting";
        case ThreadStatus::Terminated: return "terminated";
    }
    return "?";
}

const char* toString(EventKind kind) {
    switch (kind) {
        case EventKind::Call: return "CallEvent";
        case EventKind::Return: return "ReturnEvent";
        case EventKind::Signal: return "SignalEvent";
    }
    return "?";
}

const ObjectEntry* DataStore::find(ObjectId oid) const {
    auto it = objects.find(oid);
    return it == objects.end() ? nullptr : &it->second;
}

ObjectEntry* DataStore::find(ObjectId oid) {
    auto it = objects.find(oid);
    return it == objects.end() ? nullptr : &it->second;
}

Event makeEvent(Message msg, std::uint64_t seq, Time sent_at, std::optional<ThreadId> handler) {
    EventKind kind = std::visit(Overloaded{
                                    [](const CallPayload&) { return EventKind::Call; },
                                    [](const ReturnPayload&) { return EventKind::Return; },
                                    [](const SignalPayload&) { return EventKind::Signal; },
                                },
                                msg.payload);
    return Event{kind, std::move(msg), seq, sent_at, handler};
}

SimState emptyState() { return SimState{}; }

ObjectId allocObject(SimState& s, const ClassDef& cls) {
    // Objects are never deleted, so the count is the next free id.
    ObjectId oid{static_cast<std::int64_t>(s.ds.objects.size())};
    ObjectEntry entry{cls.name, {}, {}};
    for (const auto& attr : cls.attributes) {
        entry.attrs.append(attr.name, attr.init);
        entry.attr_types.push_back(attr.type);
    }
    s.ds.objects.emplace(oid, std::move(entry));
    s.cs.threads.emplace(oid, ThreadMap{});
    s.es.queues.emplace(oid, std::deque<Event>{});
    return oid;
}

const Value& readAttr(const SimState& s, ObjectId oid, const std::string& name) {
    const ObjectEntry& entry = entryOf(s, oid);
    return entry.attrs.fields[attrIndex(entry, oid, name)].value;
}

void writeAttr(SimState& s, ObjectId oid, const std::string& name, Value value,
               const SubclassRel& scl) {
    ObjectEntry& entry = entryOf(s, oid);
    std::size_t i = attrIndex(entry, oid, name);
    if (!conformsTo(value, entry.attr_types[i], s.ds, scl)) {
        throw VmError(ErrorKind::TypeMismatch, "cannot store " + toString(value) + " in attribute '" +
                                                   name + "' of type " + toString(entry.attr_types[i]));
    }
    entry.attrs.fields[i].value = std::move(value);
}

void putAttr(SimState& s, ObjectId oid, const std::string& name, Value value, TypeRef type) {
    ObjectEntry& entry = entryOf(s, oid);
    for (std::size_t i = 0; i < entry.attrs.fields.size(); ++i) {
        if (entry.attrs.fields[i].name == name) {
            entry.attrs.fields[i].value = std::move(value);
            entry.attr_types[i] = std::move(type);
            return;
        }
    }
    entry.attrs.append(name, std::move(value));
    entry.attr_types.push_back(std::move(type));
}

void enqueueEvent(EventStore& es, Event e) {
    auto it = es.queues.find(e.msg.receiver);
    if (it == es.queues.end()) {
        throw VmError(ErrorKind::Delivery,
                      "cannot deliver " + std::string(toString(e.kind)) + " to " + oidText(e.msg.receiver));
    }
    it->second.push_back(std::move(e));
}

std::optional<Event> takeMatchingEvent(EventStore& es, ObjectId oid, const EventFilter& filter) {
    auto it = es.queues.find(oid);
    if (it == es.queues.end()) return std::nullopt;
    auto& queue = it->second;
    for (auto e = queue.begin(); e != queue.end(); ++e) {
        if (filter(*e)) {
            Event out = std::move(*e);
            queue.erase(e);
            return out;
        }
    }
    return std::nullopt;
}

ThreadId reserveThreadId(SimState& s) { return ThreadId{s.next_thread++}; }

const Thread* findThread(const SimState& s, ObjectId oid, ThreadId tid) {
    auto obj = s.cs.threads.find(oid);
    if (obj == s.cs.threads.end()) return nullptr;
    auto th = obj->second.find(tid);
    return th == obj->second.end() ? nullptr : &th->second;
}

const Thread& threadOf(const SimState& s, ObjectId oid, ThreadId tid) {
    const Thread* th = findThread(s, oid, tid);
    if (!th) {
        throw VmError(ErrorKind::Internal, "thread " + std::to_string(tid.value) + " of " +
                                               oidText(oid) + " does not exist");
    }
    return *th;
}

Thread& threadOf(SimState& s, ObjectId oid, ThreadId tid) {
    return const_cast<Thread&>(threadOf(static_cast<const SimState&>(s), oid, tid));
}

void pushFrame(SimState& s, ObjectId oid, ThreadId tid, Frame frame) {
    if (!s.ds.find(oid)) throw VmError(ErrorKind::Internal, "push frame on missing " + oidText(oid));
    auto& threads = s.cs.threads[oid];
    auto it = threads.find(tid);
    if (it == threads.end()) {
        it = threads.emplace(tid, Thread{tid, 0, ThreadStatus::Ready, {}, s.now}).first;
    }
    it->second.frames.push_back(std::move(frame));
}

Frame popFrame(SimState& s, ObjectId oid, ThreadId tid) {
    Thread& th = threadOf(s, oid, tid);
    if (th.frames.empty()) {
        throw VmError(ErrorKind::Internal, "pop on empty stack of thread " + std::to_string(tid.value));
    }
    Frame top = std::move(th.frames.back());
    th.frames.pop_back();
    if (th.frames.empty()) s.cs.threads[oid].erase(tid);
    return top;
}

std::vector<std::string> validateState(const SimState& s) {
    std::vector<std::string> problems;
    auto refOk = [&](const Value& v) {
        const auto* o = v.as<OidVal>();
        return !o || s.ds.find(o->oid) != nullptr;
    };
    for (const auto& [oid, entry] : s.ds.objects) {
        if (entry.attrs.size() != entry.attr_types.size()) {
            problems.push_back(oidText(oid) + ": attribute types out of sync");
        }
        std::set<std::string> names;
        for (std::size_t i = 0; i < entry.attrs.fields.size(); ++i) {
            const auto& f = entry.attrs.fields[i];
            if (!names.insert(f.name).second) problems.push_back(oidText(oid) + ": duplicate attribute " + f.name);
            if (!refOk(f.value)) problems.push_back(oidText(oid) + ": dangling reference in " + f.name);
            if (i >= entry.attr_types.size() || !refOk(f.value)) continue;
            // Subclass conformance needs the model; objects only check the family here.
            bool typed = std::holds_alternative<ClassType>(entry.attr_types[i])
                             ? (f.value.is<OidVal>() || f.value.is<NullOid>())
                             : conformsTo(f.value, entry.attr_types[i], s.ds, {});
            if (!typed) problems.push_back(oidText(oid) + ": attribute " + f.name + " has wrong type");
        }
    }
    for (const auto& [oid, threads] : s.cs.threads) {
        if (!s.ds.find(oid)) problems.push_back("control store has unknown " + oidText(oid));
        for (const auto& [tid, th] : threads) {
            if (th.id != tid) problems.push_back("thread key mismatch at " + std::to_string(tid.value));
            if (th.frames.empty()) problems.push_back("thread " + std::to_string(tid.value) + " has no frames");
            if (th.status == ThreadStatus::Terminated) {
                problems.push_back("terminated thread " + std::to_string(tid.value) + " still stored");
            }
            if (tid.value >= s.next_thread) problems.push_back("thread id beyond counter");
            for (const auto& f : th.frames) {
                if (f.self != oid) problems.push_back("frame self mismatch in thread " + std::to_string(tid.value));
            }
        }
    }
    for (const auto& [oid, queue] : s.es.queues) {
        if (!s.ds.find(oid)) problems.push_back("event store has unknown " + oidText(oid));
        for (std::size_t i = 1; i < queue.size(); ++i) {
            if (queue[i - 1].seq >= queue[i].seq) problems.push_back(oidText(oid) + ": queue out of order");
        }
        for (const auto& e : queue) {
            if (e.msg.receiver != oid) problems.push_back(oidText(oid) + ": event for another receiver");
        }
    }
    return problems;
}

}  // namespace smvm
