#include <doctest.h>

#include "smvm/error.hpp"
#include "smvm/variation.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace smvm;

namespace {

const ClassDef kBuffer{"Buffer", {AttrDecl{"data", IntType{}, intVal(-1)}}};
const OpSig kPut{"put", {IntType{}}, VoidType{}};
const OpSig kRun{"run", {}, VoidType{}};

/// Sends a Call event to `to` the way the interpreter does: the handler id
/// is reserved at send time.
ThreadId sendCall(SimState& s, ObjectId to, Prio prio) {
    ThreadId handler = reserveThreadId(s);
    Message msg{ObjectId{0}, ThreadId{0}, to, CallPayload{kPut, {}, "r", prio}};
    enqueueEvent(s.es, makeEvent(std::move(msg), s.next_seq++, s.now, handler));
    return handler;
}

ThreadId startThread(SimState& s, ObjectId o, Prio prio, ThreadStatus status = ThreadStatus::Ready) {
    ThreadId t = reserveThreadId(s);
    pushFrame(s, o, t, Frame{o, kRun, {}, {}, 0, {}});
    threadOf(s, o, t).base_prio = prio;
    threadOf(s, o, t).status = status;
    return t;
}

void sendReturn(SimState& s, ObjectId to, ThreadId caller) {
    Message msg{ObjectId{1}, ThreadId{9}, to, ReturnPayload{voidVal(), caller, "r"}};
    enqueueEvent(s.es, makeEvent(std::move(msg), s.next_seq++, s.now));
}

std::vector<ThreadId> tids(const std::vector<Runnable>& rs) {
    std::vector<ThreadId> out;
    for (const auto& r : rs) out.push_back(r.tid);
    return out;
}

RunnableEntry entry(std::int64_t oid, std::int64_t tid, Prio prio, Time last) {
    return RunnableEntry{ObjectId{oid}, ThreadId{tid}, prio, last};
}

Scheduled at(std::int64_t oid, std::int64_t tid) { return Scheduled{ObjectId{oid}, ThreadId{tid}}; }

}  // namespace

TEST_CASE("RTC defers new events while the object has a live thread") {
    SimState s = emptyState();
    ObjectId o = allocObject(s, kBuffer);

    SUBCASE("ready thread and a buffered call") {
        ThreadId t1 = startThread(s, o, 1);
        sendCall(s, o, 1);
        CHECK(tids(runnablesRTC(s, o)) == std::vector<ThreadId>{t1});
    }
    SUBCASE("no threads: the oldest call becomes a pseudo-thread") {
        ThreadId h1 = sendCall(s, o, 1);
        sendCall(s, o, 4);
        auto rs = runnablesRTC(s, o);
        REQUIRE(rs.size() == 1);
        CHECK(rs[0].tid == h1);
        CHECK(rs[0].prio == 1);
        CHECK(findThread(s, o, h1) == nullptr);
    }
    SUBCASE("waiting thread whose return has arrived") {
        ThreadId t1 = startThread(s, o, 1, ThreadStatus::Waiting);
        sendCall(s, o, 1);
        CHECK(runnablesRTC(s, o).empty());
        sendReturn(s, o, t1);
        CHECK(tids(runnablesRTC(s, o)) == std::vector<ThreadId>{t1});
    }
    SUBCASE("empty object") { CHECK(runnablesRTC(s, o).empty()); }
}

TEST_CASE("CONC offers every buffered event") {
    SimState s = emptyState();
    ObjectId o = allocObject(s, kBuffer);

    SUBCASE("empty object") { CHECK(runnablesCONC(s, o).empty()); }
    SUBCASE("ready thread and one call") {
        ThreadId t1 = startThread(s, o, 1);
        ThreadId h = sendCall(s, o, 1);
        CHECK(tids(runnablesCONC(s, o)) == std::vector<ThreadId>{t1, h});
    }
    SUBCASE("two calls, no threads") {
        ThreadId h1 = sendCall(s, o, 1);
        ThreadId h2 = sendCall(s, o, 10);
        auto rs = runnablesCONC(s, o);
        CHECK(tids(rs) == std::vector<ThreadId>{h1, h2});
        CHECK(rs[1].prio == 10);
    }
    SUBCASE("waiting threads are offered only once their return arrives") {
        ThreadId t1 = startThread(s, o, 1, ThreadStatus::Waiting);
        CHECK(runnablesCONC(s, o).empty());
        sendReturn(s, o, t1);
        CHECK(tids(runnablesCONC(s, o)) == std::vector<ThreadId>{t1});
    }
}

TEST_CASE("round robin picks the least recently executed") {
    std::vector<RunnableEntry> rs{entry(0, 0, 1, 5), entry(1, 1, 1, 3)};
    CHECK(scheduleRR(6, rs) == at(1, 1));
    std::vector<RunnableEntry> tie{entry(0, 0, 1, 2), entry(1, 1, 1, 2)};
    CHECK(scheduleRR(6, tie) == at(0, 0));
    std::vector<RunnableEntry> one{entry(2, 7, 0, 0)};
    CHECK(scheduleRR(0, one) == at(2, 7));
    // Priorities play no part.
    std::vector<RunnableEntry> prio{entry(0, 0, 100, 4), entry(0, 1, 0, 3)};
    CHECK(scheduleRR(6, prio) == at(0, 1));
}

TEST_CASE("priority scheduling with aging") {
    std::vector<RunnableEntry> rs{entry(0, 0, 10, 4), entry(1, 1, 1, 0)};
    // 10 + (6 - 4) = 12 against 1 + (6 - 0) = 7
    CHECK(schedulePRIO(6, rs) == at(0, 0));
    // 26 against 21
    CHECK(schedulePRIO(20, rs) == at(0, 0));
    // Once the high-priority thread keeps running, the gap grows: 10 + 1 < 1 + 19.
    std::vector<RunnableEntry> aged{entry(0, 0, 10, 19), entry(1, 1, 1, 0)};
    CHECK(schedulePRIO(20, aged) == at(1, 1));
    // Equal effective priority: older last_exec first, then (oid, tid).
    std::vector<RunnableEntry> tie{entry(0, 0, 3, 5), entry(1, 1, 1, 3)};
    CHECK(schedulePRIO(8, tie) == at(1, 1));
    std::vector<RunnableEntry> full{entry(1, 3, 2, 4), entry(1, 2, 2, 4), entry(2, 0, 2, 4)};
    CHECK(schedulePRIO(8, full) == at(1, 2));
}

TEST_CASE("schedulers always return a member of their input") {
    test::Rng rng(17);
    for (int round = 0; round < 500; ++round) {
        std::vector<RunnableEntry> rs;
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        for (int i = 0; i < n; ++i) {
            rs.push_back(entry(std::uniform_int_distribution<int>(0, 3)(rng), i,
                               std::uniform_int_distribution<int>(0, 10)(rng),
                               std::uniform_int_distribution<int>(-1, 40)(rng)));
        }
        const Time now = 41;
        for (auto picked : {scheduleRR(now, rs), schedulePRIO(now, rs)}) {
            bool member = false;
            for (const auto& r : rs) member = member || (r.oid == picked.oid && r.tid == picked.tid);
            CHECK(member);
        }
        CHECK(scheduleRR(now, rs) == scheduleRR(now, rs));
        CHECK(schedulePRIO(now, rs) == schedulePRIO(now, rs));
    }
}

TEST_CASE("single dispatch walks the superclass chain") {
    auto def = test::loadFixture("prodcons.smm");
    SimState s = emptyState();
    ObjectId prod = allocObject(s, flattenedClass(def.model, "Producer"));
    ObjectId buf = allocObject(s, flattenedClass(def.model, "Buffer"));

    const MethodDef& put = dispatchSingle(def.model.subclasses, def.model.methods, s.ds, buf, kPut);
    CHECK(put.implements == kPut);
    CHECK(&put == &def.model.methods.at("Buffer").at(kPut));

    Model m;
    m.classes["A"] = ClassDef{"A", {}};
    m.classes["B"] = ClassDef{"B", {}};
    m.subclasses["B"] = {"A"};
    m.methods["A"][kRun] = MethodDef{kRun, {}, {Return{voidVal()}}};
    SimState s2 = emptyState();
    ObjectId bObj = allocObject(s2, m.classes["B"]);
    CHECK(&dispatchSingle(m.subclasses, m.methods, s2.ds, bObj, kRun) == &m.methods.at("A").at(kRun));

    try {
        dispatchSingle(def.model.subclasses, def.model.methods, s.ds, prod, kPut);
        FAIL("dispatch should fail");
    } catch (const VmError& e) {
        CHECK(e.kind() == ErrorKind::MethodNotFound);
    }
}

TEST_CASE("dispatch agrees with a parent-pointer walk on random hierarchies") {
    test::Rng rng(2024);
    for (int round = 0; round < 200; ++round) {
        auto h = test::randomHierarchy(rng);
        SimState s = emptyState();
        for (const auto& name : h.names) allocObject(s, h.model.classes.at(name));
        for (int c = 0; c < static_cast<int>(h.names.size()); ++c) {
            for (int op = 0; op < static_cast<int>(h.ops.size()); ++op) {
                auto owner = test::oracleOwner(h, c, op);
                if (owner) {
                    const auto& m = dispatchSingle(h.model.subclasses, h.model.methods, s.ds, ObjectId{c}, h.ops[op]);
                    CHECK(std::get<Value>(std::get<Return>(m.body[0]).source) ==
                          intVal(test::methodMarker(*owner, op)));
                } else {
                    CHECK_THROWS_AS(dispatchSingle(h.model.subclasses, h.model.methods, s.ds, ObjectId{c}, h.ops[op]),
                                    VmError);
                }
            }
        }
    }
}

TEST_CASE("reliable medium appends at the tail") {
    SimState s = emptyState();
    ObjectId o = allocObject(s, kBuffer);
    sendCall(s, o, 1);
    Message msg{ObjectId{0}, ThreadId{0}, o, SignalPayload{kRun, {}, 0}};
    Event e = makeEvent(msg, 99, 0, reserveThreadId(s));
    deliverReliable(s.es, e);
    REQUIRE(s.es.queues[o].size() == 2);
    CHECK(s.es.queues[o].back() == e);

    msg.receiver = ObjectId{7};
    CHECK_THROWS_AS(deliverReliable(s.es, makeEvent(msg, 100, 0)), VmError);
}

TEST_CASE("strategy names") {
    CHECK(parseRunnablesKind("rtc") == RunnablesKind::Rtc);
    CHECK(parseRunnablesKind("conc") == RunnablesKind::Conc);
    CHECK(parseSchedulerKind("rr") == SchedulerKind::RoundRobin);
    CHECK(parseSchedulerKind("prio") == SchedulerKind::Priority);
    CHECK(parseDispatchKind("single") == DispatchKind::Single);
    CHECK(parseMediumKind("reliable") == MediumKind::Reliable);
    CHECK_FALSE(parseSchedulerKind("fifo").has_value());
    for (auto k : {RunnablesKind::Rtc, RunnablesKind::Conc}) CHECK(parseRunnablesKind(toString(k)) == k);
    for (auto k : {SchedulerKind::RoundRobin, SchedulerKind::Priority}) CHECK(parseSchedulerKind(toString(k)) == k);
}

TEST_CASE("config exposes the model tables") {
    auto def = test::loadFixture("prodcons.smm");
    Config cfg = makeConfig(def.model, def.config);
    CHECK(cfg.classTable().size() == 3);
    CHECK(cfg.subclassRel().empty());
    CHECK(cfg.methMap().at("Buffer").size() == 2);
}
