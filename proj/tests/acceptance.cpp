// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "smvm/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace smvm;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

Selections selection(RunnablesKind r, SchedulerKind s) {
    Selections out;
    out.runnables = r;
    out.scheduler = s;
    return out;
}

std::string joined(const std::vector<std::int64_t>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out;
}

bool consistent(const RunResult& r) {
    auto consumers = test::intAttrs(r.final_state, "Consumer", "data");
    std::sort(consumers.begin(), consumers.end());
    return r.halt == HaltReason::AllDone && consumers == std::vector<std::int64_t>{10, 20} &&
           test::intAttrs(r.final_state, "Buffer", "data") == std::vector<std::int64_t>{-1};
}

Verdict lostUpdate() {
    auto def = test::loadFixture("prodcons.smm");
    auto start = std::chrono::steady_clock::now();
    RunResult r = test::runPlain(def, selection(RunnablesKind::Conc, SchedulerKind::RoundRobin));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto consumers = test::intAttrs(r.final_state, "Consumer", "data");
    auto buffer = test::intAttrs(r.final_state, "Buffer", "data");
    std::ostringstream d;
    d << "consumers " << joined(consumers) << ", buffer " << joined(buffer) << ", " << r.time << " steps in "
      << secs << " s";
    bool ok = r.halt == HaltReason::AllDone && consumers == std::vector<std::int64_t>{10, 10} &&
              buffer == std::vector<std::int64_t>{20} && secs < 1.0;
    return {ok, d.str()};
}

Verdict consistentRun() {
    auto def = test::loadFixture("prodcons.smm");
    RunResult r = test::runPlain(def, selection(RunnablesKind::Rtc, SchedulerKind::Priority));
    std::ostringstream d;
    d << "consumers " << joined(test::intAttrs(r.final_state, "Consumer", "data")) << ", buffer "
      << joined(test::intAttrs(r.final_state, "Buffer", "data"));
    return {consistent(r), d.str()};
}

Verdict relativeSpeed() {
    auto def = test::loadFixture("prodcons.smm");
    Time race = test::runPlain(def, selection(RunnablesKind::Conc, SchedulerKind::RoundRobin)).time;
    Time ok = test::runPlain(def, selection(RunnablesKind::Rtc, SchedulerKind::Priority)).time;
    std::ostringstream d;
    d << "rtc+prio " << ok << " steps, conc+rr " << race << " steps, ratio "
      << static_cast<double>(ok) / static_cast<double>(race);
    return {ok < race, d.str()};
}

Verdict matrix() {
    auto def = test::loadFixture("prodcons.smm");
    std::map<std::pair<RunnablesKind, SchedulerKind>, RunResult> runs;
    bool ok = true;
    std::ostringstream d;
    for (const auto& sel : test::allConfigs()) {
        RunResult r = test::runPlain(def, sel);
        bool c = consistent(r);
        ok = ok && (c == (sel.runnables == RunnablesKind::Rtc));
        d << (d.tellp() > 0 ? "; " : "") << test::configName(sel) << " " << r.time << " steps "
          << (c ? "consistent" : "inconsistent");
        runs.emplace(std::pair{sel.runnables, sel.scheduler}, std::move(r));
    }
    for (auto rk : {RunnablesKind::Rtc, RunnablesKind::Conc}) {
        ok = ok && runs.at({rk, SchedulerKind::Priority}).time <= runs.at({rk, SchedulerKind::RoundRobin}).time;
    }
    return {ok, d.str()};
}

Verdict determinism() {
    int combos = 0;
    int differing = 0;
    for (const auto& name : test::fixtureNames()) {
        auto def = test::loadFixture(name);
        for (const auto& sel : test::allConfigs()) {
            ++combos;
            std::set<std::string> outputs;
            for (int i = 0; i < 5; ++i) {
                auto run = test::runTraced(def, sel, 100000);
                outputs.insert(renderStructured(run.result, &run.trace));
            }
            if (outputs.size() != 1) ++differing;
        }
    }
    return {combos > 0 && differing == 0,
            std::to_string(combos) + " fixture/config pairs x 5 runs, " + std::to_string(differing) + " differing"};
}

Verdict dispatchOracle() {
    test::Rng rng(20240601);
    int pairs = 0;
    int mismatches = 0;
    for (int round = 0; round < 1000; ++round) {
        auto h = test::randomHierarchy(rng, 6, 8);
        SimState s = emptyState();
        for (const auto& name : h.names) allocObject(s, h.model.classes.at(name));
        for (int c = 0; c < static_cast<int>(h.names.size()); ++c) {
            for (int op = 0; op < static_cast<int>(h.ops.size()); ++op) {
                ++pairs;
                auto expected = test::oracleOwner(h, c, op);
                std::optional<Value> got;
                try {
                    const auto& m = dispatchSingle(h.model.subclasses, h.model.methods, s.ds, ObjectId{c}, h.ops[op]);
                    got = std::get<Value>(std::get<Return>(m.body.at(0)).source);
                } catch (const VmError& e) {
                    if (e.kind() != ErrorKind::MethodNotFound) ++mismatches;
                }
                bool agree = expected ? got == intVal(test::methodMarker(*expected, op)) : !got.has_value();
                if (!agree) ++mismatches;
            }
        }
    }
    return {mismatches == 0, "1000 hierarchies, " + std::to_string(pairs) + " (object, op) pairs, " +
                                 std::to_string(mismatches) + " mismatches"};
}

/// Three always-runnable active objects spinning in a one-action loop.
std::vector<ThreadId> spinnerSchedule(SchedulerKind sched, std::array<Prio, 3> prios, Time steps) {
    std::ostringstream src;
    src << "class Spinner { }\n"
        << "op Spinner.spin(): Void {\n"
        << "top:\n"
        << "    goto top;\n"
        << "}\n"
        << "setup {\n";
    for (int i = 0; i < 3; ++i) src << "    s" << i << ": Spinner active spin prio " << prios[i] << ";\n";
    src << "}\n";
    auto def = test::parseOrThrow(src.str());
    auto run = test::runTraced(def, selection(RunnablesKind::Rtc, sched), steps);
    std::vector<ThreadId> picks;
    for (const auto& rec : run.trace) picks.push_back(rec.tid);
    return picks;
}

Verdict schedulerProperties() {
    auto rr = spinnerSchedule(SchedulerKind::RoundRobin, {1, 1, 1}, 30);
    std::map<ThreadId, int> counts;
    for (auto t : rr) ++counts[t];
    bool rrOk = rr.size() == 30 && counts.size() == 3;
    for (const auto& [t, n] : counts) rrOk = rrOk && n == 10;
    for (std::size_t i = 3; i < rr.size(); ++i) rrOk = rrOk && rr[i] == rr[i - 3];

    auto prio = spinnerSchedule(SchedulerKind::Priority, {1, 1, 10}, 300);
    std::set<ThreadId> all(prio.begin(), prio.end());
    std::size_t worstGap = 0;
    bool prioOk = prio.size() == 300 && all.size() == 3;
    for (std::size_t start = 0; start + 30 <= prio.size(); ++start) {
        std::set<ThreadId> window(prio.begin() + static_cast<std::ptrdiff_t>(start),
                                  prio.begin() + static_cast<std::ptrdiff_t>(start + 30));
        prioOk = prioOk && window.size() == 3;
    }
    std::map<ThreadId, std::size_t> last;
    for (std::size_t i = 0; i < prio.size(); ++i) {
        if (auto it = last.find(prio[i]); it != last.end()) worstGap = std::max(worstGap, i - it->second);
        last[prio[i]] = i;
    }
    std::ostringstream d;
    d << "rr counts";
    for (const auto& [t, n] : counts) d << " " << n;
    d << (rrOk ? " with strict rotation" : " without strict rotation") << "; prio {1,1,10} longest gap "
      << worstGap << " steps over 300";
    return {rrOk && prioOk, d.str()};
}

Verdict mediumFifo() {
    test::Rng rng(8);
    Config cfg = makeConfig(Model{}, Selections{});
    int sequences = 0;
    int sentTotal = 0;
    int bad = 0;
    for (; sequences < 500; ++sequences) {
        SimState s = emptyState();
        const int receivers = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int i = 0; i < receivers; ++i) allocObject(s, ClassDef{"R", {}});
        std::map<ObjectId, std::vector<std::uint64_t>> expected;
        std::map<ObjectId, std::vector<std::uint64_t>> received;
        const int events = std::uniform_int_distribution<int>(0, 200)(rng);
        auto drainOne = [&](ObjectId o) {
            if (auto e = takeMatchingEvent(s.es, o, [](const Event&) { return true; })) received[o].push_back(e->seq);
        };
        for (int i = 0; i < events; ++i) {
            ObjectId to{std::uniform_int_distribution<int>(0, receivers - 1)(rng)};
            Message msg{ObjectId{0}, ThreadId{0}, to, SignalPayload{OpSig{"m", {}, VoidType{}}, {}, 0}};
            if (i % 3 == 1) msg.payload = ReturnPayload{intVal(i), ThreadId{0}, "r"};
            if (i % 3 == 2) msg.payload = CallPayload{OpSig{"m", {}, VoidType{}}, {}, "r", 0};
            std::uint64_t seq = s.next_seq++;
            cfg.medium(s.es, makeEvent(std::move(msg), seq, i));
            expected[to].push_back(seq);
            ++sentTotal;
            if (std::bernoulli_distribution(0.3)(rng)) drainOne(ObjectId{std::uniform_int_distribution<int>(0, receivers - 1)(rng)});
        }
        for (int o = 0; o < receivers; ++o) {
            while (!s.es.queues[ObjectId{o}].empty()) drainOne(ObjectId{o});
        }
        if (expected != received) ++bad;
    }
    return {bad == 0, std::to_string(sequences) + " random sequences, " + std::to_string(sentTotal) +
                          " events, " + std::to_string(bad) + " with lost or reordered events"};
}

Verdict conservation() {
    int runs = 0;
    int bad = 0;
    long calls = 0;
    for (const auto& name : test::fixtureNames()) {
        auto def = test::loadFixture(name);
        for (const auto& sel : test::allConfigs()) {
            auto run = test::runTraced(def, sel, 100000);
            if (run.result.halt != HaltReason::AllDone) continue;
            ++runs;
            std::map<EventKind, long> sent;
            std::map<EventKind, long> consumed;
            for (const auto& rec : run.trace) {
                if (rec.sent) ++sent[*rec.sent];
                if (rec.consumed) ++consumed[*rec.consumed];
            }
            calls += consumed[EventKind::Call];
            if (consumed[EventKind::Call] != consumed[EventKind::Return] ||
                sent[EventKind::Call] != consumed[EventKind::Call] ||
                sent[EventKind::Return] != consumed[EventKind::Return]) {
                ++bad;
            }
        }
    }
    return {runs > 0 && bad == 0, std::to_string(runs) + " terminating runs, " + std::to_string(calls) +
                                      " calls consumed, " + std::to_string(bad) + " unbalanced"};
}

Verdict roundTrip() {
    test::Rng rng(777);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        ModelDef def = test::randomModelDef(rng);
        ParseResult first = parseModel(printModel(def));
        if (!first.ok() || !(*first.model == def)) {
            ++mismatches;
            continue;
        }
        ParseResult second = parseModel(printModel(*first.model));
        if (!second.ok() || !(*second.model == *first.model)) ++mismatches;
    }

    int files = 0;
    int unlocated = 0;
    for (const auto& e : std::filesystem::directory_iterator(test::malformedDir())) {
        if (e.path().extension() != ".smm") continue;
        ++files;
        ParseResult r = parseModel(test::readFile(e.path().string()));
        bool located = !r.ok() && !r.diagnostics.empty();
        for (const auto& d : r.diagnostics) located = located && d.loc.line >= 1 && d.loc.column >= 1;
        if (!located) ++unlocated;
    }
    return {mismatches == 0 && files == 20 && unlocated == 0,
            "200 generated models, " + std::to_string(mismatches) + " round-trip mismatches; " +
                std::to_string(files) + " malformed files, " + std::to_string(unlocated) + " without located diagnostics"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"lost update under conc+rr", lostUpdate},
        {"consistent result under rtc+prio", consistentRun},
        {"rtc+prio takes fewer steps than conc+rr", relativeSpeed},
        {"four-configuration matrix", matrix},
        {"byte-identical repeated runs", determinism},
        {"dispatch agrees with a parent-link oracle", dispatchOracle},
        {"round robin rotation and priority aging", schedulerProperties},
        {"medium delivers per receiver in send order", mediumFifo},
        {"calls and returns balance", conservation},
        {"model text round-trip and located diagnostics", roundTrip},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
