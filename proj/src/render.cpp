#include "smvm/render.hpp"

#include <sstream>

#include <json.hpp>

#include "overloaded.hpp"
#include "smvm/dsl.hpp"

namespace smvm {

using detail::Overloaded;
using Json = nlohmann::ordered_json;

namespace {

Json valueJson(const Value& v) {
    return std::visit(Overloaded{
                          [](const IntVal& x) { return Json{{"int", x.value}}; },
                          [](const BoolVal& x) { return Json{{"bool", x.value}}; },
                          [](const VoidVal&) { return Json{{"void", nullptr}}; },
                          [](const OidVal& x) { return Json{{"oid", x.oid.value}}; },
                          [](const NullOid&) { return Json{{"null", nullptr}}; },
                          [](const Record& r) {
                              Json fields = Json::array();
                              for (const auto& f : r.fields) fields.push_back(Json::array({f.name, valueJson(f.value)}));
                              return Json{{"record", fields}};
                          },
                      },
                      v.data);
}

Json stateJson(const RunResult& r) {
    Json objects = Json::array();
    for (const auto& [oid, entry] : r.final_state.ds.objects) {
        Json attrs = Json::array();
        for (const auto& f : entry.attrs.fields) attrs.push_back(Json::array({f.name, valueJson(f.value)}));
        objects.push_back(Json{{"id", oid.value}, {"class", entry.class_name}, {"attrs", attrs}});
    }
    Json waiting = Json::array();
    for (const auto& w : r.waiting) waiting.push_back(Json{{"oid", w.oid.value}, {"tid", w.tid.value}});
    return Json{{"objects", objects}, {"time", r.time}, {"halt", toString(r.halt)}, {"waiting", waiting}};
}

Json traceJson(const std::vector<TraceRecord>& trace) {
    Json steps = Json::array();
    for (const auto& rec : trace) {
        Json step{{"t", rec.t}, {"oid", rec.oid.value}, {"tid", rec.tid.value}, {"pc", rec.pc},
                  {"action", rec.action}};
        step["consumed"] = rec.consumed ? Json(toString(*rec.consumed)) : Json(nullptr);
        step["sent"] = rec.sent ? Json(toString(*rec.sent)) : Json(nullptr);
        steps.push_back(std::move(step));
    }
    return steps;
}

}  // namespace

TraceRecord toTraceRecord(const StepInfo& step) {
    return TraceRecord{step.t,
                       step.oid,
                       step.tid,
                       step.pc,
                       step.action ? printAction(*step.action) : std::string(),
                       step.consumed,
                       step.sent};
}

std::string renderFinalState(const RunResult& result, OutputFormat format) {
    if (format == OutputFormat::Structured) return renderStructured(result, nullptr);
    std::ostringstream out;
    out << "attributes:\n";
    for (const auto& [oid, entry] : result.final_state.ds.objects) {
        out << entry.class_name << "(id " << oid.value << "): [";
        for (std::size_t i = 0; i < entry.attrs.fields.size(); ++i) {
            const auto& f = entry.attrs.fields[i];
            if (i) out << ",";
            out << "(\"" << f.name << "\"," << toString(f.value) << ")";
        }
        out << "]\n";
    }
    out << "time: " << result.time << "\n";
    if (result.halt != HaltReason::AllDone) {
        out << "halt: " << toString(result.halt) << "\n";
        for (const auto& w : result.waiting) {
            out << "waiting: object " << w.oid.value << ", thread " << w.tid.value << "\n";
        }
    }
    return out.str();
}

std::string renderTrace(const std::vector<TraceRecord>& trace, OutputFormat format) {
    if (format == OutputFormat::Structured) return traceJson(trace).dump(2) + "\n";
    std::ostringstream out;
    for (const auto& rec : trace) {
        out << "t=" << rec.t << " oid=" << rec.oid.value << " tid=" << rec.tid.value << " pc=" << rec.pc << "  "
            << rec.action;
        if (rec.consumed) out << "  [consumed " << toString(*rec.consumed) << "]";
        if (rec.sent) out << "  [sent " << toString(*rec.sent) << "]";
        out << "\n";
    }
    return out.str();
}

std::string renderStructured(const RunResult& result, const std::vector<TraceRecord>* trace) {
    Json doc = stateJson(result);
    if (trace) doc["trace"] = traceJson(*trace);
    return doc.dump(2) + "\n";
}

}  // namespace smvm
