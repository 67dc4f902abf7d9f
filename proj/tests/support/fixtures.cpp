#include "support/fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smvm::test {

std::string modelsDir() { return SMVM_MODELS_DIR; }
std::string malformedDir() { return SMVM_MALFORMED_DIR; }

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ModelDef parseOrThrow(const std::string& text) {
    ParseResult r = parseModel(text);
    if (!r.ok()) {
        std::string msg = "model does not parse:";
        for (const auto& d : r.diagnostics) msg += "\n  " + formatDiagnostic(d, "<text>");
        throw std::runtime_error(msg);
    }
    return std::move(*r.model);
}

ModelDef loadFixture(const std::string& file) { return parseOrThrow(readFile(modelsDir() + "/" + file)); }

std::vector<std::string> fixtureNames() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(modelsDir())) {
        if (e.path().extension() == ".smm") out.push_back(e.path().filename().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

TracedRun runTraced(const ModelDef& def, const Selections& sel, std::optional<Time> maxSteps) {
    TracedRun out;
    RunOptions opts;
    opts.max_steps = maxSteps;
    opts.on_step = [&out](const StepInfo& step) { out.trace.push_back(toTraceRecord(step)); };
    out.result = runMain(makeConfig(def.model, sel), def.setup, opts);
    return out;
}

RunResult runPlain(const ModelDef& def, const Selections& sel, std::optional<Time> maxSteps) {
    RunOptions opts;
    opts.max_steps = maxSteps;
    return runMain(makeConfig(def.model, sel), def.setup, opts);
}

std::vector<Selections> allConfigs() {
    std::vector<Selections> out;
    for (auto r : {RunnablesKind::Conc, RunnablesKind::Rtc}) {
        for (auto s : {SchedulerKind::RoundRobin, SchedulerKind::Priority}) {
            Selections sel;
            sel.runnables = r;
            sel.scheduler = s;
            out.push_back(sel);
        }
    }
    return out;
}

std::string configName(const Selections& sel) {
    return std::string(toString(sel.runnables)) + "+" + std::string(toString(sel.scheduler));
}

std::vector<std::int64_t> intAttrs(const SimState& s, const std::string& cls, const std::string& attr) {
    std::vector<std::int64_t> out;
    for (const auto& [oid, obj] : s.ds.objects) {
        if (obj.class_name != cls) continue;
        const Value* v = obj.attrs.find(attr);
        if (!v || !v->is<IntVal>()) throw std::runtime_error(cls + "." + attr + " is not an integer");
        out.push_back(v->as<IntVal>()->value);
    }
    return out;
}

}  // namespace smvm::test
