#pragma once

#include <string>
#include <vector>

#include "smvm/dsl.hpp"
#include "smvm/render.hpp"
#include "smvm/vm.hpp"

namespace smvm::test {

std::string modelsDir();
std::string malformedDir();
std::string readFile(const std::string& path);

/// Parses model text and throws std::runtime_error with the diagnostics if
/// it does not elaborate.
ModelDef parseOrThrow(const std::string& text);
ModelDef loadFixture(const std::string& file);

/// Every shipped model file, by file name.
std::vector<std::string> fixtureNames();

struct TracedRun {
    RunResult result;
    std::vector<TraceRecord> trace;
};

TracedRun runTraced(const ModelDef& def, const Selections& sel, std::optional<Time> maxSteps = {});
RunResult runPlain(const ModelDef& def, const Selections& sel, std::optional<Time> maxSteps = {});

/// The four runnables x scheduler combinations.
std::vector<Selections> allConfigs();
std::string configName(const Selections& sel);

/// `data` attribute of every object of class `cls`, in ascending oid order.
std::vector<std::int64_t> intAttrs(const SimState& s, const std::string& cls, const std::string& attr);

}  // namespace smvm::test
