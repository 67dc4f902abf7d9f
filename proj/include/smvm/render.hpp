#pragma once

#include <string>
#include <vector>

#include "smvm/vm.hpp"

namespace smvm {

enum class OutputFormat { Text, Structured };

/// One executed step, detached from the live state.
struct TraceRecord {
    Time t = 0;
    ObjectId oid;
    ThreadId tid;
    std::size_t pc = 0;
    std::string action;
    std::optional<EventKind> consumed;
    std::optional<EventKind> sent;
    bool operator==(const TraceRecord&) const = default;
};

TraceRecord toTraceRecord(const StepInfo& step);

/// Text format:
///
///     attributes:
///     Producer(id 0): [("b",XOID 3)]
///     ...
///     time: 221
///
/// followed by a halt line and the waiting threads when the run did not
/// finish normally. Structured format is a JSON document with the same data.
std::string renderFinalState(const RunResult& result, OutputFormat format);

std::string renderTrace(const std::vector<TraceRecord>& trace, OutputFormat format);

/// Final state and trace in one structured document.
std::string renderStructured(const RunResult& result, const std::vector<TraceRecord>* trace);

}  // namespace smvm
