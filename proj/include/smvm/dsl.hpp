#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smvm/universe.hpp"
#include "smvm/variation.hpp"
#include "smvm/vm.hpp"

namespace smvm {

// Textual model format (.smm).
//
//   class Buffer { attr data: Int = -1; }
//   class Special extends Buffer { }
//   op Buffer.put(p: Int): Void {
//       local d: Int = 0;
//       d := param p;
//       attr data := d;
//       return void;
//   }
//   setup {
//       prod1: Producer active produce prio 10 links [b];
//       b: Buffer passive;
//   }
//   config { runnables: rtc; scheduler: prio; dispatch: single; medium: reliable; }
//
// Statements inside an op body may carry a label (`loop: i := add i one;`);
// `goto` and `ifnot` accept a label or a numeric body index. Calls, signals
// and active start operations are resolved by name and arity against the
// static class of the target; an explicit `as (Int, Bool): Void` signature
// selects among overloads.

struct SourceLoc {
    int line = 0;
    int column = 0;
    bool operator==(const SourceLoc&) const = default;
};

struct Diagnostic {
    SourceLoc loc;
    std::string message;
};

/// `file:line:col: error: message`
std::string formatDiagnostic(const Diagnostic& d, std::string_view file);

/// Everything a model file defines.
struct ModelDef {
    Model model;
    Setup setup;
    Selections config;
    bool operator==(const ModelDef&) const = default;
};

struct ParseResult {
    std::optional<ModelDef> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Parses and fully validates a model. On failure `model` is empty and
/// `diagnostics` holds at least one located message.
ParseResult parseModel(std::string_view text);

/// Canonical source text for a model; parseModel(printModel(m)) yields m.
std::string printModel(const ModelDef& def);

/// One action in source syntax, with numeric jump targets.
std::string printAction(const Action& action);

std::string printLiteral(const Value& value);

}  // namespace smvm
