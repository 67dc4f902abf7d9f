#include "smvm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "smvm/dsl.hpp"
#include "smvm/error.hpp"
#include "smvm/render.hpp"

namespace smvm {

namespace {

struct RunArgs {
    std::string file;
    std::string runnables;
    std::string scheduler;
    std::string dispatch;
    std::string medium;
    std::optional<Time> max_steps;
    bool trace = false;
    std::string format = "text";
    std::string out_file;
};

int runCommand(const RunArgs& args, std::ostream& out, std::ostream& err) {
    std::ifstream in(args.file, std::ios::binary);
    if (!in) {
        err << "smvm: cannot read '" << args.file << "'\n";
        return exit_code::kUsage;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    ParseResult parsed = parseModel(buffer.str());
    if (!parsed.ok()) {
        for (const auto& d : parsed.diagnostics) err << formatDiagnostic(d, args.file) << "\n";
        return exit_code::kValidation;
    }
    ModelDef def = std::move(*parsed.model);
    // Command-line choices override the file's config block.
    if (!args.runnables.empty()) def.config.runnables = *parseRunnablesKind(args.runnables);
    if (!args.scheduler.empty()) def.config.scheduler = *parseSchedulerKind(args.scheduler);
    if (!args.dispatch.empty()) def.config.dispatch = *parseDispatchKind(args.dispatch);
    if (!args.medium.empty()) def.config.medium = *parseMediumKind(args.medium);

    const OutputFormat format = args.format == "structured" ? OutputFormat::Structured : OutputFormat::Text;
    std::vector<TraceRecord> trace;
    RunOptions options;
    options.max_steps = args.max_steps;
    if (args.trace) {
        options.on_step = [&trace](const StepInfo& step) { trace.push_back(toTraceRecord(step)); };
    }

    RunResult result;
    try {
        Config cfg = makeConfig(def.model, def.config);
        result = runMain(cfg, def.setup, options);
    } catch (const VmError& e) {
        err << "smvm: " << toString(e.kind()) << ": " << e.what() << "\n";
        return e.kind() == ErrorKind::Validation ? exit_code::kValidation : exit_code::kRuntime;
    }

    std::string text;
    if (format == OutputFormat::Structured) {
        text = renderStructured(result, args.trace ? &trace : nullptr);
    } else {
        if (args.trace) text = renderTrace(trace, format);
        text += renderFinalState(result, format);
    }
    if (args.out_file.empty()) {
        out << text;
    } else {
        std::ofstream file(args.out_file, std::ios::binary);
        if (!file) {
            err << "smvm: cannot write '" << args.out_file << "'\n";
            return exit_code::kUsage;
        }
        file << text;
    }

    switch (result.halt) {
        case HaltReason::AllDone: return exit_code::kAllDone;
        case HaltReason::Blocked:
            for (const auto& w : result.waiting) {
                err << "smvm: blocked: object " << w.oid.value << ", thread " << w.tid.value
                    << " waits for a return\n";
            }
            return exit_code::kBlocked;
        case HaltReason::StepLimit: return exit_code::kStepLimit;
    }
    return exit_code::kRuntime;
}

}  // namespace

int cliMain(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic virtual machine for object-oriented system models", "smvm"};
    app.require_subcommand(1);

    RunArgs run;
    auto* cmd = app.add_subcommand("run", "Simulate a model file and print its final state");
    cmd->add_option("file", run.file, "Model source (.smm)")->required();
    cmd->add_option("--runnables", run.runnables, "Runnables selection")->check(CLI::IsMember({"rtc", "conc"}));
    cmd->add_option("--scheduler", run.scheduler, "Scheduler")->check(CLI::IsMember({"rr", "prio"}));
    cmd->add_option("--dispatch", run.dispatch, "Method dispatch")->check(CLI::IsMember({"single"}));
    cmd->add_option("--medium", run.medium, "Event medium")->check(CLI::IsMember({"reliable"}));
    cmd->add_option("--max-steps", run.max_steps, "Stop after this many steps")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--trace", run.trace, "Print every executed step");
    cmd->add_option("--format", run.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--out", run.out_file, "Write the output to a file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "smvm: " << e.what() << "\n" << app.help();
        return exit_code::kUsage;
    }
    return runCommand(run, out, err);
}

}  // namespace smvm
