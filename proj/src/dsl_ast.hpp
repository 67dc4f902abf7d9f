#pragma once

// Untyped syntax tree produced by the parser and consumed by the elaborator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smvm/action.hpp"
#include "smvm/dsl.hpp"

namespace smvm::dsl {

struct Name {
    std::string text;
    SourceLoc loc;
};

struct RawType {
    std::string name;  // Int, Bool, Void or a class name
    SourceLoc loc;
};

struct RawLiteral {
    Value value;
    SourceLoc loc;
};

struct RawSig {
    std::vector<RawType> params;
    RawType result;
    SourceLoc loc;
};

struct RawAttr {
    Name name;
    RawType type;
    RawLiteral init;
};

struct RawClass {
    Name name;
    std::vector<Name> supers;
    std::vector<RawAttr> attrs;
};

struct RawTarget {
    std::optional<Name> label;
    std::int64_t index = 0;  // used when label is empty
    SourceLoc loc;
};

enum class RawActionKind {
    NewLocal,
    LocalFromParam,
    LocalFromAttr,
    LocalConst,
    SetAttr,
    BinOp,
    Jump,
    BranchIfFalse,
    NewObject,
    Call,
    SendSignal,
    ReturnConst,
    ReturnLocal,
};

struct RawAction {
    RawActionKind kind = RawActionKind::Jump;
    SourceLoc loc;
    Name dst;    // assigned local, attribute for SetAttr, target for signal
    Name src;    // param/attr/local read, call target, class for NewObject
    Name rhs;    // second operand of BinOp
    Name op;     // operation name for call/signal
    BinOpKind binop = BinOpKind::Add;
    RawType type;
    RawLiteral literal;
    RawTarget target;
    std::vector<Name> args;
    std::optional<RawSig> sig;
    std::int64_t prio = 0;
};

struct RawStmt {
    std::optional<Name> label;
    RawAction action;
};

struct RawParam {
    Name name;
    RawType type;
};

struct RawOp {
    Name cls;
    Name name;
    std::vector<RawParam> params;
    RawType result;
    std::vector<RawStmt> body;
    SourceLoc body_end;
};

struct RawSetupEntry {
    Name name;
    Name cls;
    bool active = false;
    Name op;
    std::optional<RawSig> sig;
    std::int64_t prio = 0;
    SourceLoc prio_loc;
    std::vector<Name> links;
};

struct RawConfigItem {
    Name key;
    Name value;
};

struct RawModel {
    std::vector<RawClass> classes;
    std::vector<RawOp> ops;
    std::optional<std::vector<RawSetupEntry>> setup;
    std::optional<std::vector<RawConfigItem>> config;
};

/// Syntax only. Returns nothing and appends a diagnostic on the first error.
std::optional<RawModel> parseSyntax(std::string_view text, std::vector<Diagnostic>& diags);

/// Name resolution and static checks. Appends a diagnostic per problem.
std::optional<ModelDef> elaborate(const RawModel& raw, std::vector<Diagnostic>& diags);

bool isReserved(std::string_view word);

}  // namespace smvm::dsl
