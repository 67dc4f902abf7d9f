#include <array>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "dsl_ast.hpp"

namespace smvm::dsl {

namespace {

constexpr std::array kReserved = {
    "class", "extends", "attr",  "op",     "local",   "param", "call",  "signal", "new",
    "goto",  "ifnot",   "return", "setup", "config",  "active", "passive", "prio", "links",
    "as",    "add",     "sub",   "mul",    "eq",      "lt",    "true",  "false",  "void",
    "null",  "Int",     "Bool",  "Void",
};

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLoc loc;
};

/// Thrown inside the parser only; converted to a diagnostic at the top.
struct SyntaxError {
    SourceLoc loc;
    std::string message;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto bump = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            bump(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') bump(1);
            continue;
        }
        SourceLoc loc{line, col};
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back(Token{Tok::Ident, std::string(src.substr(i, j - i)), loc});
            bump(j - i);
            continue;
        }
        if (std::isdigit(c) ||
            (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back(Token{Tok::Int, std::string(src.substr(i, j - i)), loc});
            bump(j - i);
            continue;
        }
        if (c == ':' && i + 1 < src.size() && src[i + 1] == '=') {
            out.push_back(Token{Tok::Punct, ":=", loc});
            bump(2);
            continue;
        }
        if (std::string_view("{}()[]:;,.=").find(static_cast<char>(c)) != std::string_view::npos) {
            out.push_back(Token{Tok::Punct, std::string(1, static_cast<char>(c)), loc});
            bump(1);
            continue;
        }
        std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c))
                                            : "\\x" + std::to_string(static_cast<int>(c));
        throw SyntaxError{loc, "unexpected character '" + shown + "'"};
    }
    out.push_back(Token{Tok::End, "", SourceLoc{line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    RawModel parseModel() {
        RawModel m;
        while (!atEnd()) {
            const Token& t = peek();
            if (isWord("class")) {
                m.classes.push_back(parseClass());
            } else if (isWord("op")) {
                m.ops.push_back(parseOp());
            } else if (isWord("setup")) {
                if (m.setup) fail(t.loc, "duplicate setup block");
                m.setup = parseSetup();
            } else if (isWord("config")) {
                if (m.config) fail(t.loc, "duplicate config block");
                m.config = parseConfig();
            } else {
                fail(t.loc, "expected 'class', 'op', 'setup' or 'config', found " + describe(t));
            }
        }
        return m;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool atEnd() const { return peek().kind == Tok::End; }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Tok::End) ++pos_;
        return t;
    }

    [[noreturn]] static void fail(SourceLoc loc, std::string message) {
        throw SyntaxError{loc, std::move(message)};
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::End: return "end of file";
            case Tok::Int: return "number " + t.text;
            default: return "'" + t.text + "'";
        }
    }

    bool isWord(std::string_view w, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::Ident && t.text == w;
    }
    bool isPunct(std::string_view p, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::Punct && t.text == p;
    }

    void expectWord(std::string_view w) {
        if (!isWord(w)) fail(peek().loc, "expected '" + std::string(w) + "', found " + describe(peek()));
        next();
    }
    void expectPunct(std::string_view p) {
        if (!isPunct(p)) fail(peek().loc, "expected '" + std::string(p) + "', found " + describe(peek()));
        next();
    }
    /// Items end with ';', which may be left out before a closing brace.
    void endItem() {
        if (isPunct("}")) return;
        expectPunct(";");
    }
    bool acceptPunct(std::string_view p) {
        if (!isPunct(p)) return false;
        next();
        return true;
    }

    Name name(std::string_view what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t.loc, "expected " + std::string(what) + ", found " + describe(t));
        if (isReserved(t.text)) fail(t.loc, "'" + t.text + "' is a reserved word and cannot name " + std::string(what));
        next();
        return Name{t.text, t.loc};
    }

    /// Any identifier, reserved or not.
    Name word(std::string_view what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t.loc, "expected " + std::string(what) + ", found " + describe(t));
        next();
        return Name{t.text, t.loc};
    }

    std::int64_t integer(std::string_view what) {
        const Token& t = peek();
        if (t.kind != Tok::Int) fail(t.loc, "expected " + std::string(what) + ", found " + describe(t));
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
            fail(t.loc, "integer " + t.text + " out of range");
        }
        next();
        return v;
    }

    RawType type() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t.loc, "expected a type, found " + describe(t));
        if (isReserved(t.text) && t.text != "Int" && t.text != "Bool" && t.text != "Void") {
            fail(t.loc, "expected a type, found '" + t.text + "'");
        }
        next();
        return RawType{t.text, t.loc};
    }

    bool atLiteral() const {
        return peek().kind == Tok::Int || isWord("true") || isWord("false") || isWord("void") ||
               isWord("null");
    }

    RawLiteral literal() {
        const Token& t = peek();
        SourceLoc loc = t.loc;
        if (t.kind == Tok::Int) return RawLiteral{intVal(integer("integer")), loc};
        if (isWord("true")) return next(), RawLiteral{boolVal(true), loc};
        if (isWord("false")) return next(), RawLiteral{boolVal(false), loc};
        if (isWord("void")) return next(), RawLiteral{voidVal(), loc};
        if (isWord("null")) return next(), RawLiteral{nullOid(), loc};
        fail(loc, "expected a literal, found " + describe(t));
    }

    RawClass parseClass() {
        expectWord("class");
        RawClass c;
        c.name = name("a class");
        if (isWord("extends")) {
            next();
            do {
                c.supers.push_back(name("a superclass"));
            } while (acceptPunct(","));
        }
        expectPunct("{");
        while (!isPunct("}")) {
            if (atEnd()) fail(peek().loc, "unterminated class body");
            expectWord("attr");
            RawAttr a;
            a.name = name("an attribute");
            expectPunct(":");
            a.type = type();
            expectPunct("=");
            a.init = literal();
            endItem();
            c.attrs.push_back(std::move(a));
        }
        next();
        return c;
    }

    std::optional<RawSig> optionalSig() {
        if (!isWord("as")) return std::nullopt;
        RawSig sig;
        sig.loc = next().loc;
        expectPunct("(");
        if (!isPunct(")")) {
            do {
                sig.params.push_back(type());
            } while (acceptPunct(","));
        }
        expectPunct(")");
        expectPunct(":");
        sig.result = type();
        return sig;
    }

    std::vector<Name> argList() {
        std::vector<Name> args;
        expectPunct("(");
        if (!isPunct(")")) {
            do {
                args.push_back(name("an argument local"));
            } while (acceptPunct(","));
        }
        expectPunct(")");
        return args;
    }

    RawTarget target() {
        RawTarget t;
        t.loc = peek().loc;
        if (peek().kind == Tok::Int) {
            t.index = integer("a jump target");
        } else {
            t.label = name("a label");
        }
        return t;
    }

    RawOp parseOp() {
        expectWord("op");
        RawOp op;
        op.cls = name("a class");
        expectPunct(".");
        op.name = name("an operation");
        expectPunct("(");
        if (!isPunct(")")) {
            do {
                RawParam p;
                p.name = name("a parameter");
                expectPunct(":");
                p.type = type();
                op.params.push_back(std::move(p));
            } while (acceptPunct(","));
        }
        expectPunct(")");
        expectPunct(":");
        op.result = type();
        expectPunct("{");
        while (!isPunct("}")) {
            if (atEnd()) fail(peek().loc, "unterminated body of operation '" + op.name.text + "'");
            op.body.push_back(statement());
        }
        op.body_end = next().loc;
        return op;
    }

    RawStmt statement() {
        RawStmt s;
        if (peek().kind == Tok::Ident && isPunct(":", 1)) {
            s.label = name("a label");
            next();
        }
        s.action = action();
        endItem();
        return s;
    }

    RawAction action() {
        RawAction a;
        a.loc = peek().loc;
        if (isWord("local")) {
            next();
            a.kind = RawActionKind::NewLocal;
            a.dst = name("a local");
            expectPunct(":");
            a.type = type();
            expectPunct("=");
            a.literal = literal();
        } else if (isWord("attr")) {
            next();
            a.kind = RawActionKind::SetAttr;
            a.dst = name("an attribute");
            expectPunct(":=");
            a.src = name("a local");
        } else if (isWord("goto")) {
            next();
            a.kind = RawActionKind::Jump;
            a.target = target();
        } else if (isWord("ifnot")) {
            next();
            a.kind = RawActionKind::BranchIfFalse;
            a.src = name("a condition local");
            expectWord("goto");
            a.target = target();
        } else if (isWord("signal")) {
            next();
            a.kind = RawActionKind::SendSignal;
            a.src = name("a target local");
            expectPunct(".");
            a.op = name("an operation");
            a.args = argList();
            a.sig = optionalSig();
            expectWord("prio");
            a.prio = integer("a priority");
        } else if (isWord("return")) {
            next();
            if (atLiteral()) {
                a.kind = RawActionKind::ReturnConst;
                a.literal = literal();
            } else {
                a.kind = RawActionKind::ReturnLocal;
                a.src = name("a local or literal");
            }
        } else if (peek().kind == Tok::Ident && isPunct(":=", 1)) {
            a.dst = name("a local");
            next();
            assignment(a);
        } else {
            fail(peek().loc, "expected an action, found " + describe(peek()));
        }
        return a;
    }

    void assignment(RawAction& a) {
        static const std::array<std::pair<const char*, BinOpKind>, 5> kOps = {{
            {"add", BinOpKind::Add},
            {"sub", BinOpKind::Sub},
            {"mul", BinOpKind::Mul},
            {"eq", BinOpKind::Eq},
            {"lt", BinOpKind::Lt},
        }};
        if (isWord("param")) {
            next();
            a.kind = RawActionKind::LocalFromParam;
            a.src = name("a parameter");
            return;
        }
        if (isWord("attr")) {
            next();
            a.kind = RawActionKind::LocalFromAttr;
            a.src = name("an attribute");
            return;
        }
        if (isWord("new")) {
            next();
            a.kind = RawActionKind::NewObject;
            a.src = name("a class");
            return;
        }
        if (isWord("call")) {
            next();
            a.kind = RawActionKind::Call;
            a.src = name("a target local");
            expectPunct(".");
            a.op = name("an operation");
            a.args = argList();
            a.sig = optionalSig();
            return;
        }
        for (const auto& [word, op] : kOps) {
            if (isWord(word)) {
                next();
                a.kind = RawActionKind::BinOp;
                a.binop = op;
                a.src = name("an operand local");
                a.rhs = name("an operand local");
                return;
            }
        }
        if (atLiteral()) {
            a.kind = RawActionKind::LocalConst;
            a.literal = literal();
            return;
        }
        fail(peek().loc, "expected param, attr, new, call, an operator or a literal after ':=', found " +
                             describe(peek()));
    }

    std::vector<RawSetupEntry> parseSetup() {
        expectWord("setup");
        expectPunct("{");
        std::vector<RawSetupEntry> entries;
        while (!isPunct("}")) {
            if (atEnd()) fail(peek().loc, "unterminated setup block");
            RawSetupEntry e;
            e.name = name("an object");
            expectPunct(":");
            e.cls = name("a class");
            if (isWord("passive")) {
                next();
            } else if (isWord("active")) {
                next();
                e.active = true;
                e.op = name("a start operation");
                e.sig = optionalSig();
                expectWord("prio");
                e.prio_loc = peek().loc;
                e.prio = integer("a priority");
            } else {
                fail(peek().loc, "expected 'active' or 'passive', found " + describe(peek()));
            }
            if (isWord("links")) {
                next();
                expectPunct("[");
                if (!isPunct("]")) {
                    do {
                        e.links.push_back(name("a linked object"));
                    } while (acceptPunct(","));
                }
                expectPunct("]");
            }
            endItem();
            entries.push_back(std::move(e));
        }
        next();
        return entries;
    }

    std::vector<RawConfigItem> parseConfig() {
        expectWord("config");
        expectPunct("{");
        std::vector<RawConfigItem> items;
        while (!isPunct("}")) {
            if (atEnd()) fail(peek().loc, "unterminated config block");
            RawConfigItem item;
            item.key = name("a config key");
            expectPunct(":");
            item.value = word("a strategy name");
            endItem();
            items.push_back(std::move(item));
        }
        next();
        return items;
    }
};

}  // namespace

bool isReserved(std::string_view word) {
    for (const char* r : kReserved) {
        if (word == r) return true;
    }
    return false;
}

std::optional<RawModel> parseSyntax(std::string_view text, std::vector<Diagnostic>& diags) {
    try {
        Parser parser(lex(text));
        return parser.parseModel();
    } catch (const SyntaxError& e) {
        diags.push_back(Diagnostic{e.loc, e.message});
        return std::nullopt;
    }
}

}  // namespace smvm::dsl
