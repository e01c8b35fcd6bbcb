#include "ptspec/ir.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ptspec {

std::string to_string(const TypeRef& t) {
    if (!t.is_prim) return t.name;
    switch (t.prim) {
        case PrimKind::Int: return "int";
        case PrimKind::Bool: return "bool";
        case PrimKind::Char: return "char";
    }
    return "?";
}

ParseError::ParseError(int line, int col, const std::string& msg)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
                         ": " + msg),
      line(line),
      col(col) {}

Stmt Stmt::assign(VarId dst, VarId src) {
    Stmt s;
    s.kind = Kind::Assign;
    s.dst = std::move(dst);
    s.src = std::move(src);
    return s;
}
Stmt Stmt::alloc(VarId dst, TypeId type, std::string site, std::vector<VarId> args) {
    Stmt s;
    s.kind = Kind::Alloc;
    s.dst = std::move(dst);
    s.type = std::move(type);
    s.site = std::move(site);
    s.args = std::move(args);
    return s;
}
Stmt Stmt::store(VarId base, FieldId field, VarId src) {
    Stmt s;
    s.kind = Kind::Store;
    s.base = std::move(base);
    s.field = std::move(field);
    s.src = std::move(src);
    return s;
}
Stmt Stmt::load(VarId dst, VarId base, FieldId field) {
    Stmt s;
    s.kind = Kind::Load;
    s.dst = std::move(dst);
    s.base = std::move(base);
    s.field = std::move(field);
    return s;
}
Stmt Stmt::call(std::optional<VarId> dst, FuncId callee, std::vector<VarId> args) {
    Stmt s;
    s.kind = Kind::Call;
    if (dst) s.dst = *dst;
    s.callee = std::move(callee);
    s.args = std::move(args);
    return s;
}
Stmt Stmt::ret(VarId src) {
    Stmt s;
    s.kind = Kind::Return;
    s.src = std::move(src);
    return s;
}
Stmt Stmt::ret_cmp(std::optional<VarId> lhs, std::optional<VarId> rhs) {
    Stmt s;
    s.kind = Kind::ReturnCmp;
    s.cmp_lhs = std::move(lhs);
    s.cmp_rhs = std::move(rhs);
    return s;
}
Stmt Stmt::prim_null(VarId dst) {
    Stmt s;
    s.kind = Kind::PrimInit;
    s.dst = std::move(dst);
    s.lit = Lit::Null;
    return s;
}
Stmt Stmt::prim_int(VarId dst, int64_t v) {
    Stmt s;
    s.kind = Kind::PrimInit;
    s.dst = std::move(dst);
    s.lit = Lit::Int;
    s.lit_int = v;
    return s;
}
Stmt Stmt::prim_bool(VarId dst, bool v) {
    Stmt s;
    s.kind = Kind::PrimInit;
    s.dst = std::move(dst);
    s.lit = Lit::Bool;
    s.lit_bool = v;
    return s;
}
Stmt Stmt::prim_char(VarId dst, char v) {
    Stmt s;
    s.kind = Kind::PrimInit;
    s.dst = std::move(dst);
    s.lit = Lit::Char;
    s.lit_char = v;
    return s;
}

const TypeDef* Program::find_type(const TypeId& id) const {
    for (const auto& t : types)
        if (t.id == id) return &t;
    return nullptr;
}
const FunctionDef* Program::find_function(const FuncId& id) const {
    for (const auto& f : functions)
        if (f.id == id) return &f;
    return nullptr;
}
int Program::function_index(const FuncId& id) const {
    for (size_t i = 0; i < functions.size(); ++i)
        if (functions[i].id == id) return static_cast<int>(i);
    return -1;
}
bool Program::field_declared(const FieldId& f) const {
    for (const auto& t : types)
        if (std::find(t.fields.begin(), t.fields.end(), f) != t.fields.end()) return true;
    return false;
}

const Interface::Entry* Interface::find(const FuncId& fn) const {
    for (const auto& e : functions)
        if (e.fn == fn) return &e;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Ident, Int, Char, Punct, Eof };

struct Token {
    Tok kind = Tok::Eof;
    std::string text;
    int64_t int_val = 0;
    char char_val = 0;
    int line = 0, col = 0;
};

const std::set<std::string> kKeywords = {"library", "type", "field", "ctor", "fn",
                                         "entry",   "new",  "return", "null", "true",
                                         "false",   "int",  "bool",   "char"};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::Eof;
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                take();
            tok_.kind = Tok::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_int(false);
            return;
        }
        if (c == '\'') {
            take();
            if (pos_ >= src_.size()) fail("unterminated character literal");
            tok_.kind = Tok::Char;
            tok_.char_val = src_[pos_];
            take();
            if (pos_ >= src_.size() || src_[pos_] != '\'') fail("unterminated character literal");
            take();
            return;
        }
        if (c == '-') {
            take();
            if (pos_ < src_.size() && src_[pos_] == '>') {
                take();
                punct("->");
                return;
            }
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                lex_int(true);
                return;
            }
            fail("stray '-'");
        }
        if (c == '=') {
            take();
            if (pos_ < src_.size() && src_[pos_] == '=') {
                take();
                punct("==");
                return;
            }
            punct("=");
            return;
        }
        static const std::string singles = "{}(),;:.";
        if (singles.find(c) != std::string::npos) {
            take();
            punct(std::string(1, c));
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    void lex_int(bool neg) {
        int64_t v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + (src_[pos_] - '0');
            take();
        }
        tok_.kind = Tok::Int;
        tok_.int_val = neg ? -v : v;
    }

    void punct(std::string p) {
        tok_.kind = Tok::Punct;
        tok_.text = std::move(p);
    }

    void skip_ws() {
        for (;;) {
            while (pos_ < src_.size() &&
                   std::isspace(static_cast<unsigned char>(src_[pos_])))
                take();
            if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') take();
                continue;
            }
            break;
        }
    }

    void take() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Program parse() {
        Program p;
        while (lex_.peek().kind != Tok::Eof) {
            const Token& t = lex_.peek();
            if (t.kind != Tok::Ident) fail(t, "expected declaration");
            if (t.text == "library")
                parse_library(p);
            else if (t.text == "type")
                parse_type(p, "");
            else if (t.text == "fn")
                parse_fn(p, "");
            else if (t.text == "entry") {
                lex_.next();
                Token name = expect_ident("entry function name");
                if (p.entry) fail(name, "duplicate entry declaration");
                p.entry = name.text;
                expect_punct(";");
            } else
                fail(t, "expected 'library', 'type', 'fn' or 'entry'");
        }
        return p;
    }

private:
    void parse_library(Program& p) {
        lex_.next();
        Token name = expect_ident("library name");
        if (std::find(p.libraries.begin(), p.libraries.end(), name.text) != p.libraries.end())
            fail(name, "duplicate library '" + name.text + "'");
        p.libraries.push_back(name.text);
        // implicit type named after the library
        ensure_type(p, name.text, name, name.text);
        expect_punct("{");
        while (!try_punct("}")) {
            const Token& t = lex_.peek();
            if (t.kind != Tok::Ident) fail(t, "expected library member");
            if (t.text == "field") {
                lex_.next();
                Token f = expect_ident("field name");
                mutable_type(p, name.text).fields.push_back(f.text);
                expect_punct(";");
            } else if (t.text == "ctor") {
                parse_ctor(p, name, name.text);
            } else if (t.text == "type") {
                parse_type(p, name.text);
            } else if (t.text == "fn") {
                parse_fn(p, name.text);
            } else {
                fail(t, "expected 'field', 'ctor', 'type' or 'fn'");
            }
        }
    }

    void parse_ctor(Program& p, const Token& where, const std::string& lib) {
        lex_.next();
        Token tname = expect_ident("constructed type name");
        TypeDef& td = mutable_type(p, tname.text, &where, lib);
        CtorSig sig;
        expect_punct("(");
        if (!try_punct(")")) {
            for (;;) {
                sig.params.push_back(parse_typeref());
                if (try_punct(")")) break;
                expect_punct(",");
            }
        }
        expect_punct(";");
        td.ctors.push_back(std::move(sig));
    }

    void parse_type(Program& p, const std::string& lib) {
        lex_.next();
        Token name = expect_ident("type name");
        if (p.find_type(name.text)) fail(name, "duplicate type '" + name.text + "'");
        p.types.push_back(TypeDef{name.text, {}, {}});
        if (!lib.empty()) p.type_library[name.text] = lib;
        if (try_punct(";")) return;
        expect_punct("{");
        while (!try_punct("}")) {
            const Token& t = lex_.peek();
            if (t.kind != Tok::Ident) fail(t, "expected type member");
            if (t.text == "field") {
                lex_.next();
                Token f = expect_ident("field name");
                mutable_type(p, name.text).fields.push_back(f.text);
                expect_punct(";");
            } else if (t.text == "ctor") {
                Token tn = lex_.peek();
                parse_ctor(p, tn, lib);
            } else {
                fail(t, "expected 'field' or 'ctor'");
            }
        }
    }

    TypeRef parse_typeref() {
        Token t = expect_ident("type");
        if (t.text == "int") return TypeRef::primitive(PrimKind::Int);
        if (t.text == "bool") return TypeRef::primitive(PrimKind::Bool);
        if (t.text == "char") return TypeRef::primitive(PrimKind::Char);
        if (kKeywords.count(t.text)) fail(t, "keyword cannot name a type");
        return TypeRef::ref(t.text);
    }

    void parse_fn(Program& p, const std::string& lib) {
        lex_.next();
        Token name = expect_ident("function name");
        if (p.find_function(name.text)) fail(name, "duplicate function '" + name.text + "'");
        FunctionDef fn;
        fn.id = name.text;
        fn.is_library = !lib.empty();
        expect_punct("(");
        if (!try_punct(")")) {
            for (;;) {
                Token pn = expect_ident("parameter name");
                ParamSig ps;
                ps.name = pn.text;
                ps.type = TypeRef::ref("Object");  // default when unannotated
                if (try_punct(":")) ps.type = parse_typeref();
                fn.params.push_back(std::move(ps));
                if (try_punct(")")) break;
                expect_punct(",");
            }
        }
        if (try_punct("->")) {
            Token rn = expect_ident("return variable name");
            fn.has_ret = true;
            fn.ret_name = rn.text;
            fn.ret_type = TypeRef::ref("Object");
            if (try_punct(":")) fn.ret_type = parse_typeref();
        }
        expect_punct("{");
        std::unordered_map<std::string, int> site_counts;
        while (!try_punct("}")) fn.body.push_back(parse_stmt(fn, site_counts));
        // implicit trailing `return r` when the signature declares a return
        bool ends_with_return =
            !fn.body.empty() && (fn.body.back().kind == Stmt::Kind::Return ||
                                 fn.body.back().kind == Stmt::Kind::ReturnCmp);
        if (fn.has_ret && !ends_with_return) fn.body.push_back(Stmt::ret(fn.ret_name));
        if (!lib.empty()) p.fn_library[fn.id] = lib;
        p.functions.push_back(std::move(fn));
    }

    Stmt parse_stmt(const FunctionDef& fn, std::unordered_map<std::string, int>& site_counts) {
        Token first = lex_.next();
        if (first.kind != Tok::Ident) fail(first, "expected statement");
        if (first.text == "return") {
            auto lhs = parse_operand();
            if (try_punct("==")) {
                auto rhs = parse_operand();
                expect_punct(";");
                return Stmt::ret_cmp(lhs, rhs);
            }
            expect_punct(";");
            if (!lhs) fail(first, "plain return takes a variable");
            return Stmt::ret(*lhs);
        }
        if (kKeywords.count(first.text)) fail(first, "unexpected keyword '" + first.text + "'");

        if (try_punct(".")) {
            Token member = expect_ident("field or function name");
            if (try_punct("(")) {  // method-style call without destination
                auto args = parse_args(first.text);
                expect_punct(";");
                return Stmt::call(std::nullopt, member.text, std::move(args));
            }
            expect_punct("=");
            Token src = expect_ident("source variable");
            if (kKeywords.count(src.text)) fail(src, "store source must be a variable");
            expect_punct(";");
            return Stmt::store(first.text, member.text, src.text);
        }
        if (try_punct("(")) {  // function-style call without destination
            auto args = parse_args();
            expect_punct(";");
            return Stmt::call(std::nullopt, first.text, std::move(args));
        }

        expect_punct("=");
        const Token& rhs = lex_.peek();
        if (rhs.kind == Tok::Int) {
            Token v = lex_.next();
            expect_punct(";");
            return Stmt::prim_int(first.text, v.int_val);
        }
        if (rhs.kind == Tok::Char) {
            Token v = lex_.next();
            expect_punct(";");
            return Stmt::prim_char(first.text, v.char_val);
        }
        if (rhs.kind != Tok::Ident) fail(rhs, "expected statement right-hand side");
        if (rhs.text == "null") {
            lex_.next();
            expect_punct(";");
            return Stmt::prim_null(first.text);
        }
        if (rhs.text == "true" || rhs.text == "false") {
            Token v = lex_.next();
            expect_punct(";");
            return Stmt::prim_bool(first.text, v.text == "true");
        }
        if (rhs.text == "new") {
            lex_.next();
            Token tname = expect_ident("type name");
            std::vector<VarId> args;
            if (try_punct("(")) args = parse_args();
            expect_punct(";");
            int n = ++site_counts[first.text];
            std::string site = fn.id + ".o_" + first.text;
            if (n > 1) site += "_" + std::to_string(n);
            return Stmt::alloc(first.text, tname.text, site, std::move(args));
        }
        Token src = lex_.next();
        if (kKeywords.count(src.text)) fail(src, "unexpected keyword '" + src.text + "'");
        if (try_punct(".")) {
            Token member = expect_ident("field or function name");
            if (try_punct("(")) {  // method-style call with destination
                auto args = parse_args(src.text);
                expect_punct(";");
                return Stmt::call(first.text, member.text, std::move(args));
            }
            expect_punct(";");
            return Stmt::load(first.text, src.text, member.text);
        }
        if (try_punct("(")) {  // function-style call with destination
            auto args = parse_args();
            expect_punct(";");
            return Stmt::call(first.text, src.text, std::move(args));
        }
        expect_punct(";");
        return Stmt::assign(first.text, src.text);
    }

    std::optional<VarId> parse_operand() {
        Token t = expect_ident("variable or null");
        if (t.text == "null") return std::nullopt;
        if (kKeywords.count(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
        return t.text;
    }

    std::vector<VarId> parse_args(std::optional<VarId> receiver = std::nullopt) {
        std::vector<VarId> args;
        if (receiver) args.push_back(*receiver);
        if (try_punct(")")) return args;
        for (;;) {
            Token a = expect_ident("argument variable");
            if (kKeywords.count(a.text)) fail(a, "argument must be a variable");
            args.push_back(a.text);
            if (try_punct(")")) break;
            expect_punct(",");
        }
        return args;
    }

    TypeDef& ensure_type(Program& p, const TypeId& id, const Token& where, const std::string& lib) {
        for (auto& t : p.types)
            if (t.id == id) return t;
        (void)where;
        p.types.push_back(TypeDef{id, {}, {}});
        if (!lib.empty()) p.type_library[id] = lib;
        return p.types.back();
    }

    TypeDef& mutable_type(Program& p, const TypeId& id, const Token* where = nullptr,
                          const std::string& lib = "") {
        for (auto& t : p.types)
            if (t.id == id) return t;
        if (where) return ensure_type(p, id, *where, lib);
        throw std::logic_error("type lookup failed: " + id);
    }

    Token expect_ident(const std::string& what) {
        Token t = lex_.next();
        if (t.kind != Tok::Ident) fail(t, "expected " + what);
        return t;
    }
    void expect_punct(const std::string& p) {
        Token t = lex_.next();
        if (t.kind != Tok::Punct || t.text != p) fail(t, "expected '" + p + "'");
    }
    bool try_punct(const std::string& p) {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Punct && t.text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg);
    }

    Lexer lex_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class VK { Unknown, Ref, Prim };

struct VarInfo {
    VK kind = VK::Unknown;
    PrimKind prim = PrimKind::Int;
    TypeId type;  // may be empty for refs of unknown type
};

void validate_fn(const Program& p, const FunctionDef& fn, bool complete) {
    std::unordered_map<VarId, VarInfo> vars;
    std::set<VarId> param_names;
    for (const auto& ps : fn.params) {
        if (!param_names.insert(ps.name).second)
            throw ValidateError("function '" + fn.id + "': duplicate parameter '" + ps.name + "'");
        VarInfo vi;
        if (ps.type.is_prim) {
            vi.kind = VK::Prim;
            vi.prim = ps.type.prim;
        } else {
            vi.kind = VK::Ref;
            vi.type = ps.type.name;
            if (complete && !p.find_type(ps.type.name))
                throw ValidateError("function '" + fn.id + "': parameter '" + ps.name +
                                    "' has undeclared type '" + ps.type.name + "'");
        }
        vars[ps.name] = vi;
    }
    if (fn.has_ret && complete && !fn.ret_type.is_prim && !p.find_type(fn.ret_type.name))
        throw ValidateError("function '" + fn.id + "': undeclared return type '" +
                            fn.ret_type.name + "'");

    auto defined = [&](const VarId& v) { return vars.count(v) > 0; };
    auto require_defined = [&](const VarId& v, const char* role) {
        if (!defined(v))
            throw ValidateError("function '" + fn.id + "': use of undefined variable '" + v +
                                "' as " + role);
    };
    auto require_not_prim = [&](const VarId& v, const char* role) {
        auto it = vars.find(v);
        if (it != vars.end() && it->second.kind == VK::Prim)
            throw ValidateError("function '" + fn.id + "': primitive variable '" + v +
                                "' used as " + role);
    };

    int returns_seen = 0;
    for (size_t i = 0; i < fn.body.size(); ++i) {
        const Stmt& s = fn.body[i];
        switch (s.kind) {
            case Stmt::Kind::Assign: {
                require_defined(s.src, "assignment source");
                vars[s.dst] = vars[s.src];
                break;
            }
            case Stmt::Kind::PrimInit: {
                VarInfo vi;
                if (s.lit == Stmt::Lit::Null) {
                    vi.kind = VK::Ref;
                } else {
                    vi.kind = VK::Prim;
                    vi.prim = s.lit == Stmt::Lit::Int    ? PrimKind::Int
                              : s.lit == Stmt::Lit::Bool ? PrimKind::Bool
                                                         : PrimKind::Char;
                }
                vars[s.dst] = vi;
                break;
            }
            case Stmt::Kind::Alloc: {
                const TypeDef* td = p.find_type(s.type);
                if (complete && !td)
                    throw ValidateError("function '" + fn.id + "': allocation of undeclared type '" +
                                        s.type + "'");
                for (const auto& a : s.args) require_defined(a, "constructor argument");
                if (td) {
                    bool ok = td->ctors.empty() ? s.args.empty() : false;
                    for (const auto& c : td->ctors)
                        if (c.params.size() == s.args.size()) ok = true;
                    if (complete && !ok)
                        throw ValidateError("function '" + fn.id + "': no constructor of '" +
                                            s.type + "' takes " + std::to_string(s.args.size()) +
                                            " arguments");
                }
                vars[s.dst] = VarInfo{VK::Ref, PrimKind::Int, s.type};
                break;
            }
            case Stmt::Kind::Store: {
                require_defined(s.base, "store base");
                require_not_prim(s.base, "store base");
                require_defined(s.src, "store source");
                if (complete && !p.field_declared(s.field))
                    throw ValidateError("function '" + fn.id + "': undeclared field '" + s.field +
                                        "'");
                break;
            }
            case Stmt::Kind::Load: {
                require_defined(s.base, "load base");
                require_not_prim(s.base, "load base");
                if (complete && !p.field_declared(s.field))
                    throw ValidateError("function '" + fn.id + "': undeclared field '" + s.field +
                                        "'");
                vars[s.dst] = VarInfo{VK::Unknown, PrimKind::Int, {}};
                break;
            }
            case Stmt::Kind::Call: {
                const FunctionDef* callee = p.find_function(s.callee);
                if (complete && !callee)
                    throw ValidateError("function '" + fn.id + "': call to undeclared function '" +
                                        s.callee + "'");
                for (const auto& a : s.args) require_defined(a, "call argument");
                if (callee) {
                    if (s.args.size() != callee->params.size())
                        throw ValidateError("function '" + fn.id + "': call to '" + s.callee +
                                            "' passes " + std::to_string(s.args.size()) +
                                            " arguments, expected " +
                                            std::to_string(callee->params.size()));
                    if (!s.dst.empty() && !callee->has_ret)
                        throw ValidateError("function '" + fn.id + "': call captures result of void function '" +
                                            s.callee + "'");
                }
                if (!s.dst.empty()) vars[s.dst] = VarInfo{VK::Unknown, PrimKind::Int, {}};
                break;
            }
            case Stmt::Kind::Return: {
                require_defined(s.src, "return value");
                ++returns_seen;
                if (!fn.has_ret)
                    throw ValidateError("function '" + fn.id + "': return in a void function");
                if (!fn.is_fragment && i + 1 != fn.body.size())
                    throw ValidateError("function '" + fn.id + "': return before body end");
                break;
            }
            case Stmt::Kind::ReturnCmp: {
                if (s.cmp_lhs) require_defined(*s.cmp_lhs, "comparison operand");
                if (s.cmp_rhs) require_defined(*s.cmp_rhs, "comparison operand");
                ++returns_seen;
                if (!fn.has_ret || !fn.ret_type.is_prim || fn.ret_type.prim != PrimKind::Bool)
                    throw ValidateError("function '" + fn.id +
                                        "': identity comparison requires a bool return");
                if (i + 1 != fn.body.size())
                    throw ValidateError("function '" + fn.id + "': return before body end");
                break;
            }
        }
    }
    if (fn.has_ret) {
        if (returns_seen == 0)
            throw ValidateError("function '" + fn.id + "': missing return");
        if (!fn.is_fragment && returns_seen > 1)
            throw ValidateError("function '" + fn.id + "': multiple returns");
        const Stmt& last = fn.body.back();
        if (last.kind != Stmt::Kind::Return && last.kind != Stmt::Kind::ReturnCmp)
            throw ValidateError("function '" + fn.id + "': body does not end with a return");
    }
}

}  // namespace

void validate(const Program& p, Linkage linkage) {
    bool complete = linkage == Linkage::SelfContained;
    if (p.functions.empty()) throw ValidateError("no functions declared");
    std::set<TypeId> tnames;
    for (const auto& t : p.types) {
        if (!tnames.insert(t.id).second) throw ValidateError("duplicate type '" + t.id + "'");
        for (const auto& c : t.ctors)
            for (const auto& pr : c.params)
                if (!pr.is_prim && complete && !p.find_type(pr.name))
                    throw ValidateError("constructor of '" + t.id + "' references undeclared type '" +
                                        pr.name + "'");
    }
    std::set<FuncId> fnames;
    for (const auto& f : p.functions)
        if (!fnames.insert(f.id).second) throw ValidateError("duplicate function '" + f.id + "'");
    if (p.entry && !p.find_function(*p.entry))
        throw ValidateError("entry function '" + *p.entry + "' not declared");
    for (const auto& f : p.functions) validate_fn(p, f, complete);
}

Program parse_program(const std::string& text, Linkage linkage) {
    Parser parser(text);
    Program p = parser.parse();
    validate(p, linkage);
    return p;
}

Program link_programs(const Program& client, const Program& library) {
    Program out = library;
    for (const auto& t : client.types) {
        if (out.find_type(t.id))
            throw ValidateError("link: type '" + t.id + "' declared in both programs");
        out.types.push_back(t);
    }
    for (const auto& f : client.functions) {
        if (out.find_function(f.id))
            throw ValidateError("link: function '" + f.id + "' declared in both programs");
        out.functions.push_back(f);
    }
    for (const auto& lib : client.libraries) out.libraries.push_back(lib);
    for (const auto& [k, v] : client.fn_library) out.fn_library[k] = v;
    for (const auto& [k, v] : client.type_library) out.type_library[k] = v;
    out.entry = client.entry ? client.entry : library.entry;
    validate(out, Linkage::SelfContained);
    return out;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

void print_stmt(std::ostringstream& os, const Stmt& s, const std::string& indent) {
    os << indent;
    switch (s.kind) {
        case Stmt::Kind::Assign:
            os << s.dst << " = " << s.src << ";";
            break;
        case Stmt::Kind::PrimInit:
            os << s.dst << " = ";
            switch (s.lit) {
                case Stmt::Lit::Null: os << "null"; break;
                case Stmt::Lit::Int: os << s.lit_int; break;
                case Stmt::Lit::Bool: os << (s.lit_bool ? "true" : "false"); break;
                case Stmt::Lit::Char: os << '\'' << s.lit_char << '\''; break;
            }
            os << ";";
            break;
        case Stmt::Kind::Alloc: {
            os << s.dst << " = new " << s.type;
            if (!s.args.empty()) {
                os << "(";
                for (size_t i = 0; i < s.args.size(); ++i)
                    os << (i ? ", " : "") << s.args[i];
                os << ")";
            }
            os << ";";
            break;
        }
        case Stmt::Kind::Store:
            os << s.base << "." << s.field << " = " << s.src << ";";
            break;
        case Stmt::Kind::Load:
            os << s.dst << " = " << s.base << "." << s.field << ";";
            break;
        case Stmt::Kind::Call: {
            if (!s.dst.empty()) os << s.dst << " = ";
            if (s.args.empty()) {
                os << s.callee << "()";
            } else {
                os << s.args[0] << "." << s.callee << "(";
                for (size_t i = 1; i < s.args.size(); ++i)
                    os << (i > 1 ? ", " : "") << s.args[i];
                os << ")";
            }
            os << ";";
            break;
        }
        case Stmt::Kind::Return:
            os << "return " << s.src << ";";
            break;
        case Stmt::Kind::ReturnCmp:
            os << "return " << (s.cmp_lhs ? *s.cmp_lhs : "null") << " == "
               << (s.cmp_rhs ? *s.cmp_rhs : "null") << ";";
            break;
    }
    os << "\n";
}

void print_fn(std::ostringstream& os, const FunctionDef& fn, const std::string& indent) {
    os << indent << "fn " << fn.id << "(";
    for (size_t i = 0; i < fn.params.size(); ++i)
        os << (i ? ", " : "") << fn.params[i].name << ": " << to_string(fn.params[i].type);
    os << ")";
    if (fn.has_ret) os << " -> " << fn.ret_name << ": " << to_string(fn.ret_type);
    os << " {\n";
    for (const auto& s : fn.body) print_stmt(os, s, indent + "  ");
    os << indent << "}\n";
}

void print_type_members(std::ostringstream& os, const TypeDef& t, const std::string& indent) {
    for (const auto& f : t.fields) os << indent << "field " << f << ";\n";
    for (const auto& c : t.ctors) {
        os << indent << "ctor " << t.id << "(";
        for (size_t i = 0; i < c.params.size(); ++i)
            os << (i ? ", " : "") << to_string(c.params[i]);
        os << ");\n";
    }
}

void print_type(std::ostringstream& os, const TypeDef& t, const std::string& indent) {
    if (t.fields.empty() && t.ctors.empty()) {
        os << indent << "type " << t.id << ";\n";
        return;
    }
    os << indent << "type " << t.id << " {\n";
    print_type_members(os, t, indent + "  ");
    os << indent << "}\n";
}

}  // namespace

std::string print_program(const Program& p) {
    std::ostringstream os;
    if (p.entry) os << "entry " << *p.entry << ";\n";
    // The types vector fixes the relative order of loose types and library
    // blocks (a library's first type is created when its block opens).
    std::set<std::string> printed_libs;
    auto print_library = [&](const std::string& lib) {
        os << "library " << lib << " {\n";
        for (const auto& t : p.types) {
            auto it = p.type_library.find(t.id);
            if (it == p.type_library.end() || it->second != lib) continue;
            if (t.id == lib)
                print_type_members(os, t, "  ");  // implicit library type
            else
                print_type(os, t, "  ");
        }
        for (const auto& f : p.functions) {
            auto it = p.fn_library.find(f.id);
            if (it != p.fn_library.end() && it->second == lib) print_fn(os, f, "  ");
        }
        os << "}\n";
    };
    for (const auto& t : p.types) {
        auto it = p.type_library.find(t.id);
        if (it == p.type_library.end()) {
            print_type(os, t, "");
        } else if (printed_libs.insert(it->second).second) {
            print_library(it->second);
        }
    }
    for (const auto& lib : p.libraries)
        if (printed_libs.insert(lib).second) print_library(lib);
    for (const auto& f : p.functions)
        if (!p.fn_library.count(f.id)) print_fn(os, f, "");
    return os.str();
}

Interface library_interface(const Program& p) {
    Interface itf;
    for (const auto& f : p.functions) {
        if (!f.is_library) continue;
        Interface::Entry e;
        e.fn = f.id;
        for (const auto& ps : f.params) e.param_kinds.push_back(ps.type);
        if (f.has_ret) e.ret_kind = f.ret_type;
        itf.functions.push_back(std::move(e));
    }
    return itf;
}

}  // namespace ptspec
