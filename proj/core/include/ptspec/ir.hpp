// Mini imperative IR: assignments, allocations, field stores/loads, calls,
// returns, and primitive initializers. Hosts both client programs and library
// implementations. Text format is line oriented; see parse_program.
#ifndef PTSPEC_IR_HPP
#define PTSPEC_IR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptspec {

using FuncId = std::string;
using TypeId = std::string;
using FieldId = std::string;
using VarId = std::string;

enum class PrimKind { Int, Bool, Char };

/// A parameter/return/constructor-argument type: a reference type or a primitive.
struct TypeRef {
    bool is_prim = false;
    PrimKind prim = PrimKind::Int;
    TypeId name;  // reference types only

    static TypeRef ref(TypeId t) { return TypeRef{false, PrimKind::Int, std::move(t)}; }
    static TypeRef primitive(PrimKind k) { return TypeRef{true, k, {}}; }
    bool operator==(const TypeRef&) const = default;
};

std::string to_string(const TypeRef& t);

struct CtorSig {
    std::vector<TypeRef> params;
    bool operator==(const CtorSig&) const = default;
};

struct TypeDef {
    TypeId id;
    std::vector<FieldId> fields;
    std::vector<CtorSig> ctors;  // declaration order; empty means implicit zero-arg ctor
    bool operator==(const TypeDef&) const = default;
};

struct ParamSig {
    VarId name;
    TypeRef type;
    bool operator==(const ParamSig&) const = default;
};

struct Stmt {
    enum class Kind { Assign, Alloc, Store, Load, Call, Return, ReturnCmp, PrimInit };
    enum class Lit { Null, Int, Bool, Char };

    Kind kind = Kind::Assign;
    VarId dst;                   // Assign/Alloc/Load/Call(optional)/PrimInit
    VarId src;                   // Assign/Store/Return
    VarId base;                  // Store/Load
    FieldId field;               // Store/Load
    TypeId type;                 // Alloc
    std::string site;            // Alloc: globally unique allocation site id
    FuncId callee;               // Call
    std::vector<VarId> args;     // Call arguments / Alloc ctor arguments
    Lit lit = Lit::Null;         // PrimInit
    int64_t lit_int = 0;
    bool lit_bool = false;
    char lit_char = 0;
    std::optional<VarId> cmp_lhs, cmp_rhs;  // ReturnCmp; nullopt = literal null

    bool operator==(const Stmt&) const = default;

    static Stmt assign(VarId dst, VarId src);
    static Stmt alloc(VarId dst, TypeId type, std::string site, std::vector<VarId> args = {});
    static Stmt store(VarId base, FieldId field, VarId src);
    static Stmt load(VarId dst, VarId base, FieldId field);
    static Stmt call(std::optional<VarId> dst, FuncId callee, std::vector<VarId> args);
    static Stmt ret(VarId src);
    static Stmt ret_cmp(std::optional<VarId> lhs, std::optional<VarId> rhs);
    static Stmt prim_null(VarId dst);
    static Stmt prim_int(VarId dst, int64_t v);
    static Stmt prim_bool(VarId dst, bool v);
    static Stmt prim_char(VarId dst, char v);
};

struct FunctionDef {
    FuncId id;
    std::vector<ParamSig> params;  // parameter 0 is the receiver when present
    bool has_ret = false;
    VarId ret_name;
    TypeRef ret_type;
    std::vector<Stmt> body;
    bool is_library = false;
    bool is_fragment = false;  // generated code fragments may hold multiple returns

    bool operator==(const FunctionDef&) const = default;
};

struct Program {
    std::vector<TypeDef> types;          // declaration order
    std::vector<FunctionDef> functions;  // declaration order
    std::vector<std::string> libraries;  // library block names, declaration order
    std::map<FuncId, std::string> fn_library;    // library block a function came from
    std::map<TypeId, std::string> type_library;  // library block a type came from
    std::optional<FuncId> entry;

    const TypeDef* find_type(const TypeId& id) const;
    const FunctionDef* find_function(const FuncId& id) const;
    int function_index(const FuncId& id) const;  // -1 if absent
    bool field_declared(const FieldId& f) const;

    bool operator==(const Program&) const = default;
};

/// Library interface: reference-vs-primitive kinds per slot and the visible
/// variable set V_path (reference parameters and reference returns of library
/// functions).
struct Interface {
    struct Entry {
        FuncId fn;
        std::vector<TypeRef> param_kinds;
        std::optional<TypeRef> ret_kind;
    };
    std::vector<Entry> functions;  // library functions, declaration order
    const Entry* find(const FuncId& fn) const;
};

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line, int col, const std::string& msg);
};

struct ValidateError : std::runtime_error {
    explicit ValidateError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Linkage { SelfContained, Open };

/// Parses IR source text. With Linkage::SelfContained (the default) the result
/// is fully validated; Linkage::Open defers cross-reference checks (undeclared
/// functions/types/fields) until link_programs, for client files that lean on
/// a separately parsed library.
Program parse_program(const std::string& text, Linkage linkage = Linkage::SelfContained);

/// Canonical printer; parse_program(print_program(p)) == p structurally.
std::string print_program(const Program& p);

/// Merges a client program with a library (or fragment) program and validates
/// the result. Declarations of the library come first.
Program link_programs(const Program& client, const Program& library);

/// Validates invariants: unique names, resolvable references, def-before-use,
/// one return at body end (fragments may hold several), distinct params.
void validate(const Program& p, Linkage linkage = Linkage::SelfContained);

Interface library_interface(const Program& p);

}  // namespace ptspec

#endif
