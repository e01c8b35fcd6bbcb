// Concrete executor for the IR. Gives blackbox access to library
// implementations: runs a synthesized unit test and reports the boolean its
// final identity comparison produced.
#ifndef PTSPEC_INTERP_HPP
#define PTSPEC_INTERP_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "ptspec/ir.hpp"

namespace ptspec {

using ObjRef = uint64_t;  // never reused within one Heap

struct Value {
    enum class Kind { Null, Obj, Int, Bool, Char };
    Kind kind = Kind::Null;
    ObjRef obj = 0;
    int64_t i = 0;
    bool b = false;
    char c = 0;

    static Value null() { return {}; }
    static Value object(ObjRef r) { Value v; v.kind = Kind::Obj; v.obj = r; return v; }
    static Value of_int(int64_t x) { Value v; v.kind = Kind::Int; v.i = x; return v; }
    static Value of_bool(bool x) { Value v; v.kind = Kind::Bool; v.b = x; return v; }
    static Value of_char(char x) { Value v; v.kind = Kind::Char; v.c = x; return v; }
    bool operator==(const Value&) const = default;
};

struct HeapObject {
    TypeId type;
    std::string site;  // allocation site that created this object
    std::map<FieldId, Value> fields;  // unwritten fields read as null
};

struct Heap {
    std::map<ObjRef, HeapObject> objects;
    ObjRef next_ref = 1;

    ObjRef allocate(TypeId type, std::string site);
};

struct ExecResult {
    enum class Outcome { Returned, NullDeref, OutOfFuel, UndefinedCall };
    Outcome outcome = Outcome::Returned;
    Value value;        // Returned only
    std::string where;  // NullDeref/UndefinedCall: offending function

    bool passed() const {
        return outcome == Outcome::Returned && value.kind == Value::Kind::Bool && value.b;
    }
};

/// Executes `entry` in `prog` with fresh locals and a fresh heap.
/// `trace`, when set, receives the entry function's locals after each of its
/// statements (used by tests to relate dynamic aliasing to the closure).
ExecResult execute(const Program& prog, const FuncId& entry, int64_t fuel,
                   const std::function<void(const std::map<VarId, Value>&, const Heap&)>& trace =
                       nullptr);

inline constexpr int64_t kDefaultFuel = 100000;

}  // namespace ptspec

#endif
