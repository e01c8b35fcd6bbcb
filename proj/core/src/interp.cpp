#include "ptspec/interp.hpp"

namespace ptspec {

ObjRef Heap::allocate(TypeId type, std::string site) {
    ObjRef r = next_ref++;
    objects.emplace(r, HeapObject{std::move(type), std::move(site), {}});
    return r;
}

namespace {

struct Machine {
    const Program& prog;
    Heap heap;
    int64_t fuel;
    const std::function<void(const std::map<VarId, Value>&, const Heap&)>& trace;

    // set when execution aborted
    ExecResult abort;
    bool aborted = false;

    [[nodiscard]] bool fail(ExecResult::Outcome o, const std::string& where) {
        abort.outcome = o;
        abort.where = where;
        aborted = true;
        return false;
    }

    bool run_fn(const FunctionDef& fn, const std::vector<Value>& args, Value& out, int depth) {
        std::map<VarId, Value> locals;
        for (size_t i = 0; i < fn.params.size(); ++i) locals[fn.params[i].name] = args[i];
        for (const auto& s : fn.body) {
            if (--fuel <= 0) return fail(ExecResult::Outcome::OutOfFuel, fn.id);
            switch (s.kind) {
                case Stmt::Kind::Assign:
                    locals[s.dst] = locals[s.src];
                    break;
                case Stmt::Kind::PrimInit:
                    switch (s.lit) {
                        case Stmt::Lit::Null: locals[s.dst] = Value::null(); break;
                        case Stmt::Lit::Int: locals[s.dst] = Value::of_int(s.lit_int); break;
                        case Stmt::Lit::Bool: locals[s.dst] = Value::of_bool(s.lit_bool); break;
                        case Stmt::Lit::Char: locals[s.dst] = Value::of_char(s.lit_char); break;
                    }
                    break;
                case Stmt::Kind::Alloc:
                    locals[s.dst] = Value::object(heap.allocate(s.type, s.site));
                    break;
                case Stmt::Kind::Store: {
                    Value base = locals[s.base];
                    if (base.kind != Value::Kind::Obj)
                        return fail(ExecResult::Outcome::NullDeref, fn.id);
                    heap.objects.at(base.obj).fields[s.field] = locals[s.src];
                    break;
                }
                case Stmt::Kind::Load: {
                    Value base = locals[s.base];
                    if (base.kind != Value::Kind::Obj)
                        return fail(ExecResult::Outcome::NullDeref, fn.id);
                    const auto& fields = heap.objects.at(base.obj).fields;
                    auto it = fields.find(s.field);
                    locals[s.dst] = it == fields.end() ? Value::null() : it->second;
                    break;
                }
                case Stmt::Kind::Call: {
                    const FunctionDef* callee = prog.find_function(s.callee);
                    if (!callee) return fail(ExecResult::Outcome::UndefinedCall, s.callee);
                    std::vector<Value> cargs;
                    cargs.reserve(s.args.size());
                    for (const auto& a : s.args) cargs.push_back(locals[a]);
                    Value result;
                    if (!run_fn(*callee, cargs, result, depth + 1)) return false;
                    if (!s.dst.empty()) locals[s.dst] = result;
                    break;
                }
                case Stmt::Kind::Return:
                    out = locals[s.src];
                    if (trace && depth == 0) trace(locals, heap);
                    return true;
                case Stmt::Kind::ReturnCmp: {
                    Value l = s.cmp_lhs ? locals[*s.cmp_lhs] : Value::null();
                    Value r = s.cmp_rhs ? locals[*s.cmp_rhs] : Value::null();
                    out = Value::of_bool(l == r);
                    if (trace && depth == 0) trace(locals, heap);
                    return true;
                }
            }
            if (trace && depth == 0) trace(locals, heap);
        }
        out = Value::null();  // void function fell off the end
        return true;
    }
};

}  // namespace

ExecResult execute(const Program& prog, const FuncId& entry, int64_t fuel,
                   const std::function<void(const std::map<VarId, Value>&, const Heap&)>& trace) {
    const FunctionDef* fn = prog.find_function(entry);
    ExecResult res;
    if (!fn) {
        res.outcome = ExecResult::Outcome::UndefinedCall;
        res.where = entry;
        return res;
    }
    Machine m{prog, Heap{}, fuel, trace, {}, false};
    std::vector<Value> args(fn->params.size(), Value::null());
    Value out;
    if (!m.run_fn(*fn, args, out, 0)) return m.abort;
    res.outcome = ExecResult::Outcome::Returned;
    res.value = out;
    return res;
}

}  // namespace ptspec
