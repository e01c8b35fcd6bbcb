#include "ptspec/graph.hpp"

#include <map>

namespace ptspec {

int VertexTable::var(const FuncId& fn, const VarId& v) {
    auto key = std::make_pair(fn, v);
    auto it = var_ids.find(key);
    if (it != var_ids.end()) return it->second;
    int id = size();
    var_ids.emplace(key, id);
    infos.push_back(Info{false, fn, v});
    return id;
}

int VertexTable::site(const FuncId& fn, const std::string& site_id) {
    auto it = site_ids.find(site_id);
    if (it != site_ids.end()) return it->second;
    int id = size();
    site_ids.emplace(site_id, id);
    infos.push_back(Info{true, fn, site_id});
    return id;
}

int VertexTable::find_var(const FuncId& fn, const VarId& v) const {
    auto it = var_ids.find(std::make_pair(fn, v));
    return it == var_ids.end() ? -1 : it->second;
}

std::string VertexTable::qualified(int v) const {
    const Info& in = infos[v];
    if (in.is_site) return in.name;  // site ids already carry the function prefix
    return in.fn + "." + in.name;
}

std::string VertexTable::display(int v) const {
    const Info& in = infos[v];
    std::string short_name = in.name;
    if (in.is_site) {
        auto dot = short_name.find('.');
        if (dot != std::string::npos) short_name = short_name.substr(dot + 1);
    }
    int hits = 0;
    for (const auto& other : infos) {
        std::string os = other.name;
        if (other.is_site) {
            auto dot = os.find('.');
            if (dot != std::string::npos) os = os.substr(dot + 1);
        }
        if (other.is_site == in.is_site && os == short_name) ++hits;
    }
    return hits == 1 ? short_name : qualified(v);
}

std::string to_string(const EdgeLabel& l) {
    std::string s;
    switch (l.base) {
        case EdgeLabel::Base::Assign: s = "Assign"; break;
        case EdgeLabel::Base::New: s = "New"; break;
        case EdgeLabel::Base::Store: s = "Store[" + l.field + "]"; break;
        case EdgeLabel::Base::Load: s = "Load[" + l.field + "]"; break;
    }
    return l.bar ? s + "~" : s;
}

void PTGraph::add(int src, const EdgeLabel& label, int dst) {
    edges.emplace_back(src, label, dst);
    edges.emplace_back(dst, label.reversed(), src);
}

PTGraph extract_graph(const Program& p, bool include_library_bodies) {
    PTGraph g;
    auto& vt = g.vertices;

    for (const auto& fn : p.functions) {
        if (!fn.is_library) continue;
        for (const auto& ps : fn.params)
            if (!ps.type.is_prim) vt.var(fn.id, ps.name);
        if (fn.has_ret && !fn.ret_type.is_prim) vt.ret_vertex(fn.id);
    }

    auto assign = [] { return EdgeLabel{EdgeLabel::Base::Assign, false, {}}; };

    for (const auto& fn : p.functions) {
        if (!include_library_bodies && fn.is_library) continue;
        for (const auto& s : fn.body) {
            switch (s.kind) {
                case Stmt::Kind::Assign:
                    g.add(vt.var(fn.id, s.src), assign(), vt.var(fn.id, s.dst));
                    break;
                case Stmt::Kind::Alloc:
                    g.add(vt.site(fn.id, s.site), EdgeLabel{EdgeLabel::Base::New, false, {}},
                          vt.var(fn.id, s.dst));
                    break;
                case Stmt::Kind::Store:
                    g.add(vt.var(fn.id, s.src), EdgeLabel{EdgeLabel::Base::Store, false, s.field},
                          vt.var(fn.id, s.base));
                    break;
                case Stmt::Kind::Load:
                    g.add(vt.var(fn.id, s.base), EdgeLabel{EdgeLabel::Base::Load, false, s.field},
                          vt.var(fn.id, s.dst));
                    break;
                case Stmt::Kind::Return:
                    g.add(vt.var(fn.id, s.src), assign(), vt.ret_vertex(fn.id));
                    break;
                case Stmt::Kind::Call: {
                    // Caller variables meet the callee's interface vertices.
                    const FunctionDef* callee = p.find_function(s.callee);
                    if (!callee) break;
                    for (size_t i = 0; i < s.args.size() && i < callee->params.size(); ++i) {
                        if (callee->params[i].type.is_prim) continue;
                        g.add(vt.var(fn.id, s.args[i]), assign(),
                              vt.var(callee->id, callee->params[i].name));
                    }
                    if (!s.dst.empty() && callee->has_ret && !callee->ret_type.is_prim)
                        g.add(vt.ret_vertex(callee->id), assign(), vt.var(fn.id, s.dst));
                    break;
                }
                case Stmt::Kind::ReturnCmp:
                case Stmt::Kind::PrimInit:
                    break;  // no heap effect
            }
        }
    }
    return g;
}

}  // namespace ptspec
