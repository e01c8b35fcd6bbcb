// Labeled points-to graph extracted from a program: Assign/New/Store/Load
// edges plus their reversals, one extraction rule per statement form.
#ifndef PTSPEC_GRAPH_HPP
#define PTSPEC_GRAPH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ptspec/ir.hpp"

namespace ptspec {

// Vertices are program variables (per-function) and allocation sites. The
// table interns them; `$ret` is the canonical return-value vertex of a
// function, shared between call sites and body returns.
struct VertexTable {
    struct Info {
        bool is_site = false;
        FuncId fn;        // owning function (vars) or allocating function (sites)
        std::string name; // variable name or site id
    };
    std::vector<Info> infos;
    std::map<std::pair<FuncId, std::string>, int> var_ids;
    std::map<std::string, int> site_ids;

    int var(const FuncId& fn, const VarId& v);
    int site(const FuncId& fn, const std::string& site_id);
    int find_var(const FuncId& fn, const VarId& v) const;  // -1 if absent
    int ret_vertex(const FuncId& fn) { return var(fn, "$ret"); }
    int size() const { return static_cast<int>(infos.size()); }

    /// Fully qualified vertex name, e.g. `test.in` or `test.o_in`.
    std::string qualified(int v) const;
    /// Short display name when globally unambiguous, qualified otherwise.
    std::string display(int v) const;
};

struct EdgeLabel {
    enum class Base { Assign, New, Store, Load };
    Base base = Base::Assign;
    bool bar = false;
    FieldId field;  // Store/Load only

    bool operator==(const EdgeLabel&) const = default;
    auto operator<=>(const EdgeLabel&) const = default;
    EdgeLabel reversed() const { return EdgeLabel{base, !bar, field}; }
};

std::string to_string(const EdgeLabel& l);

struct PTGraph {
    VertexTable vertices;
    std::vector<std::tuple<int, EdgeLabel, int>> edges;  // includes reversals

    /// Adds the edge and its reversal.
    void add(int src, const EdgeLabel& label, int dst);
};

/// Fig.-2-style extraction. When include_library_bodies is false, library
/// function bodies contribute no edges; calls still contribute the interface
/// assignments arg_i -> p_{m,i} and $ret_m -> dst. Interface vertices of every
/// library function are always interned so specification rules can refer to
/// them even when a function is never called.
PTGraph extract_graph(const Program& p, bool include_library_bodies);

}  // namespace ptspec

#endif
