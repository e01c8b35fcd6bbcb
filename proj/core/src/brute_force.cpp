// Testing oracles for the closure. Kept deliberately independent of the
// worklist solver: a length-indexed dynamic program straight over the
// un-binarized productions, and a literal enumerate-every-path CYK check for
// tiny graphs.
#include <algorithm>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "ptspec/closure.hpp"

namespace ptspec {

namespace {

struct TermEdges {
    // grouped terminal edges; field-parameterized ones keyed by field name
    std::vector<std::pair<int, int>> assign, assign_bar, new_, new_bar;
    std::map<FieldId, std::vector<std::pair<int, int>>> store, store_bar, load, load_bar;
    std::set<FieldId> fields;
};

TermEdges group_edges(const PTGraph& g) {
    TermEdges t;
    for (const auto& [u, l, v] : g.edges) {
        switch (l.base) {
            case EdgeLabel::Base::Assign:
                (l.bar ? t.assign_bar : t.assign).emplace_back(u, v);
                break;
            case EdgeLabel::Base::New:
                (l.bar ? t.new_bar : t.new_).emplace_back(u, v);
                break;
            case EdgeLabel::Base::Store:
                (l.bar ? t.store_bar : t.store)[l.field].emplace_back(u, v);
                t.fields.insert(l.field);
                break;
            case EdgeLabel::Base::Load:
                (l.bar ? t.load_bar : t.load)[l.field].emplace_back(u, v);
                t.fields.insert(l.field);
                break;
        }
    }
    return t;
}

struct Mat {
    int n = 0;
    std::vector<uint8_t> bits;
    explicit Mat(int n) : n(n), bits(static_cast<size_t>(n) * n, 0) {}
    uint8_t get(int u, int v) const { return bits[static_cast<size_t>(u) * n + v]; }
    void set(int u, int v) { bits[static_cast<size_t>(u) * n + v] = 1; }
};

// out |= a composed with terminal edges (u->v edges applied on the right)
void compose_right(const Mat& a, const std::vector<std::pair<int, int>>& es, Mat& out) {
    for (auto [u, v] : es)
        for (int s = 0; s < a.n; ++s)
            if (a.get(s, u)) out.set(s, v);
}

}  // namespace

ClosureResult brute_force_closure(const PTGraph& g, int max_path_len) {
    const int n = g.vertices.size();
    const int L = max_path_len;
    TermEdges t = group_edges(g);

    // M[nt][len]: pairs connected by a path of exactly `len` edges whose label
    // string derives from nt.
    auto make_layers = [&] { return std::vector<Mat>(L + 1, Mat(n)); };
    std::vector<Mat> T = make_layers(), TB = make_layers(), AL = make_layers(),
                     FT = make_layers();
    for (int x = 0; x < n; ++x) {
        T[0].set(x, x);
        TB[0].set(x, x);
    }

    for (int len = 1; len <= L; ++len) {
        // Transfer -> Transfer Assign
        compose_right(T[len - 1], t.assign, T[len]);
        // Transfer -> Transfer Store[f] Alias Load[f]
        for (const auto& f : t.fields) {
            auto st = t.store.find(f);
            auto ld = t.load.find(f);
            if (st == t.store.end() || ld == t.load.end()) continue;
            for (int l1 = 0; l1 + 2 <= len; ++l1) {
                int l2 = len - l1 - 2;
                for (auto [su, sv] : st->second)
                    for (auto [lu, lv] : ld->second)
                        if (AL[l2].get(sv, lu))
                            for (int s = 0; s < n; ++s)
                                if (T[l1].get(s, su)) T[len].set(s, lv);
            }
        }
        // TransferBar -> AssignBar TransferBar
        for (auto [u, v] : t.assign_bar)
            for (int d = 0; d < n; ++d)
                if (TB[len - 1].get(v, d)) TB[len].set(u, d);
        // TransferBar -> LoadBar[f] Alias StoreBar[f] TransferBar
        for (const auto& f : t.fields) {
            auto lb = t.load_bar.find(f);
            auto sb = t.store_bar.find(f);
            if (lb == t.load_bar.end() || sb == t.store_bar.end()) continue;
            for (int la = 0; la + 2 <= len; ++la) {
                int rest = len - la - 2;
                for (auto [lu, lv] : lb->second)
                    for (auto [su, sv] : sb->second)
                        if (AL[la].get(lv, su))
                            for (int d = 0; d < n; ++d)
                                if (TB[rest].get(sv, d)) TB[len].set(lu, d);
            }
        }
        // Alias -> TransferBar NewBar New Transfer
        for (int l1 = 0; l1 + 2 <= len; ++l1) {
            int l2 = len - l1 - 2;
            for (auto [bu, bv] : t.new_bar)
                for (auto [nu, nv] : t.new_)
                    if (bv == nu)
                        for (int s = 0; s < n; ++s)
                            if (TB[l1].get(s, bu))
                                for (int d = 0; d < n; ++d)
                                    if (T[l2].get(nv, d)) AL[len].set(s, d);
        }
        // FlowsTo -> New Transfer
        for (auto [u, v] : t.new_)
            for (int d = 0; d < n; ++d)
                if (T[len - 1].get(v, d)) FT[len].set(u, d);
    }

    ClosureResult res;
    auto collect = [&](const std::vector<Mat>& m, Nonterminal nt) {
        Mat any(n);
        for (int len = 0; len <= L; ++len)
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v)
                    if (m[len].get(u, v)) any.set(u, v);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (any.get(u, v)) res.derived.emplace_back(u, nt, v);
    };
    collect(T, Nonterminal::Transfer);
    collect(TB, Nonterminal::TransferBar);
    collect(AL, Nonterminal::Alias);
    collect(FT, Nonterminal::FlowsTo);
    std::sort(res.derived.begin(), res.derived.end());
    return res;
}

// ---------------------------------------------------------------------------
// Literal path enumeration + CYK parse (tiny graphs only).
// ---------------------------------------------------------------------------

namespace {

enum PK : uint8_t { pAssign, pAssignBar, pNew, pNewBar, pStore, pStoreBar, pLoad, pLoadBar };

struct PLabel {
    uint8_t kind;
    int field;  // index into field list, -1 otherwise
    bool operator==(const PLabel&) const = default;
    bool operator<(const PLabel& o) const {
        return std::tie(kind, field) < std::tie(o.kind, o.field);
    }
};

struct StringParser {
    const std::vector<PLabel>& s;
    // memo[nt][i][j]: -1 unknown, 0 no, 1 yes
    std::vector<int8_t> memo;
    int n;

    explicit StringParser(const std::vector<PLabel>& s)
        : s(s), memo(4 * (s.size() + 1) * (s.size() + 1), -1), n(static_cast<int>(s.size())) {}

    int8_t& cell(int nt, int i, int j) { return memo[(nt * (n + 1) + i) * (n + 1) + j]; }

    bool derives(int nt, int i, int j) {
        int8_t& m = cell(nt, i, j);
        if (m != -1) return m;
        m = 0;  // guard against cycles (spans only shrink, but be safe)
        bool ok = false;
        switch (nt) {
            case 0:  // Transfer
                if (i == j) ok = true;
                if (!ok && j > i && s[j - 1].kind == pAssign && derives(0, i, j - 1)) ok = true;
                if (!ok) {
                    for (int m2 = i; m2 < j - 1 && !ok; ++m2) {
                        if (s[m2].kind != pStore) continue;
                        if (s[j - 1].kind != pLoad || s[j - 1].field != s[m2].field) continue;
                        ok = derives(0, i, m2) && derives(2, m2 + 1, j - 1);
                    }
                }
                break;
            case 1:  // TransferBar
                if (i == j) ok = true;
                if (!ok && j > i && s[i].kind == pAssignBar && derives(1, i + 1, j)) ok = true;
                if (!ok && j > i && s[i].kind == pLoadBar) {
                    for (int m2 = i + 1; m2 < j && !ok; ++m2) {
                        if (s[m2].kind != pStoreBar || s[m2].field != s[i].field) continue;
                        ok = derives(2, i + 1, m2) && derives(1, m2 + 1, j);
                    }
                }
                break;
            case 2:  // Alias
                for (int m2 = i; m2 + 1 < j && !ok; ++m2) {
                    if (s[m2].kind != pNewBar || s[m2 + 1].kind != pNew) continue;
                    ok = derives(1, i, m2) && derives(0, m2 + 2, j);
                }
                break;
            case 3:  // FlowsTo
                ok = j > i && s[i].kind == pNew && derives(0, i + 1, j);
                break;
        }
        m = ok ? 1 : 0;
        return ok;
    }
};

}  // namespace

ClosureResult enumerated_paths_closure(const PTGraph& g, int max_path_len) {
    const int n = g.vertices.size();
    std::vector<std::string> fields;
    auto field_idx = [&](const FieldId& f) {
        for (size_t i = 0; i < fields.size(); ++i)
            if (fields[i] == f) return static_cast<int>(i);
        fields.push_back(f);
        return static_cast<int>(fields.size() - 1);
    };
    std::vector<std::vector<std::pair<PLabel, int>>> adj(n);
    for (const auto& [u, l, v] : g.edges) {
        PLabel pl{};
        pl.field = -1;
        switch (l.base) {
            case EdgeLabel::Base::Assign: pl.kind = l.bar ? pAssignBar : pAssign; break;
            case EdgeLabel::Base::New: pl.kind = l.bar ? pNewBar : pNew; break;
            case EdgeLabel::Base::Store:
                pl.kind = l.bar ? pStoreBar : pStore;
                pl.field = field_idx(l.field);
                break;
            case EdgeLabel::Base::Load:
                pl.kind = l.bar ? pLoadBar : pLoad;
                pl.field = field_idx(l.field);
                break;
        }
        adj[u].emplace_back(pl, v);
    }

    // distinct label strings per (u, v)
    std::map<std::pair<int, int>, std::set<std::vector<PLabel>>> strings;
    std::vector<PLabel> cur;
    std::function<void(int, int, int)> dfs = [&](int start, int at, int depth) {
        strings[{start, at}].insert(cur);
        if (depth == max_path_len) return;
        for (const auto& [l, w] : adj[at]) {
            cur.push_back(l);
            dfs(start, w, depth + 1);
            cur.pop_back();
        }
    };
    for (int u = 0; u < n; ++u) dfs(u, u, 0);

    ClosureResult res;
    std::set<DerivedEdge> acc;
    for (const auto& [uv, set] : strings) {
        for (const auto& str : set) {
            StringParser p(str);
            if (p.derives(0, 0, p.n)) acc.insert({uv.first, Nonterminal::Transfer, uv.second});
            if (p.derives(1, 0, p.n)) acc.insert({uv.first, Nonterminal::TransferBar, uv.second});
            if (p.n > 0 && p.derives(2, 0, p.n)) acc.insert({uv.first, Nonterminal::Alias, uv.second});
            if (p.n > 0 && p.derives(3, 0, p.n)) acc.insert({uv.first, Nonterminal::FlowsTo, uv.second});
        }
    }
    res.derived.assign(acc.begin(), acc.end());
    return res;
}

}  // namespace ptspec
