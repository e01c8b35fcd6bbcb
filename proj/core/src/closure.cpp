#include "ptspec/closure.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace ptspec {

std::string to_string(Nonterminal nt) {
    switch (nt) {
        case Nonterminal::Transfer: return "Transfer";
        case Nonterminal::TransferBar: return "TransferBar";
        case Nonterminal::Alias: return "Alias";
        case Nonterminal::FlowsTo: return "FlowsTo";
    }
    return "?";
}

bool ClosureResult::contains(int src, Nonterminal nt, int dst) const {
    return std::binary_search(derived.begin(), derived.end(), DerivedEdge{src, nt, dst});
}

std::vector<DerivedEdge> ClosureResult::by_nonterminal(Nonterminal nt) const {
    std::vector<DerivedEdge> out;
    for (const auto& e : derived)
        if (std::get<1>(e) == nt) out.push_back(e);
    return out;
}

namespace {

// Solver labels: the eight terminals, four public nonterminals, and the
// binarization intermediates.
enum K : uint8_t {
    kAssign, kAssignBar, kNew, kNewBar, kStore, kStoreBar, kLoad, kLoadBar,
    kTransfer, kTransferBar, kAlias, kFlowsTo,
    kAliasLoad,        // Alias Load[f]
    kStAliasLoad,      // Store[f] (Alias Load[f])
    kAliasStoreBar,    // Alias StoreBar[f]
    kLdAliasStoreBar,  // LoadBar[f] (Alias StoreBar[f])
    kBarNT,            // NewBar (New Transfer)
    kNumKinds
};

struct Label {
    uint8_t kind;
    int32_t field;  // -1 when not field-parameterized
    bool operator==(const Label&) const = default;
};

// A -> B C. Field handling: when eq_fields is set, the B and C fields must
// match; the result carries the field indicated by `af`.
enum class AF { None, FromB, FromC };
struct Prod {
    uint8_t a, b, c;
    bool eq_fields;
    AF af;
    const char* name;
};

constexpr Prod kProds[] = {
    {kTransfer, kTransfer, kAssign, false, AF::None, "Transfer->Transfer Assign"},
    {kTransferBar, kAssignBar, kTransferBar, false, AF::None, "TransferBar->AssignBar TransferBar"},
    {kAliasLoad, kAlias, kLoad, false, AF::FromC, "AliasLoad->Alias Load"},
    {kStAliasLoad, kStore, kAliasLoad, true, AF::FromB, "StAliasLoad->Store AliasLoad"},
    {kTransfer, kTransfer, kStAliasLoad, false, AF::None, "Transfer->Transfer StAliasLoad"},
    {kAliasStoreBar, kAlias, kStoreBar, false, AF::FromC, "AliasStoreBar->Alias StoreBar"},
    {kLdAliasStoreBar, kLoadBar, kAliasStoreBar, true, AF::FromB,
     "LdAliasStoreBar->LoadBar AliasStoreBar"},
    {kTransferBar, kLdAliasStoreBar, kTransferBar, false, AF::None,
     "TransferBar->LdAliasStoreBar TransferBar"},
    {kFlowsTo, kNew, kTransfer, false, AF::None, "FlowsTo->New Transfer"},
    {kBarNT, kNewBar, kFlowsTo, false, AF::None, "BarNT->NewBar FlowsTo"},
    {kAlias, kTransferBar, kBarNT, false, AF::None, "Alias->TransferBar BarNT"},
};

uint8_t label_kind(const EdgeLabel& l) {
    switch (l.base) {
        case EdgeLabel::Base::Assign: return l.bar ? kAssignBar : kAssign;
        case EdgeLabel::Base::New: return l.bar ? kNewBar : kNew;
        case EdgeLabel::Base::Store: return l.bar ? kStoreBar : kStore;
        case EdgeLabel::Base::Load: return l.bar ? kLoadBar : kLoad;
    }
    return kAssign;
}

uint8_t nt_kind(Nonterminal nt) {
    switch (nt) {
        case Nonterminal::Transfer: return kTransfer;
        case Nonterminal::TransferBar: return kTransferBar;
        case Nonterminal::Alias: return kAlias;
        case Nonterminal::FlowsTo: return kFlowsTo;
    }
    return kTransfer;
}

struct Edge {
    int u;
    Label l;
    int v;
};

uint64_t edge_key(const Edge& e) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(e.u)) << 42) |
           (static_cast<uint64_t>(static_cast<uint32_t>(e.v)) << 20) |
           (static_cast<uint64_t>(e.l.kind) << 14) |
           static_cast<uint64_t>(static_cast<uint32_t>(e.l.field + 1) & 0x3fff);
}

struct Solver {
    const PTGraph& g;
    const std::vector<CompiledRule>& rules;
    const ClosureOptions& opts;

    std::vector<std::string> field_names;
    std::unordered_map<std::string, int32_t> field_ids;
    std::unordered_set<uint64_t> seen;
    std::deque<Edge> worklist;
    std::vector<std::vector<std::pair<Label, int>>> out, in;
    // rule index: premise edge key -> rule indices
    std::unordered_map<uint64_t, std::vector<size_t>> rule_index;
    ClosureResult result;

    explicit Solver(const PTGraph& g, const std::vector<CompiledRule>& rules,
                    const ClosureOptions& opts)
        : g(g), rules(rules), opts(opts) {
        int n = g.vertices.size();
        out.resize(n);
        in.resize(n);
    }

    int32_t field_id(const FieldId& f) {
        auto it = field_ids.find(f);
        if (it != field_ids.end()) return it->second;
        int32_t id = static_cast<int32_t>(field_names.size());
        field_names.push_back(f);
        field_ids.emplace(f, id);
        return id;
    }

    void push(const Edge& e, const char* prod, const Edge* l, const Edge* r) {
        if (!seen.insert(edge_key(e)).second) return;
        worklist.push_back(e);
        if (opts.record_provenance && e.l.kind >= kTransfer && e.l.kind <= kFlowsTo && prod) {
            auto pub = [](const Edge* x) {
                if (!x || x->l.kind < kTransfer || x->l.kind > kFlowsTo) return DerivedEdge{-1, Nonterminal::Transfer, -1};
                return DerivedEdge{x->u, static_cast<Nonterminal>(x->l.kind - kTransfer), x->v};
            };
            result.provenance.emplace(DerivedEdge{e.u, static_cast<Nonterminal>(e.l.kind - kTransfer), e.v},
                                      std::tuple{std::string(prod), pub(l), pub(r)});
        }
    }

    static Nonterminal public_nt(uint8_t kind) { return static_cast<Nonterminal>(kind - kTransfer); }

    ClosureResult run(const std::vector<DerivedEdge>& seeds) {
        for (size_t ri = 0; ri < rules.size(); ++ri) {
            for (const auto& [u, nt, v] : rules[ri].premises)
                rule_index[edge_key(Edge{u, Label{nt_kind(nt), -1}, v})].push_back(ri);
            if (rules[ri].premises.empty()) {
                const auto& [u, nt, v] = rules[ri].conclusion;
                add_conclusion(u, nt, v);
            }
        }
        for (int x = 0; x < g.vertices.size(); ++x) {
            push(Edge{x, Label{kTransfer, -1}, x}, "Transfer->eps", nullptr, nullptr);
            push(Edge{x, Label{kTransferBar, -1}, x}, "TransferBar->eps", nullptr, nullptr);
        }
        for (const auto& [u, el, v] : g.edges) {
            Label l{label_kind(el), -1};
            if (el.base == EdgeLabel::Base::Store || el.base == EdgeLabel::Base::Load)
                l.field = field_id(el.field);
            push(Edge{u, l, v}, nullptr, nullptr, nullptr);
        }
        for (const auto& [u, nt, v] : seeds)
            push(Edge{u, Label{nt_kind(nt), -1}, v}, "seed", nullptr, nullptr);

        while (!worklist.empty()) {
            Edge e = worklist.front();
            worklist.pop_front();
            index_edge(e);
            combine(e);
            if (e.l.kind >= kTransfer && e.l.kind <= kFlowsTo) fire_rules(e);
        }

        for (uint64_t key : seen) {
            uint8_t kind = static_cast<uint8_t>((key >> 14) & 0x3f);
            if (kind < kTransfer || kind > kFlowsTo) continue;
            int u = static_cast<int>(key >> 42);
            int v = static_cast<int>((key >> 20) & 0x3fffff);
            result.derived.emplace_back(u, public_nt(kind), v);
        }
        std::sort(result.derived.begin(), result.derived.end());
        return std::move(result);
    }

    void index_edge(const Edge& e) {
        out[e.u].emplace_back(e.l, e.v);
        in[e.v].emplace_back(e.l, e.u);
    }

    void combine(const Edge& e) {
        for (const auto& p : kProds) {
            if (p.b == e.l.kind) {  // e as left operand, scan out-edges of e.v
                for (const auto& [cl, w] : out[e.v]) {
                    if (cl.kind != p.c) continue;
                    if (p.eq_fields && cl.field != e.l.field) continue;
                    Label al{p.a, -1};
                    if (p.af == AF::FromB) al.field = e.l.field;
                    if (p.af == AF::FromC) al.field = cl.field;
                    Edge r{e.v, cl, w};
                    Edge n{e.u, al, w};
                    push(n, p.name, &e, &r);
                }
            }
            if (p.c == e.l.kind) {  // e as right operand, scan in-edges of e.u
                for (const auto& [bl, t] : in[e.u]) {
                    if (bl.kind != p.b) continue;
                    if (p.eq_fields && bl.field != e.l.field) continue;
                    Label al{p.a, -1};
                    if (p.af == AF::FromB) al.field = bl.field;
                    if (p.af == AF::FromC) al.field = e.l.field;
                    Edge l{t, bl, e.u};
                    Edge n{t, al, e.v};
                    push(n, p.name, &l, &e);
                }
            }
        }
    }

    void add_conclusion(int u, Nonterminal nt, int v) {
        push(Edge{u, Label{nt_kind(nt), -1}, v}, "spec-rule", nullptr, nullptr);
        // Conclusions also add the reversed edge.
        if (nt == Nonterminal::Transfer)
            push(Edge{v, Label{kTransferBar, -1}, u}, "spec-rule-bar", nullptr, nullptr);
        else if (nt == Nonterminal::Alias)
            push(Edge{v, Label{kAlias, -1}, u}, "spec-rule-bar", nullptr, nullptr);
    }

    void fire_rules(const Edge& e) {
        auto it = rule_index.find(edge_key(e));
        if (it == rule_index.end()) return;
        for (size_t ri : it->second) {
            const CompiledRule& rule = rules[ri];
            bool all = true;
            for (const auto& [u, nt, v] : rule.premises) {
                if (!seen.count(edge_key(Edge{u, Label{nt_kind(nt), -1}, v}))) {
                    all = false;
                    break;
                }
            }
            if (all) {
                const auto& [u, nt, v] = rule.conclusion;
                add_conclusion(u, nt, v);
            }
        }
    }
};

}  // namespace

ClosureResult closure(const PTGraph& g, const std::vector<CompiledRule>& rules,
                      const std::vector<DerivedEdge>& seeds, const ClosureOptions& opts) {
    Solver s(g, rules, opts);
    return s.run(seeds);
}

std::vector<std::pair<int, int>> points_to(const ClosureResult& c) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [o, nt, x] : c.derived)
        if (nt == Nonterminal::FlowsTo) out.emplace_back(x, o);
    std::sort(out.begin(), out.end());
    return out;
}

std::string dump_closure(const ClosureResult& c, const VertexTable& vt) {
    std::vector<std::string> lines;
    lines.reserve(c.derived.size());
    for (const auto& [u, nt, v] : c.derived)
        lines.push_back(vt.qualified(u) + " " + to_string(nt) + " " + vt.qualified(v));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace ptspec
