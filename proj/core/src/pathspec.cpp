#include "ptspec/pathspec.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace ptspec {

SpecAlphabet SpecAlphabet::from_interface(
    const Interface& itf,
    const std::vector<std::pair<FuncId, std::vector<VarId>>>& param_names) {
    SpecAlphabet a;
    std::map<FuncId, const std::vector<VarId>*> names_by_fn;
    for (const auto& [fn, names] : param_names) names_by_fn[fn] = &names;

    // bare-name occurrence counts across all reference parameters
    std::map<std::string, int> bare_counts;
    for (const auto& e : itf.functions) {
        const auto* names = names_by_fn.count(e.fn) ? names_by_fn.at(e.fn) : nullptr;
        for (size_t i = 0; i < e.param_kinds.size(); ++i) {
            if (e.param_kinds[i].is_prim) continue;
            std::string n = names && i < names->size() ? (*names)[i] : "p" + std::to_string(i);
            if (n != "this") ++bare_counts[n];
        }
    }
    for (const auto& e : itf.functions) {
        const auto* names = names_by_fn.count(e.fn) ? names_by_fn.at(e.fn) : nullptr;
        for (size_t i = 0; i < e.param_kinds.size(); ++i) {
            if (e.param_kinds[i].is_prim) continue;
            std::string n = names && i < names->size() ? (*names)[i] : "p" + std::to_string(i);
            std::string display =
                n == "this" ? "this_" + e.fn : (bare_counts[n] > 1 ? n + "_" + e.fn : n);
            a.index[VisibleVar::param(e.fn, static_cast<int>(i))] = a.size();
            a.symbols.push_back(VisibleVar::param(e.fn, static_cast<int>(i)));
            a.names.push_back(display);
        }
        if (e.ret_kind && !e.ret_kind->is_prim) {
            a.index[VisibleVar::ret(e.fn)] = a.size();
            a.symbols.push_back(VisibleVar::ret(e.fn));
            a.names.push_back("r_" + e.fn);
        }
    }
    return a;
}

SpecAlphabet SpecAlphabet::from_program(const Program& p) {
    Interface itf = library_interface(p);
    std::vector<std::pair<FuncId, std::vector<VarId>>> names;
    for (const auto& f : p.functions) {
        if (!f.is_library) continue;
        std::vector<VarId> ps;
        for (const auto& prm : f.params) ps.push_back(prm.name);
        names.emplace_back(f.id, std::move(ps));
    }
    return from_interface(itf, names);
}

int SpecAlphabet::find(const VisibleVar& v) const {
    auto it = index.find(v);
    return it == index.end() ? -1 : it->second;
}

int SpecAlphabet::find_name(const std::string& name) const {
    int hit = -1;
    for (int i = 0; i < size(); ++i) {
        if (names[i] == name) {
            if (hit != -1) return -1;
            hit = i;
        }
    }
    return hit;
}

bool well_formed(const std::vector<VisibleVar>& seq) {
    if (seq.size() < 2 || seq.size() % 2 != 0) return false;
    for (size_t i = 0; i + 1 < seq.size(); i += 2)
        if (seq[i].fn != seq[i + 1].fn) return false;
    for (size_t i = 1; i + 1 < seq.size(); i += 2)
        if (seq[i].is_return() && seq[i + 1].is_return()) return false;
    return seq.back().is_return();
}

SpecRule to_rule(const PathSpec& s) {
    if (!well_formed(s.seq)) throw std::invalid_argument("to_rule: malformed path specification");
    SpecRule r;
    for (size_t i = 1; i + 1 < s.seq.size(); i += 2) {
        const VisibleVar& w = s.seq[i];
        const VisibleVar& z = s.seq[i + 1];
        Nonterminal nt;
        if (w.is_return() && z.is_param())
            nt = Nonterminal::Transfer;
        else if (w.is_param() && z.is_param())
            nt = Nonterminal::Alias;
        else
            nt = Nonterminal::TransferBar;  // parameter to return
        r.premises.emplace_back(w, nt, z);
    }
    Nonterminal concl =
        s.seq.front().is_param() ? Nonterminal::Transfer : Nonterminal::Alias;
    r.conclusion = {s.seq.front(), concl, s.seq.back()};
    return r;
}

namespace {

int visible_vertex(const VisibleVar& v, const Program& p, VertexTable& vt) {
    const FunctionDef* fn = p.find_function(v.fn);
    if (!fn) throw ValidateError("spec rule references unknown function '" + v.fn + "'");
    if (v.is_return()) {
        if (!fn->has_ret || fn->ret_type.is_prim)
            throw ValidateError("spec rule references missing return of '" + v.fn + "'");
        return vt.ret_vertex(v.fn);
    }
    if (v.pos < 0 || v.pos >= static_cast<int>(fn->params.size()) ||
        fn->params[v.pos].type.is_prim)
        throw ValidateError("spec rule references invalid parameter of '" + v.fn + "'");
    return vt.var(v.fn, fn->params[v.pos].name);
}

}  // namespace

CompiledRule compile_rule(const SpecRule& rule, const Program& p, VertexTable& vt) {
    CompiledRule c;
    for (const auto& [w, nt, z] : rule.premises)
        c.premises.emplace_back(visible_vertex(w, p, vt), nt, visible_vertex(z, p, vt));
    const auto& [z1, nt, wk] = rule.conclusion;
    c.conclusion = {visible_vertex(z1, p, vt), nt, visible_vertex(wk, p, vt)};
    return c;
}

std::vector<CompiledRule> compile_rules(const std::vector<PathSpec>& specs, const Program& p,
                                        VertexTable& vt) {
    std::vector<CompiledRule> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(compile_rule(to_rule(s), p, vt));
    return out;
}

NextChoices next_choices(const std::vector<int>& prefix, const SpecAlphabet& alphabet) {
    NextChoices nc;
    if (prefix.empty()) {
        for (int i = 0; i < alphabet.size(); ++i) nc.symbols.push_back(i);
        return nc;
    }
    const VisibleVar& last = alphabet.symbols[prefix.back()];
    if (prefix.size() % 2 == 1) {
        // choosing w_i: members of V_{m_i}
        for (int i = 0; i < alphabet.size(); ++i)
            if (alphabet.symbols[i].fn == last.fn) nc.symbols.push_back(i);
        return nc;
    }
    if (last.is_param()) {
        for (int i = 0; i < alphabet.size(); ++i) nc.symbols.push_back(i);
        return nc;
    }
    for (int i = 0; i < alphabet.size(); ++i)
        if (alphabet.symbols[i].is_param()) nc.symbols.push_back(i);
    nc.can_terminate = true;
    return nc;
}

void SpecAutomaton::add_transition(int from, int sym, int to) {
    states.insert(from);
    states.insert(to);
    trans[{from, sym}].insert(to);
}

std::set<int> SpecAutomaton::step(const std::set<int>& from, int sym) const {
    std::set<int> out;
    for (int q : from) {
        auto it = trans.find({q, sym});
        if (it != trans.end()) out.insert(it->second.begin(), it->second.end());
    }
    return out;
}

bool SpecAutomaton::accepts(const std::vector<int>& word) const {
    std::set<int> cur{start};
    for (int sym : word) {
        cur = step(cur, sym);
        if (cur.empty()) return false;
    }
    for (int q : cur)
        if (accepting.count(q)) return true;
    return false;
}

SpecAutomaton SpecAutomaton::trimmed() const {
    // forward reachability
    std::set<int> fwd{start};
    std::deque<int> q{start};
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (const auto& [key, tos] : trans) {
            if (key.first != s) continue;
            for (int t : tos)
                if (fwd.insert(t).second) q.push_back(t);
        }
    }
    // backward reachability from accepting states
    std::set<int> bwd;
    for (int a : accepting)
        if (fwd.count(a)) {
            bwd.insert(a);
            q.push_back(a);
        }
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        for (const auto& [key, tos] : trans)
            if (fwd.count(key.first) && tos.count(s) && bwd.insert(key.first).second)
                q.push_back(key.first);
    }

    // BFS renumbering over kept states (start kept even if dead)
    std::map<int, int> renum;
    std::deque<int> order;
    auto keep = [&](int s) { return s == start || (fwd.count(s) && bwd.count(s)); };
    renum[start] = 0;
    order.push_back(start);
    SpecAutomaton out;
    out.alphabet = alphabet;
    out.start = 0;
    out.add_state(0);
    while (!order.empty()) {
        int s = order.front();
        order.pop_front();
        for (const auto& [key, tos] : trans) {
            if (key.first != s) continue;
            for (int t : tos) {
                if (!keep(t)) continue;
                if (!renum.count(t)) {
                    renum[t] = static_cast<int>(renum.size());
                    order.push_back(t);
                }
            }
        }
    }
    for (const auto& [key, tos] : trans) {
        if (!renum.count(key.first)) continue;
        for (int t : tos)
            if (renum.count(t)) out.add_transition(renum[key.first], key.second, renum[t]);
    }
    for (int a : accepting)
        if (renum.count(a)) out.accepting.insert(renum[a]);
    return out;
}

SpecDfa determinize(const SpecAutomaton& a) {
    int nsym = a.alphabet.size();
    SpecDfa d;
    std::map<std::set<int>, int> ids;
    std::deque<std::set<int>> work;
    auto intern = [&](const std::set<int>& ss) {
        auto it = ids.find(ss);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(ids.size());
        ids.emplace(ss, id);
        d.accepting.push_back(0);
        for (int q : ss)
            if (a.accepting.count(q)) d.accepting.back() = 1;
        d.delta.emplace_back(nsym, -1);
        work.push_back(ss);
        return id;
    };
    d.start = intern({a.start});
    while (!work.empty()) {
        std::set<int> ss = work.front();
        work.pop_front();
        int id = ids.at(ss);
        for (int sym = 0; sym < nsym; ++sym) d.delta[id][sym] = intern(a.step(ss, sym));
    }
    d.num_states = static_cast<int>(ids.size());
    return d;
}

SpecDfa complement(const SpecDfa& d) {
    SpecDfa c = d;
    for (auto& a : c.accepting) a = !a;
    return c;
}

SpecAutomaton difference(const SpecAutomaton& a, const SpecAutomaton& b) {
    SpecDfa nb = complement(determinize(b));
    SpecAutomaton out;
    out.alphabet = a.alphabet;
    // product of a with nb; states encoded as a_state * nb.num_states + nb_state
    auto encode = [&](int qa, int qb) { return qa * nb.num_states + qb; };
    out.start = encode(a.start, nb.start);
    out.add_state(out.start);
    for (const auto& [key, tos] : a.trans) {
        auto [qa, sym] = key;
        for (int qb = 0; qb < nb.num_states; ++qb) {
            int tb = nb.delta[qb][sym];
            for (int ta : tos) out.add_transition(encode(qa, qb), sym, encode(ta, tb));
        }
    }
    for (int qa : a.accepting)
        for (int qb = 0; qb < nb.num_states; ++qb)
            if (nb.accepting[qb]) out.accepting.insert(encode(qa, qb));
    return out.trimmed();
}

namespace {

// prefix-validity state for pruning during enumeration
struct Validity {
    // parity: 0 even position next symbol is some z; 1 odd, next is w_i
    // last_fn: function of z_i when parity == 1
    // after_return: when parity == 0, whether w_{i-1} was a return
    int len = 0;
    FuncId last_fn;
    bool after_return = false;

    bool can_take(const VisibleVar& v) const {
        if (len % 2 == 1) return v.fn == last_fn;
        if (len == 0) return true;
        if (after_return && v.is_return()) return false;
        return true;
    }
    Validity take(const VisibleVar& v) const {
        Validity n;
        n.len = len + 1;
        if (n.len % 2 == 1)
            n.last_fn = v.fn;
        else
            n.after_return = v.is_return();
        return n;
    }
    bool complete() const { return len >= 2 && len % 2 == 0 && after_return; }
};

}  // namespace

void visit_language(const SpecAutomaton& a, int max_len, bool wf_only,
                    const std::function<bool(const std::vector<int>&)>& cb) {
    struct Node {
        std::vector<int> word;
        std::set<int> states;
        Validity v;
    };
    std::deque<Node> frontier;
    frontier.push_back(Node{{}, {a.start}, {}});
    while (!frontier.empty()) {
        Node n = std::move(frontier.front());
        frontier.pop_front();
        bool nfa_accepts = false;
        for (int q : n.states)
            if (a.accepting.count(q)) nfa_accepts = true;
        if (nfa_accepts && (!wf_only || n.v.complete()))
            if (!cb(n.word)) return;
        if (static_cast<int>(n.word.size()) == max_len) continue;
        for (int sym = 0; sym < a.alphabet.size(); ++sym) {
            if (wf_only && !n.v.can_take(a.alphabet.symbols[sym])) continue;
            std::set<int> next = a.step(n.states, sym);
            if (next.empty()) continue;
            Node child;
            child.word = n.word;
            child.word.push_back(sym);
            child.states = std::move(next);
            child.v = n.v.take(a.alphabet.symbols[sym]);
            frontier.push_back(std::move(child));
        }
    }
}

std::vector<PathSpec> enumerate_specs(const SpecAutomaton& a, int max_len) {
    std::vector<PathSpec> out;
    visit_language(a, max_len, true, [&](const std::vector<int>& word) {
        PathSpec s;
        for (int sym : word) s.seq.push_back(a.alphabet.symbols[sym]);
        out.push_back(std::move(s));
        return true;
    });
    return out;
}

std::string spec_to_string(const PathSpec& s, const SpecAlphabet& alphabet) {
    std::string out;
    for (size_t i = 0; i < s.seq.size(); ++i) {
        if (i) out += " ";
        int idx = alphabet.find(s.seq[i]);
        out += idx >= 0 ? alphabet.names[idx]
                        : s.seq[i].fn + (s.seq[i].is_return()
                                             ? std::string(":r")
                                             : ":p" + std::to_string(s.seq[i].pos));
    }
    return out;
}

std::optional<PathSpec> spec_from_names(const std::vector<std::string>& names,
                                        const SpecAlphabet& alphabet) {
    PathSpec s;
    for (const auto& n : names) {
        int idx = alphabet.find_name(n);
        if (idx < 0) return std::nullopt;
        s.seq.push_back(alphabet.symbols[idx]);
    }
    return s;
}

}  // namespace ptspec
