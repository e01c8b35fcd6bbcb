// Path specifications: sequences of visible variables (library-interface
// parameters and returns) z_1 w_1 ... z_k w_k, their logical rule semantics,
// and regular sets of specifications represented as finite automata.
#ifndef PTSPEC_PATHSPEC_HPP
#define PTSPEC_PATHSPEC_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ptspec/closure.hpp"
#include "ptspec/graph.hpp"
#include "ptspec/ir.hpp"

namespace ptspec {

struct VisibleVar {
    static constexpr int kReturn = -1;
    FuncId fn;
    int pos = 0;  // parameter index, or kReturn

    bool is_return() const { return pos == kReturn; }
    bool is_param() const { return pos != kReturn; }
    auto operator<=>(const VisibleVar&) const = default;

    static VisibleVar param(FuncId fn, int idx) { return {std::move(fn), idx}; }
    static VisibleVar ret(FuncId fn) { return {std::move(fn), kReturn}; }
};

/// The visible-variable alphabet V_path in canonical order (function
/// declaration order; parameters by position, then the return). Primitive
/// slots are excluded. Display names follow the paper's convention:
/// `this_set`, `ob`, `r_get` — a parameter keeps its declared name when
/// globally unambiguous and is suffixed with its function otherwise.
struct SpecAlphabet {
    std::vector<VisibleVar> symbols;
    std::vector<std::string> names;  // aligned with symbols
    std::map<VisibleVar, int> index;

    static SpecAlphabet from_interface(const Interface& itf,
                                       const std::vector<std::pair<FuncId, std::vector<VarId>>>&
                                           param_names);
    static SpecAlphabet from_program(const Program& p);

    int find(const VisibleVar& v) const;
    int find_name(const std::string& name) const;  // -1 when unknown/ambiguous
    int size() const { return static_cast<int>(symbols.size()); }
};

struct PathSpec {
    std::vector<VisibleVar> seq;

    size_t pairs() const { return seq.size() / 2; }
    auto operator<=>(const PathSpec&) const = default;
};

/// Structural well-formedness: even length >= 2, z_i and w_i share a
/// function, w_i and z_{i+1} are not both returns, w_k is a return.
bool well_formed(const std::vector<VisibleVar>& seq);

struct SpecRule {
    std::vector<std::tuple<VisibleVar, Nonterminal, VisibleVar>> premises;
    std::tuple<VisibleVar, Nonterminal, VisibleVar> conclusion;
    bool operator==(const SpecRule&) const = default;
};

/// Case table from the rule semantics: the premise edge w_i -> z_{i+1} is
/// Transfer (return to parameter), Alias (parameter to parameter) or
/// TransferBar (parameter to return); the conclusion z_1 -> w_k is Transfer
/// when z_1 is a parameter and Alias when it is a return.
SpecRule to_rule(const PathSpec& s);

/// Maps a rule's visible variables onto graph vertices.
CompiledRule compile_rule(const SpecRule& rule, const Program& p, VertexTable& vt);
std::vector<CompiledRule> compile_rules(const std::vector<PathSpec>& specs, const Program& p,
                                        VertexTable& vt);

struct NextChoices {
    std::vector<int> symbols;  // alphabet indices, ascending
    bool can_terminate = false;
};

/// The T(s) choice set for extending a prefix of a well-formed spec: after
/// z_i the members of V_{m_i}; after a parameter w_i all of V_path; after a
/// return w_i the parameters plus termination.
NextChoices next_choices(const std::vector<int>& prefix, const SpecAlphabet& alphabet);

/// Nondeterministic finite automaton over the visible-variable alphabet.
struct SpecAutomaton {
    SpecAlphabet alphabet;
    std::set<int> states;
    int start = 0;
    std::set<int> accepting;
    std::map<std::pair<int, int>, std::set<int>> trans;  // (state, symbol) -> targets

    void add_state(int q) { states.insert(q); }
    void add_transition(int from, int sym, int to);
    bool accepts(const std::vector<int>& word) const;
    std::set<int> step(const std::set<int>& from, int sym) const;

    /// Removes states unreachable from the start or not reaching an accept
    /// state, then renumbers breadth-first. Canonical form for serialization.
    SpecAutomaton trimmed() const;
};

/// Complete DFA over the same alphabet (state -1 plays no role; delta is
/// total via an explicit sink).
struct SpecDfa {
    int num_states = 0;
    int start = 0;
    std::vector<char> accepting;
    std::vector<std::vector<int>> delta;  // [state][symbol]
};

SpecDfa determinize(const SpecAutomaton& a);
SpecDfa complement(const SpecDfa& d);
/// NFA for L(a) minus L(b).
SpecAutomaton difference(const SpecAutomaton& a, const SpecAutomaton& b);

/// Visits accepted words of length <= max_len in (length, lexicographic)
/// order. When wf_only, ill-formed words are skipped and unextendable
/// prefixes pruned. Return false from the callback to stop early.
void visit_language(const SpecAutomaton& a, int max_len, bool wf_only,
                    const std::function<bool(const std::vector<int>&)>& cb);

/// All accepted well-formed specs of length <= max_len, deterministic order.
std::vector<PathSpec> enumerate_specs(const SpecAutomaton& a, int max_len);

std::string spec_to_string(const PathSpec& s, const SpecAlphabet& alphabet);
std::optional<PathSpec> spec_from_names(const std::vector<std::string>& names,
                                        const SpecAlphabet& alphabet);

}  // namespace ptspec

#endif
