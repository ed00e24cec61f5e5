#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omt/arith.hpp"

namespace omt::ast {

using SortId = std::uint32_t;
using TermId = std::uint32_t;
using FuncId = std::uint32_t;
using AtomId = std::uint32_t;

inline constexpr SortId kBoolSort = 0;
inline constexpr SortId kRealSort = 1;

/// Sum of coefficient * term plus a constant. Terms are kept sorted by id
/// with zero coefficients removed.
struct LinearExpr {
    std::vector<std::pair<TermId, Rational>> terms;
    Rational constant;

    static LinearExpr of_constant(Rational c);
    static LinearExpr of_term(TermId t, Rational coef = Rational(1));

    void add_term(TermId t, const Rational& coef);
    void add(const LinearExpr& other, const Rational& scale = Rational(1));
    void scale(const Rational& c);

    bool is_constant() const noexcept { return terms.empty(); }
    /// The single term when this is exactly 1*t + 0.
    std::optional<TermId> as_term() const;
    Rational coefficient(TermId t) const;
    bool contains(TermId t) const;

    friend bool operator==(const LinearExpr&, const LinearExpr&) = default;
    friend std::strong_ordering operator<=>(const LinearExpr& a, const LinearExpr& b);
};

enum class TermKind : std::uint8_t { Variable, Application, Linear };

struct TermNode {
    TermKind kind = TermKind::Variable;
    SortId sort = kRealSort;
    std::string name;           // Variable
    FuncId func = 0;            // Application
    std::vector<TermId> args;   // Application
    LinearExpr linear;          // Linear
};

struct FuncDecl {
    std::string name;
    std::vector<SortId> domain;
    SortId range = kRealSort;
};

enum class Relation : std::uint8_t { Eq, Le, Lt, Ge, Gt };

const char* relation_symbol(Relation r);

enum class AtomKind : std::uint8_t { Boolean, Arith, Equality };

/// A theory or propositional atom.
///  - Boolean: a propositional variable.
///  - Arith: `lhs rel rhs` with lhs normalized (leading coefficient 1,
///    no constant).
///  - Equality: `left = right` between uninterpreted terms, left < right.
struct Atom {
    AtomKind kind = AtomKind::Boolean;
    TermId var = 0;
    LinearExpr lhs;
    Relation rel = Relation::Eq;
    Rational rhs;
    TermId left = 0;
    TermId right = 0;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

struct AtomLiteral {
    AtomId atom = 0;
    bool positive = true;

    AtomLiteral operator~() const { return {atom, !positive}; }
    friend bool operator==(const AtomLiteral&, const AtomLiteral&) = default;
    friend auto operator<=>(const AtomLiteral&, const AtomLiteral&) = default;
};

using Clause = std::vector<AtomLiteral>;

/// Handle to a hash-consed formula node owned by a Context.
class Formula {
public:
    constexpr Formula() = default;
    constexpr explicit Formula(std::uint32_t id) : id_(id) {}
    constexpr std::uint32_t id() const noexcept { return id_; }
    friend constexpr bool operator==(Formula, Formula) = default;
    friend constexpr auto operator<=>(Formula, Formula) = default;

private:
    std::uint32_t id_ = 0;
};

enum class FormulaKind : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Iff };

struct FormulaNode {
    FormulaKind kind = FormulaKind::True;
    AtomId atom = 0;
    std::vector<Formula> kids;
};

/// Owns sorts, symbols, terms, atoms and formulas. Everything is
/// hash-consed: structurally equal objects share an id. Copying a context
/// yields an independent context in which all existing ids stay valid.
class Context {
public:
    Context();

    SortId declare_sort(const std::string& name);
    std::optional<SortId> find_sort(std::string_view name) const;
    const std::string& sort_name(SortId s) const;

    TermId declare_var(const std::string& name, SortId sort);
    /// Declares a variable whose name starts with `prefix` and is unused.
    TermId fresh_var(std::string_view prefix, SortId sort);
    std::optional<TermId> find_var(std::string_view name) const;

    FuncId declare_fun(const std::string& name, std::vector<SortId> domain, SortId range);
    std::optional<FuncId> find_fun(std::string_view name) const;
    const FuncDecl& func(FuncId f) const { return funcs_.at(f); }
    std::size_t num_funcs() const noexcept { return funcs_.size(); }

    TermId mk_app(FuncId f, std::vector<TermId> args);
    /// Interns a linear combination; 1*t+0 collapses to t.
    TermId mk_linear(const LinearExpr& e);
    /// Linear view of a Real-sorted term.
    LinearExpr as_linear(TermId t) const;

    const TermNode& term(TermId t) const { return terms_.at(t); }
    std::size_t num_terms() const noexcept { return terms_.size(); }
    SortId sort_of(TermId t) const { return terms_.at(t).sort; }
    bool is_variable(TermId t) const { return terms_.at(t).kind == TermKind::Variable; }

    Formula mk_true() const { return true_; }
    Formula mk_false() const { return false_; }
    Formula mk_bool(TermId var);
    Formula mk_atom(const AtomLiteral& lit);
    Formula mk_not(Formula f);
    Formula mk_and(std::vector<Formula> kids);
    Formula mk_or(std::vector<Formula> kids);
    Formula mk_and(Formula a, Formula b) { return mk_and(std::vector<Formula>{a, b}); }
    Formula mk_or(Formula a, Formula b) { return mk_or(std::vector<Formula>{a, b}); }
    Formula mk_implies(Formula a, Formula b);
    Formula mk_iff(Formula a, Formula b);
    /// `lhs rel rhs`, normalized to a canonical arithmetic atom.
    Formula mk_arith(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs);
    Formula mk_arith(const LinearExpr& expr, Relation rel) { return mk_arith(expr, rel, LinearExpr{}); }
    /// Equality between two terms of the same sort; picks the theory.
    Formula mk_eq(TermId a, TermId b);

    const FormulaNode& node(Formula f) const { return nodes_.at(f.id()); }
    const Atom& atom(AtomId a) const { return atoms_.at(a); }
    std::size_t num_atoms() const noexcept { return atoms_.size(); }
    std::size_t num_formulas() const noexcept { return nodes_.size(); }

    /// LRA atom: arithmetic over Real variables only.
    bool is_arith_pure(AtomId a) const;
    /// EUF atom: equality over variables/applications without arithmetic.
    bool is_euf_pure(AtomId a) const;
    bool atom_mentions(AtomId a, TermId var) const;

    std::string name_of(TermId var) const;
    std::string to_string(TermId t) const;
    std::string to_string(const LinearExpr& e) const;
    std::string to_string(Formula f) const;
    std::string atom_to_string(AtomId a) const;
    std::string literal_to_string(const AtomLiteral& l) const;

private:
    TermId add_term(TermNode n);
    Formula intern(FormulaNode n);
    AtomId intern_atom(Atom a);

    std::vector<std::string> sorts_;
    std::vector<TermNode> terms_;
    std::vector<FuncDecl> funcs_;
    std::vector<Atom> atoms_;
    std::vector<FormulaNode> nodes_;
    std::map<std::string, TermId, std::less<>> var_names_;
    std::map<std::string, FuncId, std::less<>> func_names_;
    std::map<std::pair<FuncId, std::vector<TermId>>, TermId> app_index_;
    std::map<LinearExpr, TermId> linear_index_;
    std::map<Atom, AtomId> atom_index_;
    std::map<std::tuple<FormulaKind, AtomId, std::vector<std::uint32_t>>, std::uint32_t> node_index_;
    std::map<AtomId, Formula> atom_formula_;
    std::uint32_t fresh_counter_ = 0;
    Formula true_;
    Formula false_;
};

/// SMT-LIB spelling of a rational: 3, (- 3), (/ 3 4), (- (/ 3 4)).
std::string smt_number(const Rational& r);
/// Symbol, quoted with |..| when it is not a simple symbol.
std::string smt_symbol(std::string_view name);

/// Atoms in depth-first order of first occurrence.
std::vector<AtomId> atoms_of(const Context& ctx, Formula f);
/// Variables (any sort) occurring in f, sorted by id.
std::vector<TermId> variables_of(const Context& ctx, Formula f);
/// Every atom is LRA-pure, EUF-pure or propositional.
bool is_pure(const Context& ctx, Formula f);
/// Top-level conjuncts (nested ands flattened).
std::vector<Formula> conjuncts(const Context& ctx, Formula f);

struct BooleanAbstraction {
    Formula skeleton;
    /// (fresh proposition atom, theory atom) pairs; a bijection on theory atoms.
    std::vector<std::pair<AtomId, AtomId>> map;
};

BooleanAbstraction boolean_abstraction(Context& ctx, Formula f);
Formula refine(Context& ctx, const BooleanAbstraction& abstraction);
Formula refine(Context& ctx, Formula skeleton, const std::vector<std::pair<AtomId, AtomId>>& map);

/// Polarity-aware (Plaisted-Greenbaum) CNF conversion. Fresh label atoms
/// are added to ctx; tautological clauses are dropped, duplicate literals
/// removed. False yields a single empty clause.
std::vector<Clause> cnfize(Context& ctx, Formula f);

struct PurifyResult {
    Formula formula;
    std::vector<TermId> interface_vars;
};

/// Replaces alien subterms by fresh variables with defining equalities.
PurifyResult purify(Context& ctx, Formula f);

/// Real variables occurring in both an LRA-pure and an EUF atom, sorted by name.
std::vector<TermId> interface_variables(const Context& ctx, Formula f);

struct InterfaceEquality {
    TermId first = 0;   // first precedes second in the name order
    TermId second = 0;
    AtomId eq = 0;      // first = second
    AtomId lt = 0;      // first < second
    AtomId gt = 0;      // first > second
};

/// All (x = y) with x before y in lexicographic name order, plus the
/// companion strict inequalities.
std::vector<InterfaceEquality> interface_equalities(Context& ctx, std::vector<TermId> vars);

/// Concrete interpretation: rationals for Real and uninterpreted-sort
/// variables (uninterpreted elements are encoded as rationals), truth values
/// for propositions, finite tables for functions. Missing entries read as 0/false.
struct Model {
    std::map<TermId, Rational> values;
    std::map<TermId, bool> booleans;
    std::map<FuncId, std::map<std::vector<Rational>, Rational>> functions;

    Rational value_of(const Context& ctx, TermId t) const;
    Rational value_of(const Context& ctx, const LinearExpr& e) const;
    bool holds(const Context& ctx, AtomId a) const;
    bool evaluate(const Context& ctx, Formula f) const;
};

} // namespace omt::ast
