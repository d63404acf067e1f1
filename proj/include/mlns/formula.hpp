#ifndef MLNS_FORMULA_HPP
#define MLNS_FORMULA_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/label.hpp"

namespace mlns {

// AST of the admissible-formula language plus the marked extension node
// UnboundedForall, legal only inside GT instances.
enum class FKind {
    atom_eq,        // u = v
    atom_mem,       // u in v
    atom_in_level,  // v in S{a}
    atom_emb,       // I{a}{b}(u) = v
    lnot,
    land,
    lor,
    implies,
    iff,
    forall_in,      // A v in S{a}. F
    exists_in,      // E v in S{a}. F
    unbounded_forall, // Aall v. F
};

struct FNode;
using Formula = std::shared_ptr<const FNode>;

struct FNode {
    FKind kind;
    std::string var1, var2; // atoms: u,v; quantifiers: var1 is the bound variable
    Label label1, label2;   // in_level/quantifiers: label1; emb: label1 = a, label2 = b
    Formula left, right;
};

inline Formula f_eq(std::string u, std::string v)
{
    return std::make_shared<FNode>(FNode{FKind::atom_eq, std::move(u), std::move(v), {}, {}, nullptr, nullptr});
}

inline Formula f_mem(std::string u, std::string v)
{
    return std::make_shared<FNode>(FNode{FKind::atom_mem, std::move(u), std::move(v), {}, {}, nullptr, nullptr});
}

inline Formula f_in_level(std::string v, Label a)
{
    return std::make_shared<FNode>(FNode{FKind::atom_in_level, std::move(v), {}, std::move(a), {}, nullptr, nullptr});
}

inline Formula f_emb(Label a, Label b, std::string u, std::string v)
{
    if (a.size() != b.size())
        throw Error(ErrorKind::size_mismatch, "embedding atom needs |a| = |b|");
    return std::make_shared<FNode>(FNode{FKind::atom_emb, std::move(u), std::move(v), std::move(a), std::move(b), nullptr, nullptr});
}

inline Formula f_not(Formula f)
{
    return std::make_shared<FNode>(FNode{FKind::lnot, {}, {}, {}, {}, std::move(f), nullptr});
}

inline Formula f_bin(FKind k, Formula l, Formula r)
{
    return std::make_shared<FNode>(FNode{k, {}, {}, {}, {}, std::move(l), std::move(r)});
}

inline Formula f_and(Formula l, Formula r) { return f_bin(FKind::land, std::move(l), std::move(r)); }
inline Formula f_or(Formula l, Formula r) { return f_bin(FKind::lor, std::move(l), std::move(r)); }
inline Formula f_implies(Formula l, Formula r) { return f_bin(FKind::implies, std::move(l), std::move(r)); }
inline Formula f_iff(Formula l, Formula r) { return f_bin(FKind::iff, std::move(l), std::move(r)); }

inline Formula f_forall(std::string v, Label a, Formula body)
{
    return std::make_shared<FNode>(FNode{FKind::forall_in, std::move(v), {}, std::move(a), {}, std::move(body), nullptr});
}

inline Formula f_exists(std::string v, Label a, Formula body)
{
    return std::make_shared<FNode>(FNode{FKind::exists_in, std::move(v), {}, std::move(a), {}, std::move(body), nullptr});
}

inline Formula f_unbounded_forall(std::string v, Formula body)
{
    return std::make_shared<FNode>(FNode{FKind::unbounded_forall, std::move(v), {}, {}, {}, std::move(body), nullptr});
}

inline bool equal(const Formula& a, const Formula& b)
{
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->var1 != b->var1 || a->var2 != b->var2 ||
        !(a->label1 == b->label1) || !(a->label2 == b->label2))
        return false;
    return equal(a->left, b->left) && equal(a->right, b->right);
}

inline bool is_admissible(const Formula& f)
{
    if (!f) return true;
    if (f->kind == FKind::unbounded_forall) return false;
    return is_admissible(f->left) && is_admissible(f->right);
}

// Pure ∈-formula: only equality and membership atoms, connectives, and
// unbounded quantifiers (no S or I symbols anywhere).
inline bool is_pure_in_formula(const Formula& f)
{
    if (!f) return true;
    switch (f->kind) {
    case FKind::atom_in_level:
    case FKind::atom_emb:
    case FKind::forall_in:
    case FKind::exists_in:
        return false;
    default:
        return is_pure_in_formula(f->left) && is_pure_in_formula(f->right);
    }
}

namespace detail {

inline void free_vars_rec(const Formula& f, std::set<std::string>& bound,
                          std::set<std::string>& out)
{
    if (!f) return;
    switch (f->kind) {
    case FKind::atom_eq:
    case FKind::atom_mem:
        if (!bound.count(f->var1)) out.insert(f->var1);
        if (!bound.count(f->var2)) out.insert(f->var2);
        return;
    case FKind::atom_in_level:
        if (!bound.count(f->var1)) out.insert(f->var1);
        return;
    case FKind::atom_emb:
        if (!bound.count(f->var1)) out.insert(f->var1);
        if (!bound.count(f->var2)) out.insert(f->var2);
        return;
    case FKind::forall_in:
    case FKind::exists_in:
    case FKind::unbounded_forall: {
        bool fresh = bound.insert(f->var1).second;
        free_vars_rec(f->left, bound, out);
        if (fresh) bound.erase(f->var1);
        return;
    }
    default:
        free_vars_rec(f->left, bound, out);
        free_vars_rec(f->right, bound, out);
        return;
    }
}

inline void all_vars_rec(const Formula& f, std::set<std::string>& out)
{
    if (!f) return;
    if (!f->var1.empty()) out.insert(f->var1);
    if (!f->var2.empty()) out.insert(f->var2);
    all_vars_rec(f->left, out);
    all_vars_rec(f->right, out);
}

} // namespace detail

inline std::set<std::string> free_variables(const Formula& f)
{
    std::set<std::string> bound, out;
    detail::free_vars_rec(f, bound, out);
    return out;
}

inline std::set<std::string> all_variables(const Formula& f)
{
    std::set<std::string> out;
    detail::all_vars_rec(f, out);
    return out;
}

// Renames free occurrences; the caller guarantees the targets are fresh.
inline Formula rename_free(const Formula& f, const std::map<std::string, std::string>& sub)
{
    if (!f) return f;
    auto ren = [&](const std::string& v) {
        auto it = sub.find(v);
        return it == sub.end() ? v : it->second;
    };
    switch (f->kind) {
    case FKind::atom_eq:
        return f_eq(ren(f->var1), ren(f->var2));
    case FKind::atom_mem:
        return f_mem(ren(f->var1), ren(f->var2));
    case FKind::atom_in_level:
        return f_in_level(ren(f->var1), f->label1);
    case FKind::atom_emb:
        return f_emb(f->label1, f->label2, ren(f->var1), ren(f->var2));
    case FKind::lnot:
        return f_not(rename_free(f->left, sub));
    case FKind::land:
    case FKind::lor:
    case FKind::implies:
    case FKind::iff:
        return f_bin(f->kind, rename_free(f->left, sub), rename_free(f->right, sub));
    case FKind::forall_in:
    case FKind::exists_in:
    case FKind::unbounded_forall: {
        auto inner = sub;
        inner.erase(f->var1); // bound occurrences stay
        Formula body = rename_free(f->left, inner);
        if (f->kind == FKind::forall_in) return f_forall(f->var1, f->label1, std::move(body));
        if (f->kind == FKind::exists_in) return f_exists(f->var1, f->label1, std::move(body));
        return f_unbounded_forall(f->var1, std::move(body));
    }
    }
    return f;
}

// Φ^↑r: S_a becomes S_{r⊞a}, I_a^b becomes I_{r⊞a}^{r⊞b}.
inline Formula shift_up(const Formula& f, unsigned r)
{
    if (!f) return f;
    switch (f->kind) {
    case FKind::atom_eq:
    case FKind::atom_mem:
        return f;
    case FKind::atom_in_level:
        return f_in_level(f->var1, boxplus(r, f->label1));
    case FKind::atom_emb:
        return f_emb(boxplus(r, f->label1), boxplus(r, f->label2), f->var1, f->var2);
    case FKind::lnot:
        return f_not(shift_up(f->left, r));
    case FKind::land:
    case FKind::lor:
    case FKind::implies:
    case FKind::iff:
        return f_bin(f->kind, shift_up(f->left, r), shift_up(f->right, r));
    case FKind::forall_in:
        return f_forall(f->var1, boxplus(r, f->label1), shift_up(f->left, r));
    case FKind::exists_in:
        return f_exists(f->var1, boxplus(r, f->label1), shift_up(f->left, r));
    case FKind::unbounded_forall:
        throw Error(ErrorKind::admissibility,
                    "the level shift applies to admissible formulas only");
    }
    return f;
}

inline std::string render(const Formula& f)
{
    switch (f->kind) {
    case FKind::atom_eq:
        return f->var1 + " = " + f->var2;
    case FKind::atom_mem:
        return f->var1 + " in " + f->var2;
    case FKind::atom_in_level:
        return f->var1 + " in S" + f->label1.render();
    case FKind::atom_emb:
        return "I" + f->label1.render() + f->label2.render() + "(" + f->var1 + ") = " + f->var2;
    case FKind::lnot:
        return "!(" + render(f->left) + ")";
    case FKind::land:
        return "(" + render(f->left) + ") & (" + render(f->right) + ")";
    case FKind::lor:
        return "(" + render(f->left) + ") | (" + render(f->right) + ")";
    case FKind::implies:
        return "(" + render(f->left) + ") -> (" + render(f->right) + ")";
    case FKind::iff:
        return "(" + render(f->left) + ") <-> (" + render(f->right) + ")";
    case FKind::forall_in:
        return "A " + f->var1 + " in S" + f->label1.render() + ". " + render(f->left);
    case FKind::exists_in:
        return "E " + f->var1 + " in S" + f->label1.render() + ". " + render(f->left);
    case FKind::unbounded_forall:
        return "Aall " + f->var1 + ". " + render(f->left);
    }
    return "";
}

// ---- parser ----

namespace detail {

struct FormulaParser {
    const std::string& text;
    std::size_t pos = 0;
    bool allow_unbounded;

    FormulaParser(const std::string& t, bool allow) : text(t), allow_unbounded(allow) {}

    void skip_ws()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg, ErrorKind kind = ErrorKind::parse_error)
    {
        throw Error(kind, msg, pos);
    }

    bool peek(char c)
    {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    bool eat(char c)
    {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& what)
    {
        if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
    }

    // A word is a maximal [A-Za-z][a-zA-Z0-9_]* chunk; lowercase words other
    // than "in" are variables, and A/E/Aall/S/I are keywords.
    std::string peek_word()
    {
        skip_ws();
        std::size_t p = pos;
        if (p >= text.size() || !std::isalpha(static_cast<unsigned char>(text[p]))) return "";
        std::string w;
        while (p < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[p])) || text[p] == '_'))
            w += text[p++];
        return w;
    }

    void consume_word(const std::string& w) { skip_ws(); pos += w.size(); }

    // 'S' or 'I' directly followed by a label ({...} or a numeral).
    bool at_label_keyword(char k)
    {
        skip_ws();
        if (pos >= text.size() || text[pos] != k) return false;
        return pos + 1 < text.size() &&
               (text[pos + 1] == '{' || std::isdigit(static_cast<unsigned char>(text[pos + 1])));
    }

    std::string parse_var()
    {
        skip_ws();
        std::string w = peek_word();
        if (w.empty()) fail("expected a variable name");
        if (w == "in") fail("'in' is reserved and cannot name a variable");
        if (!std::islower(static_cast<unsigned char>(w[0])))
            fail("variable names match [a-z][a-z0-9_]*");
        for (char ch : w)
            if (std::isupper(static_cast<unsigned char>(ch)))
                fail("variable names match [a-z][a-z0-9_]*");
        consume_word(w);
        return w;
    }

    Label parse_label() { skip_ws(); return Label::parse_prefix(text, pos); }

    Formula parse_formula()
    {
        skip_ws();
        std::string w = peek_word();
        if (w == "A" || w == "E") {
            std::size_t quant_pos = pos;
            consume_word(w);
            std::string v = parse_var();
            skip_ws();
            std::string next = peek_word();
            if (next != "in") {
                pos = quant_pos;
                fail("quantifiers must be level-bounded ('" + w + " " + v +
                         " in S<label>. ...')",
                     ErrorKind::admissibility);
            }
            consume_word(next);
            if (!at_label_keyword('S'))
                fail("quantifiers must be level-bounded: expected 'S' after 'in'",
                     ErrorKind::admissibility);
            ++pos; // 'S'
            Label a = parse_label();
            expect('.', "after the quantifier bound");
            Formula body = parse_formula();
            return w == "A" ? f_forall(v, a, body) : f_exists(v, a, body);
        }
        if (w == "Aall") {
            std::size_t quant_pos = pos;
            if (!allow_unbounded) {
                pos = quant_pos;
                fail("unbounded quantifiers are only legal inside GT instances",
                     ErrorKind::admissibility);
            }
            consume_word(w);
            std::string v = parse_var();
            expect('.', "after 'Aall " + v + "'");
            Formula body = parse_formula();
            return f_unbounded_forall(v, body);
        }
        return parse_bin();
    }

    Formula parse_bin()
    {
        skip_ws();
        if (eat('!')) {
            expect('(', "after '!'");
            Formula inner = parse_formula();
            expect(')', "closing the negation");
            return f_not(inner);
        }
        if (peek('(')) {
            eat('(');
            Formula left = parse_formula();
            expect(')', "closing the left operand");
            skip_ws();
            FKind op;
            if (eat('&'))
                op = FKind::land;
            else if (eat('|'))
                op = FKind::lor;
            else if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
                pos += 2;
                op = FKind::implies;
            } else if (pos + 2 < text.size() && text[pos] == '<' && text[pos + 1] == '-' &&
                       text[pos + 2] == '>') {
                pos += 3;
                op = FKind::iff;
            } else {
                return left; // plain parenthesized formula
            }
            expect('(', "opening the right operand");
            Formula right = parse_formula();
            expect(')', "closing the right operand");
            return f_bin(op, left, right);
        }
        return parse_atom();
    }

    Formula parse_atom()
    {
        skip_ws();
        if (at_label_keyword('I')) {
            ++pos; // 'I'
            Label a = parse_label();
            Label b = parse_label();
            if (a.size() != b.size())
                fail("embedding labels must have equal size: " + a.render() + " vs " + b.render());
            expect('(', "after the embedding labels");
            std::string u = parse_var();
            expect(')', "after the embedding argument");
            expect('=', "in the embedding atom");
            std::string v = parse_var();
            return f_emb(a, b, u, v);
        }
        std::string u = parse_var();
        skip_ws();
        if (eat('=')) {
            std::string v = parse_var();
            return f_eq(u, v);
        }
        std::string next = peek_word();
        if (next == "in") {
            consume_word(next);
            if (at_label_keyword('S')) {
                ++pos; // 'S'
                Label a = parse_label();
                return f_in_level(u, a);
            }
            std::string v = parse_var();
            return f_mem(u, v);
        }
        fail("expected '=' or 'in' after '" + u + "'");
    }
};

} // namespace detail

inline Formula parse_formula(const std::string& text, bool allow_unbounded = false)
{
    detail::FormulaParser p(text, allow_unbounded);
    Formula out = p.parse_formula();
    p.skip_ws();
    if (p.pos != text.size())
        throw Error(ErrorKind::parse_error, "trailing characters after the formula", p.pos);
    return out;
}

// ---- schema instance generators ----

namespace detail {

// Deterministic fresh names: x/y (k = 1) or x1..xk/y1..yk, shifting the
// numeric suffix past any clash with variables already in use.
inline std::vector<std::string> fresh_names(const std::set<std::string>& used, char base,
                                            std::size_t k)
{
    if (k == 0) return {};
    if (k == 1 && !used.count(std::string(1, base))) return {std::string(1, base)};
    for (unsigned long start = 1;; start += k) {
        std::vector<std::string> names;
        names.reserve(k);
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            names.push_back(std::string(1, base) + std::to_string(start + i));
            if (used.count(names.back())) ok = false;
        }
        if (ok) return names;
    }
}

} // namespace detail

// HO instance: ∀x̄∈S_a ∀ȳ∈S_{r⊕a} ((⋀ I_a^{r⊕a}(xᵢ)=yᵢ) -> (Φ(x̄) <-> Φ^↑r(ȳ))).
inline Formula ho_instance(const Formula& f, unsigned r, const Label& a)
{
    if (!is_admissible(f))
        throw Error(ErrorKind::admissibility, "HO applies to admissible formulas only");
    std::set<std::string> fv = free_variables(f);
    std::vector<std::string> params(fv.begin(), fv.end()); // sorted
    Formula shifted = shift_up(f, r);
    if (params.empty()) return f_iff(f, shifted);

    Label b = oplus(r, a);
    std::set<std::string> used = all_variables(f);
    std::vector<std::string> xs = detail::fresh_names(used, 'x', params.size());
    for (const auto& n : xs) used.insert(n);
    std::vector<std::string> ys = detail::fresh_names(used, 'y', params.size());

    std::map<std::string, std::string> to_x, to_y;
    for (std::size_t i = 0; i < params.size(); ++i) {
        to_x[params[i]] = xs[i];
        to_y[params[i]] = ys[i];
    }
    Formula lhs = rename_free(f, to_x);
    Formula rhs = rename_free(shifted, to_y);

    Formula ante = f_emb(a, b, xs[0], ys[0]);
    for (std::size_t i = 1; i < params.size(); ++i)
        ante = f_and(ante, f_emb(a, b, xs[i], ys[i]));

    Formula core = f_implies(ante, f_iff(lhs, rhs));
    for (std::size_t i = params.size(); i-- > 0;) core = f_forall(ys[i], b, core);
    for (std::size_t i = params.size(); i-- > 0;) core = f_forall(xs[i], a, core);
    return core;
}

// GT instance: ∀x̄∈S_a ((∀x∈S_a φ(x,x̄)) -> Aall x. φ(x,x̄)). The
// distinguished variable defaults to the lexicographically least free one.
inline Formula gt_instance(const Formula& phi, const Label& a,
                           const std::string& distinguished = "")
{
    if (!is_pure_in_formula(phi))
        throw Error(ErrorKind::not_pure_in_formula,
                    "GT applies to pure ∈-formulas (no S or I atoms, no bounded quantifiers)");
    std::set<std::string> fv = free_variables(phi);
    std::string v;
    if (!distinguished.empty()) {
        v = distinguished;
    } else if (!fv.empty()) {
        v = *fv.begin();
    } else {
        v = "v";
    }
    std::vector<std::string> params;
    for (const auto& name : fv)
        if (name != v) params.push_back(name);

    std::set<std::string> used = all_variables(phi);
    used.insert(v);
    std::vector<std::string> qx = detail::fresh_names(used, 'x', 1);
    const std::string& x = qx[0];
    used.insert(x);
    std::vector<std::string> xs;
    if (!params.empty()) {
        // Side parameters are always numbered (x1, x2, ...).
        for (unsigned long start = 1;; ++start) {
            xs.clear();
            bool ok = true;
            for (std::size_t i = 0; i < params.size() && ok; ++i) {
                xs.push_back("x" + std::to_string(start + i));
                if (used.count(xs.back()) || xs.back() == x) ok = false;
            }
            if (ok) break;
        }
    }

    std::map<std::string, std::string> sub;
    sub[v] = x;
    for (std::size_t i = 0; i < params.size(); ++i) sub[params[i]] = xs[i];
    Formula body = rename_free(phi, sub);

    Formula core = f_implies(f_forall(x, a, body), f_unbounded_forall(x, body));
    for (std::size_t i = params.size(); i-- > 0;) core = f_forall(xs[i], a, core);
    return core;
}

} // namespace mlns

#endif
