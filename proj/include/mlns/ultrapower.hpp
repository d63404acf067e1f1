#ifndef MLNS_ULTRAPOWER_HPP
#define MLNS_ULTRAPOWER_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/ultrafilter.hpp"

namespace mlns {

// Finite relational structure (universe <= 4 elements, relations of
// arity <= 2), the desk-scale stand-in for a universe of sets.
struct FiniteStructure {
    std::vector<std::string> universe;
    struct Relation {
        unsigned arity = 2;
        std::vector<std::uint8_t> table; // m or m*m entries

        bool holds(unsigned x) const { return table[x] != 0; }
        bool holds(unsigned x, unsigned y, std::size_t m) const { return table[x * m + y] != 0; }
    };
    std::map<std::string, Relation> relations;

    std::size_t size() const { return universe.size(); }

    static FiniteStructure digraph(unsigned nodes,
                                   const std::vector<std::pair<unsigned, unsigned>>& edges)
    {
        if (nodes == 0 || nodes > 4)
            throw Error(ErrorKind::too_large, "structures carry 1..4 elements");
        FiniteStructure m;
        for (unsigned i = 0; i < nodes; ++i) m.universe.push_back(std::to_string(i));
        Relation e;
        e.arity = 2;
        e.table.assign(static_cast<std::size_t>(nodes) * nodes, 0);
        for (auto [u, v] : edges) {
            if (u >= nodes || v >= nodes)
                throw Error(ErrorKind::bad_argument, "edge endpoint outside the universe");
            e.table[u * nodes + v] = 1;
        }
        m.relations["E"] = std::move(e);
        return m;
    }
};

// Prenex formulas with at most two variable slots over a structure's
// signature: slots below `quantifiers` are bound (prefix order), the rest
// are free parameters. The matrix is a literal or a binary combination of
// two literals.
struct StructFormula {
    struct Atom {
        enum class Kind { rel, eq } kind = Kind::eq;
        std::string rel;
        unsigned arity = 2;
        int v1 = 0, v2 = 1; // variable slots
    };
    struct Literal {
        Atom atom;
        bool negated = false;
    };
    enum class Shape { lit, conj, disj };

    unsigned quantifiers = 0;          // 0..2
    std::vector<bool> is_forall;       // one flag per quantifier
    Shape shape = Shape::lit;
    Literal a, b;

    unsigned total_slots() const { return 2; }
    unsigned free_slots() const { return total_slots() - quantifiers; }

    std::string render() const
    {
        auto slot_name = [&](int s) {
            static const char* qn[] = {"q1", "q2"};
            if (s < static_cast<int>(quantifiers)) return std::string(qn[s]);
            return "p" + std::to_string(s - static_cast<int>(quantifiers) + 1);
        };
        auto lit = [&](const Literal& l) {
            std::string at;
            if (l.atom.kind == Atom::Kind::eq)
                at = slot_name(l.atom.v1) + " = " + slot_name(l.atom.v2);
            else if (l.atom.arity == 1)
                at = l.atom.rel + "(" + slot_name(l.atom.v1) + ")";
            else
                at = l.atom.rel + "(" + slot_name(l.atom.v1) + "," + slot_name(l.atom.v2) + ")";
            return l.negated ? "!" + at : at;
        };
        std::string out;
        for (unsigned q = 0; q < quantifiers; ++q)
            out += std::string(is_forall[q] ? "A" : "E") + slot_name(static_cast<int>(q)) + ". ";
        if (shape == Shape::lit)
            out += lit(a);
        else
            out += lit(a) + (shape == Shape::conj ? " & " : " | ") + lit(b);
        return out;
    }
};

namespace detail {

// Relation pointers resolved once per (structure, formula) pair, so the
// quantifier loops run without name lookups.
struct ResolvedLit {
    const FiniteStructure::Relation* rel = nullptr; // null for equality
    int v1 = 0, v2 = 1;
    bool negated = false;
};

struct ResolvedFormula {
    const StructFormula* f = nullptr;
    unsigned universe = 0;
    ResolvedLit a, b;
};

inline ResolvedLit resolve_lit(const FiniteStructure& m, const StructFormula::Literal& l)
{
    ResolvedLit out;
    out.v1 = l.atom.v1;
    out.v2 = l.atom.v2;
    out.negated = l.negated;
    if (l.atom.kind == StructFormula::Atom::Kind::rel) {
        auto it = m.relations.find(l.atom.rel);
        if (it == m.relations.end())
            throw Error(ErrorKind::unsupported_formula, "unknown relation " + l.atom.rel);
        if (it->second.arity > 2)
            throw Error(ErrorKind::unsupported_formula, "relations of arity > 2 are unsupported");
        out.rel = &it->second;
    }
    return out;
}

inline ResolvedFormula resolve_formula(const FiniteStructure& m, const StructFormula& f)
{
    if (f.quantifiers > 2)
        throw Error(ErrorKind::unsupported_formula, "at most two quantifiers are supported");
    ResolvedFormula out;
    out.f = &f;
    out.universe = static_cast<unsigned>(m.size());
    out.a = resolve_lit(m, f.a);
    if (f.shape != StructFormula::Shape::lit) out.b = resolve_lit(m, f.b);
    return out;
}

inline bool eval_lit(const ResolvedFormula& rf, const ResolvedLit& l, const unsigned vals[2])
{
    bool v;
    if (!l.rel)
        v = vals[l.v1] == vals[l.v2];
    else if (l.rel->arity == 1)
        v = l.rel->holds(vals[l.v1]);
    else
        v = l.rel->holds(vals[l.v1], vals[l.v2], rf.universe);
    return l.negated ? !v : v;
}

inline bool eval_matrix(const ResolvedFormula& rf, const unsigned vals[2])
{
    switch (rf.f->shape) {
    case StructFormula::Shape::lit: return eval_lit(rf, rf.a, vals);
    case StructFormula::Shape::conj: return eval_lit(rf, rf.a, vals) && eval_lit(rf, rf.b, vals);
    case StructFormula::Shape::disj: return eval_lit(rf, rf.a, vals) || eval_lit(rf, rf.b, vals);
    }
    return false;
}

// Prenex evaluation with the free slots pre-assigned in vals.
inline bool eval_prenex(const ResolvedFormula& rf, unsigned depth, unsigned vals[2])
{
    if (depth == rf.f->quantifiers) return eval_matrix(rf, vals);
    bool forall = rf.f->is_forall[depth];
    for (unsigned x = 0; x < rf.universe; ++x) {
        vals[depth] = x;
        bool sub = eval_prenex(rf, depth + 1, vals);
        if (forall && !sub) return false;
        if (!forall && sub) return true;
    }
    return forall;
}

} // namespace detail

inline bool eval_in_structure(const FiniteStructure& m, const StructFormula& f,
                              const std::vector<unsigned>& params)
{
    if (params.size() != f.free_slots())
        throw Error(ErrorKind::bad_argument, "wrong number of free parameters");
    detail::ResolvedFormula rf = detail::resolve_formula(m, f);
    unsigned vals[2] = {0, 0};
    for (std::size_t i = 0; i < params.size(); ++i) vals[f.quantifiers + i] = params[i];
    return detail::eval_prenex(rf, 0, vals);
}

// The ultrapower of M by U: all functions I -> M modulo =_U. Functions are
// indexed with digit i (base |M|) equal to f(i).
struct Ultrapower {
    FiniteStructure quotient;
    std::vector<unsigned> class_of; // function index -> class index
    std::vector<std::size_t> representative; // class index -> function index
    std::vector<std::array<std::uint8_t, 6>> digits; // function index -> values at 0..g-1
    std::size_t function_count = 0;
    std::size_t base_size = 0;
    std::size_t index_size = 0;

    unsigned fn_value(std::size_t fidx, unsigned i) const { return digits[fidx][i]; }
};

inline Ultrapower ultrapower(const FiniteStructure& m, const FiniteUltrafilter& u)
{
    std::size_t mm = m.size();
    std::size_t g = u.ground.size();
    if (mm == 0 || mm > 4)
        throw Error(ErrorKind::too_large, "structures carry 1..4 elements");
    if (g == 0 || g > 6)
        throw Error(ErrorKind::too_large, "ultrapower index sets carry 1..6 elements");

    std::size_t fcount = 1;
    for (std::size_t i = 0; i < g; ++i) fcount *= mm;

    Ultrapower up;
    up.function_count = fcount;
    up.base_size = mm;
    up.index_size = g;
    up.class_of.assign(fcount, 0);
    up.digits.resize(fcount);
    for (std::size_t f = 0; f < fcount; ++f) {
        std::size_t rest = f;
        for (std::size_t i = 0; i < g; ++i) {
            up.digits[f][i] = static_cast<std::uint8_t>(rest % mm);
            rest /= mm;
        }
    }

    auto agree_mask = [&](std::size_t f1, std::size_t f2) {
        std::uint64_t mask = 0;
        std::size_t a = f1, b = f2;
        for (std::size_t i = 0; i < g; ++i) {
            if (a % mm == b % mm) mask |= std::uint64_t(1) << i;
            a /= mm;
            b /= mm;
        }
        return mask;
    };

    std::vector<int> cls(fcount, -1);
    for (std::size_t f = 0; f < fcount; ++f) {
        if (cls[f] >= 0) continue;
        int c = static_cast<int>(up.representative.size());
        up.representative.push_back(f);
        cls[f] = c;
        for (std::size_t h = f + 1; h < fcount; ++h) {
            if (cls[h] >= 0) continue;
            if (u.family.get(agree_mask(f, h))) cls[h] = c;
        }
    }
    for (std::size_t f = 0; f < fcount; ++f) up.class_of[f] = static_cast<unsigned>(cls[f]);

    // Quotient structure: relations hold on classes iff they hold U-largely
    // pointwise on representatives.
    FiniteStructure q;
    for (std::size_t c = 0; c < up.representative.size(); ++c) {
        std::size_t f = up.representative[c];
        std::string name = "[";
        for (std::size_t i = 0; i < g; ++i) {
            if (i) name += ",";
            name += m.universe[up.fn_value(f, static_cast<unsigned>(i))];
        }
        name += "]";
        q.universe.push_back(std::move(name));
    }
    std::size_t qn = q.universe.size();
    for (const auto& [rname, rel] : m.relations) {
        FiniteStructure::Relation qr;
        qr.arity = rel.arity;
        if (rel.arity == 1) {
            qr.table.assign(qn, 0);
            for (std::size_t c = 0; c < qn; ++c) {
                std::uint64_t large = 0;
                std::size_t f = up.representative[c];
                for (std::size_t i = 0; i < g; ++i)
                    if (rel.holds(up.fn_value(f, static_cast<unsigned>(i))))
                        large |= std::uint64_t(1) << i;
                qr.table[c] = u.family.get(large) ? 1 : 0;
            }
        } else {
            qr.table.assign(qn * qn, 0);
            for (std::size_t c1 = 0; c1 < qn; ++c1) {
                for (std::size_t c2 = 0; c2 < qn; ++c2) {
                    std::uint64_t large = 0;
                    std::size_t f1 = up.representative[c1];
                    std::size_t f2 = up.representative[c2];
                    for (std::size_t i = 0; i < g; ++i)
                        if (rel.holds(up.fn_value(f1, static_cast<unsigned>(i)),
                                      up.fn_value(f2, static_cast<unsigned>(i)), mm))
                            large |= std::uint64_t(1) << i;
                    qr.table[c1 * qn + c2] = u.family.get(large) ? 1 : 0;
                }
            }
        }
        q.relations[rname] = std::move(qr);
    }
    up.quotient = std::move(q);
    return up;
}

// Łoś check: satisfaction of φ at the classes [f1..fk] in the ultrapower
// iff {i : φ(f1(i),...,fk(i)) holds in M} is U-large, both sides evaluated
// exhaustively.
inline bool los_check(const FiniteStructure& m, const FiniteUltrafilter& u,
                      const StructFormula& f, const std::vector<std::size_t>& param_fns,
                      const Ultrapower* prebuilt = nullptr)
{
    Ultrapower local;
    const Ultrapower& up = prebuilt ? *prebuilt : (local = ultrapower(m, u), local);

    unsigned fs = f.free_slots();
    if (param_fns.size() != fs)
        throw Error(ErrorKind::bad_argument, "wrong number of parameter functions");
    for (std::size_t fn : param_fns)
        if (fn >= up.function_count)
            throw Error(ErrorKind::bad_argument, "parameter function index out of range");

    detail::ResolvedFormula rq = detail::resolve_formula(up.quotient, f);
    unsigned vals[2] = {0, 0};
    for (unsigned i = 0; i < fs; ++i) vals[f.quantifiers + i] = up.class_of[param_fns[i]];
    bool lhs = detail::eval_prenex(rq, 0, vals);

    detail::ResolvedFormula rm = detail::resolve_formula(m, f);
    std::size_t g = up.index_size;
    std::uint64_t large = 0;
    for (std::size_t i = 0; i < g; ++i) {
        unsigned pv[2] = {0, 0};
        for (unsigned j = 0; j < fs; ++j)
            pv[f.quantifiers + j] = up.fn_value(param_fns[j], static_cast<unsigned>(i));
        if (detail::eval_prenex(rm, 0, pv)) large |= std::uint64_t(1) << i;
    }
    bool rhs = u.family.get(large);
    return lhs == rhs;
}

// The fixed formula family used by the exhaustive sweeps: every prenex
// shape over two variable slots with literal/conjunction/disjunction
// matrices over the structure's atoms.
inline std::vector<StructFormula> struct_formula_family(const FiniteStructure& m)
{
    std::vector<StructFormula::Atom> atoms;
    for (const auto& [name, rel] : m.relations) {
        if (rel.arity > 2)
            throw Error(ErrorKind::unsupported_formula, "relations of arity > 2 are unsupported");
        if (rel.arity == 1) {
            for (int v = 0; v < 2; ++v) {
                StructFormula::Atom a;
                a.kind = StructFormula::Atom::Kind::rel;
                a.rel = name;
                a.arity = 1;
                a.v1 = v;
                atoms.push_back(a);
            }
        } else {
            for (int v1 = 0; v1 < 2; ++v1)
                for (int v2 = 0; v2 < 2; ++v2) {
                    StructFormula::Atom a;
                    a.kind = StructFormula::Atom::Kind::rel;
                    a.rel = name;
                    a.arity = 2;
                    a.v1 = v1;
                    a.v2 = v2;
                    atoms.push_back(a);
                }
        }
    }
    {
        StructFormula::Atom eq;
        eq.kind = StructFormula::Atom::Kind::eq;
        eq.v1 = 0;
        eq.v2 = 1;
        atoms.push_back(eq);
    }

    std::vector<StructFormula::Literal> lits;
    for (const auto& a : atoms)
        for (bool neg : {false, true}) lits.push_back({a, neg});

    std::vector<StructFormula> out;
    std::vector<std::pair<unsigned, std::vector<bool>>> prefixes = {
        {0, {}},
        {1, {true}},
        {1, {false}},
        {2, {true, true}},
        {2, {true, false}},
        {2, {false, true}},
        {2, {false, false}},
    };
    for (const auto& [nq, flags] : prefixes) {
        for (std::size_t i = 0; i < lits.size(); ++i) {
            StructFormula f;
            f.quantifiers = nq;
            f.is_forall = flags;
            f.shape = StructFormula::Shape::lit;
            f.a = lits[i];
            out.push_back(f);
            for (std::size_t j = i; j < lits.size(); ++j) {
                StructFormula g = f;
                g.b = lits[j];
                g.shape = StructFormula::Shape::conj;
                out.push_back(g);
                g.shape = StructFormula::Shape::disj;
                out.push_back(g);
            }
        }
    }
    return out;
}

} // namespace mlns

#endif
