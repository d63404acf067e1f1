#ifndef MLNS_EVAL_HPP
#define MLNS_EVAL_HPP

#include <algorithm>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/formula.hpp"
#include "mlns/num.hpp"

namespace mlns {

// Evaluation values are two-sorted: a Num, or a finite set of Nums (the
// computable stand-in for the membership atom).
class Value {
public:
    Value() : v_(Num(0)) {}
    Value(Num n) : v_(std::move(n)) {}
    Value(std::vector<Num> xs) : v_(normalize(std::move(xs))) {}

    bool is_num() const { return std::holds_alternative<Num>(v_); }
    bool is_set() const { return !is_num(); }
    const Num& num() const { return std::get<Num>(v_); }
    const std::vector<Num>& set() const { return std::get<std::vector<Num>>(v_); }

    bool operator==(const Value& other) const
    {
        if (is_num() != other.is_num()) return false; // sorts never mix
        if (is_num()) return num() == other.num();
        return set() == other.set();
    }

    bool in_level(const Label& a) const
    {
        if (is_num()) return num().in_level(a);
        for (const Num& x : set())
            if (!x.in_level(a)) return false;
        return true;
    }

    Label support() const
    {
        if (is_num()) return num().support();
        Label s;
        for (const Num& x : set()) s = s.unite(x.support());
        return s;
    }

    std::string render() const
    {
        if (is_num()) return num().render();
        std::string out = "{";
        for (std::size_t i = 0; i < set().size(); ++i) {
            if (i) out += ", ";
            out += set()[i].render();
        }
        return out + "}";
    }

private:
    static std::vector<Num> normalize(std::vector<Num> xs)
    {
        std::sort(xs.begin(), xs.end(), [](const Num& a, const Num& b) { return a < b; });
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return xs;
    }

    std::variant<Num, std::vector<Num>> v_;
};

using Env = std::map<std::string, Value>;
using Domains = std::map<std::string, std::vector<Value>>;

namespace detail {

inline const Value& env_lookup(const Env& env, const std::string& v)
{
    auto it = env.find(v);
    if (it == env.end())
        throw Error(ErrorKind::unbound_variable, "no value bound to '" + v + "'");
    return it->second;
}

inline Value embed_value(const Value& x, const Label& a, const Label& b)
{
    if (x.is_num()) return Value(embed(x.num(), a, b));
    std::vector<Num> out;
    out.reserve(x.set().size());
    for (const Num& e : x.set()) out.push_back(embed(e, a, b));
    return Value(std::move(out));
}

inline void check_domains(const Formula& f, const Domains& domains)
{
    if (!f) return;
    switch (f->kind) {
    case FKind::forall_in:
    case FKind::exists_in:
    case FKind::unbounded_forall:
        if (!domains.count(f->var1))
            throw Error(ErrorKind::missing_domain,
                        "no quantifier domain supplied for '" + f->var1 + "'");
        check_domains(f->left, domains);
        return;
    default:
        check_domains(f->left, domains);
        check_domains(f->right, domains);
        return;
    }
}

inline bool eval_rec(const Formula& f, Env& env, const Domains& domains)
{
    switch (f->kind) {
    case FKind::atom_eq:
        return env_lookup(env, f->var1) == env_lookup(env, f->var2);
    case FKind::atom_mem: {
        const Value& u = env_lookup(env, f->var1);
        const Value& v = env_lookup(env, f->var2);
        if (!v.is_set())
            throw Error(ErrorKind::type_mismatch,
                        "membership into a number: '" + f->var2 + "' is not a set value");
        if (!u.is_num()) return false; // sets contain numbers only
        const auto& xs = v.set();
        for (const Num& x : xs)
            if (x == u.num()) return true;
        return false;
    }
    case FKind::atom_in_level:
        return env_lookup(env, f->var1).in_level(f->label1);
    case FKind::atom_emb: {
        const Value& u = env_lookup(env, f->var1);
        const Value& v = env_lookup(env, f->var2);
        if (!u.in_level(f->label1)) return false; // I_a^b is a partial graph
        return embed_value(u, f->label1, f->label2) == v;
    }
    case FKind::lnot:
        return !eval_rec(f->left, env, domains);
    case FKind::land:
        return eval_rec(f->left, env, domains) && eval_rec(f->right, env, domains);
    case FKind::lor:
        return eval_rec(f->left, env, domains) || eval_rec(f->right, env, domains);
    case FKind::implies:
        return !eval_rec(f->left, env, domains) || eval_rec(f->right, env, domains);
    case FKind::iff:
        return eval_rec(f->left, env, domains) == eval_rec(f->right, env, domains);
    case FKind::forall_in:
    case FKind::exists_in:
    case FKind::unbounded_forall: {
        const auto& dom = domains.at(f->var1);
        bool is_forall = f->kind != FKind::exists_in;
        bool bounded = f->kind != FKind::unbounded_forall;
        auto saved = env.find(f->var1) != env.end()
                         ? std::optional<Value>(env[f->var1])
                         : std::nullopt;
        bool result = is_forall;
        for (const Value& d : dom) {
            if (bounded && !d.in_level(f->label1)) continue;
            env[f->var1] = d;
            bool sub = eval_rec(f->left, env, domains);
            if (is_forall && !sub) {
                result = false;
                break;
            }
            if (!is_forall && sub) {
                result = true;
                break;
            }
        }
        if (saved)
            env[f->var1] = *saved;
        else
            env.erase(f->var1);
        return result;
    }
    }
    return false;
}

} // namespace detail

// Finite-domain truth evaluation: quantifiers range over the supplied
// lists, level bounds filter them, atoms go through the number model.
inline bool eval_formula(const Formula& f, const Env& env, const Domains& domains)
{
    detail::check_domains(f, domains);
    Env scratch = env;
    return detail::eval_rec(f, scratch, domains);
}

} // namespace mlns

#endif
