#ifndef MLNS_ULTRAFILTER_HPP
#define MLNS_ULTRAFILTER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mlns/error.hpp"
#include "mlns/label.hpp"

namespace mlns {

// One bit per subset of the ground set, indexed by the subset's element
// mask. Ground sets stay small (<= 27 elements, 16 MiB of bits).
class SubsetBits {
public:
    SubsetBits() = default;

    explicit SubsetBits(unsigned ground_size)
        : ground_(ground_size), words_((std::uint64_t(1) << ground_size) / 64 + 1, 0)
    {
    }

    unsigned ground_size() const { return ground_; }
    std::uint64_t subset_count() const { return std::uint64_t(1) << ground_; }

    bool get(std::uint64_t mask) const
    {
        return (words_[mask >> 6] >> (mask & 63)) & 1;
    }

    void set(std::uint64_t mask, bool v)
    {
        if (v)
            words_[mask >> 6] |= std::uint64_t(1) << (mask & 63);
        else
            words_[mask >> 6] &= ~(std::uint64_t(1) << (mask & 63));
    }

    bool operator==(const SubsetBits& other) const
    {
        if (ground_ != other.ground_) return false;
        std::uint64_t nbits = subset_count();
        std::uint64_t full_words = nbits >> 6;
        for (std::uint64_t i = 0; i < full_words; ++i)
            if (words_[i] != other.words_[i]) return false;
        unsigned rem = nbits & 63;
        if (rem) {
            std::uint64_t m = (std::uint64_t(1) << rem) - 1;
            if ((words_[full_words] & m) != (other.words_[full_words] & m)) return false;
        }
        return true;
    }

    std::vector<std::uint64_t>& words() { return words_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    unsigned ground_ = 0;
    std::vector<std::uint64_t> words_;
};

// Ground set with printable element names. Products carry structured
// tuple names so that differently built copies compare equal.
struct Ground {
    std::vector<std::string> names;
    std::size_t size() const { return names.size(); }
    bool operator==(const Ground& other) const = default;
};

inline Ground base_ground(unsigned m)
{
    Ground g;
    g.names.reserve(m);
    for (unsigned i = 0; i < m; ++i) g.names.push_back(std::to_string(i));
    return g;
}

inline Ground pair_ground(const Ground& a, const Ground& b)
{
    Ground g;
    g.names.reserve(a.size() * b.size());
    for (const auto& x : a.names)
        for (const auto& y : b.names) g.names.push_back("(" + x + "," + y + ")");
    return g;
}

// I^a: functions a -> I, indexed big-endian by position in the sorted
// label (first position most significant). The numeral label of size n
// prints plain tuples; other labels print position:value pairs.
inline Ground power_ground(const Ground& base, const Label& a)
{
    std::size_t m = base.size();
    std::size_t n = a.size();
    if (n == 0) return Ground{{"()"}};
    if (n == 1 && a == Label::numeral(1)) return base;
    std::size_t count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= m;
    bool numeral = a == Label::numeral(static_cast<unsigned>(n));
    Ground g;
    g.names.reserve(count);
    std::vector<std::size_t> digits(n, 0);
    const auto& positions = a.indices();
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = n; k-- > 0;) {
            digits[k] = rest % m;
            rest /= m;
        }
        std::string name = numeral ? "(" : "[";
        for (std::size_t k = 0; k < n; ++k) {
            if (k) name += ",";
            if (!numeral) {
                name += std::to_string(positions[k]);
                name += ":";
            }
            name += base.names[digits[k]];
        }
        name += numeral ? ")" : "]";
        g.names.push_back(std::move(name));
    }
    return g;
}

struct FiniteUltrafilter {
    Ground ground;
    SubsetBits family;

    bool operator==(const FiniteUltrafilter& other) const
    {
        return ground == other.ground && family == other.family;
    }
};

inline constexpr unsigned default_ground_limit = 27; // 2^27 subset bits

inline void check_ground_limit(std::size_t g, unsigned limit = default_ground_limit)
{
    if (g > limit)
        throw Error(ErrorKind::too_large,
                    "ground set of " + std::to_string(g) + " elements exceeds the enumeration bound");
}

inline FiniteUltrafilter principal_ultrafilter(Ground ground, unsigned point)
{
    check_ground_limit(ground.size());
    if (point >= ground.size())
        throw Error(ErrorKind::bad_argument, "principal point outside the ground set");
    unsigned g = static_cast<unsigned>(ground.size());
    FiniteUltrafilter u{std::move(ground), SubsetBits(g)};
    auto& words = u.family.words();
    if (point >= 6) {
        // Whole 64-bit words alternate in blocks of 2^(point-6).
        std::uint64_t block = std::uint64_t(1) << (point - 6);
        std::uint64_t total = (std::uint64_t(1) << g) >> 6;
        for (std::uint64_t w = 0; w < total; ++w)
            if ((w / block) & 1) words[w] = ~std::uint64_t(0);
    } else {
        std::uint64_t pattern = 0;
        for (unsigned bit = 0; bit < 64; ++bit)
            if ((bit >> point) & 1) pattern |= std::uint64_t(1) << bit;
        std::uint64_t nbits = std::uint64_t(1) << g;
        if (nbits >= 64) {
            std::uint64_t total = nbits >> 6;
            for (std::uint64_t w = 0; w < total; ++w) words[w] = pattern;
        } else {
            words[0] = pattern & ((std::uint64_t(1) << nbits) - 1);
        }
    }
    return u;
}

// The four ultrafilter axioms checked literally by enumeration over the
// given family (explicit subset masks). Meant for small grounds.
inline bool is_ultrafilter(const std::vector<std::uint64_t>& family, unsigned ground_size)
{
    if (ground_size > 16)
        throw Error(ErrorKind::too_large, "axiom enumeration is limited to 16 ground elements");
    std::uint64_t all = (std::uint64_t(1) << ground_size) - 1;
    SubsetBits member(ground_size);
    for (std::uint64_t y : family) {
        if (y > all) return false;
        member.set(y, true);
    }
    // no empty set
    if (member.get(0)) return false;
    // exactly one of Y, I\Y
    for (std::uint64_t y = 0; y <= all; ++y)
        if (member.get(y) == member.get(all & ~y)) return false;
    // upward closed
    for (std::uint64_t y = 0; y <= all; ++y) {
        if (!member.get(y)) continue;
        for (unsigned i = 0; i < ground_size; ++i)
            if (!member.get(y | (std::uint64_t(1) << i))) return false;
    }
    // closed under intersection
    for (std::uint64_t y : family)
        for (std::uint64_t z : family)
            if (!member.get(y & z)) return false;
    return true;
}

inline bool is_ultrafilter(const FiniteUltrafilter& u)
{
    std::vector<std::uint64_t> family;
    std::uint64_t n = u.family.subset_count();
    for (std::uint64_t y = 0; y < n; ++y)
        if (u.family.get(y)) family.push_back(y);
    return is_ultrafilter(family, static_cast<unsigned>(u.ground.size()));
}

// Equivalent verification that scales to product grounds: a family on a
// finite ground satisfies the four axioms iff it is principal at a point.
inline bool verify_ultrafilter_fast(const FiniteUltrafilter& u)
{
    std::uint64_t n = u.family.subset_count();
    std::uint64_t all = n - 1;
    if (u.family.get(0)) return false;
    std::uint64_t core = all;
    for (std::uint64_t y = 0; y < n; ++y)
        if (u.family.get(y)) core &= y;
    if (__builtin_popcountll(core) != 1) return false;
    for (std::uint64_t y = 0; y < n; ++y)
        if (u.family.get(y) != ((y & core) == core)) return false;
    return true;
}

// The principal point of the family (every ultrafilter on a finite set
// has one).
inline unsigned principal_point(const FiniteUltrafilter& u)
{
    std::uint64_t n = u.family.subset_count();
    std::uint64_t core = n - 1;
    for (std::uint64_t y = 0; y < n; ++y)
        if (u.family.get(y)) core &= y;
    if (__builtin_popcountll(core) != 1)
        throw Error(ErrorKind::bad_argument, "family is not an ultrafilter");
    unsigned p = 0;
    while (!((core >> p) & 1)) ++p;
    return p;
}

// All ultrafilters over {0,...,m-1}: the m principal ones. Exhaustive mode
// re-derives them by filtering every family through is_ultrafilter.
inline std::vector<FiniteUltrafilter> all_ultrafilters(unsigned m, bool exhaustive = false)
{
    std::vector<FiniteUltrafilter> out;
    if (!exhaustive) {
        for (unsigned i = 0; i < m; ++i) out.push_back(principal_ultrafilter(base_ground(m), i));
        return out;
    }
    if (m > 4)
        throw Error(ErrorKind::too_large, "exhaustive enumeration is limited to 4 ground elements");
    std::uint64_t subsets = std::uint64_t(1) << m;
    std::uint64_t families = std::uint64_t(1) << subsets;
    for (std::uint64_t fam = 0; fam < families; ++fam) {
        std::vector<std::uint64_t> members;
        for (std::uint64_t y = 0; y < subsets; ++y)
            if ((fam >> y) & 1) members.push_back(y);
        if (!is_ultrafilter(members, m)) continue;
        FiniteUltrafilter u{base_ground(m), SubsetBits(m)};
        for (std::uint64_t y : members) u.family.set(y, true);
        out.push_back(std::move(u));
    }
    return out;
}

// π[U] = {Y ⊆ J : π⁻¹[Y] ∈ U}. `index_map[s]` is π(s) as a target index.
inline FiniteUltrafilter pushforward(const FiniteUltrafilter& u,
                                     const std::vector<unsigned>& index_map, Ground target)
{
    check_ground_limit(target.size());
    std::size_t gs = u.ground.size();
    std::size_t gt = target.size();
    if (index_map.size() != gs)
        throw Error(ErrorKind::bad_argument, "index map must be total on the source ground");
    for (unsigned t : index_map)
        if (t >= gt) throw Error(ErrorKind::bad_argument, "index map leaves the target ground");

    bool identity = gs == gt;
    if (identity)
        for (std::size_t s = 0; s < gs; ++s)
            if (index_map[s] != s) {
                identity = false;
                break;
            }
    if (identity) return FiniteUltrafilter{std::move(target), u.family};

    bool bijective = gs == gt;
    if (bijective) {
        std::vector<bool> hit(gt, false);
        for (unsigned t : index_map) {
            if (hit[t]) {
                bijective = false;
                break;
            }
            hit[t] = true;
        }
    }

    FiniteUltrafilter out{std::move(target), SubsetBits(static_cast<unsigned>(gt))};
    if (bijective) {
        // Permute subset masks through byte lookup tables.
        std::uint64_t tables[4][256] = {};
        for (unsigned byte = 0; byte < 4; ++byte) {
            for (unsigned v = 0; v < 256; ++v) {
                std::uint64_t m = 0;
                for (unsigned bit = 0; bit < 8; ++bit) {
                    unsigned s = byte * 8 + bit;
                    if (s < gs && ((v >> bit) & 1)) m |= std::uint64_t(1) << index_map[s];
                }
                tables[byte][v] = m;
            }
        }
        std::uint64_t n = u.family.subset_count();
        for (std::uint64_t y = 0; y < n; ++y) {
            if (!u.family.get(y)) continue;
            std::uint64_t t = tables[0][y & 255] | tables[1][(y >> 8) & 255] |
                              tables[2][(y >> 16) & 255] | tables[3][(y >> 24) & 255];
            out.family.set(t, true);
        }
        return out;
    }

    // General case: enumerate target subsets and pull back.
    std::uint64_t nt = std::uint64_t(1) << gt;
    if (nt > (std::uint64_t(1) << 20))
        throw Error(ErrorKind::too_large, "pushforward target too large for enumeration");
    for (std::uint64_t y = 0; y < nt; ++y) {
        std::uint64_t pre = 0;
        for (std::size_t s = 0; s < gs; ++s)
            if ((y >> index_map[s]) & 1) pre |= std::uint64_t(1) << s;
        if (u.family.get(pre)) out.family.set(y, true);
    }
    return out;
}

// U ⊗ V over I×J: Z is large iff {x : {y : (x,y) ∈ Z} ∈ V} ∈ U, computed
// for every Z. The element (x,y) has mask bit x*|J|+y, so for fixed rows
// x >= 1 the low 2^|J| block of Z-indices is a precomputable bit pattern.
inline FiniteUltrafilter tensor(const FiniteUltrafilter& u, const FiniteUltrafilter& v,
                                unsigned ground_limit = default_ground_limit)
{
    std::size_t gi = u.ground.size();
    std::size_t gj = v.ground.size();
    if (gi * gj > ground_limit)
        throw Error(ErrorKind::too_large,
                    "tensor enumeration over 2^" + std::to_string(gi * gj) +
                        " subsets exceeds the configured bound");
    Ground target = pair_ground(u.ground, v.ground);
    unsigned g = static_cast<unsigned>(gi * gj);
    FiniteUltrafilter out{std::move(target), SubsetBits(g)};

    std::uint64_t rows = std::uint64_t(1) << gj; // choices for one x-row
    std::vector<std::uint8_t> vbit(rows);
    for (std::uint64_t y = 0; y < rows; ++y) vbit[y] = v.family.get(y) ? 1 : 0;

    if (gi == 0 || gj == 0) {
        // Degenerate grounds: fall back to direct enumeration.
        std::uint64_t n = out.family.subset_count();
        for (std::uint64_t z = 0; z < n; ++z) {
            std::uint64_t xmask = 0;
            for (std::size_t x = 0; x < gi; ++x) {
                std::uint64_t row = (z >> (x * gj)) & (rows - 1);
                if (vbit[row]) xmask |= std::uint64_t(1) << x;
            }
            if (u.family.get(xmask)) out.family.set(z, true);
        }
        return out;
    }

    // patterns[hi]: the 2^|J| result bits for row0 = 0..2^|J|-1 when the
    // rows of x >= 1 contribute the x-mask bits `hi`.
    std::uint64_t his = std::uint64_t(1) << (gi - 1);
    std::size_t pat_words = static_cast<std::size_t>((rows + 63) / 64);
    std::vector<std::vector<std::uint64_t>> patterns(his,
                                                     std::vector<std::uint64_t>(pat_words, 0));
    for (std::uint64_t hi = 0; hi < his; ++hi) {
        auto& pat = patterns[hi];
        for (std::uint64_t row0 = 0; row0 < rows; ++row0) {
            std::uint64_t xmask = (hi << 1) | vbit[row0];
            if (u.family.get(xmask)) pat[row0 >> 6] |= std::uint64_t(1) << (row0 & 63);
        }
    }

    std::uint64_t outer = std::uint64_t(1) << (gj * (gi - 1));
    auto& words = out.family.words();
    if (rows >= 64) {
        for (std::uint64_t high = 0; high < outer; ++high) {
            std::uint64_t hi = 0;
            for (std::size_t x = 1; x < gi; ++x) {
                std::uint64_t row = (high >> ((x - 1) * gj)) & (rows - 1);
                if (vbit[row]) hi |= std::uint64_t(1) << (x - 1);
            }
            const auto& pat = patterns[hi];
            std::uint64_t base_word = (high * rows) >> 6;
            for (std::size_t w = 0; w < pat_words; ++w) words[base_word + w] = pat[w];
        }
    } else {
        for (std::uint64_t high = 0; high < outer; ++high) {
            std::uint64_t hi = 0;
            for (std::size_t x = 1; x < gi; ++x) {
                std::uint64_t row = (high >> ((x - 1) * gj)) & (rows - 1);
                if (vbit[row]) hi |= std::uint64_t(1) << (x - 1);
            }
            std::uint64_t pat = patterns[hi][0] & (rows == 64 ? ~std::uint64_t(0)
                                                              : ((std::uint64_t(1) << rows) - 1));
            std::uint64_t bit_base = high * rows;
            words[bit_base >> 6] |= pat << (bit_base & 63);
        }
    }
    return out;
}

// ⊗⁰U = {{∅}}; ⊗¹U = U; ⊗^{n+1}U = U ⊗ (⊗ⁿU), grounds renamed to
// canonical tuple form at each step.
inline FiniteUltrafilter tensor_power(const FiniteUltrafilter& u, unsigned n,
                                      unsigned ground_limit = default_ground_limit)
{
    if (n == 0) {
        FiniteUltrafilter out{Ground{{"()"}}, SubsetBits(1)};
        out.family.set(1, true); // the family {{∅}} over the one-point ground {∅}
        return out;
    }
    if (n == 1) return u;
    std::size_t m = u.ground.size();
    std::size_t total = 1;
    for (unsigned i = 0; i < n; ++i) {
        total *= m;
        if (total > ground_limit)
            throw Error(ErrorKind::too_large, "tensor power ground exceeds the configured bound");
    }
    FiniteUltrafilter acc = u;
    for (unsigned k = 2; k <= n; ++k) {
        acc = tensor(u, acc, ground_limit);
        acc.ground = power_ground(u.ground, Label::numeral(k));
    }
    return acc;
}

// U_a = π[⊗ⁿU] with π induced by the order map of n onto a. Under the
// canonical big-endian tuple indexing π is the identity on indices, so
// this is a ground relabeling of the tensor power.
inline FiniteUltrafilter project_to_label(const FiniteUltrafilter& u, const Label& a,
                                          unsigned n, unsigned ground_limit = default_ground_limit)
{
    if (a.size() != n)
        throw Error(ErrorKind::size_mismatch,
                    "project_to_label: |" + a.render() + "| != " + std::to_string(n));
    FiniteUltrafilter t = tensor_power(u, n, ground_limit);
    t.ground = power_ground(u.ground, a);
    return t;
}

// Restriction map I^b -> I^a (a ⊆ b) on canonical tuple indices.
inline std::vector<unsigned> restriction_index_map(std::size_t base, const Label& a,
                                                   const Label& b)
{
    std::size_t nb = b.size(), na = a.size();
    std::vector<std::size_t> apos; // positions of a's elements inside b
    {
        const auto& bi = b.indices();
        for (unsigned s : a)
            for (std::size_t k = 0; k < bi.size(); ++k)
                if (bi[k] == s) apos.push_back(k);
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < nb; ++i) total *= base;
    std::vector<unsigned> map(total);
    std::vector<std::size_t> digits(nb, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = nb; k-- > 0;) {
            digits[k] = rest % base;
            rest /= base;
        }
        std::size_t target = 0;
        for (std::size_t k = 0; k < na; ++k) target = target * base + digits[apos[k]];
        map[idx] = static_cast<unsigned>(target);
    }
    return map;
}

// U_a = π_a^b[U_b] for a ⊆ b.
inline bool check_coherence(const FiniteUltrafilter& u, const Label& a, const Label& b,
                            unsigned ground_limit = default_ground_limit)
{
    if (!a.subset_of(b))
        throw Error(ErrorKind::not_subset, "check_coherence needs a ⊆ b");
    FiniteUltrafilter ua = project_to_label(u, a, static_cast<unsigned>(a.size()), ground_limit);
    FiniteUltrafilter ub = project_to_label(u, b, static_cast<unsigned>(b.size()), ground_limit);
    if (a == b) return ua == ub;
    auto map = restriction_index_map(u.ground.size(), a, b);
    FiniteUltrafilter pushed = pushforward(ub, map, power_ground(u.ground, a));
    return ua == pushed;
}

} // namespace mlns

#endif
