#ifndef MLNS_RAMSEY_HPP
#define MLNS_RAMSEY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlns/error.hpp"

namespace mlns {

// Coloring of the n-element subsets of {0,...,N-1} with r colors, stored
// by lexicographic rank of the sorted subset.
class Coloring {
public:
    Coloring(unsigned n, unsigned r, unsigned N)
        : n_(n), r_(r), N_(N)
    {
        if (n == 0 || r == 0 || N < n)
            throw Error(ErrorKind::bad_argument, "coloring needs n >= 1, r >= 1, N >= n");
        colors_.assign(binom(N, n), 0);
    }

    unsigned tuple_size() const { return n_; }
    unsigned color_count() const { return r_; }
    unsigned ground_size() const { return N_; }
    std::size_t subset_count() const { return colors_.size(); }

    static std::size_t binom(unsigned n, unsigned k)
    {
        if (k > n) return 0;
        std::size_t out = 1;
        for (unsigned i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
        return out;
    }

    std::size_t rank(const std::vector<unsigned>& subset) const
    {
        // Lexicographic rank of a sorted n-subset of [0, N).
        std::size_t r = 0;
        unsigned prev = 0;
        for (unsigned i = 0; i < n_; ++i) {
            for (unsigned v = prev; v < subset[i]; ++v) r += binom(N_ - v - 1, n_ - i - 1);
            prev = subset[i] + 1;
        }
        return r;
    }

    std::uint8_t color(const std::vector<unsigned>& subset) const
    {
        return colors_[rank(subset)];
    }

    void set_color(const std::vector<unsigned>& subset, std::uint8_t c)
    {
        if (c >= r_) throw Error(ErrorKind::bad_argument, "color out of range");
        colors_[rank(subset)] = c;
    }

    void set_color_by_rank(std::size_t rank, std::uint8_t c)
    {
        if (c >= r_) throw Error(ErrorKind::bad_argument, "color out of range");
        colors_[rank] = c;
    }

    // c(S) = (sum of S) mod r.
    static Coloring parity_sum(unsigned n, unsigned r, unsigned N)
    {
        Coloring c(n, r, N);
        c.for_each_subset([&](const std::vector<unsigned>& s, std::size_t rank) {
            unsigned total = 0;
            for (unsigned v : s) total += v;
            c.colors_[rank] = static_cast<std::uint8_t>(total % r);
        });
        return c;
    }

    // Two-coloring of pairs from [0,5): color 1 iff j - i = ±1 (mod 5),
    // the 5-cycle whose complement is also a 5-cycle.
    static Coloring pentagon()
    {
        Coloring c(2, 2, 5);
        c.for_each_subset([&](const std::vector<unsigned>& s, std::size_t rank) {
            unsigned d = s[1] - s[0];
            c.colors_[rank] = (d == 1 || d == 4) ? 1 : 0;
        });
        return c;
    }

    static Coloring constant(unsigned n, unsigned r, unsigned N, std::uint8_t color)
    {
        Coloring c(n, r, N);
        if (color >= r) throw Error(ErrorKind::bad_argument, "color out of range");
        for (auto& x : c.colors_) x = color;
        return c;
    }

    template <typename F>
    void for_each_subset(F&& fn) const
    {
        std::vector<unsigned> s(n_);
        for (unsigned i = 0; i < n_; ++i) s[i] = i;
        std::size_t rank = 0;
        for (;;) {
            fn(s, rank);
            ++rank;
            // next combination in lexicographic order
            int i = static_cast<int>(n_) - 1;
            while (i >= 0 && s[static_cast<unsigned>(i)] == N_ - n_ + static_cast<unsigned>(i)) --i;
            if (i < 0) break;
            ++s[static_cast<unsigned>(i)];
            for (unsigned j = static_cast<unsigned>(i) + 1; j < n_; ++j) s[j] = s[j - 1] + 1;
        }
    }

private:
    unsigned n_, r_, N_;
    std::vector<std::uint8_t> colors_;
};

// True iff the coloring is constant on the n-subsets of H.
inline bool is_homogeneous(const Coloring& c, const std::vector<unsigned>& H,
                           std::uint8_t* color_out = nullptr)
{
    unsigned n = c.tuple_size();
    if (H.size() < n) {
        if (color_out) *color_out = 0;
        return true; // vacuously constant
    }
    std::vector<unsigned> pick(n);
    std::vector<unsigned> idx(n);
    for (unsigned i = 0; i < n; ++i) idx[i] = i;
    bool first = true;
    std::uint8_t c0 = 0;
    for (;;) {
        for (unsigned i = 0; i < n; ++i) pick[i] = H[idx[i]];
        std::uint8_t col = c.color(pick);
        if (first) {
            c0 = col;
            first = false;
        } else if (col != c0) {
            return false;
        }
        int i = static_cast<int>(n) - 1;
        while (i >= 0 &&
               idx[static_cast<unsigned>(i)] == H.size() - n + static_cast<unsigned>(i))
            --i;
        if (i < 0) break;
        ++idx[static_cast<unsigned>(i)];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (color_out) *color_out = c0;
    return true;
}

// Lexicographically least H of size h with c constant on [H]^n.
inline std::optional<std::vector<unsigned>> find_homogeneous(const Coloring& c, unsigned h)
{
    if (h < c.tuple_size())
        throw Error(ErrorKind::bad_argument, "find_homogeneous needs h >= n");
    unsigned N = c.ground_size();
    if (h > N) return std::nullopt;
    std::vector<unsigned> H(h);
    for (unsigned i = 0; i < h; ++i) H[i] = i;
    for (;;) {
        if (is_homogeneous(c, H)) return H;
        int i = static_cast<int>(h) - 1;
        while (i >= 0 && H[static_cast<unsigned>(i)] == N - h + static_cast<unsigned>(i)) --i;
        if (i < 0) return std::nullopt;
        ++H[static_cast<unsigned>(i)];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < h; ++j) H[j] = H[j - 1] + 1;
    }
}

struct GreedyResult {
    std::vector<unsigned> set;       // A, the greedily built set
    std::vector<unsigned> sentinels; // the top n-1 elements
    std::uint8_t base_color = 0;     // c0, the color of the top n-set
    bool verified = false;           // c constant on [A ∪ sentinels]^n, re-checked
};

// Finite adaptation of the greedy construction: sentinels are the top n-1
// elements, c0 the color of the top n-set, and A is extended by the least
// a (below the sentinels) keeping [A ∪ {a} ∪ sentinels]^n monochromatic.
inline GreedyResult greedy_homogeneous(const Coloring& c)
{
    unsigned n = c.tuple_size();
    unsigned N = c.ground_size();
    if (N <= n) throw Error(ErrorKind::bad_argument, "greedy construction needs N > n");

    GreedyResult out;
    for (unsigned v = N - n + 1; v < N; ++v) out.sentinels.push_back(v);
    std::vector<unsigned> top(n);
    for (unsigned i = 0; i < n; ++i) top[i] = N - n + i;
    out.base_color = c.color(top);

    for (unsigned a = 0; a <= N - n; ++a) {
        std::vector<unsigned> candidate = out.set;
        candidate.push_back(a);
        for (unsigned s : out.sentinels) candidate.push_back(s);
        std::uint8_t col = 0;
        if (is_homogeneous(c, candidate, &col) &&
            (candidate.size() < n || col == out.base_color)) {
            out.set.push_back(a);
        }
    }

    std::vector<unsigned> whole = out.set;
    for (unsigned s : out.sentinels) whole.push_back(s);
    std::uint8_t col = 0;
    out.verified = is_homogeneous(c, whole, &col) && (whole.size() < n || col == out.base_color);
    return out;
}

} // namespace mlns

#endif
