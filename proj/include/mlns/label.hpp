#ifndef MLNS_LABEL_HPP
#define MLNS_LABEL_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "mlns/error.hpp"

namespace mlns {

// A label is a finite set of natural-number level indices, kept sorted and
// distinct. The numeral convention: the label written n means {0,...,n-1}.
// Indices are capped at a liberal bound; the configurable scale count L
// (default 8) is enforced only where labels touch the number model.
class Label {
public:
    static constexpr unsigned max_index = 63;

    Label() = default;

    Label(std::initializer_list<unsigned> xs) : Label(std::vector<unsigned>(xs)) {}

    explicit Label(std::vector<unsigned> xs) : idx_(std::move(xs))
    {
        std::sort(idx_.begin(), idx_.end());
        idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
        if (!idx_.empty() && idx_.back() > max_index)
            throw Error(ErrorKind::bad_argument,
                        "label index " + std::to_string(idx_.back()) + " exceeds cap " +
                            std::to_string(max_index));
    }

    static Label numeral(unsigned n)
    {
        std::vector<unsigned> xs(n);
        for (unsigned i = 0; i < n; ++i) xs[i] = i;
        return Label(std::move(xs));
    }

    bool empty() const { return idx_.empty(); }
    std::size_t size() const { return idx_.size(); }
    unsigned min() const { return idx_.front(); }
    unsigned max() const { return idx_.back(); }

    bool contains(unsigned s) const
    {
        return std::binary_search(idx_.begin(), idx_.end(), s);
    }

    bool subset_of(const Label& other) const
    {
        return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
    }

    Label intersect(const Label& other) const
    {
        std::vector<unsigned> out;
        std::set_intersection(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                              std::back_inserter(out));
        return Label(std::move(out));
    }

    Label unite(const Label& other) const
    {
        std::vector<unsigned> out;
        std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                       std::back_inserter(out));
        return Label(std::move(out));
    }

    const std::vector<unsigned>& indices() const { return idx_; }
    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }

    bool operator==(const Label& other) const = default;

    // Text form {0,2,5}; the empty label renders {}.
    std::string render() const
    {
        std::string out = "{";
        for (std::size_t i = 0; i < idx_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(idx_[i]);
        }
        out += '}';
        return out;
    }

    // Accepts {0,2,5}, {} and numeral shorthand (3 means {0,1,2}).
    static Label parse(const std::string& text)
    {
        std::size_t pos = 0;
        Label out = parse_prefix(text, pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size())
            throw Error(ErrorKind::parse_error, "trailing characters after label", pos);
        return out;
    }

    // Parses a label starting at `pos` (used by the formula parser); leaves
    // `pos` just past the consumed text.
    static Label parse_prefix(const std::string& text, std::size_t& pos)
    {
        auto skip_ws = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        };
        auto read_nat = [&]() -> unsigned {
            skip_ws();
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
                throw Error(ErrorKind::parse_error, "expected a natural number", pos);
            unsigned long v = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                v = v * 10 + static_cast<unsigned long>(text[pos] - '0');
                if (v > Label::max_index + 1)
                    throw Error(ErrorKind::parse_error, "label index too large", pos);
                ++pos;
            }
            return static_cast<unsigned>(v);
        };

        skip_ws();
        if (pos >= text.size())
            throw Error(ErrorKind::parse_error, "expected a label", pos);
        if (std::isdigit(static_cast<unsigned char>(text[pos])))
            return numeral(read_nat());
        if (text[pos] != '{')
            throw Error(ErrorKind::parse_error, "expected '{' or a numeral", pos);
        ++pos;
        skip_ws();
        std::vector<unsigned> xs;
        if (pos < text.size() && text[pos] == '}') {
            ++pos;
            return Label();
        }
        for (;;) {
            xs.push_back(read_nat());
            skip_ws();
            if (pos >= text.size())
                throw Error(ErrorKind::parse_error, "unterminated label", pos);
            if (text[pos] == ',') {
                ++pos;
                continue;
            }
            if (text[pos] == '}') {
                ++pos;
                break;
            }
            throw Error(ErrorKind::parse_error, "expected ',' or '}' in label", pos);
        }
        return Label(std::move(xs));
    }

private:
    std::vector<unsigned> idx_; // strictly increasing
};

// r ⊕ a = {r+s : s ∈ a}
inline Label oplus(unsigned r, const Label& a)
{
    std::vector<unsigned> out;
    out.reserve(a.size());
    for (unsigned s : a) out.push_back(r + s);
    return Label(std::move(out));
}

// r ⊞ a = {0,...,r-1} ∪ (r ⊕ a)
inline Label boxplus(unsigned r, const Label& a)
{
    std::vector<unsigned> out;
    out.reserve(r + a.size());
    for (unsigned i = 0; i < r; ++i) out.push_back(i);
    for (unsigned s : a) out.push_back(r + s);
    return Label(std::move(out));
}

// a < b: every element of a is below every element of b (vacuous if either is empty)
inline bool label_less(const Label& a, const Label& b)
{
    if (a.empty() || b.empty()) return true;
    return a.max() < b.min();
}

// The unique order-preserving bijection a -> b (|a| = |b|).
class OrderIso {
public:
    OrderIso(const Label& from, const Label& to)
        : from_(from.indices()), to_(to.indices())
    {
        if (from_.size() != to_.size())
            throw Error(ErrorKind::size_mismatch,
                        "order isomorphism needs labels of equal size: |" + from.render() +
                            "| != |" + to.render() + "|");
    }

    unsigned apply(unsigned s) const
    {
        auto it = std::lower_bound(from_.begin(), from_.end(), s);
        if (it == from_.end() || *it != s)
            throw Error(ErrorKind::bad_argument,
                        "index " + std::to_string(s) + " not in the domain label");
        return to_[static_cast<std::size_t>(it - from_.begin())];
    }

    const std::vector<unsigned>& domain() const { return from_; }
    const std::vector<unsigned>& range() const { return to_; }

    std::vector<std::pair<unsigned, unsigned>> pairs() const
    {
        std::vector<std::pair<unsigned, unsigned>> out;
        out.reserve(from_.size());
        for (std::size_t i = 0; i < from_.size(); ++i) out.emplace_back(from_[i], to_[i]);
        return out;
    }

private:
    std::vector<unsigned> from_, to_;
};

inline OrderIso order_iso(const Label& a, const Label& b) { return OrderIso(a, b); }

// Image of b ⊆ a under the order isomorphism a -> a2.
inline Label restrict_image(const Label& a, const Label& a2, const Label& b)
{
    if (a.size() != a2.size())
        throw Error(ErrorKind::size_mismatch, "restrict_image: |a| != |a2|");
    if (!b.subset_of(a))
        throw Error(ErrorKind::not_subset, "restrict_image: b is not a subset of a");
    OrderIso iso(a, a2);
    std::vector<unsigned> out;
    out.reserve(b.size());
    for (unsigned s : b) out.push_back(iso.apply(s));
    return Label(std::move(out));
}

} // namespace mlns

#endif
