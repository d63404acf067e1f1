#ifndef MLNS_RATIONAL_HPP
#define MLNS_RATIONAL_HPP

#include <string>

#include <gmpxx.h>

#include "mlns/error.hpp"

namespace mlns {

using Int = mpz_class;
using Rat = mpq_class;

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

// Parses "p", "-p" or "p/q" into an exact rational.
inline Rat rat_parse(const std::string& text)
{
    try {
        Rat q(text, 10);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::parse_error, "not a rational: '" + text + "'");
    }
}

} // namespace mlns

#endif
