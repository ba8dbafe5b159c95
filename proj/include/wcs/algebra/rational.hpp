#pragma once

#include <gmpxx.h>

#include <string>

namespace wcs {

using Q = mpq_class;

inline std::string toString(const Q& q) {
    if (q.get_den() == 1) return q.get_num().get_str() + "/1";
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Q parseRational(const std::string& s) {
    Q q(s, 10);
    q.canonicalize();
    return q;
}

// p/q in lowest terms.
inline Q frac(long p, long q) {
    Q r(p, q);
    r.canonicalize();
    return r;
}

inline bool isInteger(const Q& q) { return q.get_den() == 1; }

} // namespace wcs
