#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <string>

namespace structid {

using Rat = mpq_class;
using Int = mpz_class;

// mpq_class(num, den) does not canonicalize on its own; route all fraction
// construction through here.
inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline std::string to_string(const Rat& q) { return q.get_str(); }

}  // namespace structid
