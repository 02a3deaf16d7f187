// Exact rational scalars, backed by GMP.
#pragma once

#include <gmpxx.h>

#include <string>

#include "gsvindex/errors.hpp"

namespace gsv {

using Rational = mpq_class;
using Integer  = mpz_class;

// mpq_class(num, den) keeps the fraction as given; GMP arithmetic assumes
// canonical form, so every num/den constructor must go through here.
inline Rational make_rational(const Integer& num, const Integer& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

inline bool rational_is_integer(const Rational& q) {
    return q.get_den() == 1;
}

// Narrow an exact rational to a machine integer; used where the theory
// guarantees integrality (dimensions, indices, residues of index type).
inline long rational_to_long(const Rational& q) {
    if (!rational_is_integer(q))
        throw InternalInconsistencyError("expected an integer, got " + q.get_str());
    if (!q.get_num().fits_slong_p())
        throw DegreeOverflowError("integer out of machine range: " + q.get_str());
    return q.get_num().get_si();
}

} // namespace gsv
