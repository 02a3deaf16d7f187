// Grothendieck residues res[h dz / (g_1..g_n)] for a regular sequence
// denominator, through exact monomial covers:
//
//   x_i^{k_i} = sum_j A[i][j] g_j       (an exact polynomial identity)
//   res[h/g]  = coefficient of x_1^{k_1-1}..x_n^{k_n-1} in h det(A)
//
// The cover exponents k_i are found by truncated membership; the matrix A
// is solved for exactly, over coefficient polynomials of bounded degree,
// escalating the bound until the identity closes.  When no exact identity
// exists at any exponent (the sequence may vanish away from the origin),
// a cover modulo a high power of the maximal ideal is used instead; see
// monomial_cover for the degree bound that keeps the extraction exact.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsvindex/errors.hpp"
#include "gsvindex/local_engine.hpp"
#include "gsvindex/polynomial.hpp"

namespace gsv {

struct ResidueCover {
    std::vector<unsigned> k;
    PolyMatrix A;
    bool exact = true;  // false: the cover identities hold modulo m^T only
};

// Solve target = sum_j a_j gens_j with deg a_j <= bound, exactly.
inline std::optional<PolyVector> exact_combination(const Polynomial& target,
                                                   const PolyVector& gens, int bound) {
    int nvars = target.nvars();
    int top = bound + detail::maxdeg(gens);
    TruncatedRing full(nvars, top + 1);
    TruncatedRing dom(nvars, bound + 1);

    RowSpace rows(full.dim());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (gens[j].is_zero()) continue;
        for (const auto& mu : dom.basis()) {
            Polynomial mup = Polynomial::term(mu, 1);
            PolyVector wit(gens.size(), Polynomial::zero(nvars));
            wit[j] = mup;
            rows.insert(full.to_vector(mup * gens[j]), std::move(wit));
        }
    }
    RatVector v = full.to_vector(target);
    PolyVector wit(gens.size(), Polynomial::zero(nvars));
    rows.reduce(v, &wit);
    if (!RowSpace::is_zero(v)) return std::nullopt;
    for (auto& w : wit) w = -w;
    return wit;
}

// Find minimal exponents with x_i^{k_i} in (gens) and an exact matrix A
// covering them.  Requires a regular sequence (finite colength).
inline ResidueCover monomial_cover(const PolyVector& gens, int nvars,
                                   const EngineConfig& cfg) {
    for (const auto& g : gens)
        if (g.constant_term() != 0)
            throw NotAGermError("denominator entries must be germs");
    StabilizedDim len = colength(gens, nvars, cfg);
    if (len.infinite())
        throw NotRegularError("denominator is not a regular sequence");
    long mu = len.finite();
    int work = static_cast<int>(mu) + 2;
    TruncatedRing ring(nvars, work);
    IdealSpan span(ring, gens);

    ResidueCover cover;
    for (int i = 0; i < nvars; ++i) {
        unsigned ki = 0;
        for (unsigned k = 1; k <= static_cast<unsigned>(mu); ++k) {
            Monomial m(nvars, 0);
            m[i] = k;
            if (span.contains(Polynomial::term(m, 1))) { ki = k; break; }
        }
        if (ki == 0)
            throw InternalInconsistencyError("no pure power of variable " +
                                             std::to_string(i) + " in the ideal");
        cover.k.push_back(ki);
    }

    auto exact = [&](const PolyVector& row, const Polynomial& target) {
        Polynomial check(nvars);
        for (std::size_t j = 0; j < gens.size(); ++j) check += row[j] * gens[j];
        return check == target;
    };
    int maxdeg = detail::maxdeg(gens);
    std::vector<unsigned> minimal = cover.k;
    bool all_exact = true;
    for (int i = 0; i < nvars && all_exact; ++i) {
        // The minimal exponent found by truncated membership may admit no
        // exact polynomial identity even when a larger one does, so the
        // search escalates both the exponent and the coefficient degree.
        // Any exact cover yields the same residue.
        std::optional<PolyVector> row;
        unsigned k = cover.k[i];
        for (; !row && k <= static_cast<unsigned>(mu) + 1; ++k) {
            Monomial m(nvars, 0);
            m[i] = k;
            Polynomial target = Polynomial::term(m, 1);
            row = span.membership_witness(target);
            if (row && !exact(*row, target)) row.reset();
            for (int bound = static_cast<int>(k) + maxdeg;
                 !row && bound <= static_cast<int>(k) + maxdeg + 4 &&
                 bound <= cfg.trunc_cap; bound += 4) {
                row = exact_combination(target, gens, bound);
                if (row && !exact(*row, target))
                    throw InternalInconsistencyError("cover identity failed to verify");
            }
        }
        if (!row) {
            all_exact = false;
            break;
        }
        cover.k[i] = k - 1;
        cover.A.push_back(std::move(*row));
    }
    if (all_exact) return cover;

    // The sequence may vanish away from the origin, and then a pure power
    // can miss the polynomial ideal at every exponent.  A cover modulo m^T
    // still determines the local residue: writing
    //   x_i^{k_i} = sum_j A[i][j] g_j + r_i,   ord r_i >= T,
    // the residue against the perturbed powers x_i^{k_i} - r_i expands into
    // corner coefficients of h det(A) prod_i r_i^(a_i) over a >= 0, and for
    // a != 0 the order T sum(a) exceeds the corner degree
    // sum k_i (a_i + 1) - n as soon as T > 2 sum k_i.  Only the a = 0 term
    // survives, which is the usual extraction.
    cover.k = minimal;
    cover.A.clear();
    cover.exact = false;
    int ksum = 0;
    for (unsigned ki : minimal) ksum += static_cast<int>(ki);
    TruncatedRing deep(nvars, 2 * ksum + 2);
    IdealSpan dspan(deep, gens);
    for (int i = 0; i < nvars; ++i) {
        Monomial m(nvars, 0);
        m[i] = minimal[i];
        auto row = dspan.membership_witness(Polynomial::term(m, 1));
        if (!row)
            throw InternalInconsistencyError(
                "pure power escaped the ideal at the fallback order");
        cover.A.push_back(std::move(*row));
    }
    return cover;
}

inline Rational residue_from_cover(const Polynomial& h, const ResidueCover& cover) {
    Polynomial top = h * poly_det(cover.A);
    Monomial corner;
    for (unsigned ki : cover.k) corner.push_back(ki - 1);
    return top.coefficient(corner);
}

inline Rational grothendieck_residue(const Polynomial& h, const PolyVector& gens,
                                     const EngineConfig& cfg) {
    return residue_from_cover(h, monomial_cover(gens, static_cast<int>(gens.size()), cfg));
}

// res[det(DX) dz / (X_1..X_n)]: the Poincare-Hopf index of X at the origin.
inline long poincare_hopf_index(const PolyVector& X, const EngineConfig& cfg) {
    Rational r = grothendieck_residue(poly_det(jacobian(X)), X, cfg);
    return rational_to_long(r);
}

} // namespace gsv
