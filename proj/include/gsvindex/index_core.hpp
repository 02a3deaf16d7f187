// The index computations: the tangency factor c with X(f) = c f, the
// homology dimensions of the truncated contraction complexes via their
// closed algebraic formulas, and three independent routes to the index of
// X on the hypersurface germ f = 0:
//
//   homological   alternating sum of the homology dimensions
//   residue       res[ (df/dz_n) sum_k (-c)^k sigma_{n-1-k}(DX) / (X_1..X_{n-1}, f) ]
//   gomez-mont    colength difference formulas, only when X itself is a
//                 regular sequence; cross-checked against the residue of
//                 det(DX - c Id)
//
// All three are computed in exact rational arithmetic and compared.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsvindex/errors.hpp"
#include "gsvindex/local_engine.hpp"
#include "gsvindex/parser.hpp"
#include "gsvindex/polynomial.hpp"
#include "gsvindex/residue.hpp"

namespace gsv {

struct TangencyFactor {
    Polynomial c;
    bool exact;  // false: c is a series truncated at the engine cap
};

namespace detail {

// Solve q * F0 = R in the homogeneous component of degree deg(F0) + t,
// with q homogeneous of degree t.
inline std::optional<Polynomial> solve_homogeneous_quotient(const Polynomial& F0,
                                                            const Polynomial& R, int t) {
    int nvars = F0.nvars();
    TruncatedRing full(nvars, F0.degree() + t + 1);
    TruncatedRing dom(nvars, t + 1);
    RowSpace rows(full.dim());
    for (const auto& mu : dom.basis()) {
        if (static_cast<int>(total_degree(mu)) != t) continue;
        Polynomial m = Polynomial::term(mu, 1);
        PolyVector wit = {m};
        rows.insert(full.to_vector(m * F0), std::move(wit));
    }
    RatVector v = full.to_vector(R);
    PolyVector wit = {Polynomial::zero(nvars)};
    rows.reduce(v, &wit);
    if (!RowSpace::is_zero(v)) return std::nullopt;
    return -wit[0];
}

} // namespace detail

// The factor with X(f) = c f.  Polynomial division is tried first; when c
// is a genuine power series the triangular degree-by-degree solve runs up
// to the engine cap and the result is flagged as truncated.  Inconsistency
// at any degree means X is not tangent to f = 0.
inline TangencyFactor compute_c(const Polynomial& f, const PolyVector& X,
                                const EngineConfig& cfg) {
    Polynomial Xf = apply_vector_field(X, f);
    if (Xf.is_zero()) return {Polynomial::zero(f.nvars()), true};
    if (auto q = divide_exact(Xf, f)) return {*q, true};

    int d0 = f.order();
    Polynomial F0 = f.homogeneous_part(d0);
    Polynomial c(f.nvars());
    Polynomial R = Xf;
    for (int t = 0; t <= cfg.trunc_cap; ++t) {
        if (R.order() < d0 + t)
            throw NotTangentError("X(f) is not divisible by f (obstruction in degree " +
                                  std::to_string(R.order()) + ")");
        auto ct = detail::solve_homogeneous_quotient(F0, R.homogeneous_part(d0 + t), t);
        if (!ct)
            throw NotTangentError("X(f) is not divisible by f (obstruction in degree " +
                                  std::to_string(d0 + t) + ")");
        c += *ct;
        R -= *ct * f;
        if (R.is_zero()) return {c, true};
    }
    return {c, false};
}

struct HomologyDims {
    std::vector<long> h_star;  // h_0*..h_n*
    std::vector<long> h;       // h_0..h_{n-1}
    long lambda = 0;
    long milnor = 0;           // dim A = dim O/(jacobian ideal)
    long dim_b_mod_f = 0;      // dim B/(f), B = O/(X_1..X_n)
    long dim_a_mod_f = 0;
    long dim_a_mod_c = 0;
    long term1 = 0;            // dim ann_B(f)/(c)
    long term2 = 0;            // the B' summand of h_1*
    long euler_char = 0;       // sum (-1)^i h_i
};

namespace detail {

inline long expect_finite(const StabilizedDim& d, const std::string& what) {
    if (d.infinite())
        throw EngineError(what + " is infinite; the zero of X or the singularity of f "
                          "is not isolated in the required sense");
    return d.finite();
}

inline PolyVector jacobian_ideal(const Polynomial& f) {
    PolyVector J;
    for (int i = 0; i < f.nvars(); ++i) J.push_back(f.derivative(i));
    return J;
}

} // namespace detail

// The homology dimensions h_i* and h_i through the closed formulas:
//   h_0*  = dim B/(f)
//   h_1*  = dim ann_B(f)/(c) + dim ann_B'(X_n)/(ann_B'(X_n) cap B'(f, df/dz_n))
//   h_i*  = lambda = dim ann_A(f)/(c) = dim ann_A(c)/(f)     (2 <= i <= n)
//   h_i   = h_i* for i <= n-2,  h_{n-1} = h_{n-1}* + dim A/(f) - h_n*.
// Expects a spec with (X_1..X_{n-1}, f) already a regular sequence.
inline HomologyDims homology_dims(const ProblemSpec& spec, const TangencyFactor& tf,
                                  const EngineConfig& cfg) {
    using detail::expect_finite;
    int n = spec.n();
    const Polynomial& f = spec.f;
    const Polynomial& c = tf.c;
    PolyVector jac = detail::jacobian_ideal(f);
    // A truncated series factor is excluded from the start hint: its tail
    // lies above every truncation order a span can see.
    int hint = std::max({detail::maxdeg(spec.X), detail::maxdeg(jac), f.degree(),
                         tf.exact ? c.degree() : 0}) + 2;

    HomologyDims dims;
    dims.milnor = expect_finite(colength(jac, n, cfg, hint), "dim O/(jacobian ideal)");
    {
        PolyVector jf = jac;
        jf.push_back(f);
        dims.dim_a_mod_f = expect_finite(colength(jf, n, cfg, hint), "dim A/(f)");
        PolyVector jc = jac;
        jc.push_back(c);
        dims.dim_a_mod_c = expect_finite(colength(jc, n, cfg, hint), "dim A/(c)");
    }
    {
        PolyVector bf = spec.X;
        bf.push_back(f);
        dims.dim_b_mod_f = expect_finite(colength(bf, n, cfg, hint), "dim B/(f)");
    }

    // lambda through both of its expressions; they must agree.
    {
        GenProvider ann_f = [&](int N) { return colon_generators(jac, f, N, n, cfg); };
        PolyVector jc = jac;
        jc.push_back(c);
        long route_a = expect_finite(
            quotient_module_dim(ann_f, constant_gens(jc), n, cfg, hint),
            "dim ann_A(f)/(c)");
        GenProvider ann_c = [&](int N) { return colon_generators(jac, c, N, n, cfg); };
        PolyVector jf = jac;
        jf.push_back(f);
        long route_b = expect_finite(
            quotient_module_dim(ann_c, constant_gens(jf), n, cfg, hint),
            "dim ann_A(c)/(f)");
        if (route_a != route_b)
            throw InternalInconsistencyError(
                "lambda disagrees between its two expressions: ann(f)/(c) = " +
                std::to_string(route_a) + ", ann(c)/(f) = " + std::to_string(route_b));
        dims.lambda = route_a;
    }

    // h_1* = term1 + term2.
    {
        GenProvider ann_f = [&](int N) { return colon_generators(spec.X, f, N, n, cfg); };
        PolyVector xc = spec.X;
        xc.push_back(c);
        dims.term1 = expect_finite(
            quotient_module_dim(ann_f, constant_gens(xc), n, cfg, hint),
            "dim ann_B(f)/(c)");

        PolyVector prefix(spec.X.begin(), spec.X.end() - 1);
        Polynomial xn = spec.X.back();
        GenProvider ann_xn = [&](int N) {
            return colon_generators(prefix, xn, N, n, cfg);
        };
        GenProvider denom = [&](int N) {
            TruncatedRing ring(n, N);
            IdealSpan big(ring, ann_xn(N));
            PolyVector base_gens = prefix;
            base_gens.push_back(f);
            base_gens.push_back(f.derivative(n - 1));
            IdealSpan base(ring, base_gens);
            IdealSpan meet = intersect(big, base);
            PolyVector gens = prefix;
            for (const auto& row : meet.rows().rows())
                gens.push_back(ring.to_polynomial(row.vec));
            return gens;
        };
        dims.term2 = expect_finite(
            quotient_module_dim(ann_xn, denom, n, cfg, hint),
            "the B' quotient of h_1*");
    }

    // The exact sequence 0 -> ann_A(f) -> A -> A -> A/(f) -> 0 twisted by c
    // forces lambda - dim A/(f) = dim A/(c) - dim A.
    if (dims.lambda - dims.dim_a_mod_f != dims.dim_a_mod_c - dims.milnor)
        throw InternalInconsistencyError(
            "exact sequence identity violated: lambda - dim A/(f) != dim A/(c) - dim A");

    dims.h_star.push_back(dims.dim_b_mod_f);
    if (n >= 1) dims.h_star.push_back(dims.term1 + dims.term2);
    for (int i = 2; i <= n; ++i) dims.h_star.push_back(dims.lambda);

    for (int i = 0; i <= n - 2; ++i) dims.h.push_back(dims.h_star[i]);
    if (n >= 1)
        dims.h.push_back(dims.h_star[n - 1] + dims.dim_a_mod_f - dims.h_star[n]);
    for (std::size_t i = 0; i < dims.h.size(); ++i)
        dims.euler_char += (i % 2 ? -dims.h[i] : dims.h[i]);
    return dims;
}

inline long gsv_index_homological(const HomologyDims& dims, int n) {
    long base = dims.dim_b_mod_f - dims.term1 - dims.term2;
    if (n % 2 == 0) return base + dims.dim_a_mod_c - dims.milnor;
    return base + dims.dim_a_mod_f;
}

// res[(df/dz_n) (sum_k (-c)^k sigma_{n-1-k}(DX)) / (X_1..X_{n-1}, f)].
// Expects (X_1..X_{n-1}, f) regular.
inline long gsv_index_residue(const ProblemSpec& spec, const Polynomial& c,
                              const EngineConfig& cfg) {
    Polynomial numerator = spec.f.derivative(spec.n() - 1) *
                           chat_numerator(jacobian(spec.X), c);
    PolyVector denom(spec.X.begin(), spec.X.end() - 1);
    denom.push_back(spec.f);
    return rational_to_long(grothendieck_residue(numerator, denom, cfg));
}

// Colength formulas valid when X itself is a regular sequence, checked
// against Poincare-Hopf minus the residue of det(DX - c Id).
inline std::optional<long> gsv_index_gomez_mont(const ProblemSpec& spec,
                                                const Polynomial& c,
                                                const HomologyDims& dims,
                                                const EngineConfig& cfg) {
    int n = spec.n();
    if (!regular_sequence_check(spec.X, n, cfg)) return std::nullopt;
    long value = (n % 2 == 0)
                     ? dims.dim_b_mod_f - dims.dim_a_mod_f
                     : dims.dim_b_mod_f - dims.dim_a_mod_c + dims.milnor;

    PolyMatrix shifted = jacobian(spec.X);
    for (int i = 0; i < n; ++i) shifted[i][i] -= c;
    long correction = rational_to_long(
        grothendieck_residue(poly_det(shifted), spec.X, cfg));
    long ph = poincare_hopf_index(spec.X, cfg);
    if (value != ph - correction)
        throw InternalInconsistencyError(
            "colength formula and residue correction disagree: " +
            std::to_string(value) + " vs " + std::to_string(ph - correction));
    return value;
}

struct IndexReport {
    ProblemSpec problem;  // in the coordinates actually used
    std::optional<RatMatrix> change;
    TangencyFactor c;
    HomologyDims dims;
    long gsv_homological = 0;
    std::optional<long> gsv_residue;
    std::optional<long> gsv_gomez_mont;
    std::optional<long> poincare_hopf;
    bool consistent = false;
    std::vector<std::string> diagnostics;
};

inline IndexReport full_report(const ProblemSpec& input, const EngineConfig& cfg) {
    NormalizationResult norm = normalize_coordinates(input, cfg);
    IndexReport report;
    report.problem = norm.spec;
    report.change = norm.change;
    report.c = compute_c(norm.spec.f, norm.spec.X, cfg);
    if (!report.c.exact)
        report.diagnostics.push_back(
            "tangency factor is a power series truncated at degree " +
            std::to_string(cfg.trunc_cap) + "; results use the truncation");

    report.dims = homology_dims(norm.spec, report.c, cfg);
    report.gsv_homological = gsv_index_homological(report.dims, norm.spec.n());
    if (report.dims.euler_char != report.gsv_homological)
        throw InternalInconsistencyError(
            "Euler characteristic does not match the homological index");

    try {
        report.gsv_residue = gsv_index_residue(norm.spec, report.c.c, cfg);
    } catch (const EngineError& e) {
        report.diagnostics.push_back(std::string("residue route failed: ") + e.what());
    }
    try {
        report.gsv_gomez_mont = gsv_index_gomez_mont(norm.spec, report.c.c,
                                                     report.dims, cfg);
        if (report.gsv_gomez_mont)
            report.poincare_hopf = poincare_hopf_index(norm.spec.X, cfg);
    } catch (const EngineError& e) {
        report.diagnostics.push_back(std::string("colength route failed: ") + e.what());
    }

    report.consistent = true;
    if (report.gsv_residue && *report.gsv_residue != report.gsv_homological)
        report.consistent = false;
    if (report.gsv_gomez_mont && *report.gsv_gomez_mont != report.gsv_homological)
        report.consistent = false;
    if (!report.consistent)
        report.diagnostics.push_back("the index routes disagree");
    return report;
}

} // namespace gsv
