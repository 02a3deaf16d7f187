// Finite dimensional models of the local ring O = Q[[z_1..z_n]] truncated
// at a degree bound, and the stabilized dimension computations built on
// them: colengths, colon ideals, intersections, nested quotients, regular
// sequence detection and generic coordinate changes.
//
// A quantity is accepted once two consecutive truncation orders agree.  A
// strictly increasing sweep up to the cap is reported as INFINITE (the
// value of an honest non-finite colength); anything else raises
// NoStabilization.
//
// Colon ideals are solved at an elevated order N + buffer and the solution
// restricted back to degree < N.  Solving at N itself would let spurious
// elements of (I + m^N : p) survive and stabilize to wrong values when I
// is not m-primary.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gsvindex/errors.hpp"
#include "gsvindex/linalg.hpp"
#include "gsvindex/parser.hpp"
#include "gsvindex/polynomial.hpp"

namespace gsv {

struct EngineConfig {
    int trunc_start = 4;
    int trunc_cap = 24;
    int colon_buffer = 4;
    unsigned long seed = 0;
    int normalize_attempts = 20;
};

class TruncatedRing {
public:
    TruncatedRing(int nvars, int order) : nvars_(nvars), order_(order) {
        if (nvars < 1 || order < 1)
            throw RingMismatchError("truncated ring needs nvars >= 1 and order >= 1");
        Monomial m(nvars, 0);
        enumerate(m, 0, 0);
        std::sort(basis_.begin(), basis_.end(), GrlexLess{});
        for (std::size_t i = 0; i < basis_.size(); ++i)
            index_[basis_[i]] = static_cast<int>(i);
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Monomial>& basis() const { return basis_; }

    int index_of(const Monomial& m) const {
        auto it = index_.find(m);
        return it == index_.end() ? -1 : it->second;
    }

    // Classes of monomials of degree < order; higher terms are dropped.
    RatVector to_vector(const Polynomial& p) const {
        if (p.nvars() != nvars_)
            throw RingMismatchError("polynomial arity does not match ring");
        RatVector v(dim(), 0);
        for (const auto& [m, c] : p.terms()) {
            if (static_cast<int>(total_degree(m)) >= order_) break;
            v[static_cast<std::size_t>(index_.at(m))] = c;
        }
        return v;
    }

    Polynomial to_polynomial(const RatVector& v) const {
        Polynomial p(nvars_);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) p.add_term(basis_[i], v[i]);
        return p;
    }

private:
    void enumerate(Monomial& m, int var, int deg) {
        if (var == nvars_) {
            basis_.push_back(m);
            return;
        }
        for (int e = 0; deg + e < order_; ++e) {
            m[var] = static_cast<Exponent>(e);
            enumerate(m, var + 1, deg + e);
        }
        m[var] = 0;
    }

    int nvars_;
    int order_;
    std::vector<Monomial> basis_;
    std::map<Monomial, int, GrlexLess> index_;
};

// The image of an ideal (g_1..g_s) in O/m^N, closed under multiplication
// by the variables.  Every row carries a witness: polynomials w_j with
// row = trunc(sum_j w_j g_j).
class IdealSpan {
public:
    IdealSpan(const TruncatedRing& ring, PolyVector gens)
        : ring_(&ring), gens_(std::move(gens)), rows_(ring.dim()) {
        std::vector<WitnessedRow> queue;
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            if (gens_[j].nvars() != ring.nvars())
                throw RingMismatchError("generator arity does not match ring");
            if (gens_[j].is_zero()) continue;
            PolyVector wit(gens_.size(), Polynomial::zero(ring.nvars()));
            wit[j] = Polynomial::constant(ring.nvars(), 1);
            auto stored = rows_.insert(ring.to_vector(gens_[j]), std::move(wit));
            if (stored) queue.push_back(std::move(*stored));
        }
        while (!queue.empty()) {
            WitnessedRow row = std::move(queue.back());
            queue.pop_back();
            for (int i = 0; i < ring.nvars(); ++i) {
                auto stored = rows_.insert(multiply_by_var(row.vec, i),
                                           multiply_wit_by_var(row.wit, i));
                if (stored) queue.push_back(std::move(*stored));
            }
        }
    }

    const TruncatedRing& ring() const { return *ring_; }
    const PolyVector& gens() const { return gens_; }
    const RowSpace& rows() const { return rows_; }
    std::size_t rank() const { return rows_.rank(); }

    long colength() const { return static_cast<long>(ring_->dim() - rank()); }

    bool contains(const Polynomial& p) const {
        require_in_range(p);
        return rows_.contains(ring_->to_vector(p));
    }

    // Express p as trunc(sum_j w_j g_j), or nullopt when p is not in the
    // span.
    std::optional<PolyVector> membership_witness(const Polynomial& p) const {
        require_in_range(p);
        RatVector v = ring_->to_vector(p);
        PolyVector wit(gens_.size(), Polynomial::zero(ring_->nvars()));
        rows_.reduce(v, &wit);
        if (!RowSpace::is_zero(v)) return std::nullopt;
        for (auto& w : wit) w = -w;
        return wit;
    }

    // Exactness check used by the test suites.
    bool verify_witnesses() const {
        for (const auto& row : rows_.rows()) {
            Polynomial sum(ring_->nvars());
            for (std::size_t j = 0; j < gens_.size(); ++j)
                sum += row.wit[j] * gens_[j];
            if (ring_->to_vector(sum) != row.vec) return false;
        }
        return true;
    }

    // Rebuild a span from an explicit basis of an already-closed subspace
    // (used by intersect).  Witnesses are taken against `gens`; closure is
    // re-verified.
    static IdealSpan from_subspace(const TruncatedRing& ring, PolyVector gens,
                                   const std::vector<std::pair<RatVector, PolyVector>>& basis) {
        IdealSpan span(ring, {});
        span.gens_ = std::move(gens);
        for (const auto& [vec, wit] : basis)
            span.rows_.insert(vec, wit);
        for (const auto& row : span.rows_.rows())
            for (int i = 0; i < ring.nvars(); ++i)
                if (!span.rows_.contains(span.multiply_by_var(row.vec, i)))
                    throw InternalInconsistencyError(
                        "subspace is not closed under multiplication by the variables");
        return span;
    }

private:
    void require_in_range(const Polynomial& p) const {
        if (p.nvars() != ring_->nvars())
            throw RingMismatchError("polynomial arity does not match ring");
        if (p.degree() >= ring_->order())
            throw DegreeOverflowError("degree " + std::to_string(p.degree()) +
                                      " not below truncation order " +
                                      std::to_string(ring_->order()));
    }

    RatVector multiply_by_var(const RatVector& v, int var) const {
        RatVector out(ring_->dim(), 0);
        const auto& basis = ring_->basis();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            Monomial m = basis[i];
            m[var] += 1;
            int idx = ring_->index_of(m);
            if (idx >= 0) out[idx] = v[i];
        }
        return out;
    }

    PolyVector multiply_wit_by_var(const PolyVector& wit, int var) const {
        Polynomial z = Polynomial::variable(ring_->nvars(), var);
        PolyVector out;
        out.reserve(wit.size());
        for (const auto& w : wit)
            out.push_back((w * z).truncated(ring_->order()));
        return out;
    }

    const TruncatedRing* ring_;
    PolyVector gens_;
    RowSpace rows_;
};

struct StabilizedDim {
    std::optional<long> value;  // nullopt means INFINITE
    std::vector<int> orders;
    bool stable;

    bool infinite() const { return !value.has_value(); }
    long finite() const {
        if (!value)
            throw InternalInconsistencyError("expected a finite dimension");
        return *value;
    }
};

namespace detail {

inline int maxdeg(const PolyVector& ps) {
    int d = 0;
    for (const auto& p : ps) d = std::max(d, p.degree());
    return d;
}

// Run values(N) for increasing N until two consecutive orders agree.
inline StabilizedDim stabilize(const std::function<long(int)>& value_at,
                               int start, int step, const EngineConfig& cfg,
                               const std::string& what) {
    int N = std::min(std::max(start, 2), cfg.trunc_cap);
    std::vector<int> orders;
    std::vector<long> values;
    for (; N <= cfg.trunc_cap; N += step) {
        orders.push_back(N);
        values.push_back(value_at(N));
        std::size_t k = values.size();
        if (k >= 2 && values[k - 1] == values[k - 2])
            return {values.back(), orders, true};
    }
    bool increasing = values.size() >= 2;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1]) increasing = false;
    if (increasing)
        return {std::nullopt, orders, false};
    std::string msg = what + " did not stabilize at truncation orders";
    for (int o : orders) msg += " " + std::to_string(o);
    msg += " (cap " + std::to_string(cfg.trunc_cap) + ")";
    throw NoStabilizationError(msg, orders);
}

} // namespace detail

// dim O/(gens), stabilized over the truncation order.  The sweep starts at
// maxdeg + 2 so every generator registers; callers holding a truncated
// series generator pass start_override computed from the exact data only,
// since the tail above the truncation order never reaches any span.
inline StabilizedDim colength(const PolyVector& gens, int nvars, const EngineConfig& cfg,
                              int start_override = -1) {
    int start = start_override >= 0
                    ? std::max(cfg.trunc_start, start_override)
                    : std::max(cfg.trunc_start, detail::maxdeg(gens) + 2);
    return detail::stabilize(
        [&](int N) {
            TruncatedRing ring(nvars, N);
            return IdealSpan(ring, gens).colength();
        },
        start, 1, cfg, "colength");
}

// Generators of (I : p) as seen at truncation order `order`.  The solve runs
// at order + buffer so that the restriction back to degree < order is free
// of truncation artifacts.
inline PolyVector colon_generators(const PolyVector& gens, const Polynomial& p,
                                   int order, int nvars, const EngineConfig& cfg) {
    if (p.is_zero())
        return {Polynomial::constant(nvars, 1)};
    int buffer = std::max(cfg.colon_buffer, p.degree() + 2);
    TruncatedRing big(nvars, order + buffer);
    IdealSpan span(big, gens);
    TruncatedRing small(nvars, order);

    std::size_t wide = big.dim(), tags = small.dim();
    RowSpace kernel(wide + tags);
    for (std::size_t d = 0; d < tags; ++d) {
        RatVector image = big.to_vector(Polynomial::term(small.basis()[d], 1) * p);
        span.rows().reduce(image);
        RatVector row(wide + tags, 0);
        for (std::size_t i = 0; i < wide; ++i) row[i] = std::move(image[i]);
        row[wide + d] = 1;
        kernel.insert(std::move(row));
    }
    PolyVector out;
    for (const auto* row : kernel.rows_with_pivot_at_least(wide)) {
        RatVector tail(row->vec.begin() + static_cast<long>(wide), row->vec.end());
        out.push_back(small.to_polynomial(tail));
    }
    return out;
}

// Intersection of two ideal images in the same truncated ring, with
// witnesses re-expressed against the concatenated generator lists.
inline IdealSpan intersect(const IdealSpan& A, const IdealSpan& B) {
    if (&A.ring() != &B.ring())
        throw RingMismatchError("intersect needs spans over the same truncated ring");
    const TruncatedRing& ring = A.ring();
    std::size_t T = ring.dim();

    RowSpace zass(2 * T);
    for (const auto& row : A.rows().rows()) {
        RatVector v(2 * T, 0);
        for (std::size_t i = 0; i < T; ++i) { v[i] = row.vec[i]; v[T + i] = row.vec[i]; }
        zass.insert(std::move(v));
    }
    for (const auto& row : B.rows().rows()) {
        RatVector v(2 * T, 0);
        for (std::size_t i = 0; i < T; ++i) v[i] = row.vec[i];
        zass.insert(std::move(v));
    }

    PolyVector gens = A.gens();
    gens.insert(gens.end(), B.gens().begin(), B.gens().end());
    std::vector<std::pair<RatVector, PolyVector>> basis;
    for (const auto* row : zass.rows_with_pivot_at_least(T)) {
        RatVector v(row->vec.begin() + static_cast<long>(T), row->vec.end());
        Polynomial rep = ring.to_polynomial(v);
        auto witA = A.membership_witness(rep);
        if (!witA)
            throw InternalInconsistencyError("intersection element escaped the first span");
        PolyVector wit = *witA;
        wit.resize(gens.size(), Polynomial::zero(ring.nvars()));
        basis.emplace_back(std::move(v), std::move(wit));
    }
    return IdealSpan::from_subspace(ring, std::move(gens), basis);
}

// Stabilized dim J1/J2 for ideals J2 <= J1 given by per-order generator
// providers.  Raises NotNested when a J2 generator escapes J1's span.
using GenProvider = std::function<PolyVector(int order)>;

inline GenProvider constant_gens(PolyVector gens) {
    return [gens = std::move(gens)](int) { return gens; };
}

inline StabilizedDim quotient_module_dim(const GenProvider& J1, const GenProvider& J2,
                                         int nvars, const EngineConfig& cfg,
                                         int start_hint = 0) {
    int start = std::max(cfg.trunc_start, start_hint);
    return detail::stabilize(
        [&](int N) {
            TruncatedRing ring(nvars, N);
            PolyVector g1 = J1(N), g2 = J2(N);
            IdealSpan s1(ring, g1);
            for (const auto& g : g2)
                if (!s1.contains(g.truncated(N)))
                    throw NotNestedError("quotient is not nested at order " + std::to_string(N));
            IdealSpan s2(ring, g2);
            return static_cast<long>(s1.rank()) - static_cast<long>(s2.rank());
        },
        start, 1, cfg, "quotient dimension");
}

// Is (g_1..g_n) a regular sequence in O, i.e. is the colength finite?
inline bool regular_sequence_check(const PolyVector& gens, int nvars, const EngineConfig& cfg) {
    if (static_cast<int>(gens.size()) != nvars)
        throw ArityMismatchError("regular sequence check needs exactly nvars generators");
    for (const auto& g : gens)
        if (g.constant_term() != 0)
            throw NotAGermError("regular sequence check expects germs");
    return !colength(gens, nvars, cfg).infinite();
}

struct NormalizationResult {
    ProblemSpec spec;
    std::optional<RatMatrix> change;  // z <- change * z, when a change was needed
    int attempts = 0;
};

namespace detail {

inline PolyVector transformed_field(const PolyVector& X, const RatMatrix& M,
                                    const RatMatrix& Minv) {
    PolyVector comp;
    for (const auto& xi : X) comp.push_back(apply_linear_change(xi, M));
    PolyVector out;
    for (std::size_t i = 0; i < X.size(); ++i) {
        Polynomial yi(static_cast<int>(X.size()));
        for (std::size_t j = 0; j < X.size(); ++j)
            yi += comp[j] * Minv[i][j];
        out.push_back(std::move(yi));
    }
    return out;
}

inline PolyVector denominator_sequence(const ProblemSpec& spec) {
    PolyVector gens(spec.X.begin(), spec.X.end() - 1);
    gens.push_back(spec.f);
    return gens;
}

} // namespace detail

// Ensure (X_1..X_{n-1}, f) is a regular sequence, applying a random linear
// change of coordinates when it is not.  Deterministic in cfg.seed.
inline NormalizationResult normalize_coordinates(const ProblemSpec& spec,
                                                 const EngineConfig& cfg) {
    if (regular_sequence_check(detail::denominator_sequence(spec), spec.n(), cfg))
        return {spec, std::nullopt, 0};

    std::mt19937_64 rng(cfg.seed);
    int n = spec.n();
    for (int attempt = 1; attempt <= cfg.normalize_attempts; ++attempt) {
        RatMatrix M(n, RatVector(n, 0));
        for (auto& row : M)
            for (auto& entry : row)
                entry = static_cast<long>(rng() % 7) - 3;
        auto Minv = rat_inverse(M);
        if (!Minv) continue;

        ProblemSpec cand;
        cand.vars = spec.vars;
        cand.f = apply_linear_change(spec.f, M);
        cand.X = detail::transformed_field(spec.X, M, *Minv);
        if (spec.c_hint) cand.c_hint = apply_linear_change(*spec.c_hint, M);
        if (regular_sequence_check(detail::denominator_sequence(cand), n, cfg))
            return {std::move(cand), M, attempt};
    }
    throw NormalizationFailedError(
        "no random linear change made (X_1..X_{n-1}, f) a regular sequence after " +
        std::to_string(cfg.normalize_attempts) + " attempts");
}

} // namespace gsv
