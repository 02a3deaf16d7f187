// Brute force homology of the truncated contraction complexes.  Forms on
// the hypersurface f = 0 are modeled as ambient i-forms modulo the
// relations f * Omega^i + df ^ Omega^(i-1), all coefficients truncated at
// a degree bound, and the contraction by X acts as the differential:
//
//   star:      0 -> Omega^n_V -> ... -> Omega^1_V -> Omega^0_V -> 0
//   non-star:  0 -> Omega^(n-1)_V -> ... -> Omega^0_V -> 0
//
// Truncation at order N cannot be trusted near the cut.  Kernels inflate
// there (multiples of X fall off the end of the ring while the matching
// relation rows truncate to zero), and membership tests can be certified
// through rows whose tails were cut.  When f is not homogeneous the lie
// cascades: rewriting through f trades a term of degree ord f for one of
// degree deg f, so a spurious certificate for a form of degree W is only
// exposed once its tail, near W * deg f / ord f, fits under the cut.
// Junk therefore lives in a band of windows that drifts upward at slope
// ord f / deg f as N grows, and no additive margin outruns it.
// Dimensions are taken per window W as
//
//   dim { w supported below W : iota(w) lies in the order-N relation
//         span } - dim { the order-N denominator span, intersected with
//         the forms supported below W }
//
// restricted to exposure-complete windows, W * deg f < N * ord f (and
// W <= N - guard for the one-shot contributions of X and df).  Below the
// band the counts converge upward to the homology dimensions: the window
// quotient always injects into the true one, and surjects once W clears
// every representative.  Coordinates are laid out by total degree
// descending, so each window is a suffix, the denominator intersection is
// read off the echelon pivots, and one elimination per N prices every W
// at once.  A value is accepted when two adjacent safe windows agree at
// two consecutive orders.
//
// This route knows nothing about the closed formulas; it exists to
// cross-check them.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsvindex/errors.hpp"
#include "gsvindex/local_engine.hpp"
#include "gsvindex/parser.hpp"
#include "gsvindex/polynomial.hpp"

namespace gsv {

namespace detail {

inline std::vector<std::vector<int>> subsets_of(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace detail

struct OracleLevelDims {
    std::vector<long> h_star;  // h_0*..h_n*
    std::vector<long> h;       // h_0..h_(n-1)
    bool operator==(const OracleLevelDims& o) const {
        return h_star == o.h_star && h == o.h;
    }
};

// One truncation level of the complexes.  An i-form is a vector of
// coefficient polynomials indexed by the sorted i-subsets of the
// variables.
class ContractionComplex {
public:
    using Form = PolyVector;

    ContractionComplex(const ProblemSpec& spec, int order)
        : spec_(spec), n_(spec.n()), ring_(spec.n(), order) {
        std::size_t T = ring_.dim();
        std::vector<std::size_t> by_degree(T);
        for (std::size_t b = 0; b < T; ++b) by_degree[b] = b;
        std::stable_sort(by_degree.begin(), by_degree.end(),
                         [&](std::size_t a, std::size_t b) {
                             return total_degree(ring_.basis()[a]) >
                                    total_degree(ring_.basis()[b]);
                         });
        rank_.resize(T);
        degree_at_.resize(T);
        for (std::size_t p = 0; p < T; ++p) {
            rank_[by_degree[p]] = p;
            degree_at_[p] =
                static_cast<int>(total_degree(ring_.basis()[by_degree[p]]));
        }

        subs_.resize(static_cast<std::size_t>(n_) + 1);
        pos_.resize(subs_.size());
        for (int i = 0; i <= n_; ++i) {
            subs_[i] = detail::subsets_of(n_, i);
            for (std::size_t s = 0; s < subs_[i].size(); ++s)
                pos_[i][subs_[i][s]] = s;
        }
        for (int i = 0; i <= n_; ++i) rel_.push_back(relations(i));
        verify_descent();
    }

    const TruncatedRing& ring() const { return ring_; }
    std::size_t components(int i) const { return subs_[i].size(); }
    std::size_t dim(int i) const { return ring_.dim() * components(i); }

    Form zero_form(int i) const {
        return Form(components(i), Polynomial::zero(n_));
    }

    // Contraction by X of an i-form, i >= 1.
    Form iota(int i, const Form& w) const {
        Form out = zero_form(i - 1);
        for (std::size_t s = 0; s < components(i); ++s) {
            if (w[s].is_zero()) continue;
            const auto& J = subs_[i][s];
            for (std::size_t t = 0; t < J.size(); ++t) {
                std::vector<int> rest;
                for (std::size_t u = 0; u < J.size(); ++u)
                    if (u != t) rest.push_back(J[u]);
                Polynomial piece =
                    (spec_.X[J[t]] * w[s]).truncated(ring_.order());
                if (t % 2) piece = -piece;
                out[pos_[i - 1].at(rest)] += piece;
            }
        }
        return out;
    }

    // Ambient coordinates: monomial slots by total degree descending,
    // components interleaved within a slot, so that for every W the forms
    // supported below degree W occupy a suffix.
    RatVector to_vector(int i, const Form& w) const {
        RatVector v(dim(i), 0);
        std::size_t C = components(i);
        for (std::size_t s = 0; s < C; ++s) {
            if (w[s].is_zero()) continue;
            RatVector part = ring_.to_vector(w[s]);
            for (std::size_t b = 0; b < part.size(); ++b)
                if (part[b] != 0) v[rank_[b] * C + s] = std::move(part[b]);
        }
        return v;
    }

    bool in_relations(int i, const Form& w) const {
        return rel_[i].contains(to_vector(i, w));
    }

    // Window counts for every W in [2, wmax], keyed by W.
    std::map<int, OracleLevelDims> window_table(int wmax) const {
        std::vector<std::map<int, long>> pre(static_cast<std::size_t>(n_) + 1);
        std::vector<std::map<int, long>> den_star(pre.size());
        for (int i = 0; i <= n_; ++i) {
            pre[i] = preimage_counts(i, wmax);
            RowSpace denom = rel_[i];
            if (i < n_) insert_images(i + 1, denom);
            den_star[i] = span_window_counts(i, denom, wmax);
        }
        std::map<int, long> den_top = span_window_counts(n_ - 1, rel_[n_ - 1], wmax);

        std::map<int, OracleLevelDims> table;
        for (int W = 2; W <= wmax; ++W) {
            OracleLevelDims d;
            for (int i = 0; i <= n_; ++i)
                d.h_star.push_back(pre[i][W] - den_star[i][W]);
            for (int i = 0; i < n_ - 1; ++i) d.h.push_back(d.h_star[i]);
            d.h.push_back(pre[n_ - 1][W] - den_top[W]);
            table[W] = std::move(d);
        }
        return table;
    }

private:
    // f Omega^i + df ^ Omega^(i-1), spanned over the monomial basis.
    RowSpace relations(int i) const {
        RowSpace rows(dim(i));
        for (std::size_t s = 0; s < components(i); ++s)
            for (const auto& mu : ring_.basis()) {
                Form w = zero_form(i);
                w[s] = (spec_.f * Polynomial::term(mu, 1)).truncated(ring_.order());
                rows.insert(to_vector(i, w));
            }
        if (i == 0) return rows;
        for (const auto& K : subs_[i - 1])
            for (const auto& mu : ring_.basis()) {
                Form w = zero_form(i);
                for (int l = 0; l < n_; ++l) {
                    if (std::binary_search(K.begin(), K.end(), l)) continue;
                    std::vector<int> J = K;
                    J.insert(std::upper_bound(J.begin(), J.end(), l), l);
                    long before = std::count_if(K.begin(), K.end(),
                                                [&](int k) { return k < l; });
                    Polynomial piece = (spec_.f.derivative(l) *
                                        Polynomial::term(mu, 1))
                                           .truncated(ring_.order());
                    if (before % 2) piece = -piece;
                    w[pos_[i].at(J)] += piece;
                }
                rows.insert(to_vector(i, w));
            }
        return rows;
    }

    // dim { w supported below W : iota(w) in the relation span below }, for
    // every W up to wmax.  Sources come in degree ascending order, so one
    // elimination prices all the windows; a window source never truncates,
    // its image degree staying under the order.
    std::map<int, long> preimage_counts(int i, int wmax) const {
        std::map<int, long> sources, ranks;
        RowSpace q(i > 0 ? dim(i - 1) : 1);
        long seen = 0;
        for (int d = 0; d < wmax; ++d) {
            for (const auto& mu : ring_.basis()) {
                if (static_cast<int>(total_degree(mu)) != d) continue;
                for (std::size_t s = 0; s < components(i); ++s) {
                    ++seen;
                    if (i == 0) continue;
                    Form e = zero_form(i);
                    e[s] = Polynomial::term(mu, 1);
                    RatVector v = to_vector(i - 1, iota(i, e));
                    rel_[i - 1].reduce(v);
                    q.insert(std::move(v));
                }
            }
            sources[d + 1] = seen;
            ranks[d + 1] = static_cast<long>(q.rank());
        }
        std::map<int, long> out;
        for (int W = 2; W <= wmax; ++W) out[W] = sources[W] - ranks[W];
        return out;
    }

    void insert_images(int from, RowSpace& into) const {
        for (std::size_t s = 0; s < components(from); ++s)
            for (const auto& mu : ring_.basis()) {
                Form e = zero_form(from);
                e[s] = Polynomial::term(mu, 1);
                into.insert(to_vector(from - 1, iota(from, e)));
            }
    }

    // dim of (row space) intersected with each window: the echelon rows
    // whose pivot slot sits below degree W, counted cumulatively.
    std::map<int, long> span_window_counts(int i, const RowSpace& rows,
                                           int wmax) const {
        std::size_t C = components(i);
        std::vector<long> at_degree(static_cast<std::size_t>(wmax), 0);
        for (const auto& row : rows.rows()) {
            int d = degree_at_[row.pivot / C];
            if (d < wmax) ++at_degree[d];
        }
        std::map<int, long> out;
        long cum = 0;
        for (int W = 1; W <= wmax; ++W) {
            cum += at_degree[W - 1];
            out[W] = cum;
        }
        out.erase(1);
        return out;
    }

    // Tangency makes the contraction descend to the relative forms; this
    // holds term by term in the truncated model, so any residue here is a
    // bug, not a truncation artifact.
    void verify_descent() const {
        for (int i = 1; i <= n_; ++i)
            for (const auto& row : rel_[i].rows()) {
                Form w = zero_form(i);
                std::size_t C = components(i);
                for (std::size_t s = 0; s < C; ++s) {
                    RatVector part(ring_.dim(), 0);
                    for (std::size_t b = 0; b < part.size(); ++b)
                        part[b] = row.vec[rank_[b] * C + s];
                    w[s] = ring_.to_polynomial(part);
                }
                RatVector v = to_vector(i - 1, iota(i, w));
                if (!rel_[i - 1].contains(std::move(v)))
                    throw InternalInconsistencyError(
                        "contraction failed to descend to the relative forms");
            }
    }

    ProblemSpec spec_;
    int n_;
    TruncatedRing ring_;
    std::vector<std::size_t> rank_;
    std::vector<int> degree_at_;
    std::vector<std::vector<std::vector<int>>> subs_;
    std::vector<std::map<std::vector<int>, std::size_t>> pos_;
    std::vector<RowSpace> rel_;
};

struct OracleDims {
    std::vector<long> h_star;  // h_0*..h_n*
    std::vector<long> h;       // h_0..h_(n-1)
    std::vector<int> orders;   // truncation orders evaluated
};

// Escalates the truncation order, pricing every safe window at each
// order, and accepts when adjacent windows agree at consecutive orders.
inline OracleDims oracle_dims(const ProblemSpec& spec, const EngineConfig& cfg) {
    int guard = std::max(spec.f.degree(), detail::maxdeg(spec.X));
    int ordf = std::max(spec.f.order(), 1);
    int degf = std::max(spec.f.degree(), ordf);
    // Largest window whose certificates are exposure-complete at order N.
    auto wlimit = [&](int N) {
        return std::min(N - guard, (N * ordf - 1) / degf);
    };
    int start = std::max(cfg.trunc_start, guard + 4);
    int N = std::min(std::max(start, 4), cfg.trunc_cap);
    std::vector<int> orders;
    std::map<int, OracleLevelDims> prev;
    int prev_limit = 0;
    for (; N <= cfg.trunc_cap; N += 2) {
        orders.push_back(N);
        ContractionComplex level(spec, N);
        std::map<int, OracleLevelDims> cur = level.window_table(wlimit(N));
        for (int W = std::min(wlimit(N), prev_limit); W >= 4; --W) {
            auto w1 = cur.find(W), w0 = cur.find(W - 2);
            auto p1 = prev.find(W), p0 = prev.find(W - 2);
            if (w1 == cur.end() || w0 == cur.end() || p1 == prev.end() ||
                p0 == prev.end())
                continue;
            if (w1->second == w0->second && w1->second == p1->second &&
                w0->second == p0->second)
                return {w1->second.h_star, w1->second.h, orders};
        }
        prev = std::move(cur);
        prev_limit = wlimit(N);
    }
    std::string msg = "oracle homology did not stabilize at truncation orders";
    for (int o : orders) msg += " " + std::to_string(o);
    msg += " (cap " + std::to_string(cfg.trunc_cap) + ")";
    throw NoStabilizationError(msg, orders);
}

} // namespace gsv
