// Multivariate polynomials over exact rationals, plus the small amount of
// polynomial calculus the index computations need (Jacobians, principal
// minor sums, exact division, linear coordinate changes).
//
// Terms are kept in a map ordered by total degree, ties broken so that
// within one degree the lexicographically larger exponent vector comes
// first ("x^2*y + y^3", "x + y").  That order is compatible with monomial
// multiplication, so the map's last element is a valid leading term for
// exact division.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsvindex/errors.hpp"
#include "gsvindex/rational.hpp"

namespace gsv {

using Exponent = std::uint32_t;
using Monomial = std::vector<Exponent>;

inline constexpr Exponent kMaxExponent = 1u << 20;

inline unsigned total_degree(const Monomial& m) {
    std::uint64_t d = 0;
    for (Exponent e : m) d += e;
    if (d >= kMaxExponent)
        throw DegreeOverflowError("monomial degree " + std::to_string(d) + " exceeds limit");
    return static_cast<unsigned>(d);
}

struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    if (a.size() != b.size())
        throw RingMismatchError("monomials from different rings");
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > kMaxExponent - b[i])
            throw DegreeOverflowError("exponent overflow in monomial product");
        r[i] = a[i] + b[i];
    }
    return r;
}

// Componentwise quotient, or nullopt when b does not divide a.
inline std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b) {
    if (a.size() != b.size())
        throw RingMismatchError("monomials from different rings");
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return std::nullopt;
        r[i] = a[i] - b[i];
    }
    return r;
}

class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

    static Polynomial zero(int nvars) { return Polynomial(nvars); }

    static Polynomial constant(int nvars, const Rational& c) {
        Polynomial p(nvars);
        if (c != 0) p.terms_[Monomial(nvars, 0)] = c;
        return p;
    }

    static Polynomial variable(int nvars, int i) {
        Polynomial p(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        p.terms_[m] = 1;
        return p;
    }

    static Polynomial term(Monomial m, const Rational& c) {
        Polynomial p(static_cast<int>(m.size()));
        if (c != 0) p.terms_[std::move(m)] = c;
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient(Monomial(nvars_, 0)); }

    // Max total degree; -1 for the zero polynomial.
    int degree() const {
        return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.rbegin()->first));
    }

    // Min total degree (the order of the germ); -1 for zero.
    int order() const {
        return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first));
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (static_cast<int>(m.size()) != nvars_)
            throw RingMismatchError("term arity does not match ring");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != 0) terms_[m] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_ring(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_ring(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r(a.nvars_);
        for (const auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_ring(b);
        Polynomial r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term(monomial_mul(ma, mb), ca * cb);
        return r;
    }

    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial pow(unsigned k) const {
        Polynomial r = constant(nvars_, 1);
        Polynomial base = *this;
        while (k) {
            if (k & 1) r = r * base;
            base = (k >>= 1) ? base * base : base;
        }
        return r;
    }

    // Drop all terms of total degree >= bound.
    Polynomial truncated(int bound) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (static_cast<int>(total_degree(m)) >= bound) break;
            r.terms_[m] = c;
        }
        return r;
    }

    Polynomial homogeneous_part(int d) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_)
            if (static_cast<int>(total_degree(m)) == d) r.terms_[m] = c;
        return r;
    }

    Polynomial derivative(int i) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) continue;
            Monomial d = m;
            d[i] -= 1;
            r.terms_[d] = c * m[i];
        }
        return r;
    }

    // Evaluate at a vector of polynomials, one image per variable.
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (static_cast<int>(images.size()) != nvars_)
            throw RingMismatchError("substitution arity does not match ring");
        int out_vars = images.empty() ? nvars_ : images[0].nvars();
        std::vector<std::vector<Polynomial>> powers(nvars_);
        for (int i = 0; i < nvars_; ++i)
            powers[i].push_back(Polynomial::constant(out_vars, 1));
        Polynomial r(out_vars);
        for (const auto& [m, c] : terms_) {
            Polynomial t = Polynomial::constant(out_vars, c);
            for (int i = 0; i < nvars_; ++i) {
                while (powers[i].size() <= m[i])
                    powers[i].push_back(powers[i].back() * images[i]);
                t = t * powers[i][m[i]];
            }
            r += t;
        }
        return r;
    }

private:
    void check_ring(const Polynomial& o) const {
        if (nvars_ != o.nvars_)
            throw RingMismatchError("polynomials from different rings");
    }

    int nvars_;
    TermMap terms_;
};

using PolyVector = std::vector<Polynomial>;
using PolyMatrix = std::vector<PolyVector>;

inline PolyMatrix jacobian(const PolyVector& F) {
    PolyMatrix J;
    for (const auto& f : F) {
        PolyVector row;
        for (int j = 0; j < f.nvars(); ++j) row.push_back(f.derivative(j));
        J.push_back(std::move(row));
    }
    return J;
}

// X(f) = sum_i X_i * df/dz_i.
inline Polynomial apply_vector_field(const PolyVector& X, const Polynomial& f) {
    if (static_cast<int>(X.size()) != f.nvars())
        throw RingMismatchError("vector field arity does not match ring");
    Polynomial r(f.nvars());
    for (std::size_t i = 0; i < X.size(); ++i)
        r += X[i] * f.derivative(static_cast<int>(i));
    return r;
}

inline Polynomial poly_det(const PolyMatrix& M) {
    std::size_t n = M.size();
    if (n == 0) throw RingMismatchError("determinant of empty matrix");
    for (const auto& row : M)
        if (row.size() != n) throw RingMismatchError("determinant of non-square matrix");
    if (n == 1) return M[0][0];
    Polynomial r(M[0][0].nvars());
    for (std::size_t j = 0; j < n; ++j) {
        if (M[0][j].is_zero()) continue;
        PolyMatrix sub;
        for (std::size_t i = 1; i < n; ++i) {
            PolyVector row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(M[i][k]);
            sub.push_back(std::move(row));
        }
        Polynomial cof = M[0][j] * poly_det(sub);
        if (j % 2) r -= cof; else r += cof;
    }
    return r;
}

// sigma_k = sum of the k-by-k principal minors; sigma_0 = 1.  These are the
// coefficients in det(M - tE) = sum_i (-1)^i sigma_{n-i} t^i.
inline PolyVector sigma_invariants(const PolyMatrix& M) {
    std::size_t n = M.size();
    int nv = M[0][0].nvars();
    PolyVector sigma(n + 1, Polynomial::zero(nv));
    sigma[0] = Polynomial::constant(nv, 1);
    std::vector<std::size_t> idx;
    auto rec = [&](auto&& self, std::size_t start, std::size_t k) -> void {
        if (idx.size() == k) {
            PolyMatrix sub(k, PolyVector(k, Polynomial::zero(nv)));
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    sub[a][b] = M[idx[a]][idx[b]];
            sigma[k] += poly_det(sub);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            idx.push_back(i);
            self(self, i + 1, k);
            idx.pop_back();
        }
    };
    for (std::size_t k = 1; k <= n; ++k) rec(rec, 0, k);
    return sigma;
}

// sum_{k=0}^{n-1} (-1)^k c^k sigma_{n-1-k}(DX): the numerator polynomial of
// the residue formula for the index.
inline Polynomial chat_numerator(const PolyMatrix& DX, const Polynomial& c) {
    std::size_t n = DX.size();
    PolyVector sigma = sigma_invariants(DX);
    Polynomial r(c.nvars());
    Polynomial ck = Polynomial::constant(c.nvars(), 1);
    for (std::size_t k = 0; k < n; ++k) {
        Polynomial part = ck * sigma[n - 1 - k];
        if (k % 2) r -= part; else r += part;
        if (k + 1 < n) ck = ck * c;
    }
    return r;
}

// Exact division in the polynomial ring: p = q * result, or nullopt.
inline std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& q) {
    if (q.is_zero()) throw RingMismatchError("division by the zero polynomial");
    Polynomial r = p;
    Polynomial quot(p.nvars());
    const auto& ltq = *q.terms().rbegin();
    while (!r.is_zero()) {
        const auto& ltr = *r.terms().rbegin();
        auto m = monomial_div(ltr.first, ltq.first);
        if (!m) return std::nullopt;
        Polynomial t = Polynomial::term(*m, ltr.second / ltq.second);
        quot += t;
        r -= t * q;
    }
    return quot;
}

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;

inline std::optional<RatMatrix> rat_inverse(const RatMatrix& M) {
    std::size_t n = M.size();
    RatMatrix A = M;
    RatMatrix I(n, RatVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (A[i].size() != n) throw RingMismatchError("inverse of non-square matrix");
        I[i][i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        Rational inv = 1 / A[col][col];
        for (std::size_t j = 0; j < n; ++j) { A[col][j] *= inv; I[col][j] *= inv; }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || A[row][col] == 0) continue;
            Rational f = A[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                A[row][j] -= f * A[col][j];
                I[row][j] -= f * I[col][j];
            }
        }
    }
    return I;
}

// f(Mz): substitute z_i <- sum_j M[i][j] z_j.
inline Polynomial apply_linear_change(const Polynomial& f, const RatMatrix& M) {
    int n = f.nvars();
    if (static_cast<int>(M.size()) != n)
        throw RingMismatchError("matrix size does not match ring");
    PolyVector images;
    for (int i = 0; i < n; ++i) {
        Polynomial li(n);
        for (int j = 0; j < n; ++j)
            li += Polynomial::variable(n, j) * M[i][j];
        images.push_back(std::move(li));
    }
    return f.substitute(images);
}

} // namespace gsv
