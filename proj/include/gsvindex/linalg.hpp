// Dense rational row spaces kept in reduced row echelon form.
//
// Rows can carry a witness payload: a vector of polynomials that is
// combined with exactly the same coefficients as the numeric row.  The
// local engine uses this to track how each span element is expressed in
// terms of the ideal generators.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gsvindex/polynomial.hpp"

namespace gsv {

struct WitnessedRow {
    RatVector vec;
    PolyVector wit;
    std::size_t pivot;
};

class RowSpace {
public:
    explicit RowSpace(std::size_t width) : width_(width) {}

    std::size_t width() const { return width_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<WitnessedRow>& rows() const { return rows_; }

    // Eliminate the pivot columns of the current rows from v; the witness,
    // when present, is updated with the same coefficients.
    void reduce(RatVector& v, PolyVector* wit = nullptr) const {
        for (const auto& row : rows_) {
            Rational c = v[row.pivot];
            if (c == 0) continue;
            axpy(v, -c, row.vec);
            if (wit) axpy(*wit, -c, row.wit);
        }
    }

    static bool is_zero(const RatVector& v) {
        for (const auto& x : v)
            if (x != 0) return false;
        return true;
    }

    // Reduce and, if independent, normalize and store.  Returns the stored
    // row (a snapshot; later insertions may rewrite the internal rows) or
    // nullopt when v was already in the span.
    std::optional<WitnessedRow> insert(RatVector v, PolyVector wit = {}) {
        reduce(v, wit.empty() ? nullptr : &wit);
        std::size_t p = 0;
        while (p < width_ && v[p] == 0) ++p;
        if (p == width_) return std::nullopt;
        Rational s = 1 / v[p];
        scale(v, s);
        scale(wit, s);
        for (auto& row : rows_) {
            Rational c = row.vec[p];
            if (c == 0) continue;
            axpy(row.vec, -c, v);
            if (!row.wit.empty() || !wit.empty()) {
                row.wit.resize(wit.size(), Polynomial(witness_vars(wit)));
                axpy(row.wit, -c, wit);
            }
        }
        WitnessedRow stored{std::move(v), std::move(wit), p};
        auto it = rows_.begin();
        while (it != rows_.end() && it->pivot < p) ++it;
        it = rows_.insert(it, stored);
        return *it;
    }

    bool contains(RatVector v) const {
        reduce(v);
        return is_zero(v);
    }

    // Rows whose pivot falls at or beyond column `split`; with a layout of
    // [payload | tag] columns these rows have zero payload part.
    std::vector<const WitnessedRow*> rows_with_pivot_at_least(std::size_t split) const {
        std::vector<const WitnessedRow*> out;
        for (const auto& row : rows_)
            if (row.pivot >= split) out.push_back(&row);
        return out;
    }

private:
    static int witness_vars(const PolyVector& wit) {
        return wit.empty() ? 0 : wit[0].nvars();
    }

    static void axpy(RatVector& y, const Rational& a, const RatVector& x) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0) y[i] += a * x[i];
    }

    static void axpy(PolyVector& y, const Rational& a, const PolyVector& x) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!x[i].is_zero()) y[i] += x[i] * a;
    }

    static void scale(RatVector& v, const Rational& s) {
        for (auto& x : v)
            if (x != 0) x *= s;
    }

    static void scale(PolyVector& v, const Rational& s) {
        for (auto& p : v)
            if (!p.is_zero()) p *= s;
    }

    std::size_t width_;
    std::vector<WitnessedRow> rows_;
};

} // namespace gsv
