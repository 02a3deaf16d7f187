#include <catch2/catch_amalgamated.hpp>

#include "gsvindex/local_engine.hpp"

#include "test_util.hpp"

using namespace gsv;
using gsvtest::P;
using gsvtest::Rng;

static EngineConfig cfg;

TEST_CASE("truncated ring basis") {
    TruncatedRing ring(2, 3);
    REQUIRE(ring.dim() == 6);
    REQUIRE(ring.basis()[0] == Monomial{0, 0});
    REQUIRE(ring.basis()[1] == Monomial{1, 0});
    REQUIRE(ring.basis()[2] == Monomial{0, 1});
    REQUIRE(ring.basis()[3] == Monomial{2, 0});
    REQUIRE(ring.index_of({1, 1}) == 4);
    REQUIRE(ring.index_of({3, 0}) == -1);

    Polynomial p = P("x^2 + 2*x*y - y + x^5");
    REQUIRE(ring.to_polynomial(ring.to_vector(p)) == P("x^2 + 2*x*y - y"));
    REQUIRE(TruncatedRing(3, 6).dim() == 56);
}

TEST_CASE("ideal span and membership") {
    TruncatedRing ring(2, 3);
    IdealSpan span(ring, {P("x"), P("y")});
    REQUIRE(span.rank() == 5);
    REQUIRE(span.colength() == 1);
    REQUIRE(span.contains(P("x^2 + x*y")));
    REQUIRE(!span.contains(P("1")));
    REQUIRE(!span.contains(P("x + 1")));
    REQUIRE(span.verify_witnesses());

    auto wit = span.membership_witness(P("x^2 + x*y"));
    REQUIRE(wit.has_value());
    Polynomial recon = (*wit)[0] * P("x") + (*wit)[1] * P("y");
    REQUIRE(recon.truncated(3) == P("x^2 + x*y"));
    REQUIRE(!span.membership_witness(P("1")).has_value());
    REQUIRE_THROWS_AS(span.membership_witness(P("x^3")), DegreeOverflowError);

    IdealSpan trivial(ring, {Polynomial::zero(2)});
    REQUIRE(trivial.rank() == 0);
}

TEST_CASE("colength stabilizes on standard examples") {
    auto one = colength({P("x"), P("y")}, 2, cfg);
    REQUIRE(one.value == 1);
    REQUIRE(one.stable);
    REQUIRE(one.orders.size() == 2);

    // Milnor number of D4: dim O/(f_x, f_y) for f = x^2*y + y^3.
    REQUIRE(colength({P("2*x*y"), P("x^2 + 3*y^2")}, 2, cfg).value == 4);

    // dim O/(X_1, f) for the D4 field with m = 3.
    REQUIRE(colength({P("1/3*x^4"), P("x^2*y + y^3")}, 2, cfg).value == 12);

    auto inf = colength({P("1/3*x^4")}, 2, cfg);
    REQUIRE(inf.infinite());
    REQUIRE(colength({}, 2, cfg).infinite());
    REQUIRE(colength({P("x^2 + y^2"), P("x*y")}, 2, cfg).value == 4);
}

TEST_CASE("fixed order span matches the stabilized value") {
    TruncatedRing ring(2, 6);
    IdealSpan span(ring, {P("2*x*y"), P("x^2 + 3*y^2")});
    REQUIRE(ring.dim() == 21);
    REQUIRE(span.rank() == 17);
    REQUIRE(span.colength() == 4);
    REQUIRE(span.verify_witnesses());
}

TEST_CASE("colon ideals") {
    // (x^4) : x^3*y = (x).
    PolyVector cands = colon_generators({P("x^4")}, P("x^3*y"), 5, 2, cfg);
    TruncatedRing ring(2, 5);
    IdealSpan colon_span(ring, cands);
    IdealSpan x_span(ring, {P("x")});
    REQUIRE(colon_span.rank() == x_span.rank());
    REQUIRE(colon_span.contains(P("x")));

    // (x, y) : 1 = (x, y).
    PolyVector unit = colon_generators({P("x"), P("y")}, P("1"), 4, 2, cfg);
    TruncatedRing r4(2, 4);
    REQUIRE(IdealSpan(r4, unit).rank() == IdealSpan(r4, {P("x"), P("y")}).rank());

    // Ann of zero is everything.
    PolyVector ann0 = colon_generators({P("x")}, Polynomial::zero(2), 4, 2, cfg);
    REQUIRE(IdealSpan(r4, ann0).colength() == 0);
}

TEST_CASE("intersection of spans") {
    TruncatedRing ring(2, 4);
    IdealSpan A(ring, {P("x")});
    IdealSpan B(ring, {P("y")});
    IdealSpan C = intersect(A, B);
    IdealSpan xy(ring, {P("x*y")});
    REQUIRE(C.rank() == xy.rank());
    REQUIRE(C.contains(P("x*y")));
    REQUIRE(C.gens().size() == 2);
    REQUIRE(C.verify_witnesses());

    TruncatedRing other(2, 4);
    IdealSpan D(other, {P("y")});
    REQUIRE_THROWS_AS(intersect(A, D), RingMismatchError);
}

TEST_CASE("nested quotient dimensions") {
    auto dim = quotient_module_dim(constant_gens({P("x"), P("y")}),
                                   constant_gens({P("x"), P("y^2")}), 2, cfg);
    REQUIRE(dim.value == 1);
    REQUIRE(dim.stable);

    REQUIRE_THROWS_AS(quotient_module_dim(constant_gens({P("x^2")}),
                                          constant_gens({P("y")}), 2, cfg),
                      NotNestedError);
}

// The two h1* summands for the D4 family, against the dimensions the
// closed formulas predict.
namespace {

struct D4 {
    Polynomial f, X1, X2, c;
};

D4 d4_field(int k, int m) {
    using gsvtest::xy;
    std::string ks = std::to_string(k - 1);
    Polynomial f = P("x^2*y + y^" + std::to_string(k - 1));
    Polynomial X1 = P(std::to_string(k - 2) + "/" + std::to_string(2 * (k - 1)) +
                      "*x^" + std::to_string(m + 1));
    Polynomial X2 = P("1/" + ks + "*x^" + std::to_string(m) + "*y");
    Polynomial c = P("x^" + std::to_string(m));
    return {f, X1, X2, c};
}

} // namespace

TEST_CASE("annihilator quotients for the D family") {
    auto run = [&](int k, int m, long expect_term1, long expect_term2) {
        D4 d = d4_field(k, m);
        PolyVector I = {d.X1, d.X2};

        GenProvider ann_f = [&](int N) { return colon_generators(I, d.f, N, 2, cfg); };
        PolyVector with_c = {d.X1, d.X2, d.c};
        auto term1 = quotient_module_dim(ann_f, constant_gens(with_c), 2, cfg,
                                         detail::maxdeg(I) + 2);
        REQUIRE(term1.value == expect_term1);

        GenProvider ann_x2 = [&](int N) { return colon_generators({d.X1}, d.X2, N, 2, cfg); };
        GenProvider denom = [&](int N) {
            TruncatedRing ring(2, N);
            IdealSpan big(ring, ann_x2(N));
            IdealSpan base(ring, {d.X1, d.f, d.f.derivative(1)});
            IdealSpan meet = intersect(big, base);
            PolyVector gens = {d.X1};
            for (const auto& row : meet.rows().rows())
                gens.push_back(ring.to_polynomial(row.vec));
            return gens;
        };
        auto term2 = quotient_module_dim(ann_x2, denom, 2, cfg, detail::maxdeg(I) + 2);
        REQUIRE(term2.value == expect_term2);
    };

    run(4, 3, 0, 4);
    run(4, 2, 0, 3);
    run(5, 2, 0, 4);
    run(5, 3, 0, 5);
}

TEST_CASE("regular sequence detection") {
    REQUIRE(regular_sequence_check({P("x"), P("y")}, 2, cfg));
    REQUIRE(!regular_sequence_check({P("x"), P("x*y")}, 2, cfg));
    REQUIRE(regular_sequence_check({P("5*x"), P("2*y")}, 2, cfg));
    D4 d = d4_field(4, 3);
    REQUIRE(!regular_sequence_check({d.X1, d.X2}, 2, cfg));
    REQUIRE_THROWS_AS(regular_sequence_check({P("x")}, 2, cfg), ArityMismatchError);
    REQUIRE_THROWS_AS(regular_sequence_check({P("x + 1"), P("y")}, 2, cfg),
                      NotAGermError);
}

TEST_CASE("coordinate normalization") {
    ProblemSpec spec;
    spec.vars = gsvtest::xy();
    spec.f = P("x*y");
    spec.X = {P("x"), P("y")};

    auto result = normalize_coordinates(spec, cfg);
    REQUIRE(result.change.has_value());
    REQUIRE(result.attempts >= 1);
    PolyVector denom = {result.spec.X[0], result.spec.f};
    REQUIRE(regular_sequence_check(denom, 2, cfg));

    // Already regular: returned untouched.
    ProblemSpec euler;
    euler.vars = gsvtest::xy();
    euler.f = P("x^2 + y^2");
    euler.X = {P("x"), P("y")};
    auto id = normalize_coordinates(euler, cfg);
    REQUIRE(!id.change.has_value());
    REQUIRE(id.spec.f == euler.f);

    // X_1 = 0, X_2 = f cannot be repaired by any linear change.
    ProblemSpec bad;
    bad.vars = gsvtest::xy();
    bad.f = P("x^2 + y^2");
    bad.X = {Polynomial::zero(2), P("x^2 + y^2")};
    REQUIRE_THROWS_AS(normalize_coordinates(bad, cfg), NormalizationFailedError);
}

TEST_CASE("tiny truncation caps fail loudly") {
    EngineConfig tiny = cfg;
    tiny.trunc_cap = 3;
    try {
        colength({P("2*x*y"), P("x^2 + 3*y^2")}, 2, tiny);
        FAIL("expected NoStabilizationError");
    } catch (const NoStabilizationError& e) {
        REQUIRE(!e.orders.empty());
        REQUIRE(std::string(e.what()).find("3") != std::string::npos);
    }
}

// Property suite: every claim is checked against an oracle that does not
// share code with the engine (staircase counting for monomial ideals,
// exact polynomial arithmetic for colon membership).

namespace {

struct MonomialIdeal {
    PolyVector gens;
    std::vector<Monomial> minimal;
};

MonomialIdeal random_primary_monomial_ideal(Rng& rng) {
    MonomialIdeal I;
    int a = rng.uniform(1, 5), b = rng.uniform(1, 5);
    I.minimal.push_back({static_cast<Exponent>(a), 0});
    I.minimal.push_back({0, static_cast<Exponent>(b)});
    int extra = rng.uniform(0, 3);
    for (int t = 0; t < extra; ++t)
        I.minimal.push_back({static_cast<Exponent>(rng.uniform(0, 5)),
                             static_cast<Exponent>(rng.uniform(0, 5))});
    for (const auto& m : I.minimal)
        I.gens.push_back(Polynomial::term(m, 1));
    return I;
}

bool monomial_in(const MonomialIdeal& I, const Monomial& m) {
    for (const auto& g : I.minimal)
        if (m[0] >= g[0] && m[1] >= g[1]) return true;
    return false;
}

bool poly_in(const MonomialIdeal& I, const Polynomial& p) {
    for (const auto& [m, c] : p.terms())
        if (!monomial_in(I, m)) return false;
    return true;
}

long staircase_count(const MonomialIdeal& I) {
    long count = 0;
    for (Exponent i = 0; i < 8; ++i)
        for (Exponent j = 0; j < 8; ++j)
            if (!monomial_in(I, {i, j})) ++count;
    return count;
}

} // namespace

TEST_CASE("property: colength equals the staircase count") {
    Rng rng(101);
    for (int trial = 0; trial < 120; ++trial) {
        MonomialIdeal I = random_primary_monomial_ideal(rng);
        auto dim = colength(I.gens, 2, cfg);
        REQUIRE(dim.stable);
        REQUIRE(dim.value == staircase_count(I));

        // Monotonicity under adding generators.
        PolyVector more = I.gens;
        more.push_back(rng.germ(2, 4, 3));
        auto smaller = colength(more, 2, cfg);
        REQUIRE(smaller.finite() <= dim.finite());
    }
}

TEST_CASE("property: spans are variable closed with exact witnesses") {
    Rng rng(103);
    for (int trial = 0; trial < 120; ++trial) {
        int N = rng.uniform(3, 7);
        TruncatedRing ring(2, N);
        PolyVector gens;
        int count = rng.uniform(1, 3);
        for (int g = 0; g < count; ++g) gens.push_back(rng.polynomial(2, 5, 4));
        IdealSpan span(ring, gens);
        REQUIRE(span.verify_witnesses());
        for (const auto& row : span.rows().rows()) {
            Polynomial rep = ring.to_polynomial(row.vec);
            for (int i = 0; i < 2; ++i) {
                Polynomial shifted = rep * Polynomial::variable(2, i);
                REQUIRE(span.rows().contains(ring.to_vector(shifted)));
            }
        }
    }
}

TEST_CASE("property: colon generators match exact division into monomial ideals") {
    Rng rng(107);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        MonomialIdeal I = random_primary_monomial_ideal(rng);
        Polynomial p = rng.germ(2, 3, 3);
        if (p.is_zero()) p = P("x");
        int order = 6;
        PolyVector cands = colon_generators(I.gens, p, order, 2, cfg);

        // Soundness: every candidate honestly divides into I.
        for (const auto& g : cands)
            REQUIRE(poly_in(I, g * p));

        // Completeness: every monomial of (I : p) below the order is in the
        // candidate span.
        TruncatedRing ring(2, order);
        IdealSpan span(ring, cands);
        for (const auto& mu : ring.basis()) {
            Polynomial m = Polynomial::term(mu, 1);
            if (poly_in(I, m * p)) {
                REQUIRE(span.contains(m));
                ++checked;
            }
        }
    }
    REQUIRE(checked > 100);
}
