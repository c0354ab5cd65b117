#include <doctest.h>

#include <random>

#include "qf/uqgroup.hpp"

using namespace qf;

namespace {

DatumPtr taft11() {
    AbelianGroup G({11});
    return validate_datum(G, {G.generator(0)}, {G.character({1})}, {{2}});
}

DatumPtr taft121() {
    AbelianGroup G({121});
    return validate_datum(G, {G.generator(0)}, {G.character({11})}, {{2}});
}

DatumPtr uqsl2_z11() {
    AbelianGroup G({11});
    auto g = G.generator(0);
    return validate_datum(G, {g, g}, {G.character({2}), G.character({9})},
                          {{2, 0}, {0, 2}});
}

DatumPtr uqsl2_z121() {
    AbelianGroup G({121});
    auto g = G.generator(0);
    return validate_datum(G, {g, g}, {G.character({22}), G.character({99})},
                          {{2, 0}, {0, 2}});
}

DatumPtr a2_z11sq() {
    AbelianGroup G({11, 11});
    return validate_datum(G, {G.element({1, 0}), G.element({0, 1})},
                          {G.character({2, 10}), G.character({10, 2})},
                          {{2, -1}, {-1, 2}});
}

// A_2 x A_1 with the third generator linkable to the first.
DatumPtr a2a1_z11cube() {
    AbelianGroup G({11, 11, 11});
    return validate_datum(
        G,
        {G.element({1, 0, 0}), G.element({0, 1, 0}), G.element({1, 0, 0})},
        {G.character({2, 10, 0}), G.character({10, 2, 0}), G.character({9, 1, 0})},
        {{2, -1, 0}, {-1, 2, 0}, {0, 0, 2}});
}

// A_1 x A_1 over Z/143 with component orders 11 and 13.
DatumPtr mixed_z143() {
    AbelianGroup G({11, 13});
    return validate_datum(G, {G.element({13}), G.element({11})},
                          {G.character({13}), G.character({11})},
                          {{2, 0}, {0, 2}});
}

UAlgebraPtr plain(const DatumPtr& d) {
    return build_u(d, validate_linking(d, {}), validate_mu(d, {}));
}

ExpVec ev(std::vector<int> v) { return v; }

// Pascal recurrence, well defined at roots of unity of any order.
CycScalar gauss_binomial(long n, long k, const CycScalar& q) {
    if (k < 0 || k > n) return CycScalar(0);
    std::vector<CycScalar> row(k + 1, CycScalar(0));
    row[0] = CycScalar(1);
    for (long i = 1; i <= n; ++i)
        for (long j = std::min(i, k); j >= 1; --j)
            row[j] = row[j] * q.pow(j) + row[j - 1];
    return row[k];
}

UBasisKey sample_key(const UAlgebraPtr& A, std::mt19937_64& rng, int max_exp) {
    const auto& bounds = A->exponent_bounds();
    ExpVec a(bounds.size(), 0);
    for (size_t l = 0; l < bounds.size(); ++l) {
        long hi = std::min<long>(bounds[l] - 1, max_exp);
        std::uniform_int_distribution<long> dist(0, hi);
        a[l] = (int)dist(rng);
    }
    const AbelianGroup& G = A->datum()->group;
    std::vector<long> e(G.rank(), 0);
    for (size_t i = 0; i < e.size(); ++i) {
        std::uniform_int_distribution<long> dist(0, G.invariants()[i] - 1);
        e[i] = dist(rng);
    }
    return {a, G.element(e)};
}

UElem sample_elem(const UAlgebraPtr& A, std::mt19937_64& rng, int max_exp) {
    auto k = sample_key(A, rng, max_exp);
    UElem r(A);
    r.add_term(k.first, k.second, CycScalar::one(A->datum()->ctx));
    return r;
}

long weighted_degree(const Datum& d, const ExpVec& a) {
    long s = 0;
    for (size_t l = 0; l < a.size(); ++l) s += (long)a[l] * d.roots.height((int)l);
    return s;
}

} // namespace

TEST_CASE("dimensions match the exponent and group count") {
    auto t = plain(taft11());
    CHECK(t->dimension() == 121);
    auto u = plain(uqsl2_z11());
    CHECK(u->dimension() == 1331);
    auto a2 = plain(a2_z11sq());
    CHECK(a2->dimension() == 161051);  // 11^5

    // odometer over reduced exponents times group order
    for (const auto& A : {t, u, a2}) {
        Int count = A->datum()->group.order();
        for (long n : A->exponent_bounds()) count *= n;
        CHECK(count == A->dimension());
    }
    CHECK(t->exponent_bounds() == std::vector<long>{11});
    CHECK(u->exponent_bounds() == std::vector<long>{11, 11});
    CHECK(a2->exponent_bounds() == std::vector<long>{11, 11, 11});
}

TEST_CASE("root vector powers vanish without parameters") {
    auto A = plain(taft11());
    UElem x5 = UElem::monomial(A, ev({5}), A->datum()->group.identity(), CycScalar(1));
    UElem x6 = UElem::monomial(A, ev({6}), A->datum()->group.identity(), CycScalar(1));
    CHECK(multiply(x5, x6).is_zero());
    CHECK(UElem::monomial(A, ev({11}), A->datum()->group.identity(), CycScalar(1))
              .is_zero());
    CHECK(multiply(x5, x5).terms().begin()->first.first == ev({10}));
}

TEST_CASE("linking relation on the two-component rank two algebra") {
    auto d = uqsl2_z11();
    auto A = build_u(d, validate_linking(d, {{{0, 1}, CycScalar(1)}}),
                     validate_mu(d, {}));
    UElem x1 = UElem::generator(A, 0);
    UElem x2 = UElem::generator(A, 1);
    CycScalar q12 = d->q[0][1];
    GroupElement gsq = d->g[0] * d->g[1];

    UElem lhs = multiply(x1, x2) - multiply(x2, x1).scaled(q12);
    UElem rhs = UElem::unit(A) - UElem::group_term(A, gsq);
    CHECK(lhs == rhs);

    // reversed product, derived by hand from the same relation
    UElem x1x2 = multiply(x1, x2);
    UElem expect = (x1x2 - UElem::unit(A) + UElem::group_term(A, gsq))
                       .scaled(q12.inverse());
    CHECK(multiply(x2, x1) == expect);
}

TEST_CASE("cross-component linking in the rank three mixed algebra") {
    auto d = a2a1_z11cube();
    REQUIRE(linkable(*d, 0, 2));
    auto A = build_u(d, validate_linking(d, {{{0, 2}, CycScalar(1)}}),
                     validate_mu(d, {}));
    UElem x1 = UElem::generator(A, 0);
    UElem x3 = UElem::generator(A, 2);
    CycScalar q13 = d->q[0][2];
    UElem lhs = multiply(x1, x3) - multiply(x3, x1).scaled(q13);
    UElem rhs = (UElem::unit(A) - UElem::group_term(A, d->g[0] * d->g[2]));
    CHECK(lhs == rhs);

    // the unlinked pair q-commutes
    UElem x2 = UElem::generator(A, 1);
    CycScalar q23 = d->q[1][2];
    CHECK(multiply(x2, x3) == multiply(x3, x2).scaled(q23));
}

TEST_CASE("root vector powers reduce to the parameter values") {
    auto d = taft121();
    auto A = build_u(d, validate_linking(d, {}),
                     validate_mu(d, {{{1}, CycScalar(5)}}));
    GroupElement h = d->g[0].pow(11);
    UElem expect = UElem::unit(A).scaled(CycScalar(5)) -
                   UElem::group_term(A, h).scaled(CycScalar(5));

    UElem x1 = UElem::generator(A, 0);
    UElem x10 = UElem::monomial(A, ev({10}), d->group.identity(), CycScalar(1));
    CHECK(multiply(x10, x1) == expect);
    CHECK(UElem::monomial(A, ev({11}), d->group.identity(), CycScalar(1)) == expect);
    CHECK(UElem::monomial(A, ev({22}), d->group.identity(), CycScalar(1)) ==
          multiply(expect, expect));

    auto d2 = uqsl2_z121();
    auto B = build_u(d2, validate_linking(d2, {{{0, 1}, CycScalar(1)}}),
                     validate_mu(d2, {{{1, 0}, CycScalar(5)}, {{0, 1}, CycScalar(7)}}));
    GroupElement h2 = d2->g[0].pow(11);
    CHECK(UElem::monomial(B, ev({11, 0}), d2->group.identity(), CycScalar(1)) ==
          UElem::unit(B).scaled(CycScalar(5)) -
              UElem::group_term(B, h2).scaled(CycScalar(5)));
    CHECK(UElem::monomial(B, ev({0, 11}), d2->group.identity(), CycScalar(1)) ==
          UElem::unit(B).scaled(CycScalar(7)) -
              UElem::group_term(B, h2).scaled(CycScalar(7)));
}

TEST_CASE("coproduct and antipode on generators") {
    auto d = uqsl2_z11();
    auto A = build_u(d, validate_linking(d, {{{0, 1}, CycScalar(1)}}),
                     validate_mu(d, {}));
    ExpVec zero = ev({0, 0});
    for (int i = 0; i < 2; ++i) {
        UElem xi = UElem::generator(A, i);
        ExpVec e = zero;
        e[(size_t)d->roots.simple_position[(size_t)i]] = 1;
        UTensor expect(A);
        expect.add_term({zero, d->g[(size_t)i]}, {e, d->group.identity()},
                        CycScalar::one(d->ctx));
        expect.add_term({e, d->group.identity()}, {zero, d->group.identity()},
                        CycScalar::one(d->ctx));
        CHECK(coproduct_u(xi) == expect);

        UElem s = UElem::monomial(A, e, d->g[(size_t)i].inverse(),
                                  -d->q[(size_t)i][(size_t)i].inverse());
        CHECK(antipode_u(xi) == s);
    }
    GroupElement g = d->g[0];
    CHECK(coproduct_u(UElem::group_term(A, g)) ==
          UTensor::of(UElem::group_term(A, g), UElem::group_term(A, g)));
    CHECK(antipode_u(UElem::group_term(A, g)) == UElem::group_term(A, g.inverse()));
    CHECK(antipode_u(UElem::unit(A)) == UElem::unit(A));
}

TEST_CASE("rank one coproduct follows the q-binomials") {
    auto d = taft121();
    auto A = build_u(d, validate_linking(d, {}),
                     validate_mu(d, {{{1}, CycScalar(5)}}));
    CycScalar q = d->q[0][0];
    GroupElement g = d->g[0];
    for (int a : {1, 2, 3, 4}) {
        UTensor expect(A);
        for (int k = 0; k <= a; ++k)
            expect.add_term({ev({a - k}), g.pow(k)}, {ev({k}), d->group.identity()},
                            gauss_binomial(a, k, q));
        UElem xa = UElem::monomial(A, ev({a}), d->group.identity(), CycScalar(1));
        CHECK(coproduct_u(xa) == expect);
    }
}

TEST_CASE("multiplication is associative") {
    std::mt19937_64 rng(20260815);
    auto d1 = uqsl2_z121();
    auto A1 = build_u(d1, validate_linking(d1, {{{0, 1}, CycScalar(1)}}),
                      validate_mu(d1, {{{1, 0}, CycScalar(5)}, {{0, 1}, CycScalar(7)}}));
    auto A2 = plain(a2_z11sq());
    auto d3 = a2a1_z11cube();
    auto A3 = build_u(d3, validate_linking(d3, {{{0, 2}, CycScalar(1)}}),
                      validate_mu(d3, {}));
    struct Run {
        UAlgebraPtr A;
        int trials;
        int max_exp;
    };
    std::vector<Run> runs = {{A1, 100, 10}, {A2, 60, 4}, {A3, 40, 2}};
    for (const auto& run : runs) {
        for (int t = 0; t < run.trials; ++t) {
            UElem x = sample_elem(run.A, rng, run.max_exp);
            UElem y = sample_elem(run.A, rng, run.max_exp);
            UElem z = sample_elem(run.A, rng, run.max_exp);
            CHECK(multiply(multiply(x, y), z) == multiply(x, multiply(y, z)));
        }
    }
}

TEST_CASE("products stay reduced and canonical") {
    std::mt19937_64 rng(7);
    auto d = uqsl2_z121();
    auto A = build_u(d, validate_linking(d, {{{0, 1}, CycScalar(1)}}),
                     validate_mu(d, {{{1, 0}, CycScalar(5)}, {{0, 1}, CycScalar(7)}}));
    for (int t = 0; t < 50; ++t) {
        UElem p = multiply(sample_elem(A, rng, 10), sample_elem(A, rng, 10));
        for (const auto& [k, c] : p.terms()) {
            CHECK(!c.is_zero());
            for (size_t l = 0; l < k.first.size(); ++l) {
                CHECK(k.first[l] >= 0);
                CHECK(k.first[l] < A->exponent_bounds()[l]);
            }
        }
    }
}

TEST_CASE("top degree part matches the parameter-free algebra") {
    std::mt19937_64 rng(20260815);
    auto d = uqsl2_z121();
    auto A = build_u(d, validate_linking(d, {{{0, 1}, CycScalar(1)}}),
                     validate_mu(d, {{{1, 0}, CycScalar(5)}, {{0, 1}, CycScalar(7)}}));
    auto A0 = plain(d);
    for (int t = 0; t < 60; ++t) {
        UBasisKey ka = sample_key(A, rng, 10);
        UBasisKey kb = sample_key(A, rng, 10);
        UElem a(A), b(A), a0(A0), b0(A0);
        a.add_term(ka.first, ka.second, CycScalar(1));
        b.add_term(kb.first, kb.second, CycScalar(1));
        a0.add_term(ka.first, ka.second, CycScalar(1));
        b0.add_term(kb.first, kb.second, CycScalar(1));
        long top = weighted_degree(*d, ka.first) + weighted_degree(*d, kb.first);

        UElem ab = multiply(a, b);
        std::map<UBasisKey, CycScalar> top_part;
        for (const auto& [k, c] : ab.terms())
            if (weighted_degree(*d, k.first) == top) top_part.emplace(k, c);
        CHECK(top_part == multiply(a0, b0).terms());
    }
}

TEST_CASE("parameter-free products of root monomials stay in the graded span") {
    std::mt19937_64 rng(11);
    auto A = plain(a2_z11sq());
    const Datum& d = *A->datum();
    Int span = 1;
    for (long n : A->exponent_bounds()) span *= n;
    CHECK(span == 1331);  // 11^3 monomials in the x generators alone
    for (int t = 0; t < 40; ++t) {
        UBasisKey ka = sample_key(A, rng, 10);
        UBasisKey kb = sample_key(A, rng, 10);
        UElem a(A), b(A);
        a.add_term(ka.first, d.group.identity(), CycScalar(1));
        b.add_term(kb.first, d.group.identity(), CycScalar(1));
        long total = weighted_degree(d, ka.first) + weighted_degree(d, kb.first);
        UElem ab = multiply(a, b);
        for (const auto& [k, c] : ab.terms()) {
            CHECK(k.second.is_identity());
            CHECK(weighted_degree(d, k.first) == total);
        }
    }
}

TEST_CASE("counit is an algebra map") {
    std::mt19937_64 rng(3);
    auto d = uqsl2_z121();
    auto A = build_u(d, validate_linking(d, {{{0, 1}, CycScalar(1)}}),
                     validate_mu(d, {{{1, 0}, CycScalar(5)}, {{0, 1}, CycScalar(7)}}));
    for (int t = 0; t < 30; ++t) {
        UElem x = sample_elem(A, rng, 10);
        UElem y = sample_elem(A, rng, 10);
        CHECK(multiply(x, y).counit() == x.counit() * y.counit());
    }
    CHECK(UElem::unit(A).counit().is_one());
    CHECK(UElem::generator(A, 0).counit().is_zero());
}

TEST_CASE("hopf verification passes on the example algebras") {
    auto dt = taft121();
    auto At = build_u(dt, validate_linking(dt, {}),
                      validate_mu(dt, {{{1}, CycScalar(5)}}));
    HopfReport rt = verify_hopf(At, 30);
    for (const auto& c : rt.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.ok);
    }
    CHECK(rt.ok);

    auto du = uqsl2_z121();
    auto Au = build_u(du, validate_linking(du, {{{0, 1}, CycScalar(1)}}),
                      validate_mu(du, {{{1, 0}, CycScalar(5)}, {{0, 1}, CycScalar(7)}}));
    HopfReport ru = verify_hopf(Au, 20);
    for (const auto& c : ru.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.ok);
    }
    CHECK(ru.ok);

    auto Aa = plain(a2_z11sq());
    HopfReport ra = verify_hopf(Aa, 8);
    for (const auto& c : ra.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.ok);
    }
    CHECK(ra.ok);
}

TEST_CASE("prime divisors of the dimension are witnessed in the group") {
    auto dt = taft121();
    auto At = build_u(dt, validate_linking(dt, {}),
                      validate_mu(dt, {{{1}, CycScalar(5)}}));
    CauchyReport rt = cauchy_check(At);
    CHECK(rt.ok);
    REQUIRE(rt.entries.size() == 1);
    CHECK(rt.entries[0].prime == 11);
    CHECK(rt.entries[0].witness.order() == 11);

    auto Am = plain(mixed_z143());
    CHECK(Am->dimension() == 11 * 13 * 143);
    CauchyReport rm = cauchy_check(Am);
    CHECK(rm.ok);
    REQUIRE(rm.entries.size() == 2);
    CHECK(rm.entries[0].prime == 11);
    CHECK(rm.entries[0].witness.order() == 11);
    CHECK(rm.entries[1].prime == 13);
    CHECK(rm.entries[1].witness.order() == 13);
}

TEST_CASE("mismatched algebras are rejected") {
    auto d = uqsl2_z11();
    auto A = build_u(d, validate_linking(d, {{{0, 1}, CycScalar(1)}}),
                     validate_mu(d, {}));
    auto B = plain(d);
    CHECK_THROWS_AS(multiply(UElem::generator(A, 0), UElem::generator(B, 1)),
                    AmbientMismatch);
    CHECK_THROWS_AS(UTensor::of(UElem::unit(A), UElem::unit(B)), AmbientMismatch);
    CHECK_THROWS_AS((void)(UElem::unit(A) == UElem::unit(B)), AmbientMismatch);

    CHECK_THROWS_AS(UElem::monomial(A, ev({1}), d->group.identity(), CycScalar(1)),
                    Error);
    AbelianGroup H({7});
    CHECK_THROWS_AS(UElem::monomial(A, ev({1, 0}), H.identity(), CycScalar(1)),
                    GroupMismatch);
    CHECK_THROWS_AS(UElem::generator(A, 5), Error);
}
