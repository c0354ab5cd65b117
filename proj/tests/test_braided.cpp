#include <doctest.h>

#include <tuple>

#include "qf/braided.hpp"

using namespace qf;

namespace {

DatumPtr taft11() {
    AbelianGroup G({11});
    return validate_datum(G, {G.generator(0)}, {G.character({1})}, {{2}});
}

DatumPtr a1a1_11() {
    AbelianGroup G({11});
    auto g = G.generator(0);
    return validate_datum(G, {g, g}, {G.character({2}), G.character({9})},
                          {{2, 0}, {0, 2}});
}

DatumPtr a2_z11sq() {
    AbelianGroup G({11, 11});
    return validate_datum(G, {G.element({1, 0}), G.element({0, 1})},
                          {G.character({2, 10}), G.character({10, 2})},
                          {{2, -1}, {-1, 2}});
}

DatumPtr b2_z5() {
    AbelianGroup G({5});
    auto g = G.generator(0);
    return validate_datum(G, {g, g}, {G.character({2}), G.character({4})},
                          {{2, -2}, {-1, 2}});
}

DatumPtr g2_z7() {
    // G_2 datum over Z/7: q_11 = q^6, q_22 = q^2, q_12 q_21 = q_11^{-1} = q.
    AbelianGroup G({7});
    auto g = G.generator(0);
    return validate_datum(G, {g, g}, {G.character({6}), G.character({2})},
                          {{2, -1}, {-3, 2}});
}

// Gaussian binomial by the product formula, the oracle for rank-1
// coproducts.
CycScalar gauss_binomial(long n, long k, const CycScalar& q) {
    CycScalar num(1), den(1);
    for (long i = 1; i <= k; ++i) {
        num *= CycScalar(1) - q.pow(n - k + i);
        den *= CycScalar(1) - q.pow(i);
    }
    return num / den;
}

// Triple tensor expansion for coassociativity checks.
using Triple = std::map<std::tuple<Word, Word, Word>, CycScalar>;

Triple delta_left(const BraidedPoly& p) { // (Delta (x) id) Delta
    Triple out;
    auto cp = coproduct(p);
    for (const auto& [pair, c] : cp.terms()) {
        auto inner = coproduct(BraidedPoly::monomial(p.ambient(), pair.first, CycScalar(1)));
        for (const auto& [pair2, e] : inner.terms()) {
            auto key = std::make_tuple(pair2.first, pair2.second, pair.second);
            auto& slot = out[key];
            slot += c * e;
            if (slot.is_zero()) out.erase(key);
        }
    }
    return out;
}

Triple delta_right(const BraidedPoly& p) { // (id (x) Delta) Delta
    Triple out;
    auto cp = coproduct(p);
    for (const auto& [pair, c] : cp.terms()) {
        auto inner = coproduct(BraidedPoly::monomial(p.ambient(), pair.second, CycScalar(1)));
        for (const auto& [pair2, e] : inner.terms()) {
            auto key = std::make_tuple(pair.first, pair2.first, pair2.second);
            auto& slot = out[key];
            slot += c * e;
            if (slot.is_zero()) out.erase(key);
        }
    }
    return out;
}

std::vector<Word> all_words(int theta, int maxlen) {
    std::vector<Word> out{Word()};
    size_t lo = 0;
    for (int len = 1; len <= maxlen; ++len) {
        size_t hi = out.size();
        for (size_t i = lo; i < hi; ++i)
            for (int a = 0; a < theta; ++a) out.push_back(out[i] + (char)a);
        lo = hi;
    }
    return out;
}

} // namespace

TEST_CASE("free algebra product and grading") {
    auto d = a2_z11sq();
    auto x1 = BraidedPoly::generator(d, 0);
    auto x2 = BraidedPoly::generator(d, 1);
    auto p = x1 * x2 - x2 * x1;
    CHECK(p.is_homogeneous());
    CHECK(p.degree() == std::vector<int>{1, 1});
    CHECK((x1 * x1 + x2).degrees().size() == 2);
    CHECK((p - p).is_zero());
    CHECK_THROWS_AS(BraidedPoly(d).degree(), ZeroInput);
    // associativity and unit of concatenation
    CHECK((x1 * x2) * x1 == x1 * (x2 * x1));
    CHECK(BraidedPoly::unit(d) * x1 == x1);
}

TEST_CASE("braided tensor product crossing factors") {
    auto d = a2_z11sq();
    auto x1 = BraidedPoly::generator(d, 0);
    auto x2 = BraidedPoly::generator(d, 1);
    auto one = BraidedPoly::unit(d);
    // (x_1 (x) 1)(1 (x) x_1) = x_1 (x) x_1: no crossing
    CHECK(braided_mul(TensorPoly::of(x1, one), TensorPoly::of(one, x1)) ==
          TensorPoly::of(x1, x1));
    // (1 (x) x_1)(x_2 (x) 1) = q_12 x_2 (x) x_1
    CHECK(braided_mul(TensorPoly::of(one, x1), TensorPoly::of(x2, one)) ==
          TensorPoly::of(x2, x1).scaled(d->q[0][1]));
    // unit leg
    auto t = TensorPoly::of(x1 * x2, x2);
    CHECK(braided_mul(TensorPoly::of(one, one), t) == t);
}

TEST_CASE("coproduct of generators and rank-1 powers") {
    auto d = taft11();
    auto x = BraidedPoly::generator(d, 0);
    auto one = BraidedPoly::unit(d);
    CHECK(coproduct(x) == TensorPoly::of(x, one) + TensorPoly::of(one, x));
    // q-binomial expansion against the product-formula oracle
    auto q = d->q[0][0];
    BraidedPoly power = one;
    for (long n = 1; n <= 6; ++n) {
        power = power * x;
        TensorPoly expect(d);
        for (long k = 0; k <= n; ++k)
            expect.add_term(Word(k, (char)0), Word(n - k, (char)0), gauss_binomial(n, k, q));
        CHECK(coproduct(power) == expect);
    }
    // the degree-2 case in closed form: 1 + q as middle coefficient
    auto two = coproduct(x * x);
    CHECK(two.terms().at({Word(1, (char)0), Word(1, (char)0)}) == CycScalar(1) + q);
}

TEST_CASE("coproduct is a braided algebra map and coassociative") {
    for (auto d : {a1a1_11(), a2_z11sq(), b2_z5()}) {
        auto words = all_words(d->theta(), 4);
        for (const auto& w : words)
            for (const auto& v : words) {
                if (w.size() + v.size() > 4) continue;
                auto pw = BraidedPoly::monomial(d, w, CycScalar(1));
                auto pv = BraidedPoly::monomial(d, v, CycScalar(1));
                CHECK(coproduct(pw * pv) == braided_mul(coproduct(pw), coproduct(pv)));
            }
        for (const auto& w : all_words(d->theta(), 5)) {
            auto p = BraidedPoly::monomial(d, w, CycScalar(1));
            CHECK(delta_left(p) == delta_right(p));
            // counit laws: the empty-left-leg part reproduces the word
            BraidedPoly left(d), right(d);
            auto cp = coproduct(p);
            for (const auto& [pair, c] : cp.terms()) {
                if (pair.first.empty()) left.add_term(pair.second, c);
                if (pair.second.empty()) right.add_term(pair.first, c);
            }
            CHECK(left == p);
            CHECK(right == p);
            // grading: leg degrees sum to the word degree
            auto dw = word_degree(w, d->theta());
            for (const auto& [pair, c] : cp.terms()) {
                auto dl = word_degree(pair.first, d->theta());
                auto dr = word_degree(pair.second, d->theta());
                for (int i = 0; i < d->theta(); ++i) CHECK(dl[i] + dr[i] == dw[i]);
            }
        }
    }
}

TEST_CASE("braided adjoint action") {
    auto d = a2_z11sq();
    auto x1 = BraidedPoly::generator(d, 0);
    auto x2 = BraidedPoly::generator(d, 1);
    CHECK(ad_c(0, x2) == x1 * x2 - (x2 * x1).scaled(d->q[0][1]));
    CHECK(ad_c(0, BraidedPoly::unit(d)).is_zero());
    CHECK(ad_c(0, x1) == (x1 * x1).scaled(CycScalar(1) - d->q[0][0]));
    // general homogeneous rule with the bilinear braiding
    auto y = x2 * x1 * x2;
    auto dy = y.degree();
    CHECK(ad_c(0, y) == x1 * y - (y * x1).scaled(d->q_bilinear({1, 0}, dy)));
    // bilinear extension over inhomogeneous input
    CHECK(ad_c(0, x2 + y) == ad_c(0, x2) + ad_c(0, y));
}

TEST_CASE("Serre elements by type") {
    auto u = a1a1_11();
    CHECK(serre_element(u, 0, 1) ==
          BraidedPoly::generator(u, 0) * BraidedPoly::generator(u, 1) -
              (BraidedPoly::generator(u, 1) * BraidedPoly::generator(u, 0)).scaled(u->q[0][1]));
    auto a = a2_z11sq();
    auto s = serre_element(a, 0, 1);
    CHECK(s.degree() == std::vector<int>{2, 1});
    CHECK(s.terms().size() == 3);
    auto g = g2_z7();
    CHECK(serre_element(g, 0, 1).degree() == std::vector<int>{2, 1});
    auto sg = serre_element(g, 1, 0);
    CHECK(sg.degree() == std::vector<int>{1, 4});
    CHECK(sg.terms().size() == 5);
    CHECK_THROWS_AS(serre_element(a, 1, 1), ZeroInput);
}

TEST_CASE("root vectors follow the convex splits") {
    auto a = a2_z11sq();
    // beta_2 = alpha_1 + alpha_2 sits at position 1
    auto xa = root_vector(a, 1);
    auto x1 = BraidedPoly::generator(a, 0);
    auto x2 = BraidedPoly::generator(a, 1);
    CHECK(xa == x1 * x2 - (x2 * x1).scaled(a->q[0][1]));
    CHECK(root_vector(a, 0) == x1);
    CHECK(root_vector(a, 2) == x2);
    CHECK(root_decomposition(*a, 1) == std::pair<int, int>{0, 2});
    CHECK_THROWS_AS(root_decomposition(*a, 0), NoDecomposition);

    auto b = b2_z5();
    // convex order: a_1, 2a_1+a_2, a_1+a_2, a_2
    CHECK(root_decomposition(*b, 2) == std::pair<int, int>{0, 3});
    CHECK(root_decomposition(*b, 1) == std::pair<int, int>{0, 2});
    auto y1 = BraidedPoly::generator(b, 0);
    auto y2 = BraidedPoly::generator(b, 1);
    auto mid = y1 * y2 - (y2 * y1).scaled(b->q[0][1]);
    CHECK(root_vector(b, 2) == mid);
    CHECK(root_vector(b, 1) == y1 * mid - (mid * y1).scaled(b->q_bilinear({1, 0}, {1, 1})));
    // homogeneity of every root vector, both data
    for (auto d : {a, b})
        for (int l = 0; l < d->roots.p(); ++l) {
            auto rv = root_vector(d, l);
            CHECK(rv.is_homogeneous());
            CHECK(rv.degree() == d->roots.positive_roots[l]);
        }
}

TEST_CASE("twist cocycle between equivalent braidings") {
    // asymmetric vs symmetric A_2 braiding over (Z/11)^2
    AbelianGroup G({11, 11});
    auto src = validate_datum(G, {G.element({1, 0}), G.element({0, 1})},
                              {G.character({2, 0}), G.character({9, 2})},
                              {{2, -1}, {-1, 2}});
    auto dst = validate_datum(G, {G.element({1, 0}), G.element({0, 1})},
                              {G.character({2, 10}), G.character({10, 2})},
                              {{2, -1}, {-1, 2}});
    REQUIRE(src->q[1][0] == CycScalar(1)); // genuinely asymmetric
    auto sigma = twist_cocycle(src, dst);
    CHECK(sigma.on_generators(0, 1) == src->q[0][1] / dst->q[0][1]);
    CHECK(sigma.on_generators(1, 0) == CycScalar(1));
    CHECK(sigma.on_generators(0, 0) == CycScalar(1));
    // bilinearity
    CHECK(sigma.on({2, 0}, {0, 1}) == sigma.on_generators(0, 1).pow(2));
    CHECK(sigma.on({0, 0}, {1, 1}) == CycScalar(1));
    // relation between sigma and the two bilinear braidings
    std::vector<std::vector<int>> vs = {{1, 0}, {0, 1}, {1, 1}, {2, 1}};
    for (const auto& v : vs)
        for (const auto& w : vs)
            CHECK(sigma.on(v, w) / sigma.on(w, v) ==
                  src->q_bilinear(v, w) / dst->q_bilinear(v, w));
    // identity twist
    auto id = twist_cocycle(src, src);
    auto p = serre_element(src, 0, 1);
    CHECK(twist_map(p, id) == p);
    // mismatched diagonal refuses
    auto other = validate_datum(G, {G.element({1, 0}), G.element({0, 1})},
                                {G.character({3, 4}), G.character({4, 3})},
                                {{2, -1}, {-1, 2}});
    CHECK_THROWS_AS(twist_cocycle(src, other), BraidingMismatch);
}

TEST_CASE("twist map: multiplicativity, commutators, inverse") {
    AbelianGroup G({11, 11});
    auto src = validate_datum(G, {G.element({1, 0}), G.element({0, 1})},
                              {G.character({2, 0}), G.character({9, 2})},
                              {{2, -1}, {-1, 2}});
    auto dst = validate_datum(G, {G.element({1, 0}), G.element({0, 1})},
                              {G.character({2, 10}), G.character({10, 2})},
                              {{2, -1}, {-1, 2}});
    auto sigma = twist_cocycle(src, dst);
    auto back = twist_cocycle(dst, src);
    auto x1 = BraidedPoly::generator(src, 0);
    auto x2 = BraidedPoly::generator(src, 1);
    // generators map to generators
    CHECK(twist_map(x1, sigma) == BraidedPoly::generator(dst, 0));
    // single crossing pair
    CHECK(twist_map(x1 * x2, sigma) ==
          (BraidedPoly::generator(dst, 0) * BraidedPoly::generator(dst, 1))
              .scaled(sigma.on_generators(0, 1)));
    // phi(xy) = sigma(deg x, deg y) phi(x) phi(y) on homogeneous samples
    std::vector<BraidedPoly> samples = {x1, x2, x1 * x2, x2 * x1 * x2, serre_element(src, 0, 1)};
    for (const auto& u : samples)
        for (const auto& v : samples) {
            auto lhs = twist_map(u * v, sigma);
            auto rhs = (twist_map(u, sigma) * twist_map(v, sigma))
                           .scaled(sigma.on(u.degree(), v.degree()));
            CHECK(lhs == rhs);
            // commutators transport with a single cocycle factor
            auto cl = twist_map(braided_commutator(u, v), sigma);
            auto cr = braided_commutator(twist_map(u, sigma), twist_map(v, sigma))
                          .scaled(sigma.on(u.degree(), v.degree()));
            CHECK(cl == cr);
            // round trip
            CHECK(twist_map(lhs, back) == u * v);
        }
}
