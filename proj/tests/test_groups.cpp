#include <doctest.h>

#include <set>

#include "qf/groups.hpp"

using namespace qf;

namespace {

// Cofactor-expansion determinant, the oracle for unimodularity.
Int det(const IntMatrix& M) {
    size_t n = M.size();
    if (n == 0) return Int(1);
    if (n == 1) return M[0][0];
    Int d(0);
    for (size_t j = 0; j < n; ++j) {
        if (M[0][j] == 0) continue;
        IntMatrix sub(n - 1, std::vector<Int>(n - 1));
        for (size_t r = 1; r < n; ++r) {
            size_t cc = 0;
            for (size_t c = 0; c < n; ++c)
                if (c != j) sub[r - 1][cc++] = M[r][c];
        }
        Int term = M[0][j] * det(sub);
        d += (j % 2 == 0) ? term : -term;
    }
    return d;
}

IntMatrix to_mat(std::vector<std::vector<long>> rows) {
    IntMatrix M;
    for (auto& r : rows) {
        M.emplace_back();
        for (long v : r) M.back().emplace_back(v);
    }
    return M;
}

void check_snf(const IntMatrix& A) {
    SmithResult s = smith_normal_form(A);
    CHECK(abs(det(s.U)) == 1);
    CHECK(abs(det(s.V)) == 1);
    IntMatrix S = mat_mul(mat_mul(s.U, A), s.V);
    for (size_t i = 0; i < S.size(); ++i)
        for (size_t j = 0; j < S[i].size(); ++j)
            CHECK(S[i][j] == (i == j ? s.diag[i] : Int(0)));
    for (size_t i = 0; i + 1 < s.diag.size(); ++i) {
        if (s.diag[i + 1] != 0) {
            REQUIRE(s.diag[i] != 0);
            CHECK(s.diag[i + 1] % s.diag[i] == 0);
        }
    }
}

} // namespace

TEST_CASE("smith normal form: transforms, diagonal, divisibility") {
    check_snf(to_mat({{2, 4}, {6, 8}}));
    check_snf(to_mat({{1, 0}, {0, 1}}));
    check_snf(to_mat({{0, 0}, {0, 0}}));
    check_snf(to_mat({{6, 10, 15}}));
    check_snf(to_mat({{2, 0}, {0, 3}, {0, 0}}));
    check_snf(to_mat({{-4, 6, 2}, {6, -12, 6}, {10, 4, -16}}));
    // known values
    auto s = smith_normal_form(to_mat({{2, 4}, {6, 8}}));
    CHECK(s.diag == std::vector<Int>{Int(2), Int(4)});
    s = smith_normal_form(to_mat({{6, 10, 15}}));
    CHECK(s.diag == std::vector<Int>{Int(1)});
}

TEST_CASE("invariant factor normalization") {
    CHECK(AbelianGroup({2, 3}).invariants() == std::vector<long>{6});
    CHECK(AbelianGroup({4, 6}).invariants() == std::vector<long>{2, 12});
    CHECK(AbelianGroup({1, 1, 5}).invariants() == std::vector<long>{5});
    CHECK(AbelianGroup({12, 90}).invariants() == std::vector<long>{6, 180});
    CHECK(AbelianGroup({11}).invariants() == std::vector<long>{11});
    CHECK(AbelianGroup(std::vector<long>{}).rank() == 0);
    CHECK(AbelianGroup({2, 3}) == AbelianGroup({6}));
    CHECK(AbelianGroup({2, 2}) != AbelianGroup({4}));
    CHECK(AbelianGroup({4, 6}).order() == 24);
    CHECK(AbelianGroup({4, 6}).exponent() == 12);
}

TEST_CASE("element arithmetic and orders") {
    AbelianGroup G({4, 12});
    auto x = G.element({3, 7});
    auto y = G.element({2, 10});
    CHECK((x * y) == G.element({1, 5}));
    CHECK((x * x.inverse()).is_identity());
    CHECK(x.pow(0).is_identity());
    CHECK(x.pow(5) == x * x * x * x * x);
    CHECK(x.pow(-1) == x.inverse());
    // order via brute force oracle
    for (const auto& g : G.elements()) {
        long o = 1;
        auto p = g;
        while (!p.is_identity()) {
            p = p * g;
            ++o;
        }
        CHECK(g.order() == (g.is_identity() ? 1 : o));
    }
    CHECK_THROWS_AS(G.element({1, 2, 3}), GroupMismatch);
    CHECK_THROWS_AS(x * AbelianGroup({5}).identity(), GroupMismatch);
}

TEST_CASE("character values against direct exponent computation") {
    AbelianGroup G({2, 6});
    auto ctx = ScalarContext::make(6);
    for (const auto& chi : G.characters())
        for (const auto& g : G.elements()) {
            // oracle: product of per-coordinate root-of-unity values
            auto expect = root_of_unity(ctx, chi.exps()[0] * g.exps()[0] * 3) *
                          root_of_unity(ctx, chi.exps()[1] * g.exps()[1]);
            CHECK(chi.eval(ctx, g) == expect);
        }
    // characters form a group of the same order, values multiplicative
    auto chi = G.character({1, 4});
    auto psi = G.character({0, 5});
    auto g = G.element({1, 3});
    CHECK((chi * psi).eval(ctx, g) == chi.eval(ctx, g) * psi.eval(ctx, g));
    CHECK(chi.inverse().eval(ctx, g) * chi.eval(ctx, g) == CycScalar(1));
    CHECK(chi.eval(ctx, G.identity()) == CycScalar(1));
    // context must contain the group exponent
    CHECK_THROWS_AS(chi.eval(ScalarContext::make(4), g), ContextMismatch);
}

TEST_CASE("character orthogonality: sum over group vanishes unless trivial") {
    AbelianGroup G({3, 3});
    auto ctx = ScalarContext::make(3);
    for (const auto& chi : G.characters()) {
        CycScalar sum;
        for (const auto& g : G.elements()) sum += chi.eval(ctx, g);
        if (chi.is_trivial())
            CHECK(sum == CycScalar(9));
        else
            CHECK(sum.is_zero());
    }
}

TEST_CASE("group algebra: ring axioms, counit, twist") {
    AbelianGroup G({6});
    auto ctx = ScalarContext::make(6);
    auto g = G.generator(0);
    GroupAlgElem a(g);
    GroupAlgElem b = GroupAlgElem(CycScalar(2), g * g) - GroupAlgElem(G.identity());
    GroupAlgElem c = GroupAlgElem(root_of_unity(ctx, 1), g.pow(3));
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a.pow(6) == GroupAlgElem::unit(G));
    CHECK((a - a).is_zero());
    CHECK(a.counit() == CycScalar(1));
    CHECK(b.counit() == CycScalar(1));
    CHECK((a * b).counit() == a.counit() * b.counit());
    // twist by a character is an algebra map
    auto chi = G.character({2});
    CHECK((a * b).twisted_by(chi) == a.twisted_by(chi) * b.twisted_by(chi));
    CHECK(a.twisted_by(chi) == GroupAlgElem(chi.eval(ctx, g), g));
    // idempotent split: (1/6) sum_k g^k is idempotent
    GroupAlgElem e;
    for (long k = 0; k < 6; ++k) e += GroupAlgElem(CycScalar(Rational(1, 6)), g.pow(k));
    CHECK(e * e == e);
}

TEST_CASE("group likes in the group algebra") {
    AbelianGroup G({4});
    CHECK(group_like_check(GroupAlgElem(G.element({3}))));
    CHECK(!group_like_check(GroupAlgElem(CycScalar(2), G.element({1}))));
    CHECK(!group_like_check(GroupAlgElem(G.element({1})) + GroupAlgElem(G.element({2}))));
    CHECK(!group_like_check(GroupAlgElem::zero()));
}

TEST_CASE("isomorphism enumeration: counts match automorphism group orders") {
    // |Aut(Z/11)| = 10
    CHECK(enumerate_isomorphisms(AbelianGroup({11}), AbelianGroup({11})).size() == 10);
    // |Aut(Z/2 x Z/2)| = |GL(2, F_2)| = 6
    CHECK(enumerate_isomorphisms(AbelianGroup({2, 2}), AbelianGroup({2, 2})).size() == 6);
    // |Aut(Z/4)| = 2, |Aut(Z/12)| = 4
    CHECK(enumerate_isomorphisms(AbelianGroup({4}), AbelianGroup({4})).size() == 2);
    CHECK(enumerate_isomorphisms(AbelianGroup({12}), AbelianGroup({12})).size() == 4);
    // |Aut(Z/2 x Z/4)| = 8
    CHECK(enumerate_isomorphisms(AbelianGroup({2, 4}), AbelianGroup({2, 4})).size() == 8);
    // non-isomorphic groups yield nothing
    CHECK(enumerate_isomorphisms(AbelianGroup({4}), AbelianGroup({2, 2})).empty());
    CHECK(enumerate_isomorphisms(AbelianGroup({11}), AbelianGroup({13})).empty());
}

TEST_CASE("isomorphisms are homomorphic bijections with working inverses") {
    AbelianGroup G({2, 4});
    auto isos = enumerate_isomorphisms(G, G);
    for (const auto& phi : isos) {
        std::set<GroupElement> image;
        for (const auto& x : G.elements()) image.insert(phi.apply(x));
        CHECK(image.size() == 8);
        for (const auto& x : G.elements())
            for (const auto& y : G.elements())
                CHECK(phi.apply(x * y) == phi.apply(x) * phi.apply(y));
        auto inv = phi.inverse();
        for (const auto& x : G.elements()) CHECK(inv.apply(phi.apply(x)) == x);
    }
    // pull back respects evaluation: (chi . phi)(x) = chi(phi(x))
    auto ctx = ScalarContext::make(4);
    for (const auto& phi : isos)
        for (const auto& chi : G.characters())
            for (const auto& x : G.elements())
                CHECK(phi.pull_back(chi).eval(ctx, x) == chi.eval(ctx, phi.apply(x)));
}
