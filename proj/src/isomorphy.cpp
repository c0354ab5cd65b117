#include "qf/isomorphy.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qf/errors.hpp"
#include "qf/quotients.hpp"

namespace qf {

namespace {

long lcm_contexts(long L, const std::vector<CycScalar>& xs) {
    for (const auto& x : xs) L = lcm_long(L, x.context()->m);
    return L;
}

std::vector<CycScalar> lift_all(const std::vector<CycScalar>& xs, long L) {
    auto ctx = ScalarContext::make(L);
    std::vector<CycScalar> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(x.lift_to(ctx));
    return out;
}

std::optional<Int> exact_int_root(const Int& v, long d) {
    Int r;
    int exact = mpz_root(r.get_mpz_t(), v.get_mpz_t(), (unsigned long)d);
    if (!exact) return std::nullopt;
    return r;
}

// x = q * zeta_n^j with q rational > 0 and gcd(j, n) = 1; nullopt when x
// is not rational times a root of unity.  The torsion of Q(zeta_m)^* is
// generated by -1 and zeta_m, i.e. it is cyclic of order M below.
struct TorsionSplit {
    Rational q;
    long n = 1;
    long j = 0;
};

std::optional<TorsionSplit> torsion_split(const CycScalar& x) {
    long m = x.context()->m;
    long M = (m % 2 == 0) ? m : 2 * m;
    for (long k = 0; k < M; ++k) {
        CycScalar z;
        if (m % 2 == 0) {
            z = CycScalar::root_of_unity(x.context(), k);
        } else {
            // zeta_{2m}^k = (-1)^k * zeta_m^{k (m+1)/2}
            z = CycScalar::root_of_unity(x.context(), mod_reduce(k * ((m + 1) / 2), m));
            if (k % 2 == 1) z = -z;
        }
        auto r = (x * z.inverse()).as_rational();
        if (!r) continue;
        Rational q = *r;
        long kk = k;
        if (q < 0) {
            q = -q;
            kk = (kk + M / 2) % M; // M is even, -1 = zeta_M^{M/2}
        }
        long g = std::gcd(kk, M);
        TorsionSplit out;
        out.q = q;
        out.n = M / g;
        out.j = (kk / g) % out.n;
        return out;
    }
    return std::nullopt;
}

// A d-th root of zeta_n^j (gcd(j, n) = 1) as (order, exponent): with
// d = a b, a coprime to n and b carrying the primes of n, the element
// zeta_{n b}^{j a^{-1} mod n} works; when b = 1 no field enlargement is
// needed at all.
std::pair<long, long> torsion_root(long n, long j, long d) {
    long b = 1, rest = d;
    while (true) {
        long g = std::gcd(rest, n);
        if (g == 1) break;
        b = checked_long(Int(b) * g);
        rest /= g;
    }
    if (n == 1) return {b, 0};
    Int ainv;
    if (mpz_invert(ainv.get_mpz_t(), Int(rest % n).get_mpz_t(), Int(n).get_mpz_t()) == 0)
        throw ConsistencyFailure("expected a unit modulo the torsion order");
    long e = checked_long((Int(j) * ainv) % n);
    return {checked_long(Int(n) * b), e};
}

std::optional<CycScalar> cyclotomic_root(const CycScalar& x, long d) {
    if (d <= 0) throw ZeroInput("root index must be positive");
    if (d == 1) return x;
    auto split = torsion_split(x);
    if (!split) return std::nullopt;
    auto num = exact_int_root(split->q.get_num(), d);
    auto den = exact_int_root(split->q.get_den(), d);
    if (!num || !den) return std::nullopt;
    auto [ord, e] = torsion_root(split->n, split->j, d);
    long L = lcm_long(x.context()->m, ord);
    auto ctx = ScalarContext::make(L);
    CycScalar y = CycScalar::from_rational(ctx, Rational(*num) / Rational(*den));
    if (e != 0 || ord > 1) y = y * CycScalar::root_of_unity(ctx, (L / ord) * e);
    return y;
}

} // namespace

void MonomialSystem::add_row(std::vector<long> exps, const CycScalar& c) {
    if ((long)exps.size() != unknowns)
        throw ZeroInput("monomial row length does not match the unknown count");
    if (c.is_zero())
        throw ZeroConstant("monomial constraint with zero right-hand side");
    rows.push_back(std::move(exps));
    consts.push_back(c);
}

MonomialSolution solve_monomial(const MonomialSystem& sys) {
    const long n = sys.unknowns;
    const long R = (long)sys.rows.size();
    if (n < 0) throw ZeroInput("negative unknown count");
    if ((long)sys.consts.size() != R)
        throw ZeroInput("constant count does not match the row count");
    for (const auto& row : sys.rows)
        if ((long)row.size() != n)
            throw ZeroInput("monomial row length does not match the unknown count");
    for (const auto& c : sys.consts)
        if (c.is_zero()) throw ZeroConstant("monomial constraint with zero right-hand side");

    MonomialSolution out;
    if (R == 0) {
        out.solvable = true;
        out.has_witness = true;
        out.witness.assign((size_t)n, CycScalar(1));
        return out;
    }

    IntMatrix A((size_t)R, std::vector<Int>((size_t)n));
    for (long r = 0; r < R; ++r)
        for (long i = 0; i < n; ++i) A[(size_t)r][(size_t)i] = sys.rows[(size_t)r][(size_t)i];
    auto snf = smith_normal_form(A);

    // Transformed constants c'_r = prod_j c_j^{U[r][j]}; rows of U beyond
    // the rank span the left kernel of E, so solvability is exactly
    // c'_r = 1 there.
    long L = lcm_contexts(1, sys.consts);
    auto ctxL = ScalarContext::make(L);
    auto cl = lift_all(sys.consts, L);
    std::vector<CycScalar> cp((size_t)R, CycScalar::one(ctxL));
    for (long r = 0; r < R; ++r)
        for (long j = 0; j < R; ++j) {
            long e = checked_long(snf.U[(size_t)r][(size_t)j]);
            if (e != 0) cp[(size_t)r] *= cl[(size_t)j].pow(e);
        }

    for (long r = snf.rank; r < R; ++r) {
        if (!cp[(size_t)r].is_one()) {
            out.solvable = false;
            out.kernel = snf.U[(size_t)r];
            out.kernel_value = cp[(size_t)r];
            return out;
        }
    }
    out.solvable = true;

    // Diagonal system t_r^{diag_r} = c'_r; free coordinates stay 1.
    std::vector<CycScalar> t((size_t)n, CycScalar(1));
    for (long r = 0; r < snf.rank && r < n; ++r) {
        long dr = checked_long(snf.diag[(size_t)r]);
        auto root = cyclotomic_root(cp[(size_t)r], dr);
        if (!root) {
            out.has_witness = false;
            out.note = "a required " + std::to_string(dr) + "-th root of " +
                       cp[(size_t)r].to_string() +
                       " is not rational times a root of unity";
            return out;
        }
        t[(size_t)r] = *root;
    }

    long LW = lcm_contexts(L, t);
    auto ctxW = ScalarContext::make(LW);
    auto tw = lift_all(t, LW);
    std::vector<CycScalar> s((size_t)n, CycScalar::one(ctxW));
    for (long i = 0; i < n; ++i)
        for (long r = 0; r < n; ++r) {
            long e = checked_long(snf.V[(size_t)i][(size_t)r]);
            if (e != 0) s[(size_t)i] *= tw[(size_t)r].pow(e);
        }

    auto cw = lift_all(sys.consts, LW);
    for (long r = 0; r < R; ++r) {
        CycScalar lhs = CycScalar::one(ctxW);
        for (long i = 0; i < n; ++i)
            if (sys.rows[(size_t)r][(size_t)i] != 0)
                lhs *= s[(size_t)i].pow(sys.rows[(size_t)r][(size_t)i]);
        if (lhs != cw[(size_t)r])
            throw ConsistencyFailure("monomial witness failed substitution");
    }
    out.witness = std::move(s);
    out.has_witness = true;
    return out;
}

namespace {

// Coordinates of a component root with the letters permuted by sigma
// (local indices, block starting at `first`).
std::vector<int> permuted_coords(const std::vector<int>& v, int first,
                                 const std::vector<int>& sigma) {
    std::vector<int> out(v.size(), 0);
    for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        long local = (long)i - first;
        if (local < 0 || local >= (long)sigma.size())
            throw ZeroInput("root leaves the component block");
        out[(size_t)(first + sigma[(size_t)local])] = v[i];
    }
    return out;
}

// The root vector of position l rebuilt with simple letters permuted by
// sigma; the bracket scalar is the braiding on the permuted degrees, so
// this is the image of the source root vector under x_i -> x_{sigma(i)}.
RElem permuted_root_vector(const DatumPtr& d, int first,
                           const std::vector<int>& sigma, int l, long cap,
                           std::map<int, RElem>& memo) {
    auto it = memo.find(l);
    if (it != memo.end()) return it->second;
    RElem out;
    if (d->roots.height(l) == 1) {
        int simple = -1;
        for (int i = 0; i < d->theta(); ++i)
            if (d->roots.simple_position[(size_t)i] == l) { simple = i; break; }
        int target = first + sigma[(size_t)(simple - first)];
        ExpVec e((size_t)d->roots.p(), 0);
        e[(size_t)d->roots.simple_position[(size_t)target]] = 1;
        out = RElem::monomial(d, e, CycScalar::one(d->ctx));
    } else {
        auto [k, m] = root_decomposition(*d, l);
        RElem u = permuted_root_vector(d, first, sigma, k, cap, memo);
        RElem v = permuted_root_vector(d, first, sigma, m, cap, memo);
        CycScalar qq = d->q_bilinear(permuted_coords(d->roots.positive_roots[(size_t)k], first, sigma),
                                     permuted_coords(d->roots.positive_roots[(size_t)m], first, sigma));
        out = mul_relems(u, v, cap) - mul_relems(v, u, cap).scaled(qq);
    }
    memo.emplace(l, out);
    return out;
}

} // namespace

std::map<std::vector<int>, CycScalar> iso_constants(const DatumPtr& d, int comp,
                                                    const std::vector<int>& sigma,
                                                    int alpha_pos, long cap) {
    if (comp < 0 || comp >= (int)d->cartan.components.size())
        throw ZeroInput("component index out of range");
    const auto& cJ = d->cartan.components[(size_t)comp];
    if ((long)sigma.size() != (long)cJ.rank)
        throw ZeroInput("sigma length does not match the component rank");
    std::vector<char> used((size_t)cJ.rank, 0);
    for (int v : sigma) {
        if (v < 0 || v >= cJ.rank || used[(size_t)v])
            throw Inconsistent("sigma is not a permutation of the component");
        used[(size_t)v] = 1;
    }
    for (int i = 0; i < cJ.rank; ++i)
        for (int j = 0; j < cJ.rank; ++j)
            if (d->cartan.a[(size_t)(cJ.first + i)][(size_t)(cJ.first + j)] !=
                d->cartan.a[(size_t)(cJ.first + sigma[(size_t)i])][(size_t)(cJ.first + sigma[(size_t)j])])
                throw Inconsistent("sigma is not a diagram automorphism of the component");
    if (alpha_pos < 0 || alpha_pos >= d->roots.p() ||
        d->roots.root_component[(size_t)alpha_pos] != comp)
        throw ZeroInput("alpha is not a positive root of the component");

    long capv = cap < 0 ? default_degree_cap(*d) : cap;
    long N = d->component_order[(size_t)comp];
    long need = N * d->roots.height(alpha_pos);
    if (need > capv) {
        std::ostringstream os;
        os << "constants need degree " << need << " but the cap is " << capv;
        throw DegreeCapExceeded(os.str());
    }

    std::map<int, RElem> memo;
    RElem f = permuted_root_vector(d, cJ.first, sigma, alpha_pos, capv, memo);
    RElem pw = RElem::unit(d);
    for (long k = 0; k < N; ++k) pw = mul_relems(pw, f, capv);

    auto positions = component_positions(*d, comp);
    std::map<int, size_t> local;
    for (size_t t = 0; t < positions.size(); ++t) local[positions[t]] = t;

    std::map<std::vector<int>, CycScalar> out;
    for (const auto& [e, coeff] : pw.terms()) {
        std::vector<int> a(positions.size(), 0);
        for (size_t l = 0; l < e.size(); ++l) {
            if (!e[l]) continue;
            auto hit = local.find((int)l);
            if (hit == local.end() || e[l] % N != 0)
                throw NotInK("permuted power expansion leaves the central monomial span");
            a[hit->second] = (int)(e[l] / N);
        }
        out[a] = coeff;
    }
    return out;
}

namespace {

GroupAlgElem map_group_alg(const GroupIso& phi, const GroupAlgElem& u) {
    GroupAlgElem out;
    for (const auto& [g, c] : u.terms()) out.add_term(phi.apply(g), c);
    return out;
}

// Ratio r with lhs == r * rhs, for nonzero group-algebra elements.
std::optional<CycScalar> proportion(const GroupAlgElem& lhs, const GroupAlgElem& rhs) {
    const auto& [g0, c0] = *rhs.terms().begin();
    CycScalar r = lhs.coefficient(g0) / c0;
    if (r.is_zero()) return std::nullopt;
    if (lhs != rhs.scaled(r)) return std::nullopt;
    return r;
}

std::optional<CycScalar> proportion_u(const UElem& lhs, const UElem& rhs) {
    const auto& [k0, c0] = *rhs.terms().begin();
    CycScalar r = CycScalar(0);
    auto it = lhs.terms().find(k0);
    if (it == lhs.terms().end()) return std::nullopt;
    r = it->second / c0;
    if (r.is_zero()) return std::nullopt;
    if (lhs != rhs.scaled(r)) return std::nullopt;
    return r;
}

UElem group_alg_to_u(const UAlgebraPtr& A, const GroupAlgElem& u) {
    UElem out(A);
    ExpVec zero(A->exponent_bounds().size(), 0);
    for (const auto& [g, c] : u.terms()) out.add_term(zero, g, c);
    return out;
}

UElem conj_by(const UAlgebraPtr& A, const GroupElement& g, const UElem& y) {
    return multiply(multiply(UElem::group_term(A, g), y),
                    UElem::group_term(A, g.inverse()));
}

// Skew commutator z y - (h y h^{-1}) z inside the quotient algebra.
UElem skew_bracket(const UAlgebraPtr& A, const UElem& z, const GroupElement& h,
                   const UElem& y) {
    return multiply(z, y) - multiply(conj_by(A, h, y), z);
}

// Image of the source root vector at position l under x'_i -> s_i x_{tau(i)},
// built by replaying the source bracket recipe with source coefficients.
UElem mapped_root_vector(const DatumPtr& dsrc, const UAlgebraPtr& dst,
                         const std::vector<int>& tau,
                         const std::vector<CycScalar>& s, int l) {
    if (dsrc->roots.height(l) == 1) {
        int simple = -1;
        for (int i = 0; i < dsrc->theta(); ++i)
            if (dsrc->roots.simple_position[(size_t)i] == l) { simple = i; break; }
        return UElem::generator(dst, tau[(size_t)simple]).scaled(s[(size_t)simple]);
    }
    auto [k, m] = root_decomposition(*dsrc, l);
    UElem u = mapped_root_vector(dsrc, dst, tau, s, k);
    UElem v = mapped_root_vector(dsrc, dst, tau, s, m);
    CycScalar qq = dsrc->q_bilinear(dsrc->roots.positive_roots[(size_t)k],
                                    dsrc->roots.positive_roots[(size_t)m]);
    return multiply(u, v) - multiply(v, u).scaled(qq);
}

UElem upow(const UAlgebraPtr& A, const UElem& x, long e) {
    UElem out = UElem::unit(A);
    for (long k = 0; k < e; ++k) out = multiply(out, x);
    return out;
}

// Does mu vanish on every root of the given positions?
bool mu_zero_on(const Datum& d, const RootVectorParams& mu,
                const std::vector<int>& positions) {
    for (int pos : positions)
        if (!mu.get(d.roots.positive_roots[(size_t)pos]).is_zero()) return false;
    return true;
}

// Exact verification of a concrete witness against the defining relations
// of the destination algebra and the generator coproducts.
void check_soundness(const UAlgebraPtr& src, const UAlgebraPtr& dst,
                     const IsoTriple& T) {
    const DatumPtr& ds = src->datum();
    const DatumPtr& dd = dst->datum();
    const int theta = ds->theta();

    auto image = [&](int i) {
        return UElem::generator(dst, T.sigma[(size_t)i]).scaled(T.s[(size_t)i]);
    };

    for (int i = 0; i < theta; ++i) {
        UElem fx = image(i);
        GroupElement gi = T.phi.apply(ds->g[(size_t)i]);
        // conjugation action of every source group generator
        for (long k = 0; k < ds->group.rank(); ++k) {
            GroupElement h = ds->group.generator(k);
            UElem lhs = conj_by(dst, T.phi.apply(h), fx);
            UElem rhs = fx.scaled(ds->chi[(size_t)i].eval(dd->ctx, h));
            if (lhs != rhs)
                throw ConsistencyFailure("witness breaks a conjugation relation");
        }
        // coproduct of the generator image
        UTensor lhs = coproduct_u(fx);
        UTensor rhs = UTensor::of(UElem::group_term(dst, gi), fx) +
                      UTensor::of(fx, UElem::unit(dst));
        if (lhs != rhs)
            throw ConsistencyFailure("witness breaks a generator coproduct");
    }

    for (int i = 0; i < theta; ++i)
        for (int j = 0; j < theta; ++j) {
            if (i == j) continue;
            UElem fi = image(i);
            GroupElement gi = T.phi.apply(ds->g[(size_t)i]);
            if (ds->cartan.same_component(i, j)) {
                long reps = 1 - ds->cartan.a[(size_t)i][(size_t)j];
                UElem y = image(j);
                for (long k = 0; k < reps; ++k) y = skew_bracket(dst, fi, gi, y);
                if (!y.is_zero())
                    throw ConsistencyFailure("witness breaks a Serre relation");
            } else if (i < j) {
                UElem lhs = skew_bracket(dst, fi, gi, image(j));
                CycScalar lam = src->linking().get(*ds, i, j).lift_to(dd->ctx);
                GroupElement gg = gi * T.phi.apply(ds->g[(size_t)j]);
                UElem rhs = (UElem::unit(dst) - UElem::group_term(dst, gg)).scaled(lam);
                if (lhs != rhs)
                    throw ConsistencyFailure("witness breaks a linking relation");
            }
        }

    for (int l = 0; l < ds->roots.p(); ++l) {
        int comp = ds->roots.root_component[(size_t)l];
        long N = ds->component_order[(size_t)comp];
        UElem P = upow(dst, mapped_root_vector(ds, dst, T.sigma, T.s, l), N);
        GroupAlgElem expected = map_group_alg(
            T.phi, u_alpha(ds, src->mu(), ds->roots.positive_roots[(size_t)l], src->cap()));
        if (P != group_alg_to_u(dst, expected))
            throw ConsistencyFailure("witness breaks a root power relation");
    }
}

// One (phi, sigma) candidate: assemble the scalar constraints, solve, and
// verify.  Returns without touching `out` when the candidate dies.
void process_candidate(IsoSearch& out, const UAlgebraPtr& src,
                       const UAlgebraPtr& dst, const GroupIso& phi,
                       const std::vector<int>& sig, long cap) {
    const DatumPtr& ds = src->datum();
    const DatumPtr& dd = dst->datum();
    const int theta = ds->theta();

    // Matching (g_i, chi_i) pairs already forces equal Cartan entries;
    // anything else indicates corrupted data.
    for (int i = 0; i < theta; ++i)
        for (int j = 0; j < theta; ++j)
            if (ds->cartan.a[(size_t)i][(size_t)j] !=
                dd->cartan.a[(size_t)sig[(size_t)i]][(size_t)sig[(size_t)j]])
                throw ConsistencyFailure("matched generator pairs with different Cartan entries");

    std::vector<int> inv((size_t)theta, -1);
    for (int i = 0; i < theta; ++i) inv[(size_t)sig[(size_t)i]] = i;

    MonomialSystem sys;
    sys.unknowns = theta;

    // linking constraints: lambda'_{ij} = s_i s_j lambda_{sig(i) sig(j)}
    for (int i = 0; i < theta; ++i)
        for (int j = i + 1; j < theta; ++j) {
            if (ds->cartan.same_component(i, j)) continue;
            CycScalar lp = src->linking().get(*ds, i, j);
            CycScalar lq = dst->linking().get(*dd, sig[(size_t)i], sig[(size_t)j]);
            if (lp.is_zero() && lq.is_zero()) continue;
            if (lp.is_zero() != lq.is_zero()) return;
            std::vector<long> row((size_t)theta, 0);
            row[(size_t)i] = 1;
            row[(size_t)j] = 1;
            sys.add_row(std::move(row), lp / lq);
        }

    // root power constraints, one destination component at a time
    for (size_t J = 0; J < dd->cartan.components.size(); ++J) {
        const auto& cJ = dd->cartan.components[J];
        int compSrc = ds->cartan.component_of(inv[(size_t)cJ.first]);
        const auto& cS = ds->cartan.components[(size_t)compSrc];
        if (cS.rank != cJ.rank)
            throw ConsistencyFailure("matched components of different rank");
        std::vector<int> sJ((size_t)cJ.rank, -1);
        for (int l = 0; l < cJ.rank; ++l) {
            int target = sig[(size_t)(cS.first + l)] - cJ.first;
            if (target < 0 || target >= cJ.rank)
                throw ConsistencyFailure("index permutation tears a component apart");
            sJ[(size_t)l] = target;
        }
        bool ident = true;
        for (int l = 0; l < cJ.rank; ++l) ident = ident && sJ[(size_t)l] == l;

        long NJ = dd->component_order[J];
        auto posD = component_positions(*dd, (int)J);
        auto posS = component_positions(*ds, compSrc);

        // The letters of the source root vector at local root t are the
        // source simple indices; each contributes its own s, so the row
        // exponent at cS.first + l is N_J times the l-th coordinate.
        auto root_row = [&](size_t t) {
            std::vector<long> row((size_t)theta, 0);
            const auto& coords = dd->roots.positive_roots[(size_t)posD[t]];
            for (int l = 0; l < cJ.rank; ++l)
                row[(size_t)(cS.first + l)] = NJ * coords[(size_t)(cJ.first + l)];
            return row;
        };

        if (ident) {
            // sigma fixes the component, so the constraint collapses to
            // mu'_alpha = s_alpha^{N_J} mu_alpha root by root.
            for (size_t t = 0; t < posD.size(); ++t) {
                CycScalar mp = src->mu().get(ds->roots.positive_roots[(size_t)posS[t]]);
                CycScalar mq = dst->mu().get(dd->roots.positive_roots[(size_t)posD[t]]);
                if (mp.is_zero() && mq.is_zero()) continue;
                if (mp.is_zero() != mq.is_zero()) return;
                sys.add_row(root_row(t), mp / mq);
            }
            continue;
        }

        bool src_zero = mu_zero_on(*ds, src->mu(), posS);
        bool dst_zero = mu_zero_on(*dd, dst->mu(), posD);
        // All substitution values vanish on both sides, so the root power
        // relations impose nothing.
        if (src_zero && dst_zero) continue;

        long ht_max = 0;
        for (int pos : posD) ht_max = std::max(ht_max, (long)dd->roots.height(pos));
        if (NJ * ht_max > cap) {
            out.undecided = true;
            std::ostringstream os;
            os << "permuted-power constants of a rank-" << cJ.rank
               << " component need degree " << NJ * ht_max << " > cap " << cap;
            out.undecided_detail = os.str();
            return;
        }

        std::vector<GroupAlgElem> ub(posD.size());
        if (!dst_zero)
            for (size_t t = 0; t < posD.size(); ++t)
                ub[t] = u_alpha(dd, dst->mu(), dd->roots.positive_roots[(size_t)posD[t]],
                                dst->cap());

        for (size_t t = 0; t < posD.size(); ++t) {
            GroupAlgElem lhs = map_group_alg(
                phi, u_alpha(ds, src->mu(), ds->roots.positive_roots[(size_t)posS[t]],
                             src->cap()));
            GroupAlgElem rhs;
            if (!dst_zero) {
                auto tmap = iso_constants(dd, (int)J, sJ, posD[t], cap);
                for (const auto& [a, tv] : tmap) {
                    GroupAlgElem term = GroupAlgElem::unit(dd->group);
                    for (size_t l = 0; l < a.size(); ++l)
                        if (a[l]) term = term * ub[l].pow(a[l]);
                    rhs += term.scaled(tv);
                }
            }
            if (lhs.is_zero() && rhs.is_zero()) continue;
            if (lhs.is_zero() != rhs.is_zero()) return;
            auto ratio = proportion(lhs, rhs);
            if (!ratio) return;
            sys.add_row(root_row(t), *ratio);
        }
    }

    auto sol = solve_monomial(sys);
    if (!sol.solvable) return;

    IsoTriple T;
    T.phi = phi;
    T.sigma = sig;
    if (!sol.has_witness) {
        T.symbolic = true;
        T.note = sol.note;
        out.triples.push_back(std::move(T));
        return;
    }
    long L = lcm_contexts(lcm_long(ds->ctx->m, dd->ctx->m), sol.witness);
    T.s = lift_all(sol.witness, L);
    check_soundness(src, dst, T);
    out.triples.push_back(std::move(T));
}

} // namespace

IsoSearch find_isomorphisms(const UAlgebraPtr& src, const UAlgebraPtr& dst,
                            long cap) {
    const DatumPtr& ds = src->datum();
    const DatumPtr& dd = dst->datum();
    if (ds->theta() != dd->theta()) {
        std::ostringstream os;
        os << "generator counts differ: " << ds->theta() << " vs " << dd->theta();
        throw RankMismatch(os.str());
    }
    // The skew-primitive classification behind x'_i -> s_i x_{sigma(i)}
    // needs every destination diagonal order above 4.
    for (size_t J = 0; J < dd->component_order.size(); ++J)
        if (dd->component_order[J] <= 4) {
            std::ostringstream os;
            os << "destination diagonal order " << dd->component_order[J]
               << " on component " << J << " is not above 4";
            throw OrderHypothesisViolated(os.str());
        }
    long capv = cap < 0 ? default_degree_cap(*dd) : cap;
    const int theta = ds->theta();

    IsoSearch out;
    for (const auto& phi : enumerate_isomorphisms(ds->group, dd->group)) {
        // The pairs (g_j, chi_j) are pairwise distinct when all diagonal
        // orders exceed 4, so each source index has at most one match.
        std::vector<int> sig((size_t)theta, -1);
        std::vector<char> used((size_t)theta, 0);
        bool ok = true;
        for (int i = 0; i < theta && ok; ++i) {
            int hit = -1;
            for (int j = 0; j < theta; ++j) {
                if (dd->g[(size_t)j] == phi.apply(ds->g[(size_t)i]) &&
                    phi.pull_back(dd->chi[(size_t)j]) == ds->chi[(size_t)i]) {
                    hit = j;
                    break;
                }
            }
            if (hit < 0 || used[(size_t)hit]) { ok = false; break; }
            sig[(size_t)i] = hit;
            used[(size_t)hit] = 1;
        }
        if (!ok) continue;
        process_candidate(out, src, dst, phi, sig, capv);
    }
    return out;
}

bool iso_exists_bruteforce(const UAlgebraPtr& src, const UAlgebraPtr& dst,
                           const Int& dim_limit) {
    if (src->dimension() > dim_limit || dst->dimension() > dim_limit) {
        std::ostringstream os;
        os << "reference search limited to dimension " << dim_limit.get_str();
        throw DegreeCapExceeded(os.str());
    }
    // A relation-preserving assignment of generator images is onto, so it
    // is bijective exactly when the dimensions agree.
    if (src->dimension() != dst->dimension()) return false;

    const DatumPtr& ds = src->datum();
    const DatumPtr& dd = dst->datum();
    if (ds->theta() != dd->theta()) return false;
    const int theta = ds->theta();

    std::vector<int> perm((size_t)theta);
    std::iota(perm.begin(), perm.end(), 0);

    for (const auto& phi : enumerate_isomorphisms(ds->group, dd->group)) {
        std::vector<int> tau = perm;
        do {
            bool ok = true;
            for (int i = 0; i < theta && ok; ++i)
                ok = dd->g[(size_t)tau[(size_t)i]] == phi.apply(ds->g[(size_t)i]) &&
                     phi.pull_back(dd->chi[(size_t)tau[(size_t)i]]) == ds->chi[(size_t)i];
            if (!ok) continue;

            MonomialSystem sys;
            sys.unknowns = theta;
            bool feasible = true;

            std::vector<CycScalar> ones((size_t)theta, CycScalar(1));
            auto gen = [&](int i) { return UElem::generator(dst, tau[(size_t)i]); };

            // Serre elements of the source presentation must vanish; they
            // are homogeneous in each s_i, so no constraint is produced.
            for (int i = 0; i < theta && feasible; ++i)
                for (int j = 0; j < theta && feasible; ++j) {
                    if (i == j || !ds->cartan.same_component(i, j)) continue;
                    long reps = 1 - ds->cartan.a[(size_t)i][(size_t)j];
                    UElem y = gen(j);
                    GroupElement gi = phi.apply(ds->g[(size_t)i]);
                    for (long k = 0; k < reps; ++k) y = skew_bracket(dst, gen(i), gi, y);
                    feasible = y.is_zero();
                }
            if (!feasible) continue;

            // linking relations: s_i s_j [x_{tau i}, x_{tau j}] =
            // lambda'_{ij} (1 - phi(g'_i g'_j))
            for (int i = 0; i < theta && feasible; ++i)
                for (int j = i + 1; j < theta && feasible; ++j) {
                    if (ds->cartan.same_component(i, j)) continue;
                    UElem w = skew_bracket(dst, gen(i), phi.apply(ds->g[(size_t)i]), gen(j));
                    CycScalar lam = src->linking().get(*ds, i, j).lift_to(dd->ctx);
                    GroupElement gg = phi.apply(ds->g[(size_t)i] * ds->g[(size_t)j]);
                    UElem rhs = (UElem::unit(dst) - UElem::group_term(dst, gg)).scaled(lam);
                    if (w.is_zero() != rhs.is_zero()) { feasible = false; break; }
                    if (w.is_zero()) continue;
                    auto ratio = proportion_u(rhs, w);
                    if (!ratio) { feasible = false; break; }
                    std::vector<long> row((size_t)theta, 0);
                    row[(size_t)i] = 1;
                    row[(size_t)j] = 1;
                    sys.add_row(std::move(row), *ratio);
                }
            if (!feasible) continue;

            // root power relations: the image of x'_alpha carries one s_i
            // per letter, N' of each after raising to the N'-th power.
            for (int l = 0; l < ds->roots.p() && feasible; ++l) {
                int comp = ds->roots.root_component[(size_t)l];
                long N = ds->component_order[(size_t)comp];
                UElem P = upow(dst, mapped_root_vector(ds, dst, tau, ones, l), N);
                GroupAlgElem expected = map_group_alg(
                    phi,
                    u_alpha(ds, src->mu(), ds->roots.positive_roots[(size_t)l], src->cap()));
                UElem rhs = group_alg_to_u(dst, expected);
                if (P.is_zero() != rhs.is_zero()) { feasible = false; break; }
                if (P.is_zero()) continue;
                auto ratio = proportion_u(rhs, P);
                if (!ratio) { feasible = false; break; }
                std::vector<long> row((size_t)theta, 0);
                const auto& coords = ds->roots.positive_roots[(size_t)l];
                for (int i = 0; i < theta; ++i) row[(size_t)i] = N * coords[(size_t)i];
                sys.add_row(std::move(row), *ratio);
            }
            if (!feasible) continue;

            if (solve_monomial(sys).solvable) return true;
        } while (std::next_permutation(tau.begin(), tau.end()));
    }
    return false;
}

} // namespace qf
