#include "qf/uqgroup.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

#include "qf/errors.hpp"
#include "qf/quotients.hpp"

namespace qf {

namespace detail {

struct UCache {
    std::mutex m;
    // x^a x^b in reduced terms, for exponent vectors already below the bounds
    std::map<std::pair<ExpVec, ExpVec>, std::map<UBasisKey, CycScalar>> mono;
    // x^a x_w for a single simple letter w below some populated block of a
    std::map<std::pair<ExpVec, int>, std::map<UBasisKey, CycScalar>> letter;
    // x_{beta_l} x_w sorted into reduced terms with a trailing group element
    std::map<std::pair<int, int>,
             std::vector<std::tuple<ExpVec, GroupElement, CycScalar>>>
        rswap;
    // coproduct term maps of root vector powers, keyed (position, exponent)
    std::map<std::pair<int, int>,
             std::map<std::pair<UBasisKey, UBasisKey>, CycScalar>>
        cpow;
    // coproducts and antipodes of whole reduced monomials x^a; the group
    // part of a basis key only remaps these, so caching by exponent vector
    // covers every key
    std::map<ExpVec, std::map<std::pair<UBasisKey, UBasisKey>, CycScalar>> cmono;
    std::map<ExpVec, std::map<UBasisKey, CycScalar>> smono;
    // antipode images of the root vectors, per convex position
    std::vector<std::map<UBasisKey, CycScalar>> spos;
    std::vector<bool> spos_ready;
    std::vector<std::vector<int>> pos_by_comp;
};

} // namespace detail

detail::UCache& ucache(const UAlgebra& A) { return *A.cache_; }

namespace {

std::string vec_text(const std::vector<int>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

// chi factor picked up by a group element passing x^b from the left,
// accumulated as a root-of-unity exponent
CycScalar pass_group(const UAlgebra& A, const GroupElement& g, const ExpVec& b) {
    const DatumPtr& d = A.datum();
    long L = d->group.exponent();
    long k = 0;
    for (size_t l = 0; l < b.size(); ++l) {
        if (b[l] == 0) continue;
        long e = A.root_character((int)l).eval_exponent(g) % L;
        k = (k + e * (b[l] % L)) % L;
    }
    if (k == 0) return CycScalar::one(d->ctx);
    return CycScalar::root_of_unity(d->ctx, k * (d->ctx->m / L));
}

// single character value as a root of unity in the datum context
CycScalar chi_value(const Datum& d, const Character& ch, const GroupElement& g) {
    long L = d.group.exponent();
    long k = ch.eval_exponent(g) % L;
    if (k == 0) return CycScalar::one(d.ctx);
    return CycScalar::root_of_unity(d.ctx, k * (d.ctx->m / L));
}

int lowest_block(const Datum& d, const ExpVec& a) {
    for (size_t l = 0; l < a.size(); ++l)
        if (a[l] != 0) return d.roots.root_component[l];
    return -1;
}

int highest_block(const Datum& d, const ExpVec& a) {
    for (size_t l = a.size(); l-- > 0;)
        if (a[l] != 0) return d.roots.root_component[l];
    return -1;
}

// Substitutes x_{beta_l}^{N_l} -> root power value for every over-bound
// entry; e is reduced in place and the collected central factor returned.
GroupAlgElem reduce_all(const UAlgebra& A, ExpVec& e) {
    const Datum& d = *A.datum();
    GroupAlgElem central = GroupAlgElem::unit(d.group);
    for (size_t l = 0; l < e.size(); ++l) {
        if (e[l] < 0) throw Error("Internal", "negative exponent during reduction");
        long n = A.exponent_bounds()[l];
        if (e[l] < n) continue;
        long q = e[l] / n;
        e[(size_t)l] = (int)(e[l] % n);
        central = central * A.root_power_value((int)l).pow(q);
        if (central.is_zero()) return central;
    }
    return central;
}

void mono_mul(const UAlgebra& A, const ExpVec& c, const ExpVec& b,
              std::map<UBasisKey, CycScalar>& out, const CycScalar& coeff);

void add_out(std::map<UBasisKey, CycScalar>& out, const ExpVec& e,
             const GroupElement& g, const CycScalar& c) {
    if (c.is_zero()) return;
    UBasisKey k{e, g};
    auto it = out.find(k);
    if (it == out.end()) {
        out.emplace(std::move(k), c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) out.erase(it);
}

using SortedTerm = std::tuple<ExpVec, GroupElement, CycScalar>;

// Moves every lower-component letter left of every higher-component letter.
// A swap costs the braiding factor; linked pairs add correction terms that
// drop both letters, one carrying the group element g_s g_x commuted to the
// right end.  Sorted words are assembled per component into exponent vectors
// and over-bound entries substituted.  Only used on short words, one root
// vector word times one letter, so the branching stays bounded.
void sort_collect(const UAlgebra& A, const Word& w, const GroupElement& g,
                  const CycScalar& cval, std::vector<SortedTerm>& out) {
    if (cval.is_zero()) return;
    const Datum& d = *A.datum();
    for (size_t t = 0; t + 1 < w.size(); ++t) {
        int s = (int)w[t];
        int x = (int)w[t + 1];
        if (d.cartan.component_of(s) <= d.cartan.component_of(x)) continue;
        Word w1 = w;
        std::swap(w1[t], w1[t + 1]);
        sort_collect(A, w1, g, cval * d.q[(size_t)s][(size_t)x], out);
        CycScalar lam = A.linking().get(d, s, x);
        if (!lam.is_zero()) {
            Word w2 = w;
            w2.erase(t, 2);
            sort_collect(A, w2, g, cval * lam, out);
            GroupElement gg = d.g[(size_t)s] * d.g[(size_t)x];
            CycScalar f = cval * lam;
            for (size_t r = t + 2; r < w.size(); ++r)
                f = f * chi_value(d, d.chi[(size_t)w[r]], gg);
            sort_collect(A, w2, g * gg, -f, out);
        }
        return;
    }
    int p = d.roots.p();
    std::vector<std::pair<ExpVec, CycScalar>> acc;
    acc.emplace_back(ExpVec((size_t)p, 0), cval);
    size_t i = 0;
    while (i < w.size()) {
        size_t j = i;
        int comp = d.cartan.component_of((int)w[i]);
        while (j < w.size() && d.cartan.component_of((int)w[j]) == comp) ++j;
        RElem nf = normal_form(BraidedPoly::monomial(A.datum(), w.substr(i, j - i),
                                                     CycScalar::one(d.ctx)),
                               A.cap());
        std::vector<std::pair<ExpVec, CycScalar>> next;
        for (const auto& [e0, c0] : acc)
            for (const auto& [ee, cc] : nf.terms()) {
                ExpVec e = e0;
                for (int l = 0; l < p; ++l) e[(size_t)l] += ee[(size_t)l];
                next.emplace_back(std::move(e), c0 * cc);
            }
        acc = std::move(next);
        i = j;
    }
    for (auto& [e, cv] : acc) {
        GroupAlgElem central = reduce_all(A, e);
        for (const auto& [hh, ss] : central.terms())
            out.emplace_back(e, hh * g, cv * ss);
    }
}

// x_{beta_l} x_w for a single letter w of a lower component, as reduced
// terms with trailing group elements.  Cached per (position, letter).
const std::vector<SortedTerm>& root_swap(const UAlgebra& A, int l, int w) {
    auto& cache = ucache(A);
    {
        std::lock_guard<std::mutex> lk(cache.m);
        auto it = cache.rswap.find({l, w});
        if (it != cache.rswap.end()) return it->second;
    }
    const DatumPtr& d = A.datum();
    ExpVec el((size_t)d->roots.p(), 0);
    el[(size_t)l] = 1;
    std::vector<SortedTerm> out;
    BraidedPoly words = pbw_expand(d, el);
    for (const auto& [bw, bc] : words.terms())
        sort_collect(A, bw + Word(1, (char)w), d->group.identity(), bc, out);
    std::lock_guard<std::mutex> lk(cache.m);
    return cache.rswap.emplace(std::make_pair(l, w), std::move(out))
        .first->second;
}

// x^c x_w for one simple letter w, as reduced terms.  When some block of c
// sits above the component of w the last root vector factor of c is peeled
// off, commuted past the letter, and the shorter monomial handled
// recursively; the states stay canonical, so repeated letters cost one
// cache lookup each instead of an exponential walk over swap paths.
std::map<UBasisKey, CycScalar> mono_letter(const UAlgebra& A, const ExpVec& c,
                                           int w) {
    auto& cache = ucache(A);
    {
        std::lock_guard<std::mutex> lk(cache.m);
        auto it = cache.letter.find({c, w});
        if (it != cache.letter.end()) return it->second;
    }
    const DatumPtr& d = A.datum();
    int p = d->roots.p();
    int j = d->cartan.component_of(w);
    std::map<UBasisKey, CycScalar> out;
    if (highest_block(*d, c) <= j) {
        ExpVec cj((size_t)p, 0), cpre = c;
        for (int l = 0; l < p; ++l)
            if (d->roots.root_component[(size_t)l] == j) {
                cj[(size_t)l] = c[(size_t)l];
                cpre[(size_t)l] = 0;
            }
        ExpVec ew((size_t)p, 0);
        ew[(size_t)d->roots.simple_position[(size_t)w]] = 1;
        RElem prod = mul_relems(RElem::monomial(d, cj, CycScalar::one(d->ctx)),
                                RElem::monomial(d, ew, CycScalar::one(d->ctx)),
                                A.cap());
        for (const auto& [ej, s] : prod.terms()) {
            ExpVec e = cpre;
            for (int l = 0; l < p; ++l) e[(size_t)l] += ej[(size_t)l];
            GroupAlgElem central = reduce_all(A, e);
            for (const auto& [hh, ss] : central.terms())
                add_out(out, e, hh, s * ss);
        }
    } else {
        size_t lstar = 0;
        for (size_t l = c.size(); l-- > 0;)
            if (c[l] != 0) {
                lstar = l;
                break;
            }
        ExpVec c1 = c;
        c1[lstar] -= 1;
        for (const auto& [f, h, s] : root_swap(A, (int)lstar, w)) {
            std::map<UBasisKey, CycScalar> sub;
            mono_mul(A, c1, f, sub, s);
            for (const auto& [k, s2] : sub)
                add_out(out, k.first, k.second * h, s2);
        }
    }
    std::lock_guard<std::mutex> lk(cache.m);
    return cache.letter.emplace(std::make_pair(c, w), std::move(out))
        .first->second;
}

// x^c x^b as reduced terms (exponent, group, scalar), scaled by coeff.
// Blocks of b are folded in ascending component order; a block below some
// populated block of c is expanded into words and folded in one letter at
// a time, everything else is a within-component product followed by power
// substitution.
void mono_mul(const UAlgebra& A, const ExpVec& c, const ExpVec& b,
              std::map<UBasisKey, CycScalar>& out, const CycScalar& coeff) {
    if (coeff.is_zero()) return;
    const DatumPtr& d = A.datum();
    int p = d->roots.p();

    std::map<UBasisKey, CycScalar>* cached = nullptr;
    std::map<UBasisKey, CycScalar> local;
    {
        auto& cache = ucache(A);
        std::lock_guard<std::mutex> lk(cache.m);
        auto it = cache.mono.find({c, b});
        if (it != cache.mono.end()) {
            for (const auto& [k, s] : it->second)
                add_out(out, k.first, k.second, s * coeff);
            return;
        }
    }

    int j = lowest_block(*d, b);
    if (j < 0) {
        ExpVec e = c;
        GroupAlgElem central = reduce_all(A, e);
        for (const auto& [hh, ss] : central.terms()) add_out(local, e, hh, ss);
    } else {
        ExpVec bj((size_t)p, 0), rest = b;
        for (int l = 0; l < p; ++l)
            if (d->roots.root_component[(size_t)l] == j) {
                bj[(size_t)l] = b[(size_t)l];
                rest[(size_t)l] = 0;
            }
        if (highest_block(*d, c) <= j) {
            ExpVec cj((size_t)p, 0), cpre = c;
            for (int l = 0; l < p; ++l)
                if (d->roots.root_component[(size_t)l] == j) {
                    cj[(size_t)l] = c[(size_t)l];
                    cpre[(size_t)l] = 0;
                }
            RElem prod = mul_relems(RElem::monomial(d, cj, CycScalar::one(d->ctx)),
                                    RElem::monomial(d, bj, CycScalar::one(d->ctx)),
                                    A.cap());
            for (const auto& [ej, s] : prod.terms()) {
                ExpVec e = cpre;
                for (int l = 0; l < p; ++l) e[(size_t)l] += ej[(size_t)l];
                GroupAlgElem central = reduce_all(A, e);
                for (const auto& [hh, ss] : central.terms()) {
                    std::map<UBasisKey, CycScalar> sub;
                    mono_mul(A, e, rest, sub,
                             s * ss * pass_group(A, hh, rest));
                    for (const auto& [k, s2] : sub)
                        add_out(local, k.first, k.second * hh, s2);
                }
            }
        } else {
            BraidedPoly wpoly = pbw_expand(d, bj);
            for (const auto& [word, wc] : wpoly.terms()) {
                std::map<UBasisKey, CycScalar> states;
                states.emplace(UBasisKey{c, d->group.identity()}, wc);
                for (char ch : word) {
                    int w = (int)ch;
                    std::map<UBasisKey, CycScalar> next;
                    for (const auto& [k, s] : states) {
                        CycScalar f = s * chi_value(*d, d->chi[(size_t)w], k.second);
                        if (f.is_zero()) continue;
                        for (const auto& [k2, s2] : mono_letter(A, k.first, w))
                            add_out(next, k2.first, k2.second * k.second, f * s2);
                    }
                    states = std::move(next);
                }
                for (const auto& [k, s] : states) {
                    std::map<UBasisKey, CycScalar> sub;
                    mono_mul(A, k.first, rest, sub,
                             s * pass_group(A, k.second, rest));
                    for (const auto& [k2, s2] : sub)
                        add_out(local, k2.first, k2.second * k.second, s2);
                }
            }
        }
    }

    {
        auto& cache = ucache(A);
        std::lock_guard<std::mutex> lk(cache.m);
        cached = &cache.mono.emplace(std::make_pair(c, b), std::move(local))
                      .first->second;
        for (const auto& [k, s] : *cached)
            add_out(out, k.first, k.second, s * coeff);
    }
}

void check_ambient(const UElem& u, const UElem& v) {
    if (!u.ambient() || !v.ambient())
        throw Error("Internal", "element without ambient algebra");
    if (u.ambient()->key() != v.ambient()->key())
        throw AmbientMismatch("elements live in different algebras");
}

} // namespace

Int UAlgebra::dimension() const {
    Int r = d_->group.order();
    for (long n : bounds_) r *= n;
    return r;
}

UAlgebraPtr build_u(const DatumPtr& d, const LinkingParams& lambda,
                    const RootVectorParams& mu, long cap) {
    auto A = std::shared_ptr<UAlgebra>(new UAlgebra());
    A->d_ = d;
    A->lambda_ = lambda;
    A->mu_ = mu;
    int p = d->roots.p();

    long need = default_degree_cap(*d);
    for (size_t comp = 0; comp < d->cartan.components.size(); ++comp) {
        long hsum = 0;
        for (int l = 0; l < p; ++l)
            if (d->roots.root_component[(size_t)l] == (int)comp)
                hsum += d->roots.height(l);
        need = std::max(need, 2 * d->component_order[comp] * hsum);
    }
    A->cap_ = cap >= 0 ? cap : need;

    A->bounds_.assign(d->N.begin(), d->N.end());
    A->chi_pos_.reserve((size_t)p);
    for (int l = 0; l < p; ++l)
        A->chi_pos_.push_back(d->chi_of(d->roots.positive_roots[(size_t)l]));

    std::ostringstream key;
    key << d->canonical_key() << "|lambda:";
    for (const auto& [ij, c] : lambda.entries())
        key << ij.first << "," << ij.second << "=" << c.to_string() << ";";
    key << "|mu:";
    for (const auto& [root, c] : mu.entries())
        key << vec_text(root) << "=" << c.to_string() << ";";
    A->key_ = key.str();

    A->ualpha_.assign((size_t)p, GroupAlgElem::zero());
    if (!mu.all_zero()) {
        for (size_t comp = 0; comp < d->cartan.components.size(); ++comp) {
            long hmax = 0;
            for (int l = 0; l < p; ++l)
                if (d->roots.root_component[(size_t)l] == (int)comp)
                    hmax = std::max(hmax, (long)d->roots.height(l));
            UFamily fam = build_ufamily(d, (int)comp, mu, A->cap_, hmax);
            std::vector<int> pos = component_positions(*d, (int)comp);
            for (size_t i = 0; i < pos.size(); ++i) {
                std::vector<int> e(pos.size(), 0);
                e[i] = 1;
                A->ualpha_[(size_t)pos[i]] = fam.u.at(e);
            }
        }
    }

    for (int l = 0; l < p; ++l) {
        const GroupAlgElem& u = A->ualpha_[(size_t)l];
        if (u.is_zero()) continue;
        if (!central_support(*d, u))
            throw CentralityFailure("root power value at position " +
                                    std::to_string(l) + " is not central");
        if (!A->chi_pos_[(size_t)l].pow(d->N[(size_t)l]).is_trivial())
            throw CentralityFailure(
                "nonzero root power value at position " + std::to_string(l) +
                " despite a nontrivial power character");
    }

    auto cache = std::make_shared<detail::UCache>();
    cache->spos.resize((size_t)p);
    cache->spos_ready.assign((size_t)p, false);
    cache->pos_by_comp.resize(d->cartan.components.size());
    for (int l = 0; l < p; ++l)
        cache->pos_by_comp[(size_t)d->roots.root_component[(size_t)l]].push_back(l);
    A->cache_ = std::move(cache);
    return A;
}

UElem UElem::unit(const UAlgebraPtr& A) {
    UElem r(A);
    r.add_term(ExpVec((size_t)A->datum()->roots.p(), 0),
               A->datum()->group.identity(), CycScalar::one(A->datum()->ctx));
    return r;
}

UElem UElem::monomial(const UAlgebraPtr& A, const ExpVec& a,
                      const GroupElement& g, const CycScalar& c) {
    if ((int)a.size() != A->datum()->roots.p())
        throw Error("Internal", "exponent vector has the wrong length");
    if (g.group() != A->datum()->group)
        throw GroupMismatch("group element does not belong to the datum group");
    UElem r(A);
    if (c.is_zero()) return r;
    ExpVec e = a;
    GroupAlgElem central = reduce_all(*A, e);
    for (const auto& [hh, ss] : central.terms()) r.add_term(e, hh * g, c * ss);
    return r;
}

UElem UElem::generator(const UAlgebraPtr& A, int i) {
    const DatumPtr& d = A->datum();
    if (i < 0 || i >= d->theta()) throw Error("Internal", "generator index out of range");
    ExpVec a((size_t)d->roots.p(), 0);
    a[(size_t)d->roots.simple_position[(size_t)i]] = 1;
    return monomial(A, a, d->group.identity(), CycScalar::one(d->ctx));
}

UElem UElem::group_term(const UAlgebraPtr& A, const GroupElement& g) {
    return monomial(A, ExpVec((size_t)A->datum()->roots.p(), 0), g,
                    CycScalar::one(A->datum()->ctx));
}

CycScalar UElem::counit() const {
    if (!a_) throw Error("Internal", "element without ambient algebra");
    CycScalar r = CycScalar::zero(a_->datum()->ctx);
    for (const auto& [k, c] : t_) {
        bool zero = true;
        for (int e : k.first)
            if (e != 0) { zero = false; break; }
        if (zero) r = r + c;
    }
    return r;
}

UElem UElem::operator+(const UElem& o) const {
    check_ambient(*this, o);
    UElem r = *this;
    for (const auto& [k, c] : o.t_) r.add_term(k.first, k.second, c);
    return r;
}

UElem UElem::operator-(const UElem& o) const { return *this + (-o); }

UElem UElem::operator-() const {
    UElem r(a_);
    for (const auto& [k, c] : t_) r.t_.emplace(k, -c);
    return r;
}

UElem UElem::scaled(const CycScalar& c) const {
    UElem r(a_);
    if (c.is_zero()) return r;
    for (const auto& [k, cc] : t_) {
        CycScalar v = cc * c;
        if (!v.is_zero()) r.t_.emplace(k, v);
    }
    return r;
}

bool operator==(const UElem& x, const UElem& y) {
    if (x.a_ && y.a_ && x.a_->key() != y.a_->key())
        throw AmbientMismatch("comparing elements of different algebras");
    return x.t_ == y.t_;
}

void UElem::add_term(const ExpVec& a, const GroupElement& g, const CycScalar& c) {
    add_out(t_, a, g, c);
}

UElem multiply(const UElem& u, const UElem& v) {
    check_ambient(u, v);
    const UAlgebraPtr& A = u.ambient();
    UElem out(A);
    std::map<UBasisKey, CycScalar> acc;
    for (const auto& [ku, cu] : u.terms())
        for (const auto& [kv, cv] : v.terms()) {
            CycScalar f = cu * cv * pass_group(*A, ku.second, kv.first);
            if (f.is_zero()) continue;
            GroupElement tail = ku.second * kv.second;
            std::map<UBasisKey, CycScalar> sub;
            mono_mul(*A, ku.first, kv.first, sub, f);
            for (const auto& [k, s] : sub)
                add_out(acc, k.first, k.second * tail, s);
        }
    for (const auto& [k, s] : acc) out.add_term(k.first, k.second, s);
    return out;
}

UTensor UTensor::of(const UElem& left, const UElem& right) {
    check_ambient(left, right);
    UTensor r(left.ambient());
    for (const auto& [kl, cl] : left.terms())
        for (const auto& [kr, cr] : right.terms()) r.add_term(kl, kr, cl * cr);
    return r;
}

UTensor UTensor::operator+(const UTensor& o) const {
    if (a_ && o.a_ && a_->key() != o.a_->key())
        throw AmbientMismatch("tensors live in different algebras");
    UTensor r = *this;
    if (!r.a_) r.a_ = o.a_;
    for (const auto& [k, c] : o.t_) r.add_term(k.first, k.second, c);
    return r;
}

UTensor UTensor::operator-(const UTensor& o) const { return *this + o.scaled(CycScalar(-1)); }

UTensor UTensor::scaled(const CycScalar& c) const {
    UTensor r(a_);
    if (c.is_zero()) return r;
    for (const auto& [k, cc] : t_) {
        CycScalar v = cc * c;
        if (!v.is_zero()) r.t_.emplace(k, v);
    }
    return r;
}

bool operator==(const UTensor& x, const UTensor& y) {
    if (x.a_ && y.a_ && x.a_->key() != y.a_->key())
        throw AmbientMismatch("comparing tensors of different algebras");
    return x.t_ == y.t_;
}

void UTensor::add_term(const UBasisKey& l, const UBasisKey& r, const CycScalar& c) {
    if (c.is_zero()) return;
    auto k = std::make_pair(l, r);
    auto it = t_.find(k);
    if (it == t_.end()) {
        t_.emplace(std::move(k), c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) t_.erase(it);
}

namespace {

UElem key_elem(const UAlgebraPtr& A, const UBasisKey& k) {
    UElem r(A);
    r.add_term(k.first, k.second, CycScalar::one(A->datum()->ctx));
    return r;
}

} // namespace

UTensor tensor_multiply(const UTensor& x, const UTensor& y) {
    if (!x.ambient() || !y.ambient())
        throw Error("Internal", "tensor without ambient algebra");
    if (x.ambient()->key() != y.ambient()->key())
        throw AmbientMismatch("tensors live in different algebras");
    const UAlgebraPtr& A = x.ambient();
    UTensor out(A);
    for (const auto& [kx, cx] : x.terms())
        for (const auto& [ky, cy] : y.terms()) {
            CycScalar f = cx * cy * pass_group(*A, kx.first.second, ky.first.first) *
                          pass_group(*A, kx.second.second, ky.second.first);
            if (f.is_zero()) continue;
            GroupElement tl = kx.first.second * ky.first.second;
            GroupElement tr = kx.second.second * ky.second.second;
            std::map<UBasisKey, CycScalar> subl, subr;
            mono_mul(*A, kx.first.first, ky.first.first, subl,
                     CycScalar::one(A->datum()->ctx));
            mono_mul(*A, kx.second.first, ky.second.first, subr, f);
            for (const auto& [kl, cl] : subl)
                for (const auto& [kr, cr] : subr)
                    out.add_term({kl.first, kl.second * tl},
                                 {kr.first, kr.second * tr}, cl * cr);
        }
    return out;
}

namespace {

// coproduct of x_{beta_l}^k as a tensor term map, cached per (l, k); the
// base case dresses the left legs of the braided coproduct with the group
// element of the right leg's degree
const std::map<std::pair<UBasisKey, UBasisKey>, CycScalar>& coproduct_power(
    const UAlgebraPtr& A, int l, int k) {
    auto& cache = ucache(*A);
    {
        std::lock_guard<std::mutex> lk(cache.m);
        auto it = cache.cpow.find({l, k});
        if (it != cache.cpow.end()) return it->second;
    }
    const DatumPtr& d = A->datum();
    UTensor val(A);
    if (k == 1) {
        ExpVec el((size_t)d->roots.p(), 0);
        el[(size_t)l] = 1;
        RTensor ct = coproduct_pbw(d, el, A->cap());
        for (const auto& [legs, s] : ct.terms()) {
            GroupElement gc = d->g_of(pbw_degree(*d, legs.second));
            UElem L = UElem::monomial(A, legs.first, gc, s);
            UElem R = UElem::monomial(A, legs.second, d->group.identity(),
                                      CycScalar::one(d->ctx));
            val += UTensor::of(L, R);
        }
    } else {
        UTensor prev(A), base(A);
        for (const auto& [kk, s] : coproduct_power(A, l, k - 1))
            prev.add_term(kk.first, kk.second, s);
        for (const auto& [kk, s] : coproduct_power(A, l, 1))
            base.add_term(kk.first, kk.second, s);
        val = tensor_multiply(prev, base);
    }
    std::lock_guard<std::mutex> lk(cache.m);
    return cache.cpow.emplace(std::make_pair(l, k), val.terms()).first->second;
}

// coproduct of x^a as a tensor term map, cached per exponent vector
const std::map<std::pair<UBasisKey, UBasisKey>, CycScalar>& coproduct_monomial(
    const UAlgebraPtr& A, const ExpVec& a) {
    auto& cache = ucache(*A);
    {
        std::lock_guard<std::mutex> lk(cache.m);
        auto it = cache.cmono.find(a);
        if (it != cache.cmono.end()) return it->second;
    }
    int p = A->datum()->roots.p();
    UTensor acc = UTensor::of(UElem::unit(A), UElem::unit(A));
    for (int l = 0; l < p; ++l) {
        if (a[(size_t)l] == 0) continue;
        UTensor step(A);
        for (const auto& [kk, s] : coproduct_power(A, l, a[(size_t)l]))
            step.add_term(kk.first, kk.second, s);
        acc = tensor_multiply(acc, step);
    }
    std::lock_guard<std::mutex> lk(cache.m);
    return cache.cmono.emplace(a, acc.terms()).first->second;
}

} // namespace

UTensor coproduct_u(const UElem& u) {
    const UAlgebraPtr& A = u.ambient();
    if (!A) throw Error("Internal", "element without ambient algebra");
    UTensor out(A);
    for (const auto& [key, coeff] : u.terms()) {
        const auto& [a, g] = key;
        // the tail g (x) g only shifts the leg groups
        for (const auto& [kk, s] : coproduct_monomial(A, a))
            out.add_term({kk.first.first, kk.first.second * g},
                         {kk.second.first, kk.second.second * g}, s * coeff);
    }
    return out;
}

namespace {

// S(x_{beta_l}) from the word expansion of the root vector, cached
const std::map<UBasisKey, CycScalar>& antipode_root(const UAlgebraPtr& A, int l) {
    auto& cache = ucache(*A);
    {
        std::lock_guard<std::mutex> lk(cache.m);
        if (cache.spos_ready[(size_t)l]) return cache.spos[(size_t)l];
    }
    const DatumPtr& d = A->datum();
    int p = d->roots.p();
    ExpVec el((size_t)p, 0);
    el[(size_t)l] = 1;
    BraidedPoly words = pbw_expand(d, el);
    UElem total(A);
    for (const auto& [w, c] : words.terms()) {
        UElem acc = UElem::unit(A);
        for (size_t r = w.size(); r-- > 0;) {
            int i = (int)w[r];
            // S(x_i) = -g_i^{-1} x_i = -q_ii^{-1} x_i g_i^{-1}
            ExpVec ei((size_t)p, 0);
            ei[(size_t)d->roots.simple_position[(size_t)i]] = 1;
            UElem si = UElem::monomial(
                A, ei, d->g[(size_t)i].inverse(),
                -d->q[(size_t)i][(size_t)i].inverse());
            acc = multiply(acc, si);
        }
        total += acc.scaled(c);
    }
    std::lock_guard<std::mutex> lk(cache.m);
    if (!cache.spos_ready[(size_t)l]) {
        cache.spos[(size_t)l] = total.terms();
        cache.spos_ready[(size_t)l] = true;
    }
    return cache.spos[(size_t)l];
}

// S(x^a) as reduced terms, the descending product of the root vector
// antipode powers; cached per exponent vector
const std::map<UBasisKey, CycScalar>& antipode_monomial(const UAlgebraPtr& A,
                                                        const ExpVec& a) {
    auto& cache = ucache(*A);
    {
        std::lock_guard<std::mutex> lk(cache.m);
        auto it = cache.smono.find(a);
        if (it != cache.smono.end()) return it->second;
    }
    UElem acc = UElem::unit(A);
    for (size_t l = a.size(); l-- > 0;) {
        if (a[l] == 0) continue;
        UElem sl(A);
        for (const auto& [k, c] : antipode_root(A, (int)l))
            sl.add_term(k.first, k.second, c);
        for (int rep = 0; rep < a[l]; ++rep) acc = multiply(acc, sl);
    }
    std::lock_guard<std::mutex> lk(cache.m);
    return cache.smono.emplace(a, acc.terms()).first->second;
}

} // namespace

UElem antipode_u(const UElem& u) {
    const UAlgebraPtr& A = u.ambient();
    if (!A) throw Error("Internal", "element without ambient algebra");
    UElem out(A);
    for (const auto& [key, coeff] : u.terms()) {
        const auto& [a, g] = key;
        GroupElement gi = g.inverse();
        // S(x^a g) = g^{-1} S(x^a); passing g^{-1} to the left of each term
        // costs the character factor of its exponents
        for (const auto& [k, c] : antipode_monomial(A, a))
            out.add_term(k.first, gi * k.second,
                         c * coeff * pass_group(*A, gi, k.first));
    }
    return out;
}

namespace {

using TripleKey = std::tuple<UBasisKey, UBasisKey, UBasisKey>;

void triple_add(std::map<TripleKey, CycScalar>& m, const TripleKey& k,
                const CycScalar& c) {
    if (c.is_zero()) return;
    auto it = m.find(k);
    if (it == m.end()) {
        m.emplace(k, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) m.erase(it);
}

bool coassociative_on(const UAlgebraPtr& A, const UElem& u) {
    UTensor du = coproduct_u(u);
    std::map<UBasisKey, UTensor> memo;
    auto cp = [&](const UBasisKey& k) -> const UTensor& {
        auto it = memo.find(k);
        if (it == memo.end()) it = memo.emplace(k, coproduct_u(key_elem(A, k))).first;
        return it->second;
    };
    std::map<TripleKey, CycScalar> lhs, rhs;
    for (const auto& [k, c] : du.terms()) {
        for (const auto& [kk, cc] : cp(k.first).terms())
            triple_add(lhs, {kk.first, kk.second, k.second}, c * cc);
        for (const auto& [kk, cc] : cp(k.second).terms())
            triple_add(rhs, {k.first, kk.first, kk.second}, c * cc);
    }
    return lhs == rhs;
}

bool exp_zero(const ExpVec& a) {
    for (int v : a)
        if (v != 0) return false;
    return true;
}

bool counit_on(const UAlgebraPtr& A, const UElem& u) {
    UTensor du = coproduct_u(u);
    UElem left(A), right(A);
    for (const auto& [k, c] : du.terms()) {
        if (exp_zero(k.first.first)) left.add_term(k.second.first, k.second.second, c);
        if (exp_zero(k.second.first)) right.add_term(k.first.first, k.first.second, c);
    }
    return left == u && right == u;
}

bool antipode_on(const UAlgebraPtr& A, const UElem& u) {
    UTensor du = coproduct_u(u);
    UElem left(A), right(A);
    for (const auto& [k, c] : du.terms()) {
        UElem sl = multiply(antipode_u(key_elem(A, k.first)), key_elem(A, k.second));
        for (const auto& [kk, cc] : sl.terms())
            left.add_term(kk.first, kk.second, c * cc);
        UElem sr = multiply(key_elem(A, k.first), antipode_u(key_elem(A, k.second)));
        for (const auto& [kk, cc] : sr.terms())
            right.add_term(kk.first, kk.second, c * cc);
    }
    UElem target = UElem::unit(A).scaled(u.counit());
    return left == target && right == target;
}

GroupElement random_group_element(const AbelianGroup& G, std::mt19937_64& rng) {
    std::vector<long> e((size_t)G.rank(), 0);
    for (size_t i = 0; i < e.size(); ++i) {
        std::uniform_int_distribution<long> dist(0, G.invariants()[i] - 1);
        e[i] = dist(rng);
    }
    return G.element(e);
}

long small_limit(const UAlgebraPtr& A) {
    int p = (int)A->exponent_bounds().size();
    double b = std::floor(std::pow(60.0, 1.0 / std::max(1, p)));
    return std::max(1L, (long)b);
}

UBasisKey random_key_limit(const UAlgebraPtr& A, std::mt19937_64& rng, long limit) {
    const auto& bounds = A->exponent_bounds();
    int p = (int)bounds.size();
    ExpVec a((size_t)p, 0);
    for (int l = 0; l < p; ++l) {
        long hi = std::min(bounds[(size_t)l] - 1, limit);
        std::uniform_int_distribution<long> dist(0, hi);
        a[(size_t)l] = (int)dist(rng);
    }
    return {a, random_group_element(A->datum()->group, rng)};
}

UBasisKey random_key(const UAlgebraPtr& A, std::mt19937_64& rng, bool small) {
    return random_key_limit(A, rng, small ? small_limit(A) : 1000000);
}

std::vector<UElem> generator_list(const UAlgebraPtr& A) {
    std::vector<UElem> gens;
    const DatumPtr& d = A->datum();
    for (int i = 0; i < d->theta(); ++i) gens.push_back(UElem::generator(A, i));
    for (long i = 0; i < d->group.rank(); ++i)
        gens.push_back(UElem::group_term(A, d->group.generator(i)));
    return gens;
}

} // namespace

HopfReport verify_hopf(const UAlgebraPtr& A, int samples, unsigned long seed) {
    HopfReport rep;
    const DatumPtr& d = A->datum();
    std::mt19937_64 rng(seed);
    auto mark = std::chrono::steady_clock::now();
    auto push = [&rep, &mark](const std::string& name, bool ok,
                              const std::string& detail) {
        auto now = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(now - mark).count();
        mark = now;
        rep.checks.push_back({name, ok, detail, secs});
    };

    {
        // dimension formula against the graded monomial count
        bool ok = true;
        std::string detail;
        try {
            long up_to = 0;
            for (int l = 0; l < d->roots.p(); ++l)
                up_to += (d->N[(size_t)l] - 1) * d->roots.height(l);
            std::vector<long> dims = nichols_graded_dims(d, (int)up_to, A->cap());
            Int count = 0;
            for (long v : dims) count += v;
            Int expected = 1;
            for (size_t comp = 0; comp < d->cartan.components.size(); ++comp) {
                int nroots = 0;
                for (int l = 0; l < d->roots.p(); ++l)
                    if (d->roots.root_component[(size_t)l] == (int)comp) ++nroots;
                Int f = 1;
                for (int i = 0; i < nroots; ++i) f *= d->component_order[comp];
                expected *= f;
            }
            Int dim = expected * d->group.order();
            ok = (count == expected) && (dim == A->dimension());
            std::ostringstream os;
            os << "dimension " << A->dimension() << ", graded count " << count;
            detail = os.str();
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
        push("dimension", ok, detail);
    }

    std::vector<UElem> gens = generator_list(A);

    {
        bool ok = true;
        std::string detail;
        for (size_t i = 0; ok && i < gens.size(); ++i)
            for (size_t j = 0; ok && j < gens.size(); ++j) {
                UTensor lhs = coproduct_u(multiply(gens[i], gens[j]));
                UTensor rhs = tensor_multiply(coproduct_u(gens[i]), coproduct_u(gens[j]));
                if (lhs != rhs) {
                    ok = false;
                    detail = "generator pair (" + std::to_string(i) + "," +
                             std::to_string(j) + ")";
                }
            }
        push("coproduct_multiplicative_generators", ok, detail);
    }

    {
        // a few samples range over the whole small-key box, which already
        // overflows the exponent bounds in the product; the rest keep the
        // tensor sizes down
        bool ok = true;
        std::string detail;
        long wide = small_limit(A);
        for (int t = 0; ok && t < samples; ++t) {
            long limit = t < 4 ? wide : std::min(wide, 4L);
            UElem x = key_elem(A, random_key_limit(A, rng, limit));
            UElem y = key_elem(A, random_key_limit(A, rng, limit));
            UTensor lhs = coproduct_u(multiply(x, y));
            UTensor rhs = tensor_multiply(coproduct_u(x), coproduct_u(y));
            if (lhs != rhs) {
                ok = false;
                detail = "sample " + std::to_string(t);
            }
        }
        push("coproduct_multiplicative_samples", ok, detail);
    }

    // full-range keys on a multi-root component make the iterated coproduct
    // expensive, so only a couple of samples get them there
    int full_budget = d->roots.p() <= 2 ? 10 : 2;

    {
        bool ok = true;
        std::string detail;
        for (size_t i = 0; ok && i < gens.size(); ++i)
            if (!coassociative_on(A, gens[i])) {
                ok = false;
                detail = "generator " + std::to_string(i);
            }
        for (int t = 0; ok && t < samples; ++t) {
            UElem x = key_elem(A, random_key(A, rng, t >= full_budget));
            if (!coassociative_on(A, x)) {
                ok = false;
                detail = "sample " + std::to_string(t);
            }
        }
        push("coassociativity", ok, detail);
    }

    {
        bool ok = true;
        std::string detail;
        for (size_t i = 0; ok && i < gens.size(); ++i)
            if (!counit_on(A, gens[i])) {
                ok = false;
                detail = "generator " + std::to_string(i);
            }
        for (int t = 0; ok && t < samples; ++t) {
            UElem x = key_elem(A, random_key(A, rng, t >= full_budget));
            if (!counit_on(A, x)) {
                ok = false;
                detail = "sample " + std::to_string(t);
            }
        }
        push("counit", ok, detail);
    }

    {
        bool ok = true;
        std::string detail;
        for (size_t i = 0; ok && i < gens.size(); ++i)
            if (!antipode_on(A, gens[i])) {
                ok = false;
                detail = "generator " + std::to_string(i);
            }
        for (int t = 0; ok && t < samples; ++t) {
            UElem x = key_elem(A, random_key(A, rng, true));
            if (!antipode_on(A, x)) {
                ok = false;
                detail = "sample " + std::to_string(t);
            }
        }
        push("antipode", ok, detail);
    }

    {
        // counit is an algebra map
        bool ok = true;
        std::string detail;
        for (int t = 0; ok && t < samples; ++t) {
            UElem x = key_elem(A, random_key(A, rng, true));
            UElem y = key_elem(A, random_key(A, rng, true));
            if (multiply(x, y).counit() != x.counit() * y.counit()) {
                ok = false;
                detail = "sample " + std::to_string(t);
            }
        }
        push("counit_multiplicative", ok, detail);
    }

    {
        // x_alpha x_beta^N = q(alpha, beta)^N x_beta^N x_alpha
        bool ok = true;
        std::string detail;
        int p = d->roots.p();
        for (int k = 0; ok && k < p; ++k)
            for (int m = 0; ok && m < p; ++m) {
                if (k == m) continue;
                ExpVec ek((size_t)p, 0), em((size_t)p, 0);
                ek[(size_t)k] = 1;
                em[(size_t)m] = (int)d->N[(size_t)m];
                UElem xk = UElem::monomial(A, ek, d->group.identity(),
                                           CycScalar::one(d->ctx));
                UElem pm = UElem::monomial(A, em, d->group.identity(),
                                           CycScalar::one(d->ctx));
                CycScalar q = d->q_bilinear(d->roots.positive_roots[(size_t)k],
                                            d->roots.positive_roots[(size_t)m])
                                  .pow(d->N[(size_t)m]);
                if (multiply(xk, pm) != multiply(pm, xk).scaled(q)) {
                    ok = false;
                    detail = "positions (" + std::to_string(k) + "," +
                             std::to_string(m) + ")";
                }
            }
        push("root_power_commutation", ok, detail);
    }

    {
        // group elements are group-like; no basis monomial with positive
        // exponents is, nor any sampled two-term combination
        bool ok = true;
        std::string detail;
        for (const GroupElement& g : d->group.elements()) {
            UElem u = UElem::group_term(A, g);
            if (coproduct_u(u) != UTensor::of(u, u) || !u.counit().is_one()) {
                ok = false;
                detail = "group element not group-like";
                break;
            }
        }
        bool exhaustive = A->dimension() <= 5000;
        if (ok && exhaustive) {
            std::vector<GroupElement> elems = d->group.elements();
            int p = d->roots.p();
            ExpVec a((size_t)p, 0);
            bool done = false;
            while (!done) {
                if (!exp_zero(a))
                    for (const GroupElement& g : elems) {
                        UElem u = UElem::monomial(A, a, g, CycScalar::one(d->ctx));
                        if (coproduct_u(u) == UTensor::of(u, u)) {
                            ok = false;
                            detail = "monomial " + vec_text(a) + " group-like";
                            break;
                        }
                    }
                if (!ok) break;
                int l = 0;
                while (l < p) {
                    if (++a[(size_t)l] < (int)d->N[(size_t)l]) break;
                    a[(size_t)l] = 0;
                    ++l;
                }
                done = (l == p);
            }
        } else if (ok) {
            for (int t = 0; ok && t < samples; ++t) {
                UBasisKey k = random_key(A, rng, t >= full_budget);
                if (exp_zero(k.first)) continue;
                UElem u = key_elem(A, k);
                if (coproduct_u(u) == UTensor::of(u, u)) {
                    ok = false;
                    detail = "sampled monomial group-like";
                }
            }
        }
        if (ok) {
            for (int t = 0; ok && t < std::min(samples, 50); ++t) {
                UBasisKey k = random_key(A, rng, true);
                if (exp_zero(k.first)) continue;
                UElem u = UElem::group_term(A, random_group_element(d->group, rng)) +
                          key_elem(A, k);
                if (coproduct_u(u) == UTensor::of(u, u)) {
                    ok = false;
                    detail = "two-term candidate group-like";
                }
            }
        }
        push(exhaustive ? "group_like_census_exhaustive" : "group_like_census_sampled",
             ok, detail);
    }

    rep.ok = true;
    for (const auto& c : rep.checks) rep.ok = rep.ok && c.ok;
    return rep;
}

CauchyReport cauchy_check(const UAlgebraPtr& A) {
    CauchyReport rep;
    const AbelianGroup& G = A->datum()->group;
    Int n = A->dimension();
    std::vector<Int> primes;
    Int p = 2;
    while (p * p <= n) {
        if (n % p == 0) {
            primes.push_back(p);
            while (n % p == 0) n /= p;
        }
        ++p;
    }
    if (n > 1) primes.push_back(n);

    for (const Int& q : primes) {
        long qi = (long)q.get_si();
        bool found = false;
        for (long i = 0; i < G.rank() && !found; ++i) {
            long inv = G.invariants()[(size_t)i];
            if (inv % qi == 0) {
                GroupElement w = G.generator(i).pow(inv / qi);
                if (w.order() != qi) continue;
                rep.entries.push_back({q, w});
                found = true;
            }
        }
        if (!found)
            rep.failures.push_back("no group element of prime order " + q.get_str());
    }
    rep.ok = rep.failures.empty();
    return rep;
}

} // namespace qf
