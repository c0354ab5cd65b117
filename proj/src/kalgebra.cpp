#include "qf/kalgebra.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>

namespace qf {

namespace {

std::string vec_str(const std::vector<int>& v) {
    std::string s;
    for (int x : v) {
        s += std::to_string(x);
        s += ',';
    }
    return s;
}

long resolve_cap(const Datum& d, long cap) {
    return cap >= 0 ? cap : default_degree_cap(d);
}

void check_exponent(const Datum& d, int comp, const std::vector<int>& a) {
    if (comp < 0 || comp >= (int)d.cartan.components.size())
        throw Error("Internal", "component index out of range");
    if (a.size() != component_positions(d, comp).size())
        throw Error("Internal", "exponent vector has the wrong length");
    for (int x : a)
        if (x < 0) throw Error("Internal", "negative exponent");
}

bool is_zero_vec(const std::vector<int>& a) {
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

// Tensor square of the group algebra, for the coproduct identity.
using GTensor = std::map<std::pair<GroupElement, GroupElement>, CycScalar>;

void gt_add(GTensor& t, const GroupAlgElem& u, const GroupAlgElem& v,
            const CycScalar& s) {
    if (s.is_zero()) return;
    for (const auto& [g, cg] : u.terms())
        for (const auto& [h, ch] : v.terms()) {
            CycScalar c = cg * ch * s;
            auto key = std::make_pair(g, h);
            auto it = t.find(key);
            if (it == t.end()) {
                if (!c.is_zero()) t.emplace(key, std::move(c));
            } else {
                it->second += c;
                if (it->second.is_zero()) t.erase(it);
            }
        }
}

GTensor diagonal_coproduct(const GroupAlgElem& u) {
    GTensor t;
    for (const auto& [g, c] : u.terms()) t.emplace(std::make_pair(g, g), c);
    return t;
}

std::mutex cache_mu;
std::map<std::string, CoproductConstants> cache;

} // namespace

std::vector<int> component_positions(const Datum& d, int comp) {
    std::vector<int> out;
    for (int l = 0; l < d.roots.p(); ++l)
        if (d.roots.root_component[l] == comp) out.push_back(l);
    return out;
}

KExponent k_exponent(const DatumPtr& d, int comp, const std::vector<int>& a) {
    check_exponent(*d, comp, a);
    auto pos = component_positions(*d, comp);
    long N = d->component_order[comp];
    KExponent out;
    out.d = d;
    out.component = comp;
    out.a = a;
    out.h = d->group.identity();
    out.eta = d->group.trivial_character();
    for (size_t j = 0; j < pos.size(); ++j) {
        const auto& beta = d->roots.positive_roots[pos[j]];
        out.h = out.h * d->g_of(beta).pow(N * a[j]);
        out.eta = out.eta * d->chi_of(beta).pow(N * a[j]);
    }
    return out;
}

long k_height(const Datum& d, int comp, const std::vector<int>& a) {
    check_exponent(d, comp, a);
    auto pos = component_positions(d, comp);
    long h = 0;
    for (size_t j = 0; j < pos.size(); ++j) h += (long)a[j] * d.roots.height(pos[j]);
    return h;
}

CycScalar gamma(const KExponent& b, const KExponent& c) {
    if (!b.d || !c.d || b.d->canonical_key() != c.d->canonical_key())
        throw AmbientMismatch("gamma arguments over different data");
    if (b.component != c.component)
        throw AmbientMismatch("gamma arguments over different components");
    const Datum& d = *b.d;
    auto pos = component_positions(d, b.component);
    long N = d.component_order[b.component];
    CycScalar out(1);
    for (size_t k = 1; k < pos.size(); ++k) {
        if (b.a[k] == 0) continue;
        GroupElement hk = d.g_of(d.roots.positive_roots[pos[k]]).pow(N);
        for (size_t l = 0; l < k; ++l) {
            if (c.a[l] == 0) continue;
            Character etal = d.chi_of(d.roots.positive_roots[pos[l]]).pow(N);
            out *= etal.eval(d.ctx, hk).pow((long)b.a[k] * c.a[l]);
        }
    }
    return out;
}

CoproductConstants coproduct_constants(const DatumPtr& d, int comp,
                                       const std::vector<int>& a, long cap) {
    check_exponent(*d, comp, a);
    if (is_zero_vec(a)) throw ZeroInput("coproduct constants need a nonzero exponent");
    long N = d->component_order[comp];
    long rcap = resolve_cap(*d, cap);
    if (N * k_height(*d, comp, a) > rcap)
        throw DegreeCapExceeded("power exponent exceeds the degree cap");

    std::string key = d->canonical_key() + "|" + std::to_string(comp) + "|" + vec_str(a);
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    auto pos = component_positions(*d, comp);
    ExpVec full(d->roots.p(), 0);
    for (size_t j = 0; j < pos.size(); ++j) full[pos[j]] = (int)N * a[j];
    RTensor t = coproduct_pbw(d, full, rcap);

    CoproductConstants out;
    out.component = comp;
    out.a = a;
    auto extract = [&](const ExpVec& f) {
        std::vector<int> b(pos.size(), 0);
        std::vector<bool> mine(d->roots.p(), false);
        for (size_t j = 0; j < pos.size(); ++j) {
            if (f[pos[j]] % N != 0)
                throw NotInK("coproduct leg is not a power-monomial multiple");
            b[j] = (int)(f[pos[j]] / N);
            mine[pos[j]] = true;
        }
        for (int l = 0; l < d->roots.p(); ++l)
            if (!mine[l] && f[l] != 0)
                throw NotInK("coproduct leg leaves the component");
        return b;
    };
    for (const auto& [legs, coeff] : t.terms()) {
        auto b = extract(legs.first);
        auto c = extract(legs.second);
        if (is_zero_vec(b) || is_zero_vec(c)) {
            const auto& other = is_zero_vec(b) ? c : b;
            if (other != a || !coeff.is_one())
                throw NotInK("boundary coproduct term is not the expected one");
            continue;
        }
        out.t.emplace(std::make_pair(b, c), coeff);
    }

    std::lock_guard<std::mutex> lock(cache_mu);
    return cache.emplace(key, std::move(out)).first->second;
}

UFamily build_ufamily(const DatumPtr& d, int comp, const RootVectorParams& mu,
                      long cap, long max_height) {
    if (comp < 0 || comp >= (int)d->cartan.components.size())
        throw Error("Internal", "component index out of range");
    long rcap = resolve_cap(*d, cap);
    long N = d->component_order[comp];
    auto pos = component_positions(*d, comp);
    int pj = (int)pos.size();
    long top_root = 0;
    for (int l : pos) top_root = std::max(top_root, (long)d->roots.height(l));
    long hmax;
    if (max_height >= 0) {
        hmax = max_height;
    } else {
        if (N * top_root > rcap)
            throw DegreeCapExceeded("the component's largest power exceeds the degree cap");
        hmax = std::min(top_root + 1, rcap / N);
    }
    if (N * hmax > rcap)
        throw DegreeCapExceeded("requested family height exceeds the degree cap");

    // all nonzero exponents of height <= hmax, by height then lexicographic
    std::vector<std::pair<long, std::vector<int>>> order;
    std::vector<int> cur(pj, 0);
    std::function<void(int, long)> enumerate = [&](int j, long ht) {
        if (j == pj) {
            if (ht > 0) order.emplace_back(ht, cur);
            return;
        }
        long w = d->roots.height(pos[j]);
        for (int v = 0; ht + v * w <= hmax; ++v) {
            cur[j] = v;
            enumerate(j + 1, ht + v * w);
        }
        cur[j] = 0;
    };
    enumerate(0, 0);
    std::sort(order.begin(), order.end());

    UFamily fam;
    fam.d = d;
    fam.component = comp;
    fam.max_height = hmax;
    GroupAlgElem one = GroupAlgElem::unit(d->group);

    for (const auto& [ht, a] : order) {
        auto ke = k_exponent(d, comp, a);
        auto consts = coproduct_constants(d, comp, a, rcap);
        CycScalar mu_a(0);
        GroupAlgElem ua;

        int l = -1;
        for (int j = pj - 1; j >= 0; --j)
            if (a[j] > 0) {
                l = j;
                break;
            }
        bool simple = std::accumulate(a.begin(), a.end(), 0) == 1;
        if (simple) {
            mu_a = mu.get(d->roots.positive_roots[pos[l]]);
            ua = (one - GroupAlgElem(ke.h)).scaled(mu_a);
            for (const auto& [bc, tv] : consts.t)
                ua += fam.u.at(bc.second).scaled(tv * fam.mu.at(bc.first));
        } else {
            std::vector<int> r = a;
            r[l] -= 1;
            std::vector<int> el(pj, 0);
            el[l] = 1;
            ua = fam.u.at(r) * fam.u.at(el);
            // the recursion must close: the remainder of the product over
            // the lower family members is exactly mu_a (1 - h^a)
            GroupAlgElem w = ua;
            for (const auto& [bc, tv] : consts.t)
                w -= fam.u.at(bc.second).scaled(tv * fam.mu.at(bc.first));
            if (ke.h.is_identity()) {
                if (!w.is_zero())
                    throw ConsistencyFailure("nonzero remainder at a trivial group power");
            } else {
                mu_a = w.coefficient(d->group.identity());
                if (w != (one - GroupAlgElem(ke.h)).scaled(mu_a))
                    throw ConsistencyFailure("remainder is not a multiple of 1 - h^a");
            }
        }

        if (!ua.counit().is_zero())
            throw ConsistencyFailure("family member has a nonzero counit");
        if (simple && !ke.eta.is_trivial() && !ua.is_zero())
            throw ConsistencyFailure("nontrivial character with a nonzero family member");

        // coproduct identity, checked exactly in the tensor square
        GTensor lhs = diagonal_coproduct(ua);
        GTensor rhs;
        gt_add(rhs, GroupAlgElem(ke.h), ua, CycScalar(1));
        gt_add(rhs, ua, one, CycScalar(1));
        for (const auto& [bc, tv] : consts.t) {
            auto kc = k_exponent(d, comp, bc.second);
            gt_add(rhs, fam.u.at(bc.first) * GroupAlgElem(kc.h), fam.u.at(bc.second), tv);
        }
        if (lhs != rhs)
            throw ConsistencyFailure("family member violates the coproduct identity");

        fam.u.emplace(a, std::move(ua));
        fam.mu.emplace(a, mu_a);
    }
    return fam;
}

GroupAlgElem u_alpha(const DatumPtr& d, const RootVectorParams& mu,
                     const std::vector<int>& alpha, long cap) {
    int l = d->roots.position_of(alpha);
    if (l < 0) throw Error("Internal", "not a positive root");
    int comp = d->roots.root_component[l];
    auto pos = component_positions(*d, comp);
    auto fam = build_ufamily(d, comp, mu, cap, d->roots.height(l));
    std::vector<int> el(pos.size(), 0);
    for (size_t j = 0; j < pos.size(); ++j)
        if (pos[j] == l) el[j] = 1;
    return fam.u.at(el);
}

bool central_support(const Datum& d, const GroupAlgElem& u) {
    for (const auto& [g, c] : u.terms()) {
        (void)c;
        for (int i = 0; i < d.theta(); ++i)
            if (!d.chi[i].eval(d.ctx, g).is_one()) return false;
    }
    return true;
}

} // namespace qf
