#include "qf/quotients.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "qf/errors.hpp"

namespace qf {

namespace {

std::string vec_str(const std::vector<int>& v) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

long total_of(const std::vector<int>& v) {
    long s = 0;
    for (int x : v) s += x;
    return s;
}

void check_cap(long total, long cap) {
    if (total > cap)
        throw DegreeCapExceeded("total degree " + std::to_string(total) +
                                " exceeds the degree cap " + std::to_string(cap));
}

void check_same_datum(const DatumPtr& a, const DatumPtr& b) {
    if (a == b) return;
    if (!a || !b || a->canonical_key() != b->canonical_key())
        throw AmbientMismatch("operands live over different data");
}

// Coefficient maps over PBW exponent vectors / leg pairs; the internal
// working representation behind RElem and RTensor.
using PMap = std::map<ExpVec, CycScalar>;
using TMap = std::map<std::pair<ExpVec, ExpVec>, CycScalar>;

void padd(PMap& m, const ExpVec& a, const CycScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = m.emplace(a, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) m.erase(it);
}

void tadd(TMap& m, const ExpVec& l, const ExpVec& r, const CycScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = m.emplace(std::make_pair(l, r), c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) m.erase(it);
}

// All words of one multidegree, lex ascending.
std::vector<Word> words_of_degree(const std::vector<int>& deg) {
    Word s;
    for (size_t i = 0; i < deg.size(); ++i) s.append((size_t)deg[i], (char)i);
    std::vector<Word> out;
    do out.push_back(s);
    while (std::next_permutation(s.begin(), s.end()));
    return out;
}

// Multinomial count of words of the degree, clamped at clamp + 1.
long word_count_clamped(const std::vector<int>& deg, long clamp) {
    long count = 1;
    long rem = total_of(deg);
    for (int di : deg) {
        for (long j = 1; j <= di; ++j) {
            count = count * (rem - di + j) / j;
            if (count > clamp) return clamp + 1;
        }
        rem -= di;
    }
    return count;
}

// Row space in reduced echelon form with pivots on the HIGHEST column
// index of each row; the non-pivot (normal) columns are then the
// lex-smallest complement when columns are sorted ascending.
struct Rref {
    std::vector<std::vector<CycScalar>> rows;
    std::vector<int> pivot;  // per row

    void insert(std::vector<CycScalar> v) {
        for (size_t r = 0; r < rows.size(); ++r) {
            const CycScalar& c = v[pivot[r]];
            if (c.is_zero()) continue;
            CycScalar f = c;  // pivot entries are normalized to 1
            for (size_t j = 0; j < v.size(); ++j)
                if (!rows[r][j].is_zero()) v[j] -= f * rows[r][j];
        }
        int pc = -1;
        for (int j = (int)v.size() - 1; j >= 0; --j)
            if (!v[j].is_zero()) { pc = j; break; }
        if (pc < 0) return;
        CycScalar inv = v[pc].inverse();
        for (auto& x : v) x *= inv;
        for (size_t r = 0; r < rows.size(); ++r) {
            const CycScalar& c = rows[r][pc];
            if (c.is_zero()) continue;
            CycScalar f = c;
            for (size_t j = 0; j < v.size(); ++j)
                if (!v[j].is_zero()) rows[r][j] -= f * v[j];
        }
        rows.push_back(std::move(v));
        pivot.push_back(pc);
    }

    // Eliminate the pivot coordinates from a coefficient vector.
    void reduce(std::vector<CycScalar>& v) const {
        for (size_t r = 0; r < rows.size(); ++r) {
            const CycScalar& c = v[pivot[r]];
            if (c.is_zero()) continue;
            CycScalar f = c;
            for (size_t j = 0; j < v.size(); ++j)
                if (!rows[r][j].is_zero()) v[j] -= f * rows[r][j];
        }
    }
};

// Exact inverse of a square matrix; nullopt when singular.
std::optional<std::vector<std::vector<CycScalar>>> invert_matrix(
    std::vector<std::vector<CycScalar>> a) {
    size_t n = a.size();
    std::vector<std::vector<CycScalar>> inv(n, std::vector<CycScalar>(n));
    for (size_t i = 0; i < n; ++i) inv[i][i] = CycScalar(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        CycScalar f = a[col][col].inverse();
        for (size_t j = 0; j < n; ++j) { a[col][j] *= f; inv[col][j] *= f; }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            CycScalar g = a[r][col];
            for (size_t j = 0; j < n; ++j) {
                a[r][j] -= g * a[col][j];
                inv[r][j] -= g * inv[col][j];
            }
        }
    }
    return inv;
}

struct Engine {
    DatumPtr d;
    int p = 0;
    std::vector<BraidedPoly> rv;                  // root vectors as word polynomials
    std::vector<std::vector<CycScalar>> qrt;      // q(beta_k, beta_m)
    std::vector<int> letter_pos;                  // simple index -> convex position
    std::map<std::pair<int, int>, BraidedPoly> serre;

    std::recursive_mutex mu;

    struct DegreeEntry {
        GradedComponentBasis basis;
        std::map<Word, int> index;                       // word -> column
        std::vector<int> normal_col;                     // normal idx -> column
        std::vector<std::vector<CycScalar>> inv_change;  // PBW coords from normal coords
        Rref rref;
    };
    std::map<std::vector<int>, DegreeEntry> degrees;
    std::map<std::pair<int, int>, PMap> rels;          // c_{k,m} = [x_k, x_m]_c, k < m
    std::map<std::pair<int, ExpVec>, PMap> gen_mul;    // x_{beta_m} . x^b
    std::map<std::pair<int, int>, TMap> delta_pow;     // Delta(x_{beta_l})^n
};

std::shared_ptr<Engine> engine_for(const DatumPtr& d) {
    static std::mutex reg_mu;
    static std::map<std::string, std::shared_ptr<Engine>> registry;
    std::lock_guard<std::mutex> lock(reg_mu);
    auto key = d->canonical_key();
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    auto e = std::make_shared<Engine>();
    e->d = d;
    e->p = d->roots.p();
    for (int l = 0; l < e->p; ++l) e->rv.push_back(root_vector(d, l));
    e->qrt.assign(e->p, std::vector<CycScalar>(e->p));
    for (int k = 0; k < e->p; ++k)
        for (int m = 0; m < e->p; ++m)
            e->qrt[k][m] =
                d->q_bilinear(d->roots.positive_roots[k], d->roots.positive_roots[m]);
    e->letter_pos = d->roots.simple_position;
    for (int i = 0; i < d->theta(); ++i)
        for (int j = 0; j < d->theta(); ++j)
            if (i != j) e->serre.emplace(std::make_pair(i, j), serre_element(d, i, j));
    registry[key] = e;
    return e;
}

long resolve_cap(const Datum& d, long cap) {
    return cap >= 0 ? cap : default_degree_cap(d);
}

long exp_total_height(const Engine& e, const ExpVec& a) {
    long s = 0;
    for (int l = 0; l < e.p; ++l) s += (long)a[l] * e.d->roots.height(l);
    return s;
}

// Enumerate all a in N^p with sum a_l beta_l = deg, lex ascending.
void enumerate_pbw(const Engine& e, const std::vector<int>& deg, int l, ExpVec& cur,
                   std::vector<int>& rem, std::vector<ExpVec>& out) {
    if (l == e.p) {
        for (int x : rem)
            if (x != 0) return;
        out.push_back(cur);
        return;
    }
    const auto& beta = e.d->roots.positive_roots[l];
    int max_a = -1;
    for (size_t i = 0; i < beta.size(); ++i)
        if (beta[i] > 0) {
            int b = rem[i] / beta[i];
            if (max_a < 0 || b < max_a) max_a = b;
        }
    for (int a = 0; a <= max_a; ++a) {
        cur[l] = a;
        enumerate_pbw(e, deg, l + 1, cur, rem, out);
        for (size_t i = 0; i < beta.size(); ++i) rem[i] -= beta[i];
    }
    for (size_t i = 0; i < beta.size(); ++i) rem[i] += (max_a + 1) * beta[i];
    cur[l] = 0;
}

// Word-space basis data at one degree: Serre ideal rows, normal words,
// PBW monomials with their change of basis, and the inverse used for
// normal-form solves.  Cached.
const Engine::DegreeEntry& degree_entry(Engine& e, const std::vector<int>& deg, long cap) {
    check_cap(total_of(deg), cap);
    auto it = e.degrees.find(deg);
    if (it != e.degrees.end()) return it->second;

    Engine::DegreeEntry ent;
    ent.basis.degree = deg;
    ent.basis.monomial_list = words_of_degree(deg);
    const auto& words = ent.basis.monomial_list;
    for (size_t i = 0; i < words.size(); ++i) ent.index.emplace(words[i], (int)i);
    size_t W = words.size();

    int theta = e.d->theta();
    for (int i = 0; i < theta; ++i)
        for (int j = 0; j < theta; ++j) {
            if (i == j) continue;
            const BraidedPoly& s = e.serre.at({i, j});
            std::vector<int> sdeg(theta, 0);
            sdeg[i] = 1 - e.d->cartan.a[i][j];
            sdeg[j] += 1;
            std::vector<int> box(theta);
            bool fits = true;
            for (int t = 0; t < theta; ++t) {
                box[t] = deg[t] - sdeg[t];
                if (box[t] < 0) fits = false;
            }
            if (!fits) continue;
            // two-sided monomial multiples u s v, split over the box
            std::vector<int> du(theta, 0);
            for (;;) {
                std::vector<int> dv(theta);
                for (int t = 0; t < theta; ++t) dv[t] = box[t] - du[t];
                for (const Word& u : words_of_degree(du))
                    for (const Word& v : words_of_degree(dv)) {
                        std::vector<CycScalar> row(W);
                        for (const auto& [w, c] : s.terms()) row[ent.index.at(u + w + v)] += c;
                        ent.rref.insert(std::move(row));
                    }
                int t = 0;
                while (t < theta && du[t] == box[t]) { du[t] = 0; ++t; }
                if (t == theta) break;
                ++du[t];
            }
        }

    // rows sorted by pivot for a stable public shape
    std::vector<size_t> order(ent.rref.rows.size());
    for (size_t r = 0; r < order.size(); ++r) order[r] = r;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return ent.rref.pivot[a] < ent.rref.pivot[b]; });
    std::vector<bool> is_pivot(W, false);
    for (size_t r : order) {
        ent.basis.ideal_rows.push_back(ent.rref.rows[r]);
        is_pivot[ent.rref.pivot[r]] = true;
    }
    for (size_t j = 0; j < W; ++j)
        if (!is_pivot[j]) {
            ent.basis.normal_monomials.push_back(words[j]);
            ent.normal_col.push_back((int)j);
        }

    ExpVec cur(e.p, 0);
    std::vector<int> rem = deg;
    enumerate_pbw(e, deg, 0, cur, rem, ent.basis.pbw_monomials);

    if (ent.basis.pbw_monomials.size() != ent.basis.normal_monomials.size())
        throw PBWFailure("PBW monomial count " + std::to_string(ent.basis.pbw_monomials.size()) +
                         " does not match the quotient dimension " +
                         std::to_string(ent.basis.normal_monomials.size()) + " at degree " +
                         vec_str(deg));

    size_t n = ent.basis.normal_monomials.size();
    ent.basis.change_of_basis.assign(n, std::vector<CycScalar>(n));
    for (size_t j = 0; j < ent.basis.pbw_monomials.size(); ++j) {
        BraidedPoly expanded = pbw_expand(e.d, ent.basis.pbw_monomials[j]);
        std::vector<CycScalar> v(W);
        for (const auto& [w, c] : expanded.terms()) v[ent.index.at(w)] = c;
        ent.rref.reduce(v);
        for (size_t i = 0; i < n; ++i) ent.basis.change_of_basis[i][j] = v[ent.normal_col[i]];
    }
    if (n > 0) {
        auto inv = invert_matrix(ent.basis.change_of_basis);
        if (!inv)
            throw PBWFailure("PBW monomials are linearly dependent at degree " + vec_str(deg));
        ent.inv_change = std::move(*inv);
    }

    return e.degrees.emplace(deg, std::move(ent)).first->second;
}

PMap mono_times_mono(Engine& e, const ExpVec& a, const ExpVec& b, long cap);

// Image of a homogeneous word polynomial through the word-space quotient
// map, in PBW coordinates.
PMap word_normal_form_part(Engine& e, const BraidedPoly& part, long cap) {
    auto deg = part.degree();
    const auto& ent = degree_entry(e, deg, cap);
    std::vector<CycScalar> v(ent.basis.monomial_list.size());
    for (const auto& [w, c] : part.terms()) v[ent.index.at(w)] = c;
    ent.rref.reduce(v);
    PMap out;
    size_t n = ent.basis.normal_monomials.size();
    for (size_t j = 0; j < n; ++j) {
        CycScalar acc;
        for (size_t i = 0; i < n; ++i) {
            const CycScalar& nc = v[ent.normal_col[i]];
            if (!nc.is_zero()) acc += ent.inv_change[j][i] * nc;
        }
        padd(out, ent.basis.pbw_monomials[j], acc);
    }
    return out;
}

// Commutation correction c_{k,m} = [x_{beta_k}, x_{beta_m}]_c in PBW
// coordinates, k < m; its support must lie strictly between k and m for
// the rewriting below to terminate (the convex-order property).
const PMap& rel(Engine& e, int k, int m, long cap) {
    auto it = e.rels.find({k, m});
    if (it != e.rels.end()) return it->second;
    BraidedPoly bracket = braided_commutator(e.rv[k], e.rv[m]);
    PMap nf;
    if (!bracket.is_zero()) nf = word_normal_form_part(e, bracket, cap);
    for (const auto& [a, c] : nf)
        for (int l = 0; l < e.p; ++l)
            if (a[l] > 0 && (l <= k || l >= m))
                throw PBWFailure("commutator of root vectors " + std::to_string(k) + "," +
                                 std::to_string(m) + " leaves the convex interval");
    return e.rels.emplace(std::make_pair(k, m), std::move(nf)).first->second;
}

const PMap& gen_times_mono(Engine& e, int m, const ExpVec& b, long cap);

PMap gen_times_poly(Engine& e, int m, const PMap& poly, long cap) {
    PMap out;
    for (const auto& [b, c] : poly) {
        const PMap& g = gen_times_mono(e, m, b, cap);
        for (const auto& [a, c2] : g) padd(out, a, c * c2);
    }
    return out;
}

// x_{beta_m} . x^b, straightened onto the PBW basis: misordered adjacent
// pairs rewrite through x_m x_k = q(beta_k,beta_m)^{-1} (x_k x_m - c_{k,m});
// every correction stays strictly inside the convex interval, which makes
// the recursion well-founded.
const PMap& gen_times_mono(Engine& e, int m, const ExpVec& b, long cap) {
    auto key = std::make_pair(m, b);
    auto it = e.gen_mul.find(key);
    if (it != e.gen_mul.end()) return it->second;

    int k = -1;
    for (int l = 0; l < e.p; ++l)
        if (b[l] > 0) { k = l; break; }
    PMap out;
    if (k < 0 || k >= m) {
        ExpVec a = b;
        a[m] += 1;
        out.emplace(std::move(a), CycScalar(1));
    } else {
        ExpVec b2 = b;
        b2[k] -= 1;
        PMap part;
        {
            const PMap& inner = gen_times_mono(e, m, b2, cap);
            for (const auto& [a, c] : inner) {
                for (int l = 0; l < k; ++l)
                    if (a[l] > 0)
                        throw PBWFailure("straightening escaped the convex interval");
                ExpVec a2 = a;
                a2[k] += 1;
                padd(part, a2, c);
            }
        }
        {
            const PMap ckm = rel(e, k, m, cap);
            for (const auto& [cm, cc] : ckm) {
                PMap prod = mono_times_mono(e, cm, b2, cap);
                for (const auto& [a, c2] : prod) padd(part, a, -(cc * c2));
            }
        }
        CycScalar qin = e.qrt[k][m].inverse();
        for (const auto& [a, c] : part) padd(out, a, qin * c);
    }
    return e.gen_mul.emplace(std::move(key), std::move(out)).first->second;
}

PMap mono_times_mono(Engine& e, const ExpVec& a, const ExpVec& b, long cap) {
    PMap cur;
    cur.emplace(b, CycScalar(1));
    for (int l = e.p - 1; l >= 0; --l)
        for (int rep = 0; rep < a[l]; ++rep) cur = gen_times_poly(e, l, cur, cap);
    return cur;
}

PMap word_to_pbw(Engine& e, const Word& w, long cap) {
    PMap cur;
    cur.emplace(ExpVec(e.p, 0), CycScalar(1));
    for (auto rit = w.rbegin(); rit != w.rend(); ++rit)
        cur = gen_times_poly(e, e.letter_pos[(int)*rit], cur, cap);
    return cur;
}

std::vector<int> exp_degree(const Engine& e, const ExpVec& a) {
    std::vector<int> deg(e.d->theta(), 0);
    for (int l = 0; l < e.p; ++l)
        if (a[l] != 0)
            for (int i = 0; i < e.d->theta(); ++i)
                deg[i] += a[l] * e.d->roots.positive_roots[l][i];
    return deg;
}

TMap tensor_mul_maps(Engine& e, const TMap& t1, const TMap& t2, long cap) {
    TMap out;
    for (const auto& [pair1, c1] : t1)
        for (const auto& [pair2, c2] : t2) {
            CycScalar f =
                e.d->q_bilinear(exp_degree(e, pair1.second), exp_degree(e, pair2.first));
            PMap left = mono_times_mono(e, pair1.first, pair2.first, cap);
            PMap right = mono_times_mono(e, pair1.second, pair2.second, cap);
            CycScalar base = c1 * c2 * f;
            for (const auto& [al, cl] : left)
                for (const auto& [ar, cr] : right) tadd(out, al, ar, base * cl * cr);
        }
    return out;
}

// Delta(x_{beta_l})^n with legs in PBW coordinates, cached per (l, n).
const TMap& delta_power(Engine& e, int l, int n, long cap) {
    auto key = std::make_pair(l, n);
    auto it = e.delta_pow.find(key);
    if (it != e.delta_pow.end()) return it->second;
    TMap out;
    if (n == 1) {
        TensorPoly tp = coproduct(e.rv[l]);
        for (const auto& [pair, c] : tp.terms()) {
            PMap nl = word_to_pbw(e, pair.first, cap);
            PMap nr = word_to_pbw(e, pair.second, cap);
            for (const auto& [al, cl] : nl)
                for (const auto& [ar, cr] : nr) tadd(out, al, ar, c * cl * cr);
        }
    } else {
        out = tensor_mul_maps(e, delta_power(e, l, n - 1, cap), delta_power(e, l, 1, cap), cap);
    }
    return e.delta_pow.emplace(std::move(key), std::move(out)).first->second;
}

RElem relem_from_map(const DatumPtr& d, PMap m) {
    RElem out(d);
    for (auto& [a, c] : m) out.add_term(a, c);
    return out;
}

}  // namespace

std::vector<int> pbw_degree(const Datum& d, const ExpVec& a) {
    if ((int)a.size() != d.roots.p()) throw Error("Internal", "exponent vector has the wrong length");
    std::vector<int> deg(d.theta(), 0);
    for (int l = 0; l < (int)a.size(); ++l) {
        if (a[l] < 0) throw Error("Internal", "negative exponent in PBW monomial");
        for (int i = 0; i < d.theta(); ++i) deg[i] += a[l] * d.roots.positive_roots[l][i];
    }
    return deg;
}

BraidedPoly pbw_expand(DatumPtr d, const ExpVec& a) {
    if ((int)a.size() != d->roots.p()) throw Error("Internal", "exponent vector has the wrong length");
    BraidedPoly out = BraidedPoly::unit(d);
    for (int l = 0; l < (int)a.size(); ++l) {
        if (a[l] < 0) throw Error("Internal", "negative exponent in PBW monomial");
        BraidedPoly x = root_vector(d, l);
        for (int rep = 0; rep < a[l]; ++rep) out = out * x;
    }
    return out;
}

long default_degree_cap(const Datum& d) {
    if (const char* env = std::getenv("QF_DEGREE_CAP")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    long maxn = 1;
    for (long n : d.component_order) maxn = std::max(maxn, n);
    return 2 * maxn + 10;
}

RElem RElem::unit(DatumPtr d) {
    return monomial(std::move(d), ExpVec(), CycScalar(1));
}

RElem RElem::monomial(DatumPtr d, const ExpVec& a, const CycScalar& c) {
    RElem out(d);
    ExpVec v = a;
    if ((int)v.size() > out.d_->roots.p())
        throw Error("Internal", "exponent vector has the wrong length");
    v.resize(out.d_->roots.p(), 0);
    out.add_term(v, c);
    return out;
}

void RElem::add_term(const ExpVec& a, const CycScalar& c) {
    if ((int)a.size() != d_->roots.p()) throw Error("Internal", "exponent vector has the wrong length");
    for (int x : a)
        if (x < 0) throw Error("Internal", "negative exponent in PBW monomial");
    padd(t_, a, c);
}

RElem RElem::operator+(const RElem& o) const {
    check_same_datum(d_, o.d_);
    RElem out(d_);
    out.t_ = t_;
    for (const auto& [a, c] : o.t_) padd(out.t_, a, c);
    return out;
}

RElem RElem::operator-(const RElem& o) const { return *this + (-o); }

RElem RElem::operator-() const {
    RElem out(d_);
    for (const auto& [a, c] : t_) out.t_.emplace(a, -c);
    return out;
}

RElem RElem::scaled(const CycScalar& c) const {
    RElem out(d_);
    if (c.is_zero()) return out;
    for (const auto& [a, v] : t_) {
        CycScalar w = v * c;
        if (!w.is_zero()) out.t_.emplace(a, w);
    }
    return out;
}

RElem RElem::operator*(const RElem& o) const { return mul_relems(*this, o); }

bool operator==(const RElem& a, const RElem& b) {
    if (a.t_.empty() && b.t_.empty()) return true;
    check_same_datum(a.d_, b.d_);
    return a.t_ == b.t_;
}

long RElem::total_degree() const {
    long best = 0;
    for (const auto& [a, c] : t_) {
        long s = 0;
        for (int l = 0; l < (int)a.size(); ++l) s += (long)a[l] * d_->roots.height(l);
        best = std::max(best, s);
    }
    return best;
}

RTensor RTensor::of(const RElem& left, const RElem& right) {
    check_same_datum(left.ambient(), right.ambient());
    RTensor out(left.ambient());
    for (const auto& [al, cl] : left.terms())
        for (const auto& [ar, cr] : right.terms()) out.add_term(al, ar, cl * cr);
    return out;
}

void RTensor::add_term(const ExpVec& l, const ExpVec& r, const CycScalar& c) {
    if ((int)l.size() != d_->roots.p() || (int)r.size() != d_->roots.p())
        throw Error("Internal", "exponent vector has the wrong length");
    tadd(t_, l, r, c);
}

RTensor RTensor::operator+(const RTensor& o) const {
    check_same_datum(d_, o.d_);
    RTensor out(d_);
    out.t_ = t_;
    for (const auto& [k, c] : o.t_) tadd(out.t_, k.first, k.second, c);
    return out;
}

RTensor RTensor::operator-(const RTensor& o) const { return *this + o.scaled(CycScalar(-1)); }

RTensor RTensor::scaled(const CycScalar& c) const {
    RTensor out(d_);
    if (c.is_zero()) return out;
    for (const auto& [k, v] : t_) {
        CycScalar w = v * c;
        if (!w.is_zero()) out.t_.emplace(k, w);
    }
    return out;
}

bool operator==(const RTensor& a, const RTensor& b) {
    if (a.t_.empty() && b.t_.empty()) return true;
    check_same_datum(a.d_, b.d_);
    return a.t_ == b.t_;
}

GradedComponentBasis ideal_component(const DatumPtr& d, const std::vector<int>& degree,
                                     long cap) {
    if ((int)degree.size() != d->theta()) throw Error("Internal", "degree vector has the wrong length");
    for (int x : degree)
        if (x < 0) throw Error("Internal", "negative degree entry");
    auto e = engine_for(d);
    std::lock_guard<std::recursive_mutex> lock(e->mu);
    return degree_entry(*e, degree, resolve_cap(*d, cap)).basis;
}

RElem normal_form(const BraidedPoly& x, long cap) {
    const DatumPtr& d = x.ambient();
    if (!d) throw ZeroInput("normal form of a polynomial without ambient datum");
    auto e = engine_for(d);
    std::lock_guard<std::recursive_mutex> lock(e->mu);
    long rcap = resolve_cap(*d, cap);
    // word-space route below this many words per degree, rewriting above
    constexpr long kWordLimit = 3000;
    PMap acc;
    for (const auto& deg : x.degrees()) {
        check_cap(total_of(deg), rcap);
        BraidedPoly part = x.homogeneous_part(deg);
        if (word_count_clamped(deg, kWordLimit) <= kWordLimit) {
            for (const auto& [a, c] : word_normal_form_part(*e, part, rcap)) padd(acc, a, c);
        } else {
            for (const auto& [w, c] : part.terms()) {
                PMap nf = word_to_pbw(*e, w, rcap);
                for (const auto& [a, c2] : nf) padd(acc, a, c * c2);
            }
        }
    }
    return relem_from_map(e->d, std::move(acc));
}

RElem mul_relems(const RElem& u, const RElem& v, long cap) {
    check_same_datum(u.ambient(), v.ambient());
    if (u.is_zero() || v.is_zero()) return RElem(u.ambient() ? u.ambient() : v.ambient());
    const DatumPtr& d = u.ambient();
    auto e = engine_for(d);
    std::lock_guard<std::recursive_mutex> lock(e->mu);
    long rcap = resolve_cap(*d, cap);
    check_cap(u.total_degree() + v.total_degree(), rcap);
    PMap acc;
    for (const auto& [a, ca] : u.terms())
        for (const auto& [b, cb] : v.terms()) {
            PMap prod = mono_times_mono(*e, a, b, rcap);
            CycScalar f = ca * cb;
            for (const auto& [m, c] : prod) padd(acc, m, f * c);
        }
    return relem_from_map(e->d, std::move(acc));
}

RTensor mul_rtensor(const RTensor& t1, const RTensor& t2, long cap) {
    check_same_datum(t1.ambient(), t2.ambient());
    if (t1.is_zero() || t2.is_zero())
        return RTensor(t1.ambient() ? t1.ambient() : t2.ambient());
    const DatumPtr& d = t1.ambient();
    auto e = engine_for(d);
    std::lock_guard<std::recursive_mutex> lock(e->mu);
    long rcap = resolve_cap(*d, cap);
    long worst1 = 0, worst2 = 0;
    for (const auto& [k, c] : t1.terms())
        worst1 = std::max(worst1, exp_total_height(*e, k.first) + exp_total_height(*e, k.second));
    for (const auto& [k, c] : t2.terms())
        worst2 = std::max(worst2, exp_total_height(*e, k.first) + exp_total_height(*e, k.second));
    check_cap(worst1 + worst2, rcap);
    TMap out = tensor_mul_maps(*e, t1.terms(), t2.terms(), rcap);
    RTensor res(e->d);
    for (auto& [k, c] : out) res.add_term(k.first, k.second, c);
    return res;
}

RTensor coproduct_pbw(const DatumPtr& d, const ExpVec& a, long cap) {
    if ((int)a.size() != d->roots.p()) throw Error("Internal", "exponent vector has the wrong length");
    for (int x : a)
        if (x < 0) throw Error("Internal", "negative exponent in PBW monomial");
    auto e = engine_for(d);
    std::lock_guard<std::recursive_mutex> lock(e->mu);
    long rcap = resolve_cap(*d, cap);
    check_cap(exp_total_height(*e, a), rcap);
    TMap cur;
    cur.emplace(std::make_pair(ExpVec(e->p, 0), ExpVec(e->p, 0)), CycScalar(1));
    for (int l = 0; l < e->p; ++l)
        if (a[l] > 0) cur = tensor_mul_maps(*e, cur, delta_power(*e, l, a[l], rcap), rcap);
    RTensor res(e->d);
    for (auto& [k, c] : cur) res.add_term(k.first, k.second, c);
    return res;
}

std::vector<long> nichols_graded_dims(const DatumPtr& d, int up_to, long cap) {
    if (up_to < 0) throw Error("Internal", "negative degree bound");
    auto e = engine_for(d);
    std::lock_guard<std::recursive_mutex> lock(e->mu);
    long rcap = resolve_cap(*d, cap);

    // The root-vector powers x_m^{N_m} must q-commute exactly with every
    // root vector; this is what collapses the two-sided ideal onto the
    // span of the over-threshold PBW monomials.
    for (int k = 0; k < e->p; ++k)
        for (int m = k + 1; m < e->p; ++m) {
            long nk = d->N[k], nm = d->N[m];
            long hk = d->roots.height(k), hm = d->roots.height(m);
            check_cap(hk + nm * hm, rcap);
            check_cap(nk * hk + hm, rcap);
            // x_m^{N_m} x_k vs q(beta_k,beta_m)^{-N_m} x_k x_m^{N_m}
            ExpVec pk(e->p, 0), pm(e->p, 0), both(e->p, 0);
            pk[k] = 1;
            pm[m] = (int)nm;
            both[k] = 1;
            both[m] = (int)nm;
            PMap got = mono_times_mono(*e, pm, pk, rcap);
            PMap want;
            want.emplace(both, e->qrt[k][m].pow(-nm));
            bool ok1 = got == want;
            // x_m x_k^{N_k} vs q(beta_m,beta_k)^{N_k} x_k^{N_k} x_m
            ExpVec sk(e->p, 0), sm(e->p, 0), both2(e->p, 0);
            sk[k] = (int)nk;
            sm[m] = 1;
            both2[k] = (int)nk;
            both2[m] = 1;
            PMap got2 = mono_times_mono(*e, sm, sk, rcap);
            PMap want2;
            want2.emplace(both2, e->qrt[m][k].pow(nk));
            if (!ok1 || !(got2 == want2))
                throw PBWFailure("root-vector power fails to q-commute at pair (" +
                                 std::to_string(k) + "," + std::to_string(m) + ")");
        }

    // restricted PBW monomial counts per total degree
    long top = 0;
    for (int l = 0; l < e->p; ++l) top += (d->N[l] - 1) * d->roots.height(l);
    std::vector<Int> dims(top + 1, Int(0));
    dims[0] = 1;
    for (int l = 0; l < e->p; ++l) {
        long h = d->roots.height(l);
        std::vector<Int> next(top + 1, Int(0));
        for (long t = 0; t <= top; ++t) {
            if (dims[t] == 0) continue;
            for (long j = 0; j < d->N[l] && t + j * h <= top; ++j) next[t + j * h] += dims[t];
        }
        dims = std::move(next);
    }
    Int total = 0;
    for (const Int& x : dims) total += x;
    Int expect = 1;
    for (int l = 0; l < e->p; ++l) expect *= Int(d->N[l]);
    if (total != expect)
        throw PBWFailure("restricted monomial total disagrees with the dimension product");

    std::vector<long> out(up_to + 1, 0);
    for (long t = 0; t <= up_to && t <= top; ++t) out[t] = checked_long(dims[t]);
    return out;
}

}  // namespace qf
