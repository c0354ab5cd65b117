#include "qf/scalars.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace qf {

long euler_phi(long m) {
    if (m <= 0) throw ZeroInput("euler_phi requires m >= 1");
    long result = m;
    long n = m;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

// Exact division of integer polynomials, ascending coefficients.
// Requires the division to be exact with monic divisor.
std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den) {
    while (!num.empty() && num.back() == 0) num.pop_back();
    std::vector<Int> q(num.size() - den.size() + 1, Int(0));
    for (long i = (long)q.size() - 1; i >= 0; --i) {
        Int c = num[i + den.size() - 1]; // divisor monic
        q[i] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    for (const Int& c : num)
        if (c != 0) throw Error("Internal", "inexact polynomial division");
    return q;
}

} // namespace

std::vector<Int> cyclotomic_polynomial(long m) {
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, computed recursively.
    std::vector<Int> num(m + 1, Int(0));
    num[0] = -1;
    num[m] = 1;
    for (long d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        num = poly_div_exact(std::move(num), cyclotomic_polynomial(d));
    }
    return num;
}

std::shared_ptr<const ScalarContext> ScalarContext::make(long m) {
    if (m <= 0) throw ZeroInput("root-of-unity order must be >= 1");
    static std::mutex mtx;
    static std::map<long, std::shared_ptr<const ScalarContext>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    auto ctx = std::make_shared<ScalarContext>();
    ctx->m = m;
    ctx->cyclo = cyclotomic_polynomial(m);
    ctx->degree = (long)ctx->cyclo.size() - 1;
    // x^k mod Phi_m for 0 <= k < m via repeated shift-and-reduce.
    ctx->zpow.resize(m);
    std::vector<Int> cur(1, Int(1));
    for (long k = 0; k < m; ++k) {
        ctx->zpow[k] = cur;
        ctx->zpow[k].resize(ctx->degree, Int(0));
        // multiply by x
        cur.insert(cur.begin(), Int(0));
        if ((long)cur.size() == ctx->degree + 1) {
            Int lead = cur.back();
            cur.pop_back();
            if (lead != 0)
                for (long j = 0; j < ctx->degree; ++j) cur[j] -= lead * ctx->cyclo[j];
        }
    }
    cache[m] = ctx;
    return ctx;
}

CycScalar::CycScalar() : ctx_(ScalarContext::make(1)), c_(1, Rational(0)) {}

CycScalar::CycScalar(const Rational& r) : ctx_(ScalarContext::make(1)), c_(1, r) {}

CycScalar::CycScalar(long v) : CycScalar(Rational(v)) {}

CycScalar CycScalar::zero(const ScalarContextPtr& ctx) {
    CycScalar s;
    s.ctx_ = ctx;
    s.c_.assign(ctx->degree, Rational(0));
    return s;
}

CycScalar CycScalar::one(const ScalarContextPtr& ctx) {
    CycScalar s = zero(ctx);
    s.c_[0] = 1;
    return s;
}

CycScalar CycScalar::from_rational(const ScalarContextPtr& ctx, const Rational& r) {
    CycScalar s = zero(ctx);
    s.c_[0] = r;
    return s;
}

CycScalar CycScalar::root_of_unity(const ScalarContextPtr& ctx, long k) {
    CycScalar s = zero(ctx);
    k = mod_reduce(k, ctx->m);
    for (long j = 0; j < ctx->degree; ++j) s.c_[j] = Rational(ctx->zpow[k][j]);
    return s;
}

CycScalar CycScalar::from_coeffs(const ScalarContextPtr& ctx, std::vector<Rational> coeffs) {
    if ((long)coeffs.size() != ctx->degree)
        throw ContextMismatch("coefficient vector length does not match field degree");
    CycScalar s;
    s.ctx_ = ctx;
    s.c_ = std::move(coeffs);
    for (auto& c : s.c_) c.canonicalize();
    return s;
}

bool CycScalar::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r == 0; });
}

bool CycScalar::is_one() const {
    if (c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& r) { return r == 0; });
}

std::optional<Rational> CycScalar::as_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return std::nullopt;
    return c_[0];
}

CycScalar CycScalar::lift_to(const ScalarContextPtr& bigger) const {
    if (bigger->m == ctx_->m) {
        CycScalar s = *this;
        s.ctx_ = bigger;
        return s;
    }
    if (bigger->m % ctx_->m != 0)
        throw ContextMismatch("target order is not a multiple of the current order");
    long step = bigger->m / ctx_->m; // zeta_small = zeta_big^step
    CycScalar out = zero(bigger);
    for (long j = 0; j < ctx_->degree; ++j) {
        if (c_[j] == 0) continue;
        long k = mod_reduce(j * step, bigger->m);
        for (long t = 0; t < bigger->degree; ++t)
            out.c_[t] += c_[j] * Rational(bigger->zpow[k][t]);
    }
    return out;
}

void CycScalar::align(CycScalar& a, CycScalar& b) {
    if (a.ctx_->m == b.ctx_->m) {
        if (a.ctx_ != b.ctx_) b.ctx_ = a.ctx_;
        return;
    }
    long la = a.ctx_->m, lb = b.ctx_->m;
    if (lb % la == 0) {
        a = a.lift_to(b.ctx_);
    } else if (la % lb == 0) {
        b = b.lift_to(a.ctx_);
    } else {
        throw ContextMismatch("incompatible root-of-unity orders " + std::to_string(la) +
                              " and " + std::to_string(lb));
    }
}

CycScalar CycScalar::operator-() const {
    CycScalar s = *this;
    for (auto& c : s.c_) c = -c;
    return s;
}

CycScalar operator+(const CycScalar& a, const CycScalar& b) {
    CycScalar x = a, y = b;
    CycScalar::align(x, y);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    return x;
}

CycScalar operator-(const CycScalar& a, const CycScalar& b) {
    CycScalar x = a, y = b;
    CycScalar::align(x, y);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
    return x;
}

void CycScalar::reduce_tail(std::vector<Rational>& raw) const {
    // raw has length < 2*degree; fold x^k for k >= degree using x^m == 1
    // and the tabulated residues of x^k mod Phi_m.
    long deg = ctx_->degree;
    for (long k = (long)raw.size() - 1; k >= deg; --k) {
        if (raw[k] == 0) continue;
        Rational c = raw[k];
        raw[k] = 0;
        const auto& rep = ctx_->zpow[mod_reduce(k, ctx_->m)];
        for (long j = 0; j < deg; ++j)
            if (rep[j] != 0) raw[j] += c * Rational(rep[j]);
    }
    raw.resize(deg);
}

CycScalar operator*(const CycScalar& a, const CycScalar& b) {
    CycScalar x = a, y = b;
    CycScalar::align(x, y);
    long deg = x.ctx_->degree;
    std::vector<Rational> raw(2 * deg - 1, Rational(0));
    for (long i = 0; i < deg; ++i) {
        if (x.c_[i] == 0) continue;
        for (long j = 0; j < deg; ++j) {
            if (y.c_[j] == 0) continue;
            raw[i + j] += x.c_[i] * y.c_[j];
        }
    }
    x.reduce_tail(raw);
    x.c_ = std::move(raw);
    return x;
}

namespace {

// Rational polynomials, ascending; degree -1 encoded by empty vector.
using QPoly = std::vector<Rational>;

void qtrim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly qsub_scaled(QPoly a, const QPoly& b, const Rational& c, size_t shift) {
    // a - c * x^shift * b
    if (a.size() < b.size() + shift) a.resize(b.size() + shift, Rational(0));
    for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
    qtrim(a);
    return a;
}

// Returns (quotient, remainder) of a / b, b nonzero.
std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    QPoly q;
    qtrim(a);
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = c;
        a = qsub_scaled(std::move(a), b, c, shift);
    }
    return {q, a};
}

} // namespace

CycScalar CycScalar::inverse() const {
    if (is_zero()) throw ZeroInput("0 has no inverse");
    if (auto r = as_rational()) {
        CycScalar s = zero(ctx_);
        s.c_[0] = Rational(1) / *r;
        return s;
    }
    // Extended Euclid in Q[x] against Phi_m: find u with u*self == 1 mod Phi.
    QPoly r0(ctx_->cyclo.size());
    for (size_t i = 0; i < ctx_->cyclo.size(); ++i) r0[i] = Rational(ctx_->cyclo[i]);
    QPoly r1 = c_;
    qtrim(r1);
    QPoly s0{}, s1{Rational(1)}; // coefficients of self in the Bezout combo
    while (true) {
        auto [q, r2] = qdivmod(r0, r1);
        if (r2.empty()) break;
        // s2 = s0 - q*s1
        QPoly s2 = s0;
        for (size_t i = 0; i < q.size(); ++i)
            if (q[i] != 0) s2 = qsub_scaled(std::move(s2), s1, q[i], i);
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r1 = gcd (a nonzero constant, since Phi_m is irreducible over Q)
    if (r1.size() != 1)
        throw Error("Internal", "cyclotomic modulus not coprime to nonzero element");
    CycScalar out = zero(ctx_);
    for (size_t i = 0; i < s1.size() && i < out.c_.size(); ++i) out.c_[i] = s1[i] / r1[0];
    return out;
}

CycScalar operator/(const CycScalar& a, const CycScalar& b) { return a * b.inverse(); }

bool operator==(const CycScalar& a, const CycScalar& b) {
    CycScalar x = a, y = b;
    CycScalar::align(x, y);
    return x.c_ == y.c_;
}

bool operator<(const CycScalar& a, const CycScalar& b) {
    CycScalar x = a, y = b;
    CycScalar::align(x, y);
    for (size_t i = 0; i < x.c_.size(); ++i) {
        int c = cmp(x.c_[i], y.c_[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

CycScalar CycScalar::pow(long e) const {
    if (e == 0) return one(ctx_);
    CycScalar base = *this;
    if (e < 0) {
        base = base.inverse();
        e = -e;
    }
    CycScalar acc = one(ctx_);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

std::optional<long> CycScalar::multiplicative_order() const {
    if (is_zero()) throw ZeroInput("0 has no multiplicative order");
    // Roots of unity in Q(zeta_m) all have order dividing lcm(2, m) <= 2m.
    CycScalar p = *this;
    for (long n = 1; n <= 2 * ctx_->m; ++n) {
        if (p.is_one()) return n;
        p *= *this;
    }
    return std::nullopt;
}

std::string CycScalar::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (long j = 0; j < (long)c_.size(); ++j) {
        if (c_[j] == 0) continue;
        if (!first) out << " + ";
        first = false;
        out << c_[j].get_str();
        if (j == 1)
            out << "*z";
        else if (j > 1)
            out << "*z^" << j;
    }
    if (first) out << "0";
    return out.str();
}

CycScalar CycScalar::parse(const ScalarContextPtr& ctx, const std::string& text) {
    CycScalar s = zero(ctx);
    // Split on " + "; each term is "<rat>", "<rat>*z", "<rat>*z^k",
    // or bare "z"/"z^k" (coefficient 1).
    size_t pos = 0;
    auto fail = [&]() { throw Error("ParseError", "bad scalar literal: " + text); };
    while (pos < text.size()) {
        size_t next = text.find(" + ", pos);
        std::string term = text.substr(pos, next == std::string::npos ? next : next - pos);
        pos = next == std::string::npos ? text.size() : next + 3;
        if (term.empty()) fail();
        std::string coeff_part = term, z_part;
        size_t star = term.find('*');
        if (star != std::string::npos) {
            coeff_part = term.substr(0, star);
            z_part = term.substr(star + 1);
        } else if (term[0] == 'z') {
            coeff_part = "1";
            z_part = term;
        } else if (term.size() > 1 && term[0] == '-' && term[1] == 'z') {
            coeff_part = "-1";
            z_part = term.substr(1);
        }
        long expo = 0;
        if (!z_part.empty()) {
            if (z_part == "z")
                expo = 1;
            else if (z_part.rfind("z^", 0) == 0)
                expo = std::stol(z_part.substr(2));
            else
                fail();
        }
        if (expo < 0 || expo >= ctx->m) fail();
        Rational coeff(coeff_part);
        coeff.canonicalize();
        s += from_rational(ctx, coeff) * root_of_unity(ctx, expo);
    }
    return s;
}

} // namespace qf
