#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qf/numbers.hpp"

namespace qf {

// Exact arithmetic in the cyclotomic field Q(zeta_m), represented as
// Q[x] / (Phi_m) where Phi_m is the m-th cyclotomic polynomial.  Elements
// are coefficient vectors of length deg(Phi_m) over the power basis
// 1, z, ..., z^{deg-1} with z the class of x (a primitive m-th root of
// unity).  All arithmetic is exact; equality is coefficient-wise equality
// of the canonical representative.
struct ScalarContext {
    long m = 1;                          // root-of-unity order
    long degree = 1;                     // deg(Phi_m) = phi(m)
    std::vector<Int> cyclo;              // Phi_m, monic, length degree+1
    std::vector<std::vector<Int>> zpow;  // zpow[k] = x^k mod Phi_m, 0 <= k < m

    // Contexts are immutable and shared; make() caches per m.
    static std::shared_ptr<const ScalarContext> make(long m);
};

using ScalarContextPtr = std::shared_ptr<const ScalarContext>;

long euler_phi(long m);

// The m-th cyclotomic polynomial with integer coefficients (ascending).
std::vector<Int> cyclotomic_polynomial(long m);

class CycScalar {
public:
    // Zero in the rational context (m = 1).
    CycScalar();
    CycScalar(const Rational& r); // rational context
    CycScalar(long v);

    static CycScalar zero(const ScalarContextPtr& ctx);
    static CycScalar one(const ScalarContextPtr& ctx);
    static CycScalar from_rational(const ScalarContextPtr& ctx, const Rational& r);
    // zeta_m^k (k arbitrary, reduced mod m)
    static CycScalar root_of_unity(const ScalarContextPtr& ctx, long k);
    static CycScalar from_coeffs(const ScalarContextPtr& ctx, std::vector<Rational> coeffs);

    const ScalarContextPtr& context() const { return ctx_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;
    // If the element lies in Q, report the value.
    std::optional<Rational> as_rational() const;

    CycScalar operator-() const;
    friend CycScalar operator+(const CycScalar& a, const CycScalar& b);
    friend CycScalar operator-(const CycScalar& a, const CycScalar& b);
    friend CycScalar operator*(const CycScalar& a, const CycScalar& b);
    friend CycScalar operator/(const CycScalar& a, const CycScalar& b);
    CycScalar& operator+=(const CycScalar& o) { return *this = *this + o; }
    CycScalar& operator-=(const CycScalar& o) { return *this = *this - o; }
    CycScalar& operator*=(const CycScalar& o) { return *this = *this * o; }
    CycScalar& operator/=(const CycScalar& o) { return *this = *this / o; }

    friend bool operator==(const CycScalar& a, const CycScalar& b);
    friend bool operator!=(const CycScalar& a, const CycScalar& b) { return !(a == b); }
    // Total order for use as map keys (context order first, then coeffs).
    friend bool operator<(const CycScalar& a, const CycScalar& b);

    CycScalar inverse() const; // ZeroInput on 0
    CycScalar pow(long e) const;

    // Least n >= 1 with x^n == 1, or nullopt if x is not a root of unity
    // (n <= 2m suffices for elements of Q(zeta_m)).  ZeroInput on 0.
    std::optional<long> multiplicative_order() const;

    // Re-express in a larger context whose order is a multiple of m.
    CycScalar lift_to(const ScalarContextPtr& bigger) const;

    // "0", "1/2", "-2/3*z^2 + 1", ... (terms joined with " + ", each
    // "<rat>", "<rat>*z" or "<rat>*z^k"; parse accepts this shape).
    std::string to_string() const;
    static CycScalar parse(const ScalarContextPtr& ctx, const std::string& text);

private:
    ScalarContextPtr ctx_;
    std::vector<Rational> c_; // length ctx_->degree

    void reduce_tail(std::vector<Rational>& raw) const;
    // Bring both operands into a common context.
    static void align(CycScalar& a, CycScalar& b);
};

inline CycScalar root_of_unity(const ScalarContextPtr& ctx, long k) {
    return CycScalar::root_of_unity(ctx, k);
}

} // namespace qf
