#pragma once

#include "qf/kalgebra.hpp"

namespace qf {

class UAlgebra;
using UAlgebraPtr = std::shared_ptr<const UAlgebra>;

namespace detail {
struct UCache;
}

// Basis element x_{beta_1}^{a_1} ... x_{beta_p}^{a_p} g with 0 <= a_l < N_l.
using UBasisKey = std::pair<ExpVec, GroupElement>;

// The finite-dimensional quotient algebra: reduced monomial exponents, the
// group, linking parameters for cross-component commutators, and the
// substitution values of the root vector powers.
class UAlgebra : public std::enable_shared_from_this<UAlgebra> {
public:
    const DatumPtr& datum() const { return d_; }
    const LinkingParams& linking() const { return lambda_; }
    const RootVectorParams& mu() const { return mu_; }
    long cap() const { return cap_; }
    const std::vector<long>& exponent_bounds() const { return bounds_; }
    // substitution value of x_{beta_l}^{N_l}, central in the algebra
    const GroupAlgElem& root_power_value(int l) const { return ualpha_[(size_t)l]; }
    // chi_{beta_l} for the convex position l
    const Character& root_character(int l) const { return chi_pos_[(size_t)l]; }
    Int dimension() const;
    const std::string& key() const { return key_; }

private:
    DatumPtr d_;
    LinkingParams lambda_;
    RootVectorParams mu_;
    long cap_ = 0;
    std::vector<long> bounds_;
    std::vector<GroupAlgElem> ualpha_;
    std::vector<Character> chi_pos_;  // chi_{beta_l} per position
    std::string key_;
    std::shared_ptr<detail::UCache> cache_;

    UAlgebra() = default;
    friend UAlgebraPtr build_u(const DatumPtr&, const LinkingParams&,
                               const RootVectorParams&, long);
    friend detail::UCache& ucache(const UAlgebra& A);
};

// Builds the algebra handle: materializes every root power substitution
// value, requires each to have chi-invariant support (so it is central)
// and to vanish when chi_{beta_l}^{N_l} is nontrivial.  cap < 0 picks a
// default large enough for all products of reduced monomials.
UAlgebraPtr build_u(const DatumPtr& d, const LinkingParams& lambda,
                    const RootVectorParams& mu, long cap = -1);

class UElem {
public:
    UElem() = default;
    explicit UElem(UAlgebraPtr A) : a_(std::move(A)) {}

    static UElem zero(UAlgebraPtr A) { return UElem(std::move(A)); }
    static UElem unit(const UAlgebraPtr& A);
    // x^a g scaled by c; exponents may exceed the bounds and are reduced
    static UElem monomial(const UAlgebraPtr& A, const ExpVec& a,
                          const GroupElement& g, const CycScalar& c);
    static UElem generator(const UAlgebraPtr& A, int i);
    static UElem group_term(const UAlgebraPtr& A, const GroupElement& g);

    const UAlgebraPtr& ambient() const { return a_; }
    const std::map<UBasisKey, CycScalar>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    CycScalar counit() const;

    UElem operator+(const UElem& o) const;
    UElem operator-(const UElem& o) const;
    UElem operator-() const;
    UElem scaled(const CycScalar& c) const;
    UElem& operator+=(const UElem& o) { return *this = *this + o; }

    friend bool operator==(const UElem& x, const UElem& y);
    friend bool operator!=(const UElem& x, const UElem& y) { return !(x == y); }

    void add_term(const ExpVec& a, const GroupElement& g, const CycScalar& c);

private:
    UAlgebraPtr a_;
    std::map<UBasisKey, CycScalar> t_;
};

UElem multiply(const UElem& u, const UElem& v);

class UTensor {
public:
    UTensor() = default;
    explicit UTensor(UAlgebraPtr A) : a_(std::move(A)) {}
    static UTensor of(const UElem& left, const UElem& right);

    const UAlgebraPtr& ambient() const { return a_; }
    const std::map<std::pair<UBasisKey, UBasisKey>, CycScalar>& terms() const {
        return t_;
    }
    UTensor operator+(const UTensor& o) const;
    UTensor operator-(const UTensor& o) const;
    UTensor scaled(const CycScalar& c) const;
    UTensor& operator+=(const UTensor& o) { return *this = *this + o; }
    friend bool operator==(const UTensor& x, const UTensor& y);
    friend bool operator!=(const UTensor& x, const UTensor& y) { return !(x == y); }

    void add_term(const UBasisKey& l, const UBasisKey& r, const CycScalar& c);

private:
    UAlgebraPtr a_;
    std::map<std::pair<UBasisKey, UBasisKey>, CycScalar> t_;
};

UTensor tensor_multiply(const UTensor& x, const UTensor& y);

// Coproduct with Delta(x_i) = g_i (x) x_i + x_i (x) 1 and Delta(g) = g (x) g,
// extended multiplicatively.
UTensor coproduct_u(const UElem& u);

// Antipode with S(g) = g^{-1}, S(x_i) = -g_i^{-1} x_i, extended
// anti-multiplicatively; the convolution inverse of the identity.
UElem antipode_u(const UElem& u);

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
    double seconds = 0.0;
};

struct HopfReport {
    bool ok = false;
    std::vector<CheckResult> checks;
};

// Exact verification: coproduct multiplicativity on all generator pairs and
// seeded random pairs, coassociativity, counit and antipode identities,
// q-commutation of root vector powers across all position pairs, the
// dimension formula against the graded basis count, and a bounded
// group-like census.
HopfReport verify_hopf(const UAlgebraPtr& A, int samples,
                       unsigned long seed = 20260815);

struct CauchyReport {
    struct Entry {
        Int prime;
        GroupElement witness;
    };
    bool ok = false;
    std::vector<Entry> entries;
    std::vector<std::string> failures;
};

// Every prime divisor of the dimension divides the group order and is
// witnessed by a group element of that order.
CauchyReport cauchy_check(const UAlgebraPtr& A);

} // namespace qf
