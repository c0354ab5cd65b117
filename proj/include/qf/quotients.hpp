#pragma once

#include "qf/braided.hpp"

namespace qf {

// Exponent vector over the convex positive-root positions of a datum.
using ExpVec = std::vector<int>;

// Root-lattice degree of a PBW exponent vector.
std::vector<int> pbw_degree(const Datum& d, const ExpVec& a);

// Word expansion of the PBW monomial x_{beta_1}^{a_1} .. x_{beta_p}^{a_p}.
BraidedPoly pbw_expand(DatumPtr d, const ExpVec& a);

// Default total-degree cap: QF_DEGREE_CAP when set, else 2 max_J N_J + 10.
long default_degree_cap(const Datum& d);

// Per-degree word-space picture of R(D) = T(V)/(Serre relations): the
// Serre-ideal rows in reduced row-echelon form, the surviving normal
// words, and the PBW monomials of the degree with their change of basis.
// Pivots sit on lex-largest words, so normal_monomials is the lex-smallest
// complement.
struct GradedComponentBasis {
    std::vector<int> degree;
    std::vector<Word> monomial_list;                      // lex ascending
    std::vector<std::vector<CycScalar>> ideal_rows;       // over monomial_list
    std::vector<Word> normal_monomials;
    std::vector<ExpVec> pbw_monomials;                    // lex ascending
    std::vector<std::vector<CycScalar>> change_of_basis;  // [normal][pbw]

    long rank() const { return (long)ideal_rows.size(); }
};

// Element of R(D) in PBW coordinates: a finite sum of exponent vectors
// over the convex root order with cyclotomic coefficients.  The
// representation is canonical once the datum (hence the convex order) is
// fixed.
class RElem {
public:
    RElem() = default;
    explicit RElem(DatumPtr d) : d_(std::move(d)) {}
    static RElem unit(DatumPtr d);
    static RElem monomial(DatumPtr d, const ExpVec& a, const CycScalar& c);

    const DatumPtr& ambient() const { return d_; }
    const std::map<ExpVec, CycScalar>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    RElem operator+(const RElem& o) const;
    RElem operator-(const RElem& o) const;
    RElem operator-() const;
    RElem scaled(const CycScalar& c) const;
    RElem operator*(const RElem& o) const;  // mul_relems with default cap
    RElem& operator+=(const RElem& o) { return *this = *this + o; }
    RElem& operator-=(const RElem& o) { return *this = *this - o; }

    friend bool operator==(const RElem& a, const RElem& b);
    friend bool operator!=(const RElem& a, const RElem& b) { return !(a == b); }

    void add_term(const ExpVec& a, const CycScalar& c);
    // Maximal total root-degree over the support, 0 for the zero element.
    long total_degree() const;

private:
    DatumPtr d_;
    std::map<ExpVec, CycScalar> t_;
};

// Element of the braided tensor square R(D) (x) R(D), both legs in PBW
// coordinates.
class RTensor {
public:
    RTensor() = default;
    explicit RTensor(DatumPtr d) : d_(std::move(d)) {}
    static RTensor of(const RElem& left, const RElem& right);

    const DatumPtr& ambient() const { return d_; }
    const std::map<std::pair<ExpVec, ExpVec>, CycScalar>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    RTensor operator+(const RTensor& o) const;
    RTensor operator-(const RTensor& o) const;
    RTensor scaled(const CycScalar& c) const;

    friend bool operator==(const RTensor& a, const RTensor& b);
    friend bool operator!=(const RTensor& a, const RTensor& b) { return !(a == b); }

    void add_term(const ExpVec& l, const ExpVec& r, const CycScalar& c);

private:
    DatumPtr d_;
    std::map<std::pair<ExpVec, ExpVec>, CycScalar> t_;
};

// The Serre-ideal component and quotient basis data at one degree; cached
// per (datum, degree).  cap < 0 means the default cap.
GradedComponentBasis ideal_component(const DatumPtr& d, const std::vector<int>& degree,
                                     long cap = -1);

// Image of a free-algebra element in R(D), in PBW coordinates.  At
// word-space-feasible degrees this reduces modulo the cached ideal rows
// and solves the change-of-basis system; beyond that it rewrites letter by
// letter with the memoized commutation relations (the two routes agree and
// are cross-checked in the tests).
RElem normal_form(const BraidedPoly& x, long cap = -1);

// Product in R(D), re-expressed in PBW coordinates.
RElem mul_relems(const RElem& u, const RElem& v, long cap = -1);

// Product in the braided tensor square:
// (x (x) y)(x' (x) y') = q(deg y, deg x') (x x' (x) y y').
RTensor mul_rtensor(const RTensor& t1, const RTensor& t2, long cap = -1);

// Coproduct of a PBW monomial, legs in PBW coordinates: the product of
// the generator coproducts Delta(x_{beta_l})^{a_l} in convex order.
RTensor coproduct_pbw(const DatumPtr& d, const ExpVec& a, long cap = -1);

// Graded dimensions, per total degree 0..up_to, of the quotient of R(D)
// by the two-sided ideal (x_alpha^{N_J}).  The root-vector powers are
// verified to q-commute with every root vector (exactly, per pair), which
// collapses the ideal onto the span of the over-threshold PBW monomials;
// the returned dimensions count the restricted monomials per degree and
// their total is checked against prod_J N_J^{|Phi_J^+|}.
std::vector<long> nichols_graded_dims(const DatumPtr& d, int up_to, long cap = -1);

} // namespace qf
