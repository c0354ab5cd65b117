#pragma once

#include "qf/datum.hpp"

namespace qf {

// Words in the free algebra on x_1..x_theta; letter i is stored as the raw
// byte value i (0-based), leftmost letter = first factor.
using Word = std::string;

std::vector<int> word_degree(const Word& w, int theta);

// Element of the free (tensor) algebra over the datum's scalar field,
// graded by the root lattice.  The braiding enters through coproducts and
// commutators, not through the plain concatenation product.
class BraidedPoly {
public:
    BraidedPoly() = default;
    explicit BraidedPoly(DatumPtr d);
    static BraidedPoly generator(DatumPtr d, int i);
    static BraidedPoly monomial(DatumPtr d, const Word& w, const CycScalar& c);
    static BraidedPoly unit(DatumPtr d);

    const DatumPtr& ambient() const { return d_; }
    const std::map<Word, CycScalar>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    BraidedPoly operator+(const BraidedPoly& o) const;
    BraidedPoly operator-(const BraidedPoly& o) const;
    BraidedPoly operator*(const BraidedPoly& o) const; // concatenation product
    BraidedPoly operator-() const;
    BraidedPoly scaled(const CycScalar& c) const;
    BraidedPoly& operator+=(const BraidedPoly& o) { return *this = *this + o; }
    BraidedPoly& operator-=(const BraidedPoly& o) { return *this = *this - o; }

    friend bool operator==(const BraidedPoly& a, const BraidedPoly& b);
    friend bool operator!=(const BraidedPoly& a, const BraidedPoly& b) { return !(a == b); }

    bool is_homogeneous() const;
    // Common root-lattice degree of all terms; ZeroInput on 0, Error when
    // inhomogeneous.
    std::vector<int> degree() const;
    // The part of the given degree.
    BraidedPoly homogeneous_part(const std::vector<int>& degree) const;
    // All degrees present, each once.
    std::vector<std::vector<int>> degrees() const;

    void add_term(const Word& w, const CycScalar& c);

private:
    DatumPtr d_;
    std::map<Word, CycScalar> t_;
};

// Element of the tensor square with the braided product
// (x (x) y)(x' (x) y') = q(deg y, deg x') (x x' (x) y y').
class TensorPoly {
public:
    TensorPoly() = default;
    explicit TensorPoly(DatumPtr d);
    static TensorPoly of(const BraidedPoly& left, const BraidedPoly& right);

    const DatumPtr& ambient() const { return d_; }
    const std::map<std::pair<Word, Word>, CycScalar>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    TensorPoly operator+(const TensorPoly& o) const;
    TensorPoly operator-(const TensorPoly& o) const;
    TensorPoly scaled(const CycScalar& c) const;

    friend bool operator==(const TensorPoly& a, const TensorPoly& b);
    friend bool operator!=(const TensorPoly& a, const TensorPoly& b) { return !(a == b); }

    void add_term(const Word& l, const Word& r, const CycScalar& c);

private:
    DatumPtr d_;
    std::map<std::pair<Word, Word>, CycScalar> t_;
};

TensorPoly braided_mul(const TensorPoly& t1, const TensorPoly& t2);

// Braided coproduct determined by x_i -> x_i (x) 1 + 1 (x) x_i, extended
// as an algebra map for the braided tensor product.
TensorPoly coproduct(const BraidedPoly& p);

// [x, y]_c = x y - q(deg x, deg y) y x, extended bilinearly over
// homogeneous components.
BraidedPoly braided_commutator(const BraidedPoly& x, const BraidedPoly& y);

// ad_c(x_i)(y) = x_i y - (prod_j q_ij^{deg_j y}) y x_i.
BraidedPoly ad_c(int i, const BraidedPoly& y);

// The quantum Serre element ad_c(x_i)^{1 - a_ij}(x_j), i != j.
BraidedPoly serre_element(DatumPtr d, int i, int j);

// Iterated root vector at convex position l: simple positions give x_i;
// otherwise x_{beta_l} = [x_{beta_k}, x_{beta_m}]_c for the canonical
// split beta_k + beta_m = beta_l with k < l < m and k maximal.
BraidedPoly root_vector(DatumPtr d, int l);

// The canonical split (k, m) used by root_vector; NoDecomposition when the
// position is simple or no split exists.
std::pair<int, int> root_decomposition(const Datum& d, int l);

// Bilinear map on the root lattice relating two braidings with equal
// diagonal and equal symmetrized products: sigma(alpha_i, alpha_j) =
// q_ij / q'_ij for i <= j and 1 for i > j.
class Cocycle2 {
public:
    const DatumPtr& src() const { return src_; }
    const DatumPtr& dst() const { return dst_; }
    // Value on generator pair (alpha_i, alpha_j).
    CycScalar on_generators(int i, int j) const;
    // Bilinear extension to lattice vectors.
    CycScalar on(const std::vector<int>& v, const std::vector<int>& w) const;

private:
    DatumPtr src_, dst_;
    std::vector<std::vector<CycScalar>> val_;
    friend Cocycle2 twist_cocycle(const DatumPtr& d, const DatumPtr& dprime);
};

// Checks q_ii = q'_ii and q_ij q_ji = q'_ij q'_ji (BraidingMismatch
// otherwise; also for mismatched group, sizes or Cartan matrices).
Cocycle2 twist_cocycle(const DatumPtr& d, const DatumPtr& dprime);

// Graded linear map T(V) -> T(V') sending the monomial x_{i_1}..x_{i_n}
// to prod_{r<s} sigma(alpha_{i_r}, alpha_{i_s}) times the same word; an
// algebra isomorphism up to the cocycle factor: phi(xy) =
// sigma(deg x, deg y) phi(x) phi(y).
BraidedPoly twist_map(const BraidedPoly& p, const Cocycle2& sigma);

} // namespace qf
