#pragma once

#include <map>
#include <memory>
#include <vector>

#include "qf/intlin.hpp"
#include "qf/scalars.hpp"

namespace qf {

class GroupElement;
class Character;

// Finite abelian group in invariant-factor form Z/n_1 x ... x Z/n_r with
// n_1 | n_2 | ... | n_r and every n_i >= 2.  Any list of moduli is accepted
// and normalized.  Groups compare equal iff their invariant factors agree.
class AbelianGroup {
public:
    AbelianGroup(); // trivial group
    explicit AbelianGroup(const std::vector<long>& moduli);

    const std::vector<long>& invariants() const { return *inv_; }
    long rank() const { return (long)inv_->size(); }
    Int order() const;
    long exponent() const; // 1 for the trivial group

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
        return *a.inv_ == *b.inv_;
    }
    friend bool operator!=(const AbelianGroup& a, const AbelianGroup& b) { return !(a == b); }

    GroupElement identity() const;
    GroupElement element(std::vector<long> exps) const; // exps reduced mod n_i
    GroupElement generator(long i) const;
    Character trivial_character() const;
    Character character(std::vector<long> exps) const;

    // Full enumerations in lexicographic exponent order.
    std::vector<GroupElement> elements() const;
    std::vector<Character> characters() const;

private:
    std::shared_ptr<const std::vector<long>> inv_;
    friend class GroupElement;
    friend class Character;
};

class GroupElement {
public:
    GroupElement() = default;
    const AbelianGroup& group() const { return g_; }
    const std::vector<long>& exps() const { return e_; }

    GroupElement operator*(const GroupElement& o) const;
    GroupElement inverse() const;
    GroupElement pow(long k) const;
    bool is_identity() const;
    long order() const;

    friend bool operator==(const GroupElement& a, const GroupElement& b);
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
    friend bool operator<(const GroupElement& a, const GroupElement& b);

private:
    AbelianGroup g_;
    std::vector<long> e_;
    friend class AbelianGroup;
    friend class Character;
};

// Character of an abelian group, stored by exponents: the character with
// exponents (c_1, ..., c_r) sends generator_i to zeta_{n_i}^{c_i}.
class Character {
public:
    Character() = default;
    const AbelianGroup& group() const { return g_; }
    const std::vector<long>& exps() const { return e_; }

    // Value chi(x) as an element of Q(zeta_m); requires exponent(G) | m.
    CycScalar eval(const ScalarContextPtr& ctx, const GroupElement& x) const;
    // Exponent k with chi(x) = zeta_L^k where L = exponent of the group.
    long eval_exponent(const GroupElement& x) const;

    Character operator*(const Character& o) const;
    Character inverse() const;
    Character pow(long k) const;
    bool is_trivial() const;
    long order() const;

    friend bool operator==(const Character& a, const Character& b);
    friend bool operator!=(const Character& a, const Character& b) { return !(a == b); }
    friend bool operator<(const Character& a, const Character& b);

private:
    AbelianGroup g_;
    std::vector<long> e_;
    friend class AbelianGroup;
};

// Element of the group algebra over the cyclotomic scalar field.
class GroupAlgElem {
public:
    GroupAlgElem() = default; // zero
    explicit GroupAlgElem(const GroupElement& g); // basis element
    GroupAlgElem(const CycScalar& c, const GroupElement& g);

    static GroupAlgElem zero() { return GroupAlgElem(); }
    static GroupAlgElem unit(const AbelianGroup& G) { return GroupAlgElem(G.identity()); }

    const std::map<GroupElement, CycScalar>& terms() const { return t_; }
    bool is_zero() const;
    CycScalar coefficient(const GroupElement& g) const;

    GroupAlgElem operator+(const GroupAlgElem& o) const;
    GroupAlgElem operator-(const GroupAlgElem& o) const;
    GroupAlgElem operator*(const GroupAlgElem& o) const; // convolution
    GroupAlgElem operator-() const;
    GroupAlgElem scaled(const CycScalar& c) const;
    GroupAlgElem pow(long k) const; // k >= 0
    GroupAlgElem& operator+=(const GroupAlgElem& o) { return *this = *this + o; }
    GroupAlgElem& operator-=(const GroupAlgElem& o) { return *this = *this - o; }

    friend bool operator==(const GroupAlgElem& a, const GroupAlgElem& b);
    friend bool operator!=(const GroupAlgElem& a, const GroupAlgElem& b) { return !(a == b); }

    // Counit: sum of coefficients.
    CycScalar counit() const;
    // Algebra automorphism g -> chi(g) g.
    GroupAlgElem twisted_by(const Character& chi) const;

    void add_term(const GroupElement& g, const CycScalar& c);

private:
    std::map<GroupElement, CycScalar> t_;
};

// Group isomorphism, stored by images of the source generators.
struct GroupIso {
    AbelianGroup src;
    AbelianGroup dst;
    std::vector<GroupElement> images; // images[i] = phi(generator_i)

    GroupElement apply(const GroupElement& x) const;
    // chi on dst pulled back to src: (pull_back(chi))(x) = chi(phi(x)).
    Character pull_back(const Character& chi) const;
    GroupIso inverse() const;
};

// All isomorphisms src -> dst in a deterministic order; empty if the
// invariant factors differ.
std::vector<GroupIso> enumerate_isomorphisms(const AbelianGroup& src, const AbelianGroup& dst);

// True iff the element is a scalar-1 single group element (the group-like
// condition Delta(u) = u (x) u, eps(u) = 1 inside the group algebra).
bool group_like_check(const GroupAlgElem& u);

} // namespace qf
