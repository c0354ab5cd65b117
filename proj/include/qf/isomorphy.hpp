#pragma once

#include "qf/uqgroup.hpp"

namespace qf {

// Multiplicative constraint system prod_i s_i^{E[r][i]} = c_r over unknown
// nonzero scalars s_i.  Over an algebraically closed field the system is
// solvable iff every integer vector v with v E = 0 satisfies
// prod_r c_r^{v_r} = 1; both directions are decided exactly.
struct MonomialSystem {
    long unknowns = 0;
    std::vector<std::vector<long>> rows;  // each of length unknowns
    std::vector<CycScalar> consts;        // one per row, all nonzero

    void add_row(std::vector<long> exps, const CycScalar& c);
};

struct MonomialSolution {
    bool solvable = false;

    // When solvable, a concrete witness is built whenever every required
    // d-th root is itself rational times a root of unity (the constant has
    // that form and its rational part has an exact rational d-th root).
    // Otherwise has_witness is false and note names the blocking constant;
    // solvability itself is still certified by the kernel condition.
    bool has_witness = false;
    std::vector<CycScalar> witness;  // length = unknowns
    std::string note;

    // When unsolvable: kernel * E = 0 but the constants multiply to
    // kernel_value != 1.
    std::vector<Int> kernel;
    CycScalar kernel_value;
};

MonomialSolution solve_monomial(const MonomialSystem& sys);

// Constants of the N-th power of a permuted root vector.  sigma is a
// diagram automorphism of one component, given in local indices; the
// root vector of alpha_pos is rebuilt with every simple letter i replaced
// by sigma(i), the bracket scalars taken on the permuted degrees.  The
// N_J-th power of that element is a combination of the central monomials
// z^a = prod_l x_{beta_l}^{a_l N_J}; the returned map sends each local
// exponent vector a to its coefficient.  Throws DegreeCapExceeded when
// N_J * height(alpha) exceeds the cap and NotInK if the expansion leaves
// the central span (which the theory rules out).
std::map<std::vector<int>, CycScalar> iso_constants(const DatumPtr& d, int comp,
                                                    const std::vector<int>& sigma,
                                                    int alpha_pos, long cap = -1);

// A Hopf-algebra isomorphism witness u(D',lambda',mu') -> u(D,lambda,mu):
// g' -> phi(g') on the group algebra and x'_i -> s_i x_{sigma(i)} on the
// skew-primitive generators.
struct IsoTriple {
    GroupIso phi;             // source group -> destination group
    std::vector<int> sigma;   // source index i -> destination index sigma[i]
    std::vector<CycScalar> s; // scalar per source index (empty when symbolic)

    // The scalar system is solvable but some s_i needs a d-th root that is
    // not rational times a root of unity; note names the blocked constant.
    bool symbolic = false;
    std::string note;
};

struct IsoSearch {
    std::vector<IsoTriple> triples;

    // A candidate needed permuted-power constants beyond the degree cap
    // and was skipped; emptiness of triples is then not a proof of
    // non-isomorphism.
    bool undecided = false;
    std::string undecided_detail;
};

// Enumerates the isomorphisms between the two finite-dimensional quotients,
// one triple per admissible (phi, sigma): the returned scalars are a single
// witness of the constraint system, whose full solution set is the witness
// times the solution torus of the homogeneous system.  Group isomorphisms
// are scanned in the outer loop; the index permutation is forced per index
// by matching (g_i, chi_i) pairs, the scalars by the linking and
// root-vector parameter constraints.  Every concrete witness is verified
// against the defining relations before being returned.
// Throws RankMismatch when the generator counts differ and
// OrderHypothesisViolated when some destination q_ii has order <= 4 (the
// classification of skew-primitives needs ord(q_ii) > 4; rather than
// guess, the search refuses).
IsoSearch find_isomorphisms(const UAlgebraPtr& src, const UAlgebraPtr& dst,
                            long cap = -1);

// Exhaustive reference search over generator images: group isomorphisms
// times index permutations, with the scalar constraints read off the
// defining relations evaluated inside the destination algebra (not off
// the parameter tables).  Agrees with find_isomorphisms on emptiness and
// exists for cross-checking it; throws DegreeCapExceeded above the
// dimension limit.
bool iso_exists_bruteforce(const UAlgebraPtr& src, const UAlgebraPtr& dst,
                           const Int& dim_limit = Int(2000));

} // namespace qf
