#pragma once

#include <map>
#include <memory>

#include "qf/groups.hpp"
#include "qf/roots.hpp"

namespace qf {

// A validated Cartan datum: abelian group, group elements g_i, characters
// chi_i, and a standard-form finite-type Cartan matrix subject to
//   chi_j(g_i) chi_i(g_j) = chi_i(g_i)^{a_ij},   chi_i(g_i) != 1,
// with ord(chi_i(g_i)) odd (and prime to 3 on G_2 blocks) and constant
// along each component.
struct Datum {
    AbelianGroup group;
    std::vector<GroupElement> g;
    std::vector<Character> chi;
    CartanMatrix cartan;
    RootSystem roots;
    ScalarContextPtr ctx;                     // Q(zeta_m), m = exponent of the group
    std::vector<std::vector<CycScalar>> q;    // q[i][j] = chi_j(g_i)
    std::vector<long> component_order;        // N_J per component
    std::vector<long> N;                      // N per convex root position
    bool small_prime_warning = false;         // |group| has a prime factor <= 7

    int theta() const { return (int)g.size(); }

    // Braiding on root lattice vectors: q(v, w) = prod q_ij^{v_i w_j}.
    CycScalar q_bilinear(const std::vector<int>& v, const std::vector<int>& w) const;

    // g_alpha and chi_alpha for a positive root in simple-root coordinates.
    GroupElement g_of(const std::vector<int>& root) const;
    Character chi_of(const std::vector<int>& root) const;

    // Stable text form (used for deduplication and mismatch checks).
    std::string canonical_key() const;
};

using DatumPtr = std::shared_ptr<const Datum>;

DatumPtr validate_datum(const AbelianGroup& G, const std::vector<GroupElement>& g,
                        const std::vector<Character>& chi,
                        const std::vector<std::vector<int>>& cartan);

// i and j may carry a nonzero linking parameter: distinct components,
// chi_i chi_j trivial, g_i g_j != 1.
bool linkable(const Datum& d, int i, int j);

// Linking parameters lambda_{ij} for i < j in distinct components.  Zero
// values are dropped; nonzero values require linkable(i, j).
class LinkingParams {
public:
    LinkingParams() = default;
    const std::map<std::pair<int, int>, CycScalar>& entries() const { return v_; }
    // lambda_{ij} for any i != j, extended by lambda_{ji} = -q_ji lambda_{ij}.
    CycScalar get(const Datum& d, int i, int j) const;
    bool all_zero() const { return v_.empty(); }

private:
    std::map<std::pair<int, int>, CycScalar> v_;
    friend LinkingParams validate_linking(const DatumPtr&,
                                          const std::map<std::pair<int, int>, CycScalar>&);
};

LinkingParams validate_linking(const DatumPtr& d,
                               const std::map<std::pair<int, int>, CycScalar>& lambda);

// Root vector parameters mu_alpha, keyed by positive root coordinates.
// Nonzero mu_alpha requires g_alpha^{N_J} != 1 and chi_alpha^{N_J} trivial.
class RootVectorParams {
public:
    RootVectorParams() = default;
    const std::map<std::vector<int>, CycScalar>& entries() const { return v_; }
    CycScalar get(const std::vector<int>& root) const;
    bool all_zero() const { return v_.empty(); }

private:
    std::map<std::vector<int>, CycScalar> v_;
    friend RootVectorParams validate_mu(const DatumPtr&,
                                        const std::map<std::vector<int>, CycScalar>&);
};

RootVectorParams validate_mu(const DatumPtr& d,
                             const std::map<std::vector<int>, CycScalar>& mu);

// All valid data over G with exactly theta generators, in a deterministic
// order: (g_i, chi_i) tuples are scanned lexicographically over the element
// and character enumerations, the Cartan matrix is derived entry-wise, and
// non-standard numberings are repaired by the standard-order permutation.
// With dedup = true, data equal after repair are reported once.
std::vector<DatumPtr> enumerate_data(const AbelianGroup& G, int theta, bool dedup = false);

// Same datum with generators permuted by sigma (new index i takes the old
// slot sigma[i]); the Cartan matrix must be sigma-invariant.
DatumPtr permuted_datum(const Datum& d, const std::vector<int>& sigma);

// The datum restricted to one component (indices stay in block order).
DatumPtr component_datum(const Datum& d, int comp);

} // namespace qf
