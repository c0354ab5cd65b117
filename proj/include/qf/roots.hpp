#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qf/scalars.hpp"

namespace qf {

// A finite-type generalized Cartan matrix in standard block form:
// connected components occupy consecutive index ranges, and each block
// equals the standard representative of its type (see standard_cartan).
struct CartanMatrix {
    std::vector<std::vector<int>> a;

    struct Component {
        int first = 0;      // smallest index of the block
        int rank = 0;       // block size
        char family = 'A';  // 'A'..'G'
    };
    std::vector<Component> components;

    int theta() const { return (int)a.size(); }
    int component_of(int i) const;
    bool same_component(int i, int j) const { return component_of(i) == component_of(j); }
};

// Validates and recognizes the block structure.  Throws
// NotGeneralizedCartan / NotFiniteType / NotStandardForm.
CartanMatrix recognize_cartan(const std::vector<std::vector<int>>& a);

// The standard representative of a connected finite type.  Chain types are
// numbered with the non-simply-laced bond first: A_n plain chain; B_n has
// a[0][1] = -2 (first root short); C_n has a[1][0] = -2 (first root long);
// F_4 has the double bond between positions 2 and 3 with short roots first;
// G_2 is [[2,-1],[-3,2]]; D_n and E_n follow the usual fork shapes.
std::vector<std::vector<int>> standard_cartan(char family, int rank);

// Permutation p (new index -> old index) making a[p[i]][p[j]] standard
// block form, or nullopt when the matrix is not of finite type.  Identity
// comes back for matrices already in standard form.
std::optional<std::vector<int>> standard_order_permutation(
    const std::vector<std::vector<int>>& a);

// Root system data for a standard-form Cartan matrix.  Positive roots are
// listed in the convex order induced by a fixed reduced word for the
// longest Weyl element (built per component by the minimal-index greedy
// descent on fundamental-weight coordinates, components concatenated).
struct RootSystem {
    CartanMatrix cartan;
    std::vector<int> w0_word;                     // simple reflection indices, 0-based
    std::vector<std::vector<int>> positive_roots; // beta_1.. in simple-root coordinates
    std::vector<int> root_component;              // component index per convex position
    std::vector<int> simple_position;             // convex position of each simple root

    int p() const { return (int)positive_roots.size(); }
    int height(int l) const;
    // Convex position of a root given by coordinates; -1 if absent.
    int position_of(const std::vector<int>& root) const;
};

RootSystem build_root_system(const CartanMatrix& c);

// Number of positive roots of a connected standard type.
int positive_root_count(char family, int rank);

// Symmetrizer data of one component evaluated on a braiding diagonal:
// minimal positive integers d_i with d_i a_ij = d_j a_ji, and the scalar q
// with q_ii = q^{2 d_i} for all i in the component.  q is pinned as the
// unique odd-order square root of q_hh at an index h with d_h = 1.
// q_diag is indexed by global position; only the component's entries are
// read.  Throws OrderViolation (even order, or order divisible by 3 on
// G_2) and Inconsistent (the q_ii do not fit a common q).
struct Symmetrizer {
    std::vector<int> d; // length = component rank
    CycScalar q;
};

Symmetrizer symmetrize_component(const CartanMatrix& c, int comp,
                                 const std::vector<CycScalar>& q_diag);

// Component-wise symmetrizers in component order.
std::vector<Symmetrizer> symmetrize(const CartanMatrix& c,
                                    const std::vector<CycScalar>& q_diag);

} // namespace qf
