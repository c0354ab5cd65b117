#pragma once

#include "qf/quotients.hpp"

namespace qf {

// The central subalgebra generated by the N-th powers z_l = x_{beta_l}^N of
// the root vectors of one connected component.  Everything here is indexed
// by exponent vectors a over the component's convex positions; z^a denotes
// the ordered product z_1^{a_1} ... z_p^{a_p}.

// Convex positions belonging to one component, in convex order.
std::vector<int> component_positions(const Datum& d, int comp);

// Exponent vector with its associated group element h^a = prod (g_l^N)^{a_l}
// and character eta^a = prod (chi_l^N)^{a_l}.
struct KExponent {
    DatumPtr d;
    int component = 0;
    std::vector<int> a;
    GroupElement h;
    Character eta;
};

KExponent k_exponent(const DatumPtr& d, int comp, const std::vector<int>& a);

// Height of the root-lattice vector sum a_l beta_l.
long k_height(const Datum& d, int comp, const std::vector<int>& a);

// Commutation factor: z^b z^c = gamma(b, c) z^{b+c}.
CycScalar gamma(const KExponent& b, const KExponent& c);

// Coefficients of Delta(z^a) - z^a (x) 1 - 1 (x) z^a over the pairs
// z^b (x) z^c with nonzero b, c.  Determined by the fixed convex order.
struct CoproductConstants {
    int component = 0;
    std::vector<int> a;
    std::map<std::pair<std::vector<int>, std::vector<int>>, CycScalar> t;
};

CoproductConstants coproduct_constants(const DatumPtr& d, int comp,
                                       const std::vector<int>& a, long cap = -1);

// The family u^a in the group algebra attached to root vector parameters,
// built by height induction: u^{e_l} = mu_l(1 - h^{e_l}) + sum t mu u, and
// u^{r + e_l} = u^r u^{e_l} for the largest l with a_l > 0.  Covers every
// exponent a with k_height(a) <= max_height and validates on construction
// that each member satisfies the coproduct identity
//   Delta(u^a) = h^a (x) u^a + u^a (x) 1 + sum t^a_{b,c} u^b h^c (x) u^c,
// that the recursion remainder is exactly mu_a (1 - h^a), that u^{e_l} = 0
// whenever eta_l is nontrivial, and that eps(u^a) = 0.
struct UFamily {
    DatumPtr d;
    int component = 0;
    long max_height = 0;
    std::map<std::vector<int>, GroupAlgElem> u;
    std::map<std::vector<int>, CycScalar> mu;
};

// max_height < 0 picks the largest of (highest root height + 1) and the
// component's root heights that fits under the degree cap; the cap must
// admit at least every single z_l.
UFamily build_ufamily(const DatumPtr& d, int comp, const RootVectorParams& mu,
                      long cap = -1, long max_height = -1);

// u_alpha = u^{e_l} of the component of alpha, where beta_l = alpha.
GroupAlgElem u_alpha(const DatumPtr& d, const RootVectorParams& mu,
                     const std::vector<int>& alpha, long cap = -1);

// True iff every group element in the support of u is fixed by all chi_i;
// elements of the group algebra with this property commute with the skew
// group action.
bool central_support(const Datum& d, const GroupAlgElem& u);

} // namespace qf
