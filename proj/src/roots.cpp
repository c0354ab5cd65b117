#include "qf/roots.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace qf {

int CartanMatrix::component_of(int i) const {
    for (size_t k = 0; k < components.size(); ++k)
        if (i >= components[k].first && i < components[k].first + components[k].rank)
            return (int)k;
    throw Error("Internal", "index outside the Cartan matrix");
}

std::vector<std::vector<int>> standard_cartan(char family, int rank) {
    auto chain = [&](int n) {
        std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i) a[i][i] = 2;
        for (int i = 0; i + 1 < n; ++i) a[i][i + 1] = a[i + 1][i] = -1;
        return a;
    };
    switch (family) {
        case 'A':
            if (rank < 1) break;
            return chain(rank);
        case 'B': {
            if (rank < 2) break;
            auto a = chain(rank);
            a[0][1] = -2; // first root short
            return a;
        }
        case 'C': {
            if (rank < 2) break;
            auto a = chain(rank);
            a[1][0] = -2; // first root long
            return a;
        }
        case 'D': {
            if (rank < 4) break;
            auto a = chain(rank - 1);
            a.resize(rank);
            for (auto& row : a) row.resize(rank, 0);
            a[rank - 1][rank - 1] = 2;
            a[rank - 1][rank - 3] = a[rank - 3][rank - 1] = -1; // fork at the third-last node
            return a;
        }
        case 'E': {
            if (rank < 6 || rank > 8) break;
            // node 1 hangs off node 3 of a chain 0-2-3-4-...-(rank-1)
            std::vector<std::vector<int>> a(rank, std::vector<int>(rank, 0));
            for (int i = 0; i < rank; ++i) a[i][i] = 2;
            auto bond = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
            bond(0, 2);
            bond(1, 3);
            for (int i = 2; i + 1 < rank; ++i) bond(i, i + 1);
            return a;
        }
        case 'F': {
            if (rank != 4) break;
            auto a = chain(4);
            a[1][2] = -2; // double bond in the middle, short roots first
            return a;
        }
        case 'G': {
            if (rank != 2) break;
            return {{2, -1}, {-3, 2}};
        }
        default:
            break;
    }
    throw Error("Internal", std::string("no standard type ") + family + std::to_string(rank));
}

int positive_root_count(char family, int rank) {
    switch (family) {
        case 'A': return rank * (rank + 1) / 2;
        case 'B':
        case 'C': return rank * rank;
        case 'D': return rank * (rank - 1);
        case 'E': return rank == 6 ? 36 : rank == 7 ? 63 : 120;
        case 'F': return 24;
        case 'G': return 6;
        default: throw Error("Internal", "unknown family");
    }
}

namespace {

struct FamilyCandidate {
    char family;
    int rank;
};

std::vector<FamilyCandidate> candidates_for_rank(int n) {
    std::vector<FamilyCandidate> out;
    out.push_back({'A', n});
    if (n >= 2) out.push_back({'B', n});
    if (n >= 2) out.push_back({'C', n});
    if (n >= 4) out.push_back({'D', n});
    if (n >= 6 && n <= 8) out.push_back({'E', n});
    if (n == 4) out.push_back({'F', n});
    if (n == 2) out.push_back({'G', n});
    return out;
}

// Positive-definiteness of the symmetrized matrix decides finite type.
bool is_finite_type_block(const std::vector<std::vector<int>>& a,
                          const std::vector<int>& idx) {
    int n = (int)idx.size();
    // Find rational d_i > 0 with d_i a_ij = d_j a_ji by propagation over the
    // connectivity tree; failure means not symmetrizable, hence not finite.
    std::vector<Rational> d(n, Rational(0));
    d[0] = 1;
    std::vector<int> stack{0};
    std::vector<bool> seen(n, false);
    seen[0] = true;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            int aij = a[idx[i]][idx[j]], aji = a[idx[j]][idx[i]];
            if (i == j || aij == 0) continue;
            Rational dj = d[i] * Rational(aij) / Rational(aji);
            if (!seen[j]) {
                d[j] = dj;
                seen[j] = true;
                stack.push_back(j);
            } else if (d[j] != dj) {
                return false;
            }
        }
    }
    // Leading principal minors of diag(d) * a must all be positive.
    std::vector<std::vector<Rational>> B(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B[i][j] = d[i] * Rational(a[idx[i]][idx[j]]);
    // Gaussian elimination tracking pivots; all pivots positive iff positive
    // definite (symmetric matrix).
    for (int k = 0; k < n; ++k) {
        if (B[k][k] <= 0) return false;
        for (int i = k + 1; i < n; ++i) {
            Rational f = B[i][k] / B[k][k];
            for (int j = k; j < n; ++j) B[i][j] -= f * B[k][j];
        }
    }
    return true;
}

std::vector<std::vector<int>> connected_components(const std::vector<std::vector<int>>& a) {
    int n = (int)a.size();
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        comp[s] = nc;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j)
                if (j != i && a[i][j] != 0 && comp[j] == -1) {
                    comp[j] = nc;
                    stack.push_back(j);
                }
        }
        ++nc;
    }
    std::vector<std::vector<int>> groups(nc);
    for (int i = 0; i < n; ++i) groups[comp[i]].push_back(i);
    return groups;
}

void validate_gcm(const std::vector<std::vector<int>>& a) {
    int n = (int)a.size();
    if (n == 0) throw NotGeneralizedCartan("empty matrix");
    for (int i = 0; i < n; ++i) {
        if ((int)a[i].size() != n) throw NotGeneralizedCartan("matrix is not square");
        if (a[i][i] != 2) throw NotGeneralizedCartan("diagonal entry is not 2");
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (a[i][j] > 0) throw NotGeneralizedCartan("positive off-diagonal entry");
            if ((a[i][j] == 0) != (a[j][i] == 0))
                throw NotGeneralizedCartan("zero pattern is not symmetric");
        }
    }
}

// Match the block on contiguous indices [first, first+rank) against a
// standard representative; returns the family or 0.
char match_standard_block(const std::vector<std::vector<int>>& a, int first, int rank) {
    for (const auto& cand : candidates_for_rank(rank)) {
        auto ref = standard_cartan(cand.family, cand.rank);
        bool ok = true;
        for (int i = 0; ok && i < rank; ++i)
            for (int j = 0; ok && j < rank; ++j)
                if (a[first + i][first + j] != ref[i][j]) ok = false;
        if (ok) return cand.family;
    }
    return 0;
}

} // namespace

CartanMatrix recognize_cartan(const std::vector<std::vector<int>>& a) {
    validate_gcm(a);
    CartanMatrix c;
    c.a = a;
    auto groups = connected_components(a);
    // Components must be contiguous and appear in index order.
    std::sort(groups.begin(), groups.end());
    int expect = 0;
    for (const auto& g : groups) {
        for (size_t k = 0; k < g.size(); ++k)
            if (g[k] != expect + (int)k) {
                if (!is_finite_type_block(a, g)) throw NotFiniteType("component is not finite type");
                throw NotStandardForm("component indices are not consecutive");
            }
        expect += (int)g.size();
    }
    for (const auto& g : groups) {
        if (!is_finite_type_block(a, g)) throw NotFiniteType("component is not finite type");
        char fam = match_standard_block(a, g[0], (int)g.size());
        if (!fam) throw NotStandardForm("component is finite type but not a standard representative");
        c.components.push_back({g[0], (int)g.size(), fam});
    }
    return c;
}

namespace {

// Backtracking graph matching of one connected block onto a standard
// representative; returns local permutation p (new -> old) or empty.
std::vector<int> match_block_permuted(const std::vector<std::vector<int>>& a,
                                      const std::vector<int>& idx,
                                      const std::vector<std::vector<int>>& ref) {
    int n = (int)idx.size();
    std::vector<int> p(n, -1);      // p[new] = position into idx
    std::vector<bool> used(n, false);
    // assign new-indices 0..n-1 in order
    std::function<bool(int)> rec = [&](int k) -> bool {
        if (k == n) return true;
        for (int cand = 0; cand < n; ++cand) {
            if (used[cand]) continue;
            bool ok = true;
            for (int j = 0; ok && j < k; ++j) {
                if (a[idx[cand]][idx[p[j]]] != ref[k][j]) ok = false;
                if (ok && a[idx[p[j]]][idx[cand]] != ref[j][k]) ok = false;
            }
            if (!ok) continue;
            p[k] = cand;
            used[cand] = true;
            if (rec(k + 1)) return true;
            used[cand] = false;
            p[k] = -1;
        }
        return false;
    };
    if (!rec(0)) return {};
    std::vector<int> out(n);
    for (int k = 0; k < n; ++k) out[k] = idx[p[k]];
    return out;
}

} // namespace

std::optional<std::vector<int>> standard_order_permutation(
    const std::vector<std::vector<int>>& a) {
    validate_gcm(a);
    auto groups = connected_components(a);
    std::sort(groups.begin(), groups.end()); // order components by smallest index
    std::vector<int> perm;
    for (const auto& g : groups) {
        if (!is_finite_type_block(a, g)) return std::nullopt;
        std::vector<int> local;
        for (const auto& cand : candidates_for_rank((int)g.size())) {
            local = match_block_permuted(a, g, standard_cartan(cand.family, cand.rank));
            if (!local.empty()) break;
        }
        if (local.empty()) return std::nullopt;
        perm.insert(perm.end(), local.begin(), local.end());
    }
    return perm;
}

int RootSystem::height(int l) const {
    const auto& r = positive_roots.at(l);
    return std::accumulate(r.begin(), r.end(), 0);
}

int RootSystem::position_of(const std::vector<int>& root) const {
    for (int l = 0; l < p(); ++l)
        if (positive_roots[l] == root) return l;
    return -1;
}

RootSystem build_root_system(const CartanMatrix& c) {
    RootSystem rs;
    rs.cartan = c;
    int n = c.theta();

    // Reduced word for w0, one component at a time: carry fundamental-weight
    // coordinates lambda starting at (1,...,1); repeatedly apply s_i for the
    // smallest i with lambda_i > 0.  In weight coordinates s_i subtracts
    // lambda_i times column i of the Cartan matrix.
    for (const auto& comp : c.components) {
        std::vector<long> lam(n, 0);
        for (int i = comp.first; i < comp.first + comp.rank; ++i) lam[i] = 1;
        while (true) {
            int pick = -1;
            for (int i = comp.first; i < comp.first + comp.rank; ++i)
                if (lam[i] > 0) {
                    pick = i;
                    break;
                }
            if (pick < 0) break;
            rs.w0_word.push_back(pick);
            long v = lam[pick];
            for (int j = comp.first; j < comp.first + comp.rank; ++j)
                lam[j] -= v * c.a[j][pick];
        }
    }

    // Convex order: beta_l = s_{i_1} ... s_{i_{l-1}} (alpha_{i_l}) in
    // simple-root coordinates, where s_i(v)_j = v_j for j != i and
    // s_i(v)_i = v_i - sum_j a_ij v_j.
    rs.simple_position.assign(n, -1);
    for (size_t l = 0; l < rs.w0_word.size(); ++l) {
        std::vector<int> v(n, 0);
        v[rs.w0_word[l]] = 1;
        for (size_t k = l; k-- > 0;) {
            int i = rs.w0_word[k];
            long s = 0;
            for (int j = 0; j < n; ++j) s += c.a[i][j] * v[j];
            v[i] -= (int)s;
        }
        for (int x : v)
            if (x < 0) throw Error("Internal", "convex order produced a negative root");
        rs.positive_roots.push_back(v);
        int comp = -1;
        for (int j = 0; j < n; ++j)
            if (v[j] != 0) {
                comp = c.component_of(j);
                break;
            }
        rs.root_component.push_back(comp);
        int hsum = std::accumulate(v.begin(), v.end(), 0);
        if (hsum == 1) {
            for (int j = 0; j < n; ++j)
                if (v[j] == 1) rs.simple_position[j] = (int)l;
        }
    }

    // Sanity: count per component and distinctness.
    for (size_t k = 0; k < c.components.size(); ++k) {
        int want = positive_root_count(c.components[k].family, c.components[k].rank);
        int have = (int)std::count(rs.root_component.begin(), rs.root_component.end(), (int)k);
        if (have != want) throw Error("Internal", "positive root count mismatch");
    }
    for (int i = 0; i < rs.p(); ++i)
        for (int j = i + 1; j < rs.p(); ++j)
            if (rs.positive_roots[i] == rs.positive_roots[j])
                throw Error("Internal", "repeated positive root");
    for (int i = 0; i < n; ++i)
        if (rs.simple_position[i] < 0) throw Error("Internal", "simple root missing");
    return rs;
}

Symmetrizer symmetrize_component(const CartanMatrix& c, int comp,
                                 const std::vector<CycScalar>& q_diag) {
    const auto& block = c.components.at(comp);
    int n = block.rank, first = block.first;

    // Minimal positive integer symmetrizers for the block.
    std::vector<Rational> d(n, Rational(0));
    d[0] = 1;
    std::vector<int> stack{0};
    std::vector<bool> seen(n, false);
    seen[0] = true;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (i == j || c.a[first + i][first + j] == 0 || seen[j]) continue;
            d[j] = d[i] * Rational(c.a[first + i][first + j]) / Rational(c.a[first + j][first + i]);
            seen[j] = true;
            stack.push_back(j);
        }
    }
    Int denom_lcm(1);
    for (const auto& x : d) {
        Int den = x.get_den();
        denom_lcm = denom_lcm / gcd(denom_lcm, den) * den;
    }
    std::vector<Int> di(n);
    for (int i = 0; i < n; ++i) di[i] = d[i].get_num() * (denom_lcm / d[i].get_den());
    Int g = di[0];
    for (int i = 1; i < n; ++i) g = gcd(g, di[i]);
    Symmetrizer sym;
    sym.d.resize(n);
    for (int i = 0; i < n; ++i) sym.d[i] = (int)checked_long(di[i] / g);

    // Order conditions on the diagonal.
    std::vector<long> N(n);
    for (int i = 0; i < n; ++i) {
        auto ord = q_diag.at(first + i).multiplicative_order();
        if (!ord) throw OrderViolation("diagonal braiding value is not a root of unity");
        N[i] = *ord;
        if (N[i] % 2 == 0)
            throw OrderViolation("diagonal braiding order is even at index " +
                                 std::to_string(first + i + 1));
        if (block.family == 'G' && N[i] % 3 == 0)
            throw OrderViolation("diagonal braiding order divisible by 3 on a G_2 block at index " +
                                 std::to_string(first + i + 1));
    }
    // Cross-consistency q_ii^{a_ij} = q_jj^{a_ji}.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (q_diag[first + i].pow(c.a[first + i][first + j]) !=
                q_diag[first + j].pow(c.a[first + j][first + i]))
                throw Inconsistent("q_ii^{a_ij} != q_jj^{a_ji} inside one component");
        }

    // Pin q at an index with d_h = 1: the odd order of q_hh makes
    // q = q_hh^{(N+1)/2} its unique square root of odd order.
    int h = -1;
    for (int i = 0; i < n; ++i)
        if (sym.d[i] == 1) {
            h = i;
            break;
        }
    if (h < 0) throw Error("Internal", "no unit symmetrizer entry in a standard block");
    sym.q = q_diag[first + h].pow((N[h] + 1) / 2);
    for (int i = 0; i < n; ++i)
        if (q_diag[first + i] != sym.q.pow(2 * sym.d[i]))
            throw Inconsistent("diagonal values do not match q^{2 d_i}");
    return sym;
}

std::vector<Symmetrizer> symmetrize(const CartanMatrix& c,
                                    const std::vector<CycScalar>& q_diag) {
    std::vector<Symmetrizer> out;
    for (size_t k = 0; k < c.components.size(); ++k)
        out.push_back(symmetrize_component(c, (int)k, q_diag));
    return out;
}

} // namespace qf
