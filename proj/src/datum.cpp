#include "qf/datum.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qf {

CycScalar Datum::q_bilinear(const std::vector<int>& v, const std::vector<int>& w) const {
    CycScalar out = CycScalar::one(ctx);
    for (int i = 0; i < theta(); ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < theta(); ++j) {
            if (w[j] == 0) continue;
            out *= q[i][j].pow((long)v[i] * w[j]);
        }
    }
    return out;
}

GroupElement Datum::g_of(const std::vector<int>& root) const {
    GroupElement x = group.identity();
    for (int i = 0; i < theta(); ++i)
        if (root[i] != 0) x = x * g[i].pow(root[i]);
    return x;
}

Character Datum::chi_of(const std::vector<int>& root) const {
    Character c = group.trivial_character();
    for (int i = 0; i < theta(); ++i)
        if (root[i] != 0) c = c * chi[i].pow(root[i]);
    return c;
}

std::string Datum::canonical_key() const {
    std::ostringstream out;
    out << "G=";
    for (long n : group.invariants()) out << n << ",";
    out << ";";
    for (int i = 0; i < theta(); ++i) {
        out << "g" << i << "=";
        for (long e : g[i].exps()) out << e << ",";
        out << ";x" << i << "=";
        for (long e : chi[i].exps()) out << e << ",";
        out << ";";
    }
    out << "a=";
    for (const auto& row : cartan.a)
        for (int v : row) out << v << ",";
    return out.str();
}

DatumPtr validate_datum(const AbelianGroup& G, const std::vector<GroupElement>& g,
                        const std::vector<Character>& chi,
                        const std::vector<std::vector<int>>& cartan) {
    auto d = std::make_shared<Datum>();
    d->group = G;
    d->g = g;
    d->chi = chi;
    size_t theta = cartan.size();
    if (g.size() != theta || chi.size() != theta)
        throw AdmissibilityFailure("generator, character and Cartan sizes disagree");
    if (theta == 0) throw AdmissibilityFailure("empty datum");
    for (const auto& x : g)
        if (!(x.group() == G)) throw GroupMismatch("generator not in the given group");
    for (const auto& c : chi)
        if (!(c.group() == G)) throw GroupMismatch("character not on the given group");

    d->cartan = recognize_cartan(cartan);
    d->ctx = ScalarContext::make(G.exponent());

    d->q.assign(theta, std::vector<CycScalar>(theta));
    for (size_t i = 0; i < theta; ++i)
        for (size_t j = 0; j < theta; ++j) d->q[i][j] = chi[j].eval(d->ctx, g[i]);

    for (size_t i = 0; i < theta; ++i) {
        if (d->q[i][i].is_one())
            throw UnitDiagonal("chi_i(g_i) = 1 at index " + std::to_string(i + 1));
        for (size_t j = 0; j < theta; ++j) {
            if (i == j) continue;
            if (d->q[i][j] * d->q[j][i] != d->q[i][i].pow(cartan[i][j]))
                throw CartanConditionFailed("q_ij q_ji != q_ii^{a_ij} at (" +
                                            std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + ")");
        }
    }

    // Diagonal orders: odd everywhere, prime to 3 on G_2 blocks, constant
    // along components.
    std::vector<long> ord(theta);
    for (size_t i = 0; i < theta; ++i) {
        auto o = d->q[i][i].multiplicative_order();
        if (!o) throw Error("Internal", "character value is not a root of unity");
        ord[i] = *o;
        if (ord[i] % 2 == 0)
            throw EvenOrder("ord(q_ii) is even at index " + std::to_string(i + 1));
        if (d->cartan.components[d->cartan.component_of((int)i)].family == 'G' &&
            ord[i] % 3 == 0)
            throw G2OrderDivisibleBy3("ord(q_ii) divisible by 3 on a G_2 block at index " +
                                      std::to_string(i + 1));
    }
    for (const auto& comp : d->cartan.components) {
        for (int i = comp.first + 1; i < comp.first + comp.rank; ++i)
            if (ord[i] != ord[comp.first])
                throw CartanConditionFailed(
                    "diagonal orders differ inside one component: ord(q_11-block) " +
                    std::to_string(ord[comp.first]) + " vs " + std::to_string(ord[i]));
        d->component_order.push_back(ord[comp.first]);
    }

    // Symmetrizer consistency per component (also re-checks the orders).
    std::vector<CycScalar> diag(theta);
    for (size_t i = 0; i < theta; ++i) diag[i] = d->q[i][i];
    symmetrize(d->cartan, diag);

    d->roots = build_root_system(d->cartan);
    for (int l = 0; l < d->roots.p(); ++l)
        d->N.push_back(d->component_order[d->roots.root_component[l]]);

    for (long p = 2; p <= 7; ++p)
        if (p != 4 && p != 6 && d->group.order() % p == 0) d->small_prime_warning = true;
    return d;
}

bool linkable(const Datum& d, int i, int j) {
    if (i == j || d.cartan.same_component(i, j)) return false;
    if ((d.g[i] * d.g[j]).is_identity()) return false;
    if (!(d.chi[i] * d.chi[j]).is_trivial()) return false;
    // For linkable pairs the diagonal values are forced inverse.
    if (!(d.q[i][i] * d.q[j][j]).is_one())
        throw ConsistencyFailure("linkable pair with q_ii q_jj != 1");
    return true;
}

CycScalar LinkingParams::get(const Datum& d, int i, int j) const {
    if (i == j) throw ZeroInput("linking parameter needs two distinct indices");
    if (i < j) {
        auto it = v_.find({i, j});
        return it == v_.end() ? CycScalar() : it->second;
    }
    auto it = v_.find({j, i});
    if (it == v_.end()) return CycScalar();
    return -(d.q[i][j] * it->second);
}

LinkingParams validate_linking(const DatumPtr& d,
                               const std::map<std::pair<int, int>, CycScalar>& lambda) {
    LinkingParams out;
    for (const auto& [key, val] : lambda) {
        auto [i, j] = key;
        if (i >= j || i < 0 || j >= d->theta())
            throw IllegalLinking("linking keys must satisfy 1 <= i < j <= theta");
        if (val.is_zero()) continue;
        if (d->cartan.same_component(i, j))
            throw IllegalLinking("generators " + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + " lie in one component");
        if (!linkable(*d, i, j))
            throw IllegalLinking("generators " + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + " are not linkable");
        out.v_[key] = val;
    }
    return out;
}

CycScalar RootVectorParams::get(const std::vector<int>& root) const {
    auto it = v_.find(root);
    return it == v_.end() ? CycScalar() : it->second;
}

RootVectorParams validate_mu(const DatumPtr& d,
                             const std::map<std::vector<int>, CycScalar>& mu) {
    RootVectorParams out;
    for (const auto& [root, val] : mu) {
        int l = d->roots.position_of(root);
        if (l < 0) throw IllegalMu("key is not a positive root of the datum");
        if (val.is_zero()) continue;
        long NJ = d->N[l];
        if (d->g_of(root).pow(NJ).is_identity())
            throw IllegalMu("g_alpha^N = 1 forbids a nonzero parameter at this root");
        if (!d->chi_of(root).pow(NJ).is_trivial())
            throw IllegalMu("chi_alpha^N != trivial forbids a nonzero parameter at this root");
        out.v_[root] = val;
    }
    return out;
}

DatumPtr permuted_datum(const Datum& d, const std::vector<int>& sigma) {
    int n = d.theta();
    if ((int)sigma.size() != n) throw ZeroInput("permutation length mismatch");
    std::vector<GroupElement> g2(n);
    std::vector<Character> chi2(n);
    for (int i = 0; i < n; ++i) {
        g2[i] = d.g[sigma[i]];
        chi2[i] = d.chi[sigma[i]];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d.cartan.a[sigma[i]][sigma[j]] != d.cartan.a[i][j])
                throw ZeroInput("permutation does not preserve the Cartan matrix");
    return validate_datum(d.group, g2, chi2, d.cartan.a);
}

DatumPtr component_datum(const Datum& d, int comp) {
    const auto& block = d.cartan.components.at(comp);
    std::vector<GroupElement> g2(d.g.begin() + block.first,
                                 d.g.begin() + block.first + block.rank);
    std::vector<Character> chi2(d.chi.begin() + block.first,
                                d.chi.begin() + block.first + block.rank);
    std::vector<std::vector<int>> a2(block.rank, std::vector<int>(block.rank));
    for (int i = 0; i < block.rank; ++i)
        for (int j = 0; j < block.rank; ++j)
            a2[i][j] = d.cartan.a[block.first + i][block.first + j];
    return validate_datum(d.group, g2, chi2, a2);
}

std::vector<DatumPtr> enumerate_data(const AbelianGroup& G, int theta, bool dedup) {
    if (theta <= 0) throw ZeroInput("enumeration needs theta >= 1");
    std::vector<DatumPtr> out;
    auto elements = G.elements();
    auto characters = G.characters();
    long L = G.exponent();

    // Character values as exponents of zeta_L for fast scanning.
    auto value_exp = [&](const Character& chi, const GroupElement& x) {
        return chi.eval_exponent(x);
    };

    // Odometer over (g, chi) pair indices; pair index = e * |chars| + c.
    long pair_count = (long)elements.size() * (long)characters.size();
    std::vector<long> pick(theta, 0);
    std::set<std::string> seen;
    while (true) {
        std::vector<GroupElement> g(theta);
        std::vector<Character> chi(theta);
        for (int i = 0; i < theta; ++i) {
            g[i] = elements[pick[i] / characters.size()];
            chi[i] = characters[pick[i] % characters.size()];
        }
        // Derive the Cartan matrix entry-wise from the braiding exponents.
        bool ok = true;
        std::vector<std::vector<long>> e(theta, std::vector<long>(theta));
        for (int i = 0; ok && i < theta; ++i)
            for (int j = 0; ok && j < theta; ++j) {
                e[i][j] = value_exp(chi[j], g[i]);
                if (i == j && e[i][j] == 0) ok = false; // q_ii = 1
            }
        std::vector<std::vector<int>> a(theta, std::vector<int>(theta, 2));
        for (int i = 0; ok && i < theta; ++i) {
            long Ni = L / std::gcd(e[i][i], L);
            for (int j = 0; ok && j < theta; ++j) {
                if (i == j) continue;
                int found = 10;
                for (int cand = 0; cand >= -3; --cand) {
                    if (cand <= -Ni) break;
                    if (mod_reduce(e[i][j] + e[j][i] - cand * e[i][i], L) == 0) {
                        found = cand;
                        break;
                    }
                }
                if (found == 10)
                    ok = false;
                else
                    a[i][j] = found;
            }
        }
        if (ok) {
            auto perm = standard_order_permutation(a);
            if (perm) {
                std::vector<GroupElement> g2(theta);
                std::vector<Character> chi2(theta);
                std::vector<std::vector<int>> a2(theta, std::vector<int>(theta));
                for (int i = 0; i < theta; ++i) {
                    g2[i] = g[(*perm)[i]];
                    chi2[i] = chi[(*perm)[i]];
                    for (int j = 0; j < theta; ++j) a2[i][j] = a[(*perm)[i]][(*perm)[j]];
                }
                try {
                    auto d = validate_datum(G, g2, chi2, a2);
                    if (!dedup || seen.insert(d->canonical_key()).second)
                        out.push_back(d);
                } catch (const AdmissibilityError&) {
                    // order conditions failed; skip
                }
            }
        }
        // advance odometer
        int pos = theta - 1;
        while (pos >= 0 && ++pick[pos] == pair_count) pick[pos--] = 0;
        if (pos < 0) break;
    }
    return out;
}

} // namespace qf
