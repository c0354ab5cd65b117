#include "qf/groups.hpp"

#include <algorithm>

namespace qf {

AbelianGroup::AbelianGroup() : inv_(std::make_shared<const std::vector<long>>()) {}

AbelianGroup::AbelianGroup(const std::vector<long>& moduli) {
    for (long n : moduli)
        if (n <= 0) throw ZeroInput("group moduli must be positive");
    // Normalize to invariant factors via the Smith form of diag(moduli).
    std::vector<long> kept;
    for (long n : moduli)
        if (n > 1) kept.push_back(n);
    IntMatrix D(kept.size(), std::vector<Int>(kept.size(), Int(0)));
    for (size_t i = 0; i < kept.size(); ++i) D[i][i] = kept[i];
    SmithResult s = smith_normal_form(std::move(D));
    std::vector<long> inv;
    for (const Int& d : s.diag)
        if (d > 1) inv.push_back(checked_long(d));
    std::sort(inv.begin(), inv.end()); // chain is ascending by construction; keep stable
    inv_ = std::make_shared<const std::vector<long>>(std::move(inv));
}

Int AbelianGroup::order() const {
    Int o(1);
    for (long n : *inv_) o *= n;
    return o;
}

long AbelianGroup::exponent() const { return inv_->empty() ? 1 : inv_->back(); }

GroupElement AbelianGroup::identity() const {
    return element(std::vector<long>(rank(), 0));
}

GroupElement AbelianGroup::element(std::vector<long> exps) const {
    if ((long)exps.size() != rank())
        throw GroupMismatch("exponent vector length does not match group rank");
    GroupElement x;
    x.g_ = *this;
    x.e_ = std::move(exps);
    for (size_t i = 0; i < x.e_.size(); ++i) x.e_[i] = mod_reduce(x.e_[i], (*inv_)[i]);
    return x;
}

GroupElement AbelianGroup::generator(long i) const {
    std::vector<long> e(rank(), 0);
    e.at(i) = 1;
    return element(std::move(e));
}

Character AbelianGroup::trivial_character() const {
    return character(std::vector<long>(rank(), 0));
}

Character AbelianGroup::character(std::vector<long> exps) const {
    if ((long)exps.size() != rank())
        throw GroupMismatch("character exponent length does not match group rank");
    Character c;
    c.g_ = *this;
    c.e_ = std::move(exps);
    for (size_t i = 0; i < c.e_.size(); ++i) c.e_[i] = mod_reduce(c.e_[i], (*inv_)[i]);
    return c;
}

namespace {

// Lexicographic odometer over mixed radices.
bool next_tuple(std::vector<long>& t, const std::vector<long>& radix) {
    for (long i = (long)t.size() - 1; i >= 0; --i) {
        if (++t[i] < radix[i]) return true;
        t[i] = 0;
    }
    return false;
}

} // namespace

std::vector<GroupElement> AbelianGroup::elements() const {
    std::vector<GroupElement> out;
    std::vector<long> t(rank(), 0);
    do {
        out.push_back(element(t));
    } while (next_tuple(t, *inv_));
    return out;
}

std::vector<Character> AbelianGroup::characters() const {
    std::vector<Character> out;
    std::vector<long> t(rank(), 0);
    do {
        out.push_back(character(t));
    } while (next_tuple(t, *inv_));
    return out;
}

static void check_same_group(const AbelianGroup& a, const AbelianGroup& b) {
    if (!(a == b)) throw GroupMismatch("operands live in different groups");
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
    check_same_group(g_, o.g_);
    std::vector<long> e(e_.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = e_[i] + o.e_[i];
    return g_.element(std::move(e));
}

GroupElement GroupElement::inverse() const {
    std::vector<long> e(e_.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = -e_[i];
    return g_.element(std::move(e));
}

GroupElement GroupElement::pow(long k) const {
    std::vector<long> e(e_.size());
    for (size_t i = 0; i < e.size(); ++i) {
        long n = g_.invariants()[i];
        e[i] = mod_reduce((e_[i] % n) * (k % n), n);
    }
    return g_.element(std::move(e));
}

bool GroupElement::is_identity() const {
    return std::all_of(e_.begin(), e_.end(), [](long v) { return v == 0; });
}

long GroupElement::order() const {
    long o = 1;
    for (size_t i = 0; i < e_.size(); ++i) {
        long n = g_.invariants()[i];
        long oi = n / std::gcd(e_[i] == 0 ? n : e_[i], n);
        o = lcm_long(o, oi);
    }
    return o;
}

bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.g_ == b.g_ && a.e_ == b.e_;
}

bool operator<(const GroupElement& a, const GroupElement& b) {
    if (!(a.g_ == b.g_)) return a.g_.invariants() < b.g_.invariants();
    return a.e_ < b.e_;
}

long Character::eval_exponent(const GroupElement& x) const {
    check_same_group(g_, x.group());
    long L = g_.exponent();
    long acc = 0;
    for (size_t i = 0; i < e_.size(); ++i) {
        long n = g_.invariants()[i];
        // zeta_n^{c_i x_i} = zeta_L^{c_i x_i L/n}
        long cx = mod_reduce((e_[i] * x.exps()[i]) % n, n);
        acc = mod_reduce(acc + cx * (L / n), L);
    }
    return acc;
}

CycScalar Character::eval(const ScalarContextPtr& ctx, const GroupElement& x) const {
    long L = g_.exponent();
    if (ctx->m % L != 0)
        throw ContextMismatch("scalar context order is not divisible by the group exponent");
    return root_of_unity(ctx, eval_exponent(x) * (ctx->m / L));
}

Character Character::operator*(const Character& o) const {
    check_same_group(g_, o.g_);
    std::vector<long> e(e_.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = e_[i] + o.e_[i];
    return g_.character(std::move(e));
}

Character Character::inverse() const {
    std::vector<long> e(e_.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = -e_[i];
    return g_.character(std::move(e));
}

Character Character::pow(long k) const {
    std::vector<long> e(e_.size());
    for (size_t i = 0; i < e.size(); ++i) {
        long n = g_.invariants()[i];
        e[i] = mod_reduce((e_[i] % n) * (k % n), n);
    }
    return g_.character(std::move(e));
}

bool Character::is_trivial() const {
    return std::all_of(e_.begin(), e_.end(), [](long v) { return v == 0; });
}

long Character::order() const {
    long o = 1;
    for (size_t i = 0; i < e_.size(); ++i) {
        long n = g_.invariants()[i];
        o = lcm_long(o, n / std::gcd(e_[i] == 0 ? n : e_[i], n));
    }
    return o;
}

bool operator==(const Character& a, const Character& b) {
    return a.g_ == b.g_ && a.e_ == b.e_;
}

bool operator<(const Character& a, const Character& b) {
    if (!(a.g_ == b.g_)) return a.g_.invariants() < b.g_.invariants();
    return a.e_ < b.e_;
}

GroupAlgElem::GroupAlgElem(const GroupElement& g) { t_[g] = CycScalar(1); }

GroupAlgElem::GroupAlgElem(const CycScalar& c, const GroupElement& g) {
    if (!c.is_zero()) t_[g] = c;
}

bool GroupAlgElem::is_zero() const { return t_.empty(); }

CycScalar GroupAlgElem::coefficient(const GroupElement& g) const {
    auto it = t_.find(g);
    return it == t_.end() ? CycScalar() : it->second;
}

void GroupAlgElem::add_term(const GroupElement& g, const CycScalar& c) {
    auto it = t_.find(g);
    if (it == t_.end()) {
        if (!c.is_zero()) t_[g] = c;
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

GroupAlgElem GroupAlgElem::operator+(const GroupAlgElem& o) const {
    GroupAlgElem r = *this;
    for (const auto& [g, c] : o.t_) r.add_term(g, c);
    return r;
}

GroupAlgElem GroupAlgElem::operator-(const GroupAlgElem& o) const {
    GroupAlgElem r = *this;
    for (const auto& [g, c] : o.t_) r.add_term(g, -c);
    return r;
}

GroupAlgElem GroupAlgElem::operator-() const {
    GroupAlgElem r;
    for (const auto& [g, c] : t_) r.t_[g] = -c;
    return r;
}

GroupAlgElem GroupAlgElem::operator*(const GroupAlgElem& o) const {
    GroupAlgElem r;
    for (const auto& [g, c] : t_)
        for (const auto& [h, d] : o.t_) r.add_term(g * h, c * d);
    return r;
}

GroupAlgElem GroupAlgElem::scaled(const CycScalar& c) const {
    GroupAlgElem r;
    if (c.is_zero()) return r;
    for (const auto& [g, d] : t_) {
        CycScalar p = c * d;
        if (!p.is_zero()) r.t_[g] = p;
    }
    return r;
}

GroupAlgElem GroupAlgElem::pow(long k) const {
    if (k < 0) throw ZeroInput("group algebra power requires k >= 0");
    GroupAlgElem acc;
    bool started = false;
    GroupAlgElem base = *this;
    while (k > 0) {
        if (k & 1) {
            acc = started ? acc * base : base;
            started = true;
        }
        base = base * base;
        k >>= 1;
    }
    if (!started) {
        // k == 0: the empty product; caller must supply a group via terms
        if (t_.empty()) throw ZeroInput("0^0 in the group algebra is undefined here");
        return GroupAlgElem::unit(t_.begin()->first.group());
    }
    return acc;
}

bool operator==(const GroupAlgElem& a, const GroupAlgElem& b) {
    return (a - b).is_zero();
}

CycScalar GroupAlgElem::counit() const {
    CycScalar s;
    for (const auto& [g, c] : t_) s += c;
    return s;
}

GroupAlgElem GroupAlgElem::twisted_by(const Character& chi) const {
    GroupAlgElem r;
    for (const auto& [g, c] : t_) {
        long L = chi.group().exponent();
        auto ctx = c.context()->m % L == 0 ? c.context() : ScalarContext::make(lcm_long(c.context()->m, L));
        CycScalar v = chi.eval(ctx, g) * c;
        if (!v.is_zero()) r.t_[g] = v;
    }
    return r;
}

GroupElement GroupIso::apply(const GroupElement& x) const {
    if (!(x.group() == src)) throw GroupMismatch("element not in the source group");
    GroupElement y = dst.identity();
    for (size_t i = 0; i < images.size(); ++i) y = y * images[i].pow(x.exps()[i]);
    return y;
}

Character GroupIso::pull_back(const Character& chi) const {
    if (!(chi.group() == dst)) throw GroupMismatch("character not on the target group");
    long L = dst.exponent();
    std::vector<long> e(src.rank());
    for (long i = 0; i < src.rank(); ++i) {
        long n = src.invariants()[i];
        long k = chi.eval_exponent(images[i]); // value is zeta_L^k; must be an n-th root
        if ((k * n) % L != 0)
            throw GroupMismatch("pulled-back character is not well defined");
        e[i] = mod_reduce(k * n / L, n);
    }
    return src.character(std::move(e));
}

GroupIso GroupIso::inverse() const {
    // Invert by solving for the preimages of the dst generators: brute
    // composition over src generator exponent tuples is avoided by the
    // cokernel trick: build the matrix of the forward map and invert via
    // Smith form on the combined relation lattice.
    // Simpler here: search the (small) set of candidate elements.
    GroupIso inv;
    inv.src = dst;
    inv.dst = src;
    inv.images.resize(dst.rank());
    // phi^{-1}(gen_j): solve phi(x) = gen_j. The forward map on exponents is
    // linear; enumerate x over elements whose order divides ord(gen_j).
    for (long j = 0; j < dst.rank(); ++j) {
        long n = dst.invariants()[j];
        bool found = false;
        for (const auto& x : src.elements()) {
            if (n % x.order() != 0) continue;
            if (apply(x) == dst.generator(j)) {
                inv.images[j] = x;
                found = true;
                break;
            }
        }
        if (!found) throw GroupMismatch("isomorphism has no inverse image; map not bijective");
    }
    return inv;
}

std::vector<GroupIso> enumerate_isomorphisms(const AbelianGroup& src, const AbelianGroup& dst) {
    std::vector<GroupIso> out;
    if (!(src == dst)) return out; // invariant factors differ: no isomorphisms
    long r = src.rank();
    if (r == 0) {
        out.push_back(GroupIso{src, dst, {}});
        return out;
    }
    // Candidates for the image of generator_i: elements annihilated by n_i.
    std::vector<std::vector<GroupElement>> cands(r);
    auto all = dst.elements();
    for (long i = 0; i < r; ++i) {
        long n = src.invariants()[i];
        for (const auto& y : all)
            if (n % y.order() == 0) cands[i].push_back(y);
    }
    std::vector<GroupElement> pick(r);
    std::vector<long> idx(r, 0);
    // Depth-first over candidate tuples in lexicographic order; a tuple is an
    // isomorphism iff the images generate the whole group (equal orders make
    // surjective equivalent to bijective).
    long depth = 0;
    while (depth >= 0) {
        if (depth == r) {
            IntMatrix A(r, std::vector<Int>(r, Int(0)));
            for (long c = 0; c < r; ++c)
                for (long rw = 0; rw < r; ++rw) A[rw][c] = pick[c].exps()[rw];
            if (cokernel_order(A, dst.invariants()) == 1)
                out.push_back(GroupIso{src, dst, pick});
            --depth;
            continue;
        }
        if (idx[depth] == (long)cands[depth].size()) {
            idx[depth] = 0;
            --depth;
            continue;
        }
        pick[depth] = cands[depth][idx[depth]++];
        ++depth;
    }
    return out;
}

bool group_like_check(const GroupAlgElem& u) {
    if (u.terms().size() != 1) return false;
    return u.terms().begin()->second.is_one();
}

} // namespace qf
