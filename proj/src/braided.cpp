#include "qf/braided.hpp"

#include <algorithm>

namespace qf {

std::vector<int> word_degree(const Word& w, int theta) {
    std::vector<int> d(theta, 0);
    for (unsigned char c : w) {
        if (c >= theta) throw Error("Internal", "letter outside the alphabet");
        ++d[c];
    }
    return d;
}

static void check_ambient(const DatumPtr& a, const DatumPtr& b) {
    if (a == b) return;
    if (!a || !b) throw AmbientMismatch("operand without ambient datum");
    if (a->canonical_key() != b->canonical_key())
        throw AmbientMismatch("operands over different data");
}

BraidedPoly::BraidedPoly(DatumPtr d) : d_(std::move(d)) {}

BraidedPoly BraidedPoly::generator(DatumPtr d, int i) {
    if (i < 0 || i >= d->theta()) throw ZeroInput("generator index out of range");
    BraidedPoly p(std::move(d));
    p.t_[Word(1, (char)i)] = CycScalar(1);
    return p;
}

BraidedPoly BraidedPoly::monomial(DatumPtr d, const Word& w, const CycScalar& c) {
    BraidedPoly p(std::move(d));
    if (!c.is_zero()) p.t_[w] = c;
    return p;
}

BraidedPoly BraidedPoly::unit(DatumPtr d) { return monomial(std::move(d), Word(), CycScalar(1)); }

void BraidedPoly::add_term(const Word& w, const CycScalar& c) {
    auto it = t_.find(w);
    if (it == t_.end()) {
        if (!c.is_zero()) t_[w] = c;
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

BraidedPoly BraidedPoly::operator+(const BraidedPoly& o) const {
    check_ambient(d_, o.d_);
    BraidedPoly r = *this;
    if (!r.d_) r.d_ = o.d_;
    for (const auto& [w, c] : o.t_) r.add_term(w, c);
    return r;
}

BraidedPoly BraidedPoly::operator-(const BraidedPoly& o) const {
    check_ambient(d_, o.d_);
    BraidedPoly r = *this;
    if (!r.d_) r.d_ = o.d_;
    for (const auto& [w, c] : o.t_) r.add_term(w, -c);
    return r;
}

BraidedPoly BraidedPoly::operator-() const {
    BraidedPoly r(d_);
    for (const auto& [w, c] : t_) r.t_[w] = -c;
    return r;
}

BraidedPoly BraidedPoly::operator*(const BraidedPoly& o) const {
    check_ambient(d_, o.d_);
    BraidedPoly r(d_ ? d_ : o.d_);
    for (const auto& [w, c] : t_)
        for (const auto& [v, e] : o.t_) r.add_term(w + v, c * e);
    return r;
}

BraidedPoly BraidedPoly::scaled(const CycScalar& c) const {
    BraidedPoly r(d_);
    if (c.is_zero()) return r;
    for (const auto& [w, e] : t_) {
        auto p = c * e;
        if (!p.is_zero()) r.t_[w] = p;
    }
    return r;
}

bool operator==(const BraidedPoly& a, const BraidedPoly& b) { return (a - b).is_zero(); }

bool BraidedPoly::is_homogeneous() const {
    if (t_.empty()) return true;
    auto d0 = word_degree(t_.begin()->first, d_->theta());
    for (const auto& [w, c] : t_)
        if (word_degree(w, d_->theta()) != d0) return false;
    return true;
}

std::vector<int> BraidedPoly::degree() const {
    if (t_.empty()) throw ZeroInput("the zero polynomial has no degree");
    auto d0 = word_degree(t_.begin()->first, d_->theta());
    for (const auto& [w, c] : t_)
        if (word_degree(w, d_->theta()) != d0)
            throw Error("Internal", "degree of an inhomogeneous polynomial");
    return d0;
}

BraidedPoly BraidedPoly::homogeneous_part(const std::vector<int>& degree) const {
    BraidedPoly r(d_);
    for (const auto& [w, c] : t_)
        if (word_degree(w, d_->theta()) == degree) r.t_[w] = c;
    return r;
}

std::vector<std::vector<int>> BraidedPoly::degrees() const {
    std::vector<std::vector<int>> out;
    for (const auto& [w, c] : t_) {
        auto d = word_degree(w, d_->theta());
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    return out;
}

TensorPoly::TensorPoly(DatumPtr d) : d_(std::move(d)) {}

TensorPoly TensorPoly::of(const BraidedPoly& left, const BraidedPoly& right) {
    check_ambient(left.ambient(), right.ambient());
    TensorPoly t(left.ambient() ? left.ambient() : right.ambient());
    for (const auto& [w, c] : left.terms())
        for (const auto& [v, e] : right.terms()) t.add_term(w, v, c * e);
    return t;
}

void TensorPoly::add_term(const Word& l, const Word& r, const CycScalar& c) {
    auto key = std::make_pair(l, r);
    auto it = t_.find(key);
    if (it == t_.end()) {
        if (!c.is_zero()) t_[key] = c;
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

TensorPoly TensorPoly::operator+(const TensorPoly& o) const {
    check_ambient(d_, o.d_);
    TensorPoly r = *this;
    if (!r.d_) r.d_ = o.d_;
    for (const auto& [k, c] : o.t_) r.add_term(k.first, k.second, c);
    return r;
}

TensorPoly TensorPoly::operator-(const TensorPoly& o) const {
    check_ambient(d_, o.d_);
    TensorPoly r = *this;
    if (!r.d_) r.d_ = o.d_;
    for (const auto& [k, c] : o.t_) r.add_term(k.first, k.second, -c);
    return r;
}

TensorPoly TensorPoly::scaled(const CycScalar& c) const {
    TensorPoly r(d_);
    if (c.is_zero()) return r;
    for (const auto& [k, e] : t_) {
        auto p = c * e;
        if (!p.is_zero()) r.t_[k] = p;
    }
    return r;
}

bool operator==(const TensorPoly& a, const TensorPoly& b) { return (a - b).is_zero(); }

TensorPoly braided_mul(const TensorPoly& t1, const TensorPoly& t2) {
    check_ambient(t1.ambient(), t2.ambient());
    const DatumPtr& d = t1.ambient() ? t1.ambient() : t2.ambient();
    TensorPoly r(d);
    int theta = d->theta();
    for (const auto& [k1, c1] : t1.terms()) {
        auto inner_deg = word_degree(k1.second, theta);
        for (const auto& [k2, c2] : t2.terms()) {
            auto cross = d->q_bilinear(inner_deg, word_degree(k2.first, theta));
            r.add_term(k1.first + k2.first, k1.second + k2.second, c1 * c2 * cross);
        }
    }
    return r;
}

TensorPoly coproduct(const BraidedPoly& p) {
    const DatumPtr& d = p.ambient();
    TensorPoly out(d);
    for (const auto& [w, c] : p.terms()) {
        TensorPoly acc(d);
        acc.add_term(Word(), Word(), CycScalar(1));
        for (unsigned char letter : w) {
            TensorPoly gen(d);
            gen.add_term(Word(1, (char)letter), Word(), CycScalar(1));
            gen.add_term(Word(), Word(1, (char)letter), CycScalar(1));
            acc = braided_mul(acc, gen);
        }
        out = out + acc.scaled(c);
    }
    return out;
}

BraidedPoly braided_commutator(const BraidedPoly& x, const BraidedPoly& y) {
    check_ambient(x.ambient(), y.ambient());
    const DatumPtr& d = x.ambient() ? x.ambient() : y.ambient();
    BraidedPoly out(d);
    for (const auto& dx : x.degrees()) {
        auto xi = x.homogeneous_part(dx);
        for (const auto& dy : y.degrees()) {
            auto yj = y.homogeneous_part(dy);
            out += xi * yj - (yj * xi).scaled(d->q_bilinear(dx, dy));
        }
    }
    return out;
}

BraidedPoly ad_c(int i, const BraidedPoly& y) {
    const DatumPtr& d = y.ambient();
    if (!d) throw AmbientMismatch("ad_c needs an ambient datum");
    return braided_commutator(BraidedPoly::generator(d, i), y);
}

BraidedPoly serre_element(DatumPtr d, int i, int j) {
    if (i == j) throw ZeroInput("Serre element needs distinct indices");
    BraidedPoly y = BraidedPoly::generator(d, j);
    int times = 1 - d->cartan.a[i][j];
    for (int t = 0; t < times; ++t) y = ad_c(i, y);
    return y;
}

std::pair<int, int> root_decomposition(const Datum& d, int l) {
    const auto& beta = d.roots.positive_roots.at(l);
    if (d.roots.height(l) == 1) throw NoDecomposition("simple root has no split");
    for (int k = l - 1; k >= 0; --k) {
        std::vector<int> diff(beta.size());
        bool ok = true;
        for (size_t t = 0; t < beta.size(); ++t) {
            diff[t] = beta[t] - d.roots.positive_roots[k][t];
            if (diff[t] < 0) ok = false;
        }
        if (!ok) continue;
        int m = d.roots.position_of(diff);
        if (m > l) return {k, m};
    }
    throw NoDecomposition("no convex split found");
}

BraidedPoly root_vector(DatumPtr d, int l) {
    if (l < 0 || l >= d->roots.p()) throw ZeroInput("convex position out of range");
    if (d->roots.height(l) == 1) {
        for (int i = 0; i < d->theta(); ++i)
            if (d->roots.simple_position[i] == l) return BraidedPoly::generator(d, i);
        throw Error("Internal", "height-one root is not simple");
    }
    auto [k, m] = root_decomposition(*d, l);
    return braided_commutator(root_vector(d, k), root_vector(d, m));
}

CycScalar Cocycle2::on_generators(int i, int j) const { return val_.at(i).at(j); }

CycScalar Cocycle2::on(const std::vector<int>& v, const std::vector<int>& w) const {
    CycScalar out(1);
    for (size_t i = 0; i < val_.size(); ++i) {
        if (v[i] == 0) continue;
        for (size_t j = 0; j < val_.size(); ++j) {
            if (w[j] == 0) continue;
            out *= val_[i][j].pow((long)v[i] * w[j]);
        }
    }
    return out;
}

Cocycle2 twist_cocycle(const DatumPtr& d, const DatumPtr& dprime) {
    if (!(d->group == dprime->group) || d->theta() != dprime->theta() ||
        d->cartan.a != dprime->cartan.a)
        throw BraidingMismatch("data do not share group and Cartan matrix");
    int n = d->theta();
    for (int i = 0; i < n; ++i) {
        if (d->q[i][i] != dprime->q[i][i])
            throw BraidingMismatch("diagonal braiding differs at index " + std::to_string(i + 1));
        for (int j = 0; j < n; ++j)
            if (d->q[i][j] * d->q[j][i] != dprime->q[i][j] * dprime->q[j][i])
                throw BraidingMismatch("symmetrized braiding differs at (" +
                                       std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
    Cocycle2 s;
    s.src_ = d;
    s.dst_ = dprime;
    s.val_.assign(n, std::vector<CycScalar>(n, CycScalar(1)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s.val_[i][j] = d->q[i][j] / dprime->q[i][j];
    return s;
}

BraidedPoly twist_map(const BraidedPoly& p, const Cocycle2& sigma) {
    check_ambient(p.ambient(), sigma.src());
    BraidedPoly out(sigma.dst());
    for (const auto& [w, c] : p.terms()) {
        CycScalar factor(1);
        for (size_t r = 0; r < w.size(); ++r)
            for (size_t t = r + 1; t < w.size(); ++t)
                factor *= sigma.on_generators((unsigned char)w[r], (unsigned char)w[t]);
        out.add_term(w, c * factor);
    }
    return out;
}

} // namespace qf
