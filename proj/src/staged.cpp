#include "stagedlt/staged.hpp"

#include <algorithm>
#include <sstream>

namespace lt {

namespace {

// net I_t-degree of one monomial: p-valuation and exponents of u_1..u_{t-1}
// count, each offset by the fraction's denominator exponent
int net_ideal_degree(const std::vector<int>& e, const GrElement& c,
                     const std::vector<int>& den, int t) {
    int d = c.val() - den[0];
    for (int i = 1; i < t; ++i)
        d += e[i - 1] - den[i];
    return d;
}

} // namespace

std::string StagedRingSpec::describe() const {
    std::ostringstream os;
    os << "X0 = " << coeff.spec().describe() << "[[";
    for (int i = 1; i < h; ++i)
        os << (i > 1 ? "," : "") << "u" << i;
    os << "]]";
    for (int j = 0; j < stages(); ++j) {
        int g = heights[j];
        os << "; X" << (j + 1) << " = (";
        if (g == 0)
            os << "p";
        else
            os << "u" << g;
        os << "^-1 X" << j << ")^_(I" << g << ", N=" << prof.N[j] << ")";
    }
    os << "; D=" << prof.D << " M=" << prof.M;
    return os.str();
}

StagedRing::StagedRing(GaloisRing coeff, int h, std::vector<int> heights,
                       TruncationProfile prof) {
    if (h < 1)
        fail("BadInput", "h must be >= 1");
    for (std::size_t j = 0; j < heights.size(); ++j) {
        if (heights[j] < 0 || heights[j] > h)
            fail("BadHeights", "stage height out of [0, h]");
        if (j > 0 && heights[j] > heights[j - 1])
            fail("BadHeights", "stage heights must be weakly decreasing");
    }
    if (prof.N.size() != heights.size())
        fail("BadInput", "profile needs one completion depth per stage");
    if (prof.D < 1 || prof.M < 0 || prof.Nx < 1)
        fail("BadInput", "window parameters must be positive");
    for (int v : prof.N)
        if (v < 1) fail("BadInput", "completion depths must be >= 1");
    s_ = std::make_shared<const StagedRingSpec>(
        StagedRingSpec{std::move(coeff), h, std::move(heights), std::move(prof)});
}

StagedElement StagedRing::zero(int stage) const {
    return StagedElement(s_, stage, {}, std::vector<int>(s_->h, 0));
}

StagedElement StagedRing::one(int stage) const {
    return from_coeff(s_->coeff.one(), stage);
}

StagedElement StagedRing::from_coeff(const GrElement& c, int stage) const {
    if (!(c.ring() == s_->coeff.spec()))
        fail("MixedRings", "coefficient from a different Galois ring");
    std::map<std::vector<int>, GrElement> num;
    if (!c.is_zero())
        num.emplace(std::vector<int>(s_->h - 1, 0), c);
    return StagedElement(s_, stage, std::move(num), std::vector<int>(s_->h, 0));
}

StagedElement StagedRing::from_int(const Int& k, int stage) const {
    return from_coeff(s_->coeff.from_int(k), stage);
}

StagedElement StagedRing::p_elem(int stage) const {
    return from_int(s_->coeff.p(), stage);
}

StagedElement StagedRing::gen(int i, int stage) const {
    if (i < 1 || i > s_->h - 1)
        fail("BadInput", "generator index out of range");
    std::vector<int> e(s_->h - 1, 0);
    e[i - 1] = 1;
    return monomial(s_->coeff.one(), std::move(e), stage);
}

StagedElement StagedRing::gen_inv(int i, int stage) const {
    if (i < 0 || i > s_->h - 1)
        fail("BadInput", "generator index out of range");
    if (!s_->inverted_by(i, stage))
        fail("BadInput", "generator not inverted at this stage");
    std::map<std::vector<int>, GrElement> num;
    num.emplace(std::vector<int>(s_->h - 1, 0), s_->coeff.one());
    std::vector<int> den(s_->h, 0);
    den[i] = 1;
    return StagedElement(s_, stage, std::move(num), std::move(den));
}

StagedElement StagedRing::monomial(const GrElement& c, std::vector<int> e, int stage) const {
    if (!(c.ring() == s_->coeff.spec()))
        fail("MixedRings", "coefficient from a different Galois ring");
    if (static_cast<int>(e.size()) != s_->h - 1)
        fail("BadInput", "exponent vector length must be h-1");
    for (int v : e)
        if (v < 0) fail("BadInput", "numerator exponents must be nonnegative");
    std::map<std::vector<int>, GrElement> num;
    if (!c.is_zero())
        num.emplace(std::move(e), c);
    return StagedElement(s_, stage, std::move(num), std::vector<int>(s_->h, 0));
}

StagedElement StagedRing::make(int stage, std::map<std::vector<int>, GrElement> terms,
                               std::vector<int> dens) const {
    if (stage < 0 || stage > stages())
        fail("BadInput", "stage out of range");
    if (static_cast<int>(dens.size()) != s_->h)
        fail("BadInput", "denominator vector length must be h");
    for (int g = 0; g < s_->h; ++g)
        if (dens[g] < 0 || (dens[g] > 0 && !s_->inverted_by(g, stage)))
            fail("BadInput", "denominator on a generator not inverted at this stage");
    for (const auto& [e, c] : terms) {
        if (static_cast<int>(e.size()) != s_->h - 1)
            fail("BadInput", "exponent vector length must be h-1");
        for (int v : e)
            if (v < 0) fail("BadInput", "numerator exponents must be nonnegative");
        if (!(c.ring() == s_->coeff.spec()))
            fail("MixedRings", "coefficient from a different Galois ring");
    }
    return StagedElement(s_, stage, std::move(terms), std::move(dens));
}

StagedElement::StagedElement(std::shared_ptr<const StagedRingSpec> s, int stage,
                             std::map<std::vector<int>, GrElement> num, std::vector<int> den)
    : s_(std::move(s)), stage_(stage), num_(std::move(num)), den_(std::move(den)) {
    normalize_();
}

StagedElement StagedElement::with_(std::map<std::vector<int>, GrElement> num,
                                   std::vector<int> den) const {
    return StagedElement(s_, stage_, std::move(num), std::move(den));
}

void StagedElement::normalize_() {
    const auto& P = s_->prof;
    // drop zero coefficients
    for (auto it = num_.begin(); it != num_.end();)
        it = it->second.is_zero() ? num_.erase(it) : std::next(it);
    // completion cull: stage j+1 completes at I_{h} with depth N[j]; a monomial
    // whose net I-degree reaches the depth is zero in that completion
    for (int j = 0; j < stage_; ++j) {
        int t = s_->heights[j];
        if (t < 1) continue;
        for (auto it = num_.begin(); it != num_.end();) {
            if (net_ideal_degree(it->first, it->second, den_, t) >= P.N[j])
                it = num_.erase(it);
            else
                ++it;
        }
    }
    // strip common factors, then window the numerator exponents; repeat since
    // a window cull can expose a new common factor
    bool again = true;
    while (again) {
        again = false;
        if (!num_.empty() && den_[0] > 0) {
            int m = s_->coeff.a();
            for (const auto& [e, c] : num_) m = std::min(m, c.val());
            int k = std::min(m, den_[0]);
            if (k > 0) {
                std::map<std::vector<int>, GrElement> nn;
                for (auto& [e, c] : num_) {
                    GrElement v = c;
                    for (int i = 0; i < k; ++i) v = v.divided_by_p();
                    nn.emplace(e, std::move(v));
                }
                num_ = std::move(nn);
                den_[0] -= k;
            }
        }
        for (int g = 1; g < s_->h; ++g) {
            if (num_.empty() || den_[g] == 0) continue;
            int m = num_.begin()->first[g - 1];
            for (const auto& [e, c] : num_) m = std::min(m, e[g - 1]);
            int k = std::min(m, den_[g]);
            if (k > 0) {
                std::map<std::vector<int>, GrElement> nn;
                for (auto& [e, c] : num_) {
                    std::vector<int> e2 = e;
                    e2[g - 1] -= k;
                    nn.emplace(std::move(e2), std::move(c));
                }
                num_ = std::move(nn);
                den_[g] -= k;
            }
        }
        for (auto it = num_.begin(); it != num_.end();) {
            bool over = false;
            for (int v : it->first)
                if (v >= P.D) { over = true; break; }
            if (over) {
                it = num_.erase(it);
                again = true;
            } else {
                ++it;
            }
        }
    }
    if (num_.empty()) {
        std::fill(den_.begin(), den_.end(), 0);
        return;
    }
    for (int g = 0; g < s_->h; ++g)
        if (den_[g] > P.M)
            fail("PrecisionExhausted",
                 "denominator exponent " + std::to_string(den_[g]) + " on " +
                     (g == 0 ? std::string("p") : "u" + std::to_string(g)) +
                     " exceeds the cap " + std::to_string(P.M));
}

void StagedElement::check_same_(const StagedElement& o) const {
    if (!(*s_ == *o.s_))
        fail("MixedRings", "staged elements from different staged rings");
}

StagedElement StagedElement::promote(int stage) const {
    if (stage < stage_ || stage > s_->stages())
        fail("BadInput", "promotion target stage out of range");
    return StagedElement(s_, stage, num_, den_);
}

StagedElement StagedElement::operator+(const StagedElement& o) const {
    check_same_(o);
    if (stage_ != o.stage_) {
        int s = std::max(stage_, o.stage_);
        return promote(s) + o.promote(s);
    }
    // common denominator
    std::vector<int> den(s_->h);
    for (int g = 0; g < s_->h; ++g) den[g] = std::max(den_[g], o.den_[g]);
    auto scaled = [&](const StagedElement& x) {
        std::map<std::vector<int>, GrElement> out;
        for (const auto& [e, c] : x.num_) {
            std::vector<int> e2 = e;
            GrElement v = c;
            for (int g = 1; g < s_->h; ++g) e2[g - 1] += den[g] - x.den_[g];
            if (den[0] > x.den_[0]) v = v.times_p_pow(den[0] - x.den_[0]);
            out.emplace(std::move(e2), std::move(v));
        }
        return out;
    };
    std::map<std::vector<int>, GrElement> num = scaled(*this);
    for (auto& [e, c] : scaled(o)) {
        auto it = num.find(e);
        if (it == num.end())
            num.emplace(e, c);
        else
            it->second = it->second + c;
    }
    return StagedElement(s_, stage_, std::move(num), std::move(den));
}

StagedElement StagedElement::operator-() const {
    std::map<std::vector<int>, GrElement> num;
    for (const auto& [e, c] : num_) num.emplace(e, -c);
    return StagedElement(s_, stage_, std::move(num), den_);
}

StagedElement StagedElement::operator-(const StagedElement& o) const {
    return *this + (-o);
}

StagedElement StagedElement::operator*(const StagedElement& o) const {
    check_same_(o);
    if (stage_ != o.stage_) {
        int s = std::max(stage_, o.stage_);
        return promote(s) * o.promote(s);
    }
    std::vector<int> den(s_->h);
    for (int g = 0; g < s_->h; ++g) den[g] = den_[g] + o.den_[g];
    std::map<std::vector<int>, GrElement> num;
    for (const auto& [e1, c1] : num_) {
        for (const auto& [e2, c2] : o.num_) {
            GrElement c = c1 * c2;
            if (c.is_zero()) continue;
            std::vector<int> e = e1;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
            auto it = num.find(e);
            if (it == num.end())
                num.emplace(std::move(e), std::move(c));
            else
                it->second = it->second + c;
        }
    }
    return StagedElement(s_, stage_, std::move(num), std::move(den));
}

StagedElement StagedElement::operator*(const GrElement& c) const {
    std::map<std::vector<int>, GrElement> num;
    for (const auto& [e, v] : num_) num.emplace(e, v * c);
    return StagedElement(s_, stage_, std::move(num), den_);
}

StagedElement StagedElement::pow(std::uint64_t k) const {
    std::map<std::vector<int>, GrElement> one;
    one.emplace(std::vector<int>(s_->h - 1, 0), s_->coeff.one());
    StagedElement r(s_, stage_, std::move(one), std::vector<int>(s_->h, 0));
    StagedElement b = *this;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

bool StagedElement::operator==(const StagedElement& o) const {
    check_same_(o);
    if (stage_ != o.stage_) {
        int s = std::max(stage_, o.stage_);
        return promote(s) == o.promote(s);
    }
    return den_ == o.den_ && num_ == o.num_;
}

int StagedElement::ideal_degree(int t) const {
    if (t < 0 || t > s_->h)
        fail("BadInput", "ideal index out of [0, h]");
    if (t == 0)
        return is_zero() ? 1 : 0;
    int cap = s_->coeff.a() + (t - 1) * s_->prof.D;
    for (int j = 0; j < s_->stages(); ++j)
        if (s_->heights[j] == t) cap = std::min(cap, s_->prof.N[j]);
    if (is_zero()) return cap;
    int d = cap;
    for (const auto& [e, c] : num_)
        d = std::min(d, net_ideal_degree(e, c, den_, t));
    return d;
}

StagedElement StagedElement::mod_ideal(int t) const {
    if (t < 0 || t > s_->h)
        fail("BadInput", "ideal index out of [0, h]");
    return reduce_mod_ideal_(t);
}

StagedElement StagedElement::reduce_mod_ideal_(int t) const {
    if (t < 1) return *this;
    std::map<std::vector<int>, GrElement> num;
    for (const auto& [e, c] : num_)
        if (net_ideal_degree(e, c, den_, t) < 1)
            num.emplace(e, c);
    return with_(std::move(num), den_);
}

StagedElement StagedElement::slice_net_(int g, int nu) const {
    std::map<std::vector<int>, GrElement> num;
    std::vector<int> den = den_;
    if (g == 0) {
        for (const auto& [e, c] : num_) {
            if (c.val() - den_[0] != nu) continue;
            GrElement v = c;
            for (int i = 0; i < c.val(); ++i) v = v.divided_by_p();
            num.emplace(e, std::move(v));
        }
        den[0] = 0;
    } else {
        for (const auto& [e, c] : num_) {
            if (e[g - 1] - den_[g] != nu) continue;
            std::vector<int> e2 = e;
            e2[g - 1] = 0;
            num.emplace(std::move(e2), c);
        }
        den[g] = 0;
    }
    return with_(std::move(num), std::move(den));
}

StagedElement StagedElement::invert_rec_(int level) const {
    if (level == 0) {
        // power-series inversion: constant coefficient must be a unit
        std::vector<int> z(s_->h - 1, 0);
        auto it = num_.find(z);
        if (den_ != std::vector<int>(s_->h, 0))
            fail("NotAUnit", "denominator content unresolved at stage 0");
        if (it == num_.end() || !it->second.is_unit())
            fail("NotAUnit", "constant coefficient is not a unit at stage 0");
        GrElement c0i = it->second.inv();
        StagedElement cinv(s_, stage_, {{z, c0i}}, std::vector<int>(s_->h, 0));
        StagedElement m = *this - StagedElement(s_, stage_, {{z, it->second}},
                                                std::vector<int>(s_->h, 0));
        StagedElement q = -(cinv * m);
        StagedElement res = cinv, acc = cinv;
        int guard = 0;
        while (true) {
            acc = acc * q;
            if (acc.is_zero()) break;
            res = res + acc;
            if (++guard > 100000)
                fail("BadInput", "geometric series failed to terminate");
        }
        return res;
    }
    int g = s_->heights[level - 1];
    // collect net orders of the inverted generator, ascending
    std::vector<int> orders;
    for (const auto& [e, c] : num_) {
        int nu = (g == 0) ? c.val() - den_[0] : e[g - 1] - den_[g];
        orders.push_back(nu);
    }
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    for (int nu : orders) {
        StagedElement T = slice_net_(g, nu);
        if (T.reduce_mod_ideal_(g).is_zero())
            continue;   // this slice carries no unit content mod the stage ideal
        StagedElement Tinv;
        try {
            Tinv = T.invert_rec_(level - 1);
        } catch (const DomainError& err) {
            if (err.code() == "NotAUnit")
                fail("NotAUnit",
                     "leading slice at net order " + std::to_string(nu) + " of " +
                         (g == 0 ? std::string("p") : "u" + std::to_string(g)) +
                         " is not a unit: " + err.what());
            throw;
        }
        // shift the slice back: c = u_g^nu * T, cinv = u_g^{-nu} * Tinv
        auto shift = [&](const StagedElement& x, int k) {
            std::map<std::vector<int>, GrElement> num;
            std::vector<int> den = x.den_;
            if (g == 0) {
                if (k >= 0) {
                    for (const auto& [e, c] : x.num_) num.emplace(e, c.times_p_pow(k));
                } else {
                    num = x.num_;
                    den[0] += -k;
                }
            } else {
                if (k >= 0) {
                    for (const auto& [e, c] : x.num_) {
                        std::vector<int> e2 = e;
                        e2[g - 1] += k;
                        num.emplace(std::move(e2), c);
                    }
                } else {
                    num = x.num_;
                    den[g] += -k;
                }
            }
            return x.with_(std::move(num), std::move(den));
        };
        StagedElement c = shift(T, nu);
        StagedElement cinv = shift(Tinv, -nu);
        StagedElement m = *this - c;
        StagedElement q = -(cinv * m);
        StagedElement res = cinv, acc = cinv;
        int guard = 0;
        while (true) {
            acc = acc * q;
            if (acc.is_zero()) break;
            res = res + acc;
            if (++guard > 100000)
                fail("BadInput", "geometric series failed to terminate");
        }
        return res;
    }
    fail("NotAUnit", "no slice of " + (g == 0 ? std::string("p") : "u" + std::to_string(g)) +
                         " carries unit content at stage " + std::to_string(level));
}

StagedElement StagedElement::try_invert() const {
    if (is_zero())
        fail("NotAUnit", "zero is not invertible");
    return invert_rec_(stage_);
}

std::pair<int, StagedElement> StagedElement::weierstrass_split(int g) const {
    if (stage_ < 1)
        fail("BadInput", "no localization stage to prepare against");
    int t = s_->heights[stage_ - 1];
    if (g < 1 || g >= t)
        fail("BadInput", "generator is not a completion direction of this stage");
    if (is_zero())
        fail("NoSplit", "zero element has no Weierstrass preparation");
    int e = num_.begin()->first[g - 1];
    for (const auto& [ev, c] : num_) e = std::min(e, ev[g - 1]);
    std::map<std::vector<int>, GrElement> num;
    for (const auto& [ev, c] : num_) {
        std::vector<int> e2 = ev;
        e2[g - 1] -= e;
        num.emplace(std::move(e2), c);
    }
    StagedElement U = with_(std::move(num), den_);
    try {
        (void)U.try_invert();
    } catch (const DomainError& err) {
        if (err.code() == "NotAUnit")
            fail("NoSplit", "cofactor of u" + std::to_string(g) + "^" + std::to_string(e) +
                                " is not a unit: " + err.what());
        throw;
    }
    return {e, U};
}

std::string StagedElement::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : num_) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.str();
        bool composite = cs.find(' ') != std::string::npos;
        bool has_u = false;
        for (int v : e)
            if (v > 0) has_u = true;
        if (!has_u) {
            os << (composite ? "(" + cs + ")" : cs);
        } else {
            if (cs != "1")
                os << (composite ? "(" + cs + ")" : cs) << "*";
            bool f2 = true;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!f2) os << "*";
                f2 = false;
                os << "u" << (i + 1);
                if (e[i] > 1) os << "^" << e[i];
            }
        }
    }
    bool any_den = false;
    for (int g = 0; g < s_->h; ++g)
        if (den_[g] > 0) any_den = true;
    if (any_den) {
        std::ostringstream ds;
        bool f3 = true;
        for (int g = 0; g < s_->h; ++g) {
            if (den_[g] == 0) continue;
            if (!f3) ds << "*";
            f3 = false;
            ds << (g == 0 ? "p" : "u" + std::to_string(g));
            if (den_[g] > 1) ds << "^" << den_[g];
        }
        std::string body = os.str();
        if (num_.size() > 1) body = "(" + body + ")";
        return body + " / " + ds.str();
    }
    return os.str();
}

StagedMap identity_map(const StagedRing& R, int stage) {
    StagedMap m;
    m.source = R.spec_ptr();
    m.target = R.spec_ptr();
    m.stage = stage;
    for (int i = 1; i < R.spec().h; ++i)
        m.images.push_back(R.gen(i, stage));
    return m;
}

StagedElement apply_staged_map(const StagedMap& m, const StagedElement& x) {
    if (!(*m.source == x.ring()))
        fail("MixedRings", "element does not belong to the map's source ring");
    if (!(m.source->coeff == m.target->coeff))
        fail("MixedRings", "source and target have different coefficient rings");
    if (static_cast<int>(m.images.size()) != m.source->h - 1)
        fail("BadInput", "map needs one image per generator");
    StagedRing T(m.target->coeff, m.target->h, m.target->heights, m.target->prof);
    auto inv_of = [&](int g) {
        StagedElement base = (g == 0) ? T.p_elem(m.stage) : m.images[g - 1].promote(m.stage);
        try {
            return base.try_invert();
        } catch (const DomainError& err) {
            if (err.code() == "NotAUnit")
                fail("MapUndefined",
                     std::string("image of ") + (g == 0 ? "p" : "u" + std::to_string(g)) +
                         " is not invertible in the target: " + err.what());
            throw;
        }
    };
    StagedElement res = T.zero(m.stage);
    for (const auto& [e, c] : x.terms()) {
        StagedElement term = T.from_coeff(c, m.stage);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0)
                term = term * m.images[i].promote(m.stage).pow(static_cast<std::uint64_t>(e[i]));
        res = res + term;
    }
    for (int g = 0; g < m.source->h; ++g) {
        int d = x.dens()[g];
        if (d == 0) continue;
        StagedElement iv = inv_of(g);
        res = res * iv.pow(static_cast<std::uint64_t>(d));
    }
    return res;
}

} // namespace lt
