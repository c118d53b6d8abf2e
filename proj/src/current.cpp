#include "exdiff/current.hpp"

#include <algorithm>
#include <chrono>

namespace exdiff {

GaugeAlgebra GaugeAlgebra::none() { return GaugeAlgebra{}; }

GaugeAlgebra GaugeAlgebra::u1(int d) {
    GaugeAlgebra g;
    g.dim = d;
    g.name = "u1:" + std::to_string(d);
    g.f.assign(d, std::vector<std::vector<GR>>(d, std::vector<GR>(d)));
    return g;
}

GaugeAlgebra GaugeAlgebra::sl2() {
    GaugeAlgebra g;
    g.dim = 3;
    g.name = "sl2";
    g.f.assign(3, std::vector<std::vector<GR>>(3, std::vector<GR>(3)));
    // [J^a, J^b] = i eps^{abc} J^c
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                int eps = (a - b) * (b - c) * (c - a) / 2;  // Levi-Civita on {0,1,2}
                g.f[a][b][c] = GR(eps);
            }
    return g;
}

bool GaugeAlgebra::abelian() const {
    for (const auto& fa : f)
        for (const auto& fb : fa)
            for (const auto& fc : fb)
                if (!fc.is_zero()) return false;
    return true;
}

void GaugeAlgebra::validate() const {
    if (dim == 0) return;
    if (static_cast<int>(f.size()) != dim) throw ConfigError("structure constant table has wrong size");
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
                if (f[a][b][c] != -f[b][a][c]) throw ConfigError("structure constants not antisymmetric");
    // Jacobi: f^{ab}_e f^{ec}_d + f^{bc}_e f^{ea}_d + f^{ca}_e f^{eb}_d = 0
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
                for (int d = 0; d < dim; ++d) {
                    GR s;
                    for (int e = 0; e < dim; ++e)
                        s += f[a][b][e] * f[e][c][d] + f[b][c][e] * f[e][a][d] + f[c][a][e] * f[e][b][d];
                    if (!s.is_zero()) throw ConfigError("structure constants violate the Jacobi identity");
                }
    // invariance of the Killing form delta^{ab}: f^{ab}_c delta^{cd} totally antisymmetric
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int d = 0; d < dim; ++d)
                if (f[a][b][d] != -f[a][d][b]) throw ConfigError("Killing form is not invariant");
}

void CurrentParams::validate() const {
    gauge.validate();
    int d = gauge.dim;
    if (static_cast<int>(g.size()) > d || static_cast<int>(g_prime.size()) > d)
        throw ConfigError("more abelian charges than gauge generators");
    auto charge = [](const std::vector<GR>& v, int a) { return a < static_cast<int>(v.size()) ? v[a] : GR(); };
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            GR sg, sgp;
            for (int c2 = 0; c2 < d; ++c2) {
                sg += gauge.f[a][b][c2] * charge(g, c2);
                sgp += gauge.f[a][b][c2] * charge(g_prime, c2);
            }
            if (!sg.is_zero() || !sgp.is_zero())
                throw ConfigError("charges g, g' must satisfy f^{ab}_c g^c = f^{ab}_c g'^c = 0");
        }
}

std::string CurrentMode::str() const {
    switch (kind) {
        case CKind::L: return "L(" + std::to_string(freq) + ")";
        case CKind::T:
            return "T[" + std::to_string(i1) + "," + std::to_string(i2) + "](" + std::to_string(freq) + ")";
        default: return "J" + std::to_string(i1) + "(" + std::to_string(freq) + ")";
    }
}

void ModeSum::add(const CurrentMode& m, const GR& c) {
    if (c.is_zero()) return;
    auto key = m.packed();
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms.emplace(key, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

ModeSum& ModeSum::operator+=(const ModeSum& o) {
    for (const auto& [k, c] : o.terms) add(CurrentMode::unpack(k), c);
    central += o.central;
    return *this;
}

std::string ModeSum::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (const auto& [k, c] : terms) {
        if (!s.empty()) s += " + ";
        s += "(" + c.str() + ")*" + CurrentMode::unpack(k).str();
    }
    if (!central.is_zero()) {
        if (!s.empty()) s += " + ";
        s += "(" + central.str() + ")";
    }
    return s;
}

namespace {

void check_mode(const CurrentMode& x, const CurrentParams& p) {
    switch (x.kind) {
        case CKind::L: break;
        case CKind::T:
            if (x.i1 < 0 || x.i1 >= p.N || x.i2 < 0 || x.i2 >= p.N)
                throw IndexRange("gl(N) mode index out of range");
            break;
        case CKind::J:
            if (x.i1 < 1 || x.i1 > p.gauge.dim) throw IndexRange("gauge mode index out of range");
            break;
    }
}

GR charge(const std::vector<GR>& v, int a1) {  // a1 is 1-based
    return a1 - 1 < static_cast<int>(v.size()) ? v[a1 - 1] : GR();
}

}  // namespace

ModeSum current_bracket(const CurrentMode& x, const CurrentMode& y, const CurrentParams& p) {
    check_mode(x, p);
    check_mode(y, p);
    ModeSum r;
    long m = x.freq, n = y.freq;
    if (x.kind == CKind::L && y.kind == CKind::L) {
        r.add(LMode(m + n), GR(m - n));
        if (m + n == 0) r.add_central(p.c * GR(m * m * m - m, 12));
        return r;
    }
    if (x.kind == CKind::L && y.kind == CKind::T) {
        r.add(TMode(y.i1, y.i2, m + n), GR(-n));
        if (m + n == 0 && y.i1 == y.i2) r.add_central(p.k0 * GR(m * m, 2));
        return r;
    }
    if (x.kind == CKind::L && y.kind == CKind::J) {
        r.add(JMode(y.i1, m + n), GR(-n));
        if (m + n == 0) r.add_central(charge(p.g, y.i1) * GR(m * m));
        return r;
    }
    if (x.kind == CKind::T && y.kind == CKind::T) {
        int mu = x.i1, nu = x.i2, sig = y.i1, tau = y.i2;
        if (sig == nu) r.add(TMode(mu, tau, m + n), GR::one());
        if (mu == tau) r.add(TMode(sig, nu, m + n), -GR::one());
        if (m + n == 0) {
            GR cen;
            if (mu == tau && sig == nu) cen += p.k1;
            if (mu == nu && sig == tau) cen += p.k2;
            cen.scale_int(-m);
            r.add_central(cen);
        }
        return r;
    }
    if (x.kind == CKind::T && y.kind == CKind::J) {
        if (m + n == 0 && x.i1 == x.i2) r.add_central(charge(p.g_prime, y.i1) * GR(m));
        return r;
    }
    if (x.kind == CKind::J && y.kind == CKind::J) {
        int a = x.i1, b = y.i1;
        for (int c2 = 1; c2 <= p.gauge.dim; ++c2) {
            GR fc = p.gauge.f[a - 1][b - 1][c2 - 1];
            if (!fc.is_zero()) r.add(JMode(c2, m + n), fc * GR::i());
        }
        if (m + n == 0 && a == b) r.add_central(p.level * GR(m));
        return r;
    }
    // remaining kind orders by antisymmetry
    ModeSum s = current_bracket(y, x, p);
    ModeSum out;
    for (const auto& [k, c] : s.terms) out.add(CurrentMode::unpack(k), -c);
    out.central = -s.central;
    return out;
}

void HighestWeight::validate(const CurrentParams& p) const {
    if (static_cast<int>(mu.size()) > p.gauge.dim) throw ConfigError("more character values than gauge generators");
    for (int a = 0; a < p.gauge.dim; ++a)
        for (int b = 0; b < p.gauge.dim; ++b) {
            GR s;
            for (int c2 = 0; c2 < p.gauge.dim; ++c2)
                s += p.gauge.f[a][b][c2] * (c2 < static_cast<int>(mu.size()) ? mu[c2] : GR());
            if (!s.is_zero()) throw ConfigError("gauge character must vanish on the derived algebra");
        }
}

int PBWMonomial::degree() const {
    int d = 0;
    for (auto p : modes) d -= CurrentMode::unpack(p).freq;
    return d;
}

std::string PBWMonomial::str() const {
    if (modes.empty()) return "v";
    std::string s;
    for (auto p : modes) s += CurrentMode::unpack(p).str() + "*";
    return s + "v";
}

void InducedState::add(const PBWMonomial& m, const GR& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

InducedState& InducedState::operator+=(const InducedState& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

InducedState& InducedState::operator-=(const InducedState& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

InducedState InducedState::scaled(const GR& c) const {
    InducedState r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

int InducedState::max_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

std::string InducedState::str() const {
    if (terms_.empty()) return "0";
    std::vector<const PBWMonomial*> keys;
    for (const auto& [m, c] : terms_) keys.push_back(&m);
    std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
    std::string s;
    for (auto* k : keys) {
        if (!s.empty()) s += " + ";
        s += "(" + terms_.at(*k).str() + ")*" + k->str();
    }
    return s;
}

InducedModule::InducedModule(CurrentParams p, HighestWeight hw, long max_steps)
    : p_(std::move(p)), hw_(std::move(hw)), max_steps_(max_steps) {
    p_.validate();
    hw_.validate(p_);
}

InducedModule InducedModule::trivial_module(int N) {
    InducedModule m(CurrentParams::trivial(N), HighestWeight::trivial());
    m.trivial_ = true;
    return m;
}

GR InducedModule::character(const CurrentMode& x) const {
    switch (x.kind) {
        case CKind::L: return hw_.h;
        case CKind::T: return x.i1 == x.i2 ? hw_.lambda : GR();
        default: return x.i1 - 1 < static_cast<int>(hw_.mu.size()) ? hw_.mu[x.i1 - 1] : GR();
    }
}

const InducedState& InducedModule::monomial_image(const CurrentMode& x, const PBWMonomial& mon) const {
    Key key{x.packed(), mon};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    if (++steps_ > max_steps_) throw CapOverflow("PBW rewriting step cap exceeded");

    InducedState result;
    if (trivial_) {
        auto [pos0, ins0] = memo_.emplace(std::move(key), std::move(result));
        return pos0->second;
    }
    if (mon.modes.empty()) {
        if (x.freq < 0) {
            PBWMonomial m;
            m.modes.push_back(x.packed());
            result.add(m, GR::one());
        } else if (x.freq == 0) {
            result.add(PBWMonomial::hw(), character(x));
        }
        // positive frequencies annihilate the highest weight
    } else if (x.freq < 0 && x.packed() >= mon.modes.front()) {
        PBWMonomial m;
        m.modes.reserve(mon.modes.size() + 1);
        m.modes.push_back(x.packed());
        for (auto p : mon.modes) m.modes.push_back(p);
        result.add(m, GR::one());
    } else {
        CurrentMode head = CurrentMode::unpack(mon.modes.front());
        PBWMonomial tail;
        tail.modes.assign(mon.modes.begin() + 1, mon.modes.end());
        // x h = h x + [x, h]
        InducedState xt = monomial_image(x, tail);
        result = apply(head, xt);
        ModeSum br = current_bracket(x, head, p_);
        for (const auto& [k, c] : br.terms) {
            const InducedState& zi = monomial_image(CurrentMode::unpack(k), tail);
            for (const auto& [m2, c2] : zi.terms()) result.add(m2, c * c2);
        }
        if (!br.central.is_zero()) result.add(tail, br.central);
    }
    auto [pos, inserted] = memo_.emplace(std::move(key), std::move(result));
    return pos->second;
}

void InducedModule::apply_to_monomial(const CurrentMode& x, const PBWMonomial& mon, const GR& coeff,
                                      InducedState& out) const {
    const InducedState& img = monomial_image(x, mon);
    for (const auto& [m, c] : img.terms()) out.add(m, coeff * c);
}

InducedState InducedModule::apply(const CurrentMode& x, const InducedState& v) const {
    InducedState out;
    for (const auto& [mon, c] : v.terms()) apply_to_monomial(x, mon, c, out);
    return out;
}

std::vector<PBWMonomial> pbw_basis(const CurrentParams& p, int D, int W) {
    if (D < 0 || W < 0) throw ConfigError("pbw_basis bounds must be >= 0");
    std::vector<CurrentMode> alphabet;
    for (int n = 1; n <= D; ++n) alphabet.push_back(LMode(-n));
    for (int mu = 0; mu < p.N; ++mu)
        for (int nu = 0; nu < p.N; ++nu)
            for (int n = 1; n <= D; ++n) alphabet.push_back(TMode(mu, nu, -n));
    for (int a = 1; a <= p.gauge.dim; ++a)
        for (int n = 1; n <= D; ++n) alphabet.push_back(JMode(a, -n));
    std::sort(alphabet.begin(), alphabet.end(),
              [](const CurrentMode& a, const CurrentMode& b) { return a.packed() < b.packed(); });

    std::vector<PBWMonomial> all;
    std::vector<std::int32_t> cur;
    std::vector<PBWMonomial> level;
    auto rec = [&](auto&& self, size_t start, int width_left, int deg_left) -> void {
        if (width_left == 0) {
            PBWMonomial m;
            m.modes = cur;
            std::sort(m.modes.begin(), m.modes.end(), std::greater<>());
            level.push_back(std::move(m));
            return;
        }
        for (size_t k = start; k < alphabet.size(); ++k) {
            int d = -alphabet[k].freq;
            if (d > deg_left) continue;
            cur.push_back(alphabet[k].packed());
            self(self, k, width_left - 1, deg_left - d);
            cur.pop_back();
        }
    };
    for (int w = 0; w <= W; ++w) {
        level.clear();
        rec(rec, 0, w, D);
        std::sort(level.begin(), level.end());
        for (auto& m : level) all.push_back(std::move(m));
    }
    return all;
}

Report verify_current_jacobi(const CurrentParams& p, int window) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.check = "current-jacobi";
    rep.params["N"] = std::to_string(p.N);
    rep.params["window"] = std::to_string(window);
    rep.params["c"] = p.c.str();
    rep.params["k0"] = p.k0.str();
    rep.params["k1"] = p.k1.str();
    rep.params["k2"] = p.k2.str();
    rep.params["gauge"] = p.gauge.name;

    std::vector<CurrentMode> modes;
    for (int m = -window; m <= window; ++m) {
        modes.push_back(LMode(m));
        for (int mu = 0; mu < p.N; ++mu)
            for (int nu = 0; nu < p.N; ++nu) modes.push_back(TMode(mu, nu, m));
        for (int a = 1; a <= p.gauge.dim; ++a) modes.push_back(JMode(a, m));
    }

    auto bracket_sum = [&](const ModeSum& s, const CurrentMode& z) {
        ModeSum out;
        for (const auto& [k, c] : s.terms) {
            ModeSum b = current_bracket(CurrentMode::unpack(k), z, p);
            for (const auto& [k2, c2] : b.terms) out.add(CurrentMode::unpack(k2), c * c2);
            out.add_central(c * b.central);
        }
        return out;
    };

    for (const auto& x : modes)
        for (const auto& y : modes)
            for (const auto& z : modes) {
                ModeSum d = bracket_sum(current_bracket(x, y, p), z);
                d += bracket_sum(current_bracket(y, z, p), x);
                d += bracket_sum(current_bracket(z, x, p), y);
                ++rep.probes;
                if (!d.is_zero()) {
                    rep.fail(Counterexample{"(" + x.str() + ", " + y.str() + ", " + z.str() + ")", "",
                                            "cyclic bracket sum", "0", d.str()});
                }
            }
    rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                     .count();
    return rep;
}

}  // namespace exdiff
