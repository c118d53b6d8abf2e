#include "exdiff/fock.hpp"

#include <algorithm>
#include <optional>

namespace exdiff {

std::string Mode::str() const {
    std::string s = kind == ModeKind::Q ? "q" : "P";
    s += std::to_string(index);
    s += "(" + std::to_string(freq) + ")";
    return s;
}

GR mode_commutator(const Mode& a, const Mode& b) {
    if (a.kind == ModeKind::P && b.kind == ModeKind::Q) {
        if (a.index == b.index && a.freq + b.freq == 0) return GR::one();
        return GR::zero();
    }
    if (a.kind == ModeKind::Q && b.kind == ModeKind::P) {
        if (a.index == b.index && a.freq + b.freq == 0) return -GR::one();
        return GR::zero();
    }
    return GR::zero();
}

int CreatorMonomial::degree() const {
    int d = 0;
    for (auto p : modes) d += Mode::unpack(p).freq;
    return d;
}

int CreatorMonomial::max_q_freq() const {
    int f = 0;
    for (auto p : modes) {
        Mode m = Mode::unpack(p);
        if (m.kind == ModeKind::Q) f = std::max(f, m.freq);
    }
    return f;
}

int CreatorMonomial::max_p_freq() const {
    int f = 0;
    for (auto p : modes) {
        Mode m = Mode::unpack(p);
        if (m.kind == ModeKind::P) f = std::max(f, m.freq);
    }
    return f;
}

void CreatorMonomial::insert(const Mode& m) {
    std::int32_t p = m.packed();
    modes.insert(std::upper_bound(modes.begin(), modes.end(), p), p);
}

int CreatorMonomial::count(const Mode& m) const {
    std::int32_t p = m.packed();
    auto [lo, hi] = std::equal_range(modes.begin(), modes.end(), p);
    return static_cast<int>(hi - lo);
}

void CreatorMonomial::remove_one(const Mode& m) {
    auto it = std::lower_bound(modes.begin(), modes.end(), m.packed());
    modes.erase(it);
}

std::string CreatorMonomial::str() const {
    if (modes.empty()) return "1";
    std::string s;
    for (size_t i = 0; i < modes.size(); ++i) {
        if (i) s += "*";
        s += Mode::unpack(modes[i]).str();
    }
    return s;
}

void FockState::add(const CreatorMonomial& m, const GR& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

FockState& FockState::operator+=(const FockState& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

FockState& FockState::operator-=(const FockState& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

FockState FockState::scaled(const GR& c) const {
    FockState r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

int FockState::max_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

std::string FockState::str() const {
    if (terms_.empty()) return "0";
    // deterministic order for reports
    std::vector<const CreatorMonomial*> keys;
    for (const auto& [m, c] : terms_) keys.push_back(&m);
    std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
    std::string s;
    for (auto* k : keys) {
        if (!s.empty()) s += " + ";
        s += "(" + terms_.at(*k).str() + ")*" + k->str();
    }
    return s;
}

namespace {

// One mode applied to one monomial gives at most one monomial back.
// Returns false when the state is annihilated.
bool apply_mode_step(const Mode& m, CreatorMonomial& mon, GR& coeff) {
    if (m.creator()) {
        mon.insert(m);
        return true;
    }
    if (m.kind == ModeKind::P) {
        // P_j(n), n <= 0 contracts against qhat^j(-n) with coefficient +1 each.
        Mode partner = Q(m.index, -m.freq);
        int k = mon.count(partner);
        if (k == 0) return false;
        mon.remove_one(partner);
        coeff.scale_int(k);
        return true;
    }
    // qhat^i(n), n < 0 contracts against P_i(-n) with coefficient -1 each.
    Mode partner = P(m.index, -m.freq);
    int k = mon.count(partner);
    if (k == 0) return false;
    mon.remove_one(partner);
    coeff.scale_int(-k);
    return true;
}

GR i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return GR::one();
        case 1: return GR::i();
        case 2: return -GR::one();
        default: return -GR::i();
    }
}

// Mode assignment enumeration for the factors of one loop term.  Each factor
// gets a frequency r >= min_mode; the running sum is kept within
// [s_remaining*min_mode, sum_max] so every leaf has sum <= sum_max.  Jet
// weights are (1, -i r, -r^2); zero weights are skipped.
template <typename Leaf>
void enumerate(const std::vector<LoopFactor>& factors, size_t k, int min_mode, int sum_max, int partial,
               std::vector<Mode>& modes, long mag, int ipow, Leaf&& leaf) {
    if (k == factors.size()) {
        leaf(partial, modes, mag, ipow);
        return;
    }
    int remaining = static_cast<int>(factors.size() - k - 1);
    int hi = sum_max - partial - remaining * min_mode;
    const LoopFactor& f = factors[k];
    for (int r = min_mode; r <= hi; ++r) {
        long m2 = mag;
        int ip = ipow;
        switch (f.jet) {
            case Jet::Val: break;
            case Jet::Dot:
                if (r == 0) continue;  // weight -i r vanishes
                m2 *= r;
                ip += 3;  // -i = i^3
                break;
            case Jet::DDot:
                if (r == 0) continue;
                m2 *= -static_cast<long>(r) * r;
                break;
        }
        modes.push_back(Q(f.index, r));
        enumerate(factors, k + 1, min_mode, sum_max, partial + r, modes, m2, ip,
                  std::forward<Leaf>(leaf));
        modes.pop_back();
    }
}

void check_cap(const CreatorMonomial& m, const EvalLimits& lim) {
    if (m.degree() > lim.degree_cap)
        throw CapOverflow("intermediate Fock degree " + std::to_string(m.degree()) +
                          " exceeds configured cap " + std::to_string(lim.degree_cap));
}

// Applies the q-monomial (annihilators first, then creators) to (mon, coeff).
bool apply_q_modes(const std::vector<Mode>& modes, CreatorMonomial& mon, GR& coeff, const EvalLimits& lim) {
    for (const Mode& m : modes)
        if (!m.creator() && !apply_mode_step(m, mon, coeff)) return false;
    for (const Mode& m : modes)
        if (m.creator()) {
            apply_mode_step(m, mon, coeff);
            check_cap(mon, lim);
        }
    return true;
}

}  // namespace

void apply_mode_to_monomial(const Mode& m, const CreatorMonomial& mon, const GR& coeff, FockState& out) {
    CreatorMonomial r = mon;
    GR c = coeff;
    if (apply_mode_step(m, r, c)) out.add(r, c);
}

FockState apply_mode(const Mode& m, const FockState& v) {
    FockState out;
    for (const auto& [mon, c] : v.terms()) apply_mode_to_monomial(m, mon, c, out);
    return out;
}

std::map<int, FockState> grade(const FockState& v) {
    std::map<int, FockState> out;
    for (const auto& [m, c] : v.terms()) out[m.degree()].add(m, c);
    return out;
}

std::vector<CreatorMonomial> fock_basis(int N, int D, int W) {
    if (D < 0 || W < 0) throw ConfigError("fock_basis bounds must be >= 0");
    std::vector<Mode> alphabet;
    for (int i = 1; i <= N - 1; ++i)
        for (int n = 0; n <= D; ++n) alphabet.push_back(Q(i, n));
    for (int i = 1; i <= N - 1; ++i)
        for (int n = 1; n <= D; ++n) alphabet.push_back(P(i, n));
    std::sort(alphabet.begin(), alphabet.end(),
              [](const Mode& a, const Mode& b) { return a.packed() < b.packed(); });

    // enumerate by width so the output is ordered by (width, lex)
    std::vector<CreatorMonomial> all;
    std::vector<CreatorMonomial> level;
    CreatorMonomial cur;
    auto rec = [&](auto&& self, size_t start, int width_left, int deg_left) -> void {
        if (width_left == 0) {
            level.push_back(cur);
            return;
        }
        for (size_t k = start; k < alphabet.size(); ++k) {
            int f = alphabet[k].freq;
            if (f > deg_left) continue;
            cur.insert(alphabet[k]);
            self(self, k, width_left - 1, deg_left - f);
            cur.remove_one(alphabet[k]);
        }
    };
    for (int w = 0; w <= W; ++w) {
        level.clear();
        cur = CreatorMonomial::vacuum();
        rec(rec, 0, w, D);
        std::sort(level.begin(), level.end());
        for (auto& m : level) all.push_back(std::move(m));
    }
    return all;
}

int LoopPoly::max_abs_phase() const {
    int p = 0;
    for (const auto& t : terms) p = std::max(p, std::abs(t.phase));
    return p;
}

LoopPoly LoopPoly::of_function(const SpacetimeFunction& f) {
    LoopPoly out;
    out.N = f.dim();
    for (const auto& [k, c] : f.terms()) {
        LoopTerm t;
        t.coeff = c;
        t.phase = k.m;
        for (size_t j = 0; j < k.a.size(); ++j)
            for (int e = 0; e < k.a[j]; ++e) t.factors.push_back(LoopFactor{Jet::Val, static_cast<int>(j) + 1});
        out.terms.push_back(std::move(t));
    }
    return out;
}

LoopPoly LoopPoly::times_factor(Jet jet, int index) const {
    LoopPoly out;
    out.N = N;
    for (const auto& t : terms) {
        LoopTerm u = t;
        u.factors.push_back(LoopFactor{jet, index});
        out.terms.push_back(std::move(u));
    }
    return out;
}

LoopPoly LoopPoly::scaled(const GR& c) const {
    LoopPoly out;
    out.N = N;
    if (c.is_zero()) return out;
    for (const auto& t : terms) {
        LoopTerm u = t;
        u.coeff *= c;
        out.terms.push_back(std::move(u));
    }
    return out;
}

LoopPoly& LoopPoly::operator+=(const LoopPoly& o) {
    if (N == 0) N = o.N;
    for (const auto& t : o.terms) terms.push_back(t);
    return *this;
}

void apply_normal_term(const LoopTerm& term, int j, const CreatorMonomial& mon, const GR& coeff,
                       FockState& out, const EvalLimits& lim) {
    if (term.coeff.is_zero()) return;
    int min_mode = -mon.max_p_freq();
    // The p-mode is n = phase - sum; annihilating p-modes (n <= 0) need a
    // qhat(-n) partner, so sum <= phase + max_q_freq.
    int sum_max = term.phase + mon.max_q_freq();
    std::vector<Mode> modes;
    enumerate(term.factors, 0, min_mode, sum_max, 0, modes, 1, 0,
              [&](int sum, const std::vector<Mode>& q_modes, long mag, int ipow) {
                  int n = term.phase - sum;
                  GR c = coeff * term.coeff;
                  if (mag != 1) c.scale_int(mag);
                  if (ipow % 4) c *= i_power(ipow);
                  CreatorMonomial m = mon;
                  if (n <= 0) {
                      // :F p^{<=}: has the p-annihilator rightmost.
                      if (!apply_mode_step(P(j, n), m, c)) return;
                      if (!apply_q_modes(q_modes, m, c, lim)) return;
                  } else {
                      if (!apply_q_modes(q_modes, m, c, lim)) return;
                      apply_mode_step(P(j, n), m, c);
                      check_cap(m, lim);
                  }
                  out.add(m, c);
              });
}

FockState normal_apply(const LoopPoly& f, int j, const FockState& v, const EvalLimits& lim) {
    FockState out;
    for (const auto& [mon, c] : v.terms())
        for (const auto& term : f.terms) apply_normal_term(term, j, mon, c, out, lim);
    return out;
}

void apply_scalar_term(const LoopTerm& term, const CreatorMonomial& mon, const GR& coeff,
                       FockState& out, const EvalLimits& lim) {
    if (term.coeff.is_zero()) return;
    int min_mode = -mon.max_p_freq();
    // zero-frequency part: sum of factor modes must equal the phase
    int sum_max = term.phase;
    std::vector<Mode> modes;
    enumerate(term.factors, 0, min_mode, sum_max, 0, modes, 1, 0,
              [&](int sum, const std::vector<Mode>& q_modes, long mag, int ipow) {
                  if (sum != term.phase) return;
                  GR c = coeff * term.coeff;
                  if (mag != 1) c.scale_int(mag);
                  if (ipow % 4) c *= i_power(ipow);
                  CreatorMonomial m = mon;
                  if (!apply_q_modes(q_modes, m, c, lim)) return;
                  out.add(m, c);
              });
}

void apply_coupling_term(const LoopTerm& term, const CreatorMonomial& mon, const GR& coeff, int max_b,
                         const EvalLimits& lim, std::map<int, FockState>& out_by_b) {
    if (term.coeff.is_zero()) return;
    int min_mode = -mon.max_p_freq();
    // paired current mode: b = sum - phase, annihilation bound b <= max_b
    int sum_max = term.phase + max_b;
    std::vector<Mode> modes;
    enumerate(term.factors, 0, min_mode, sum_max, 0, modes, 1, 0,
              [&](int sum, const std::vector<Mode>& q_modes, long mag, int ipow) {
                  int b = sum - term.phase;
                  GR c = coeff * term.coeff;
                  if (mag != 1) c.scale_int(mag);
                  if (ipow % 4) c *= i_power(ipow);
                  CreatorMonomial m = mon;
                  if (!apply_q_modes(q_modes, m, c, lim)) return;
                  out_by_b[b].add(m, c);
              });
}

}  // namespace exdiff
