#pragma once

#include "exdiff/report.hpp"
#include "exdiff/scalar.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace exdiff {

// Rescaled current modes
// ----------------------
// The smeared generators L(s), T^mu_nu(s), J^a(s) satisfy distributional
// brackets with central terms proportional to derivatives of delta(s-t).
// Expanding L(t) = sum Lhat(m) e^{imt} (and likewise T, J) and rescaling
//     LL_m = -2*pi*i * Lhat(m),   TT_m = 2*pi * That(m),   JJ_m = 2*pi * Jhat(m)
// removes every factor of pi and yields the Gaussian-rational mode algebra
//     [LL_m, LL_n] = (m-n) LL_{m+n} + (c/12)(m^3-m) delta_{m+n,0}
//     [LL_m, TT^mu_{nu,n}] = -n TT^mu_{nu,m+n} + (k0/2) m^2 d^mu_nu delta_{m+n,0}
//     [TT^mu_{nu,m}, TT^sig_{tau,n}] = d^sig_nu TT^mu_{tau,m+n} - d^mu_tau TT^sig_{nu,m+n}
//                                      - m (k1 d^mu_tau d^sig_nu + k2 d^mu_nu d^sig_tau) delta_{m+n,0}
//     [JJ^a_m, JJ^b_n] = i f^{ab}_c JJ^c_{m+n} + k m d^{ab} delta_{m+n,0}
//     [TT^mu_{nu,m}, JJ^a_n] = g'^a m d^mu_nu delta_{m+n,0}
//     [LL_m, JJ^a_n] = -n JJ^a_{m+n} + g^a m^2 delta_{m+n,0}
// (full derivation in docs/conventions.md).  Highest-weight modules take
// negative modes as creators; positive modes annihilate the highest-weight
// vector and zero modes act through the character (h, lambda, mu_a).

struct GaugeAlgebra {
    int dim = 0;
    std::string name = "none";
    // f[a][b][c] with [J^a, J^b] = i f^{ab}_c J^c; Killing form = identity
    std::vector<std::vector<std::vector<GR>>> f;

    static GaugeAlgebra none();
    static GaugeAlgebra u1(int d);
    static GaugeAlgebra sl2();

    bool abelian() const;
    /// Checks antisymmetry, the Jacobi identity and invariance of the
    /// Killing form; throws ConfigError on violation.
    void validate() const;
};

struct CurrentParams {
    int N = 2;
    GR c, k0, k1, k2;
    GaugeAlgebra gauge;
    GR level;                 // k
    std::vector<GR> g;        // g^a, one per generator
    std::vector<GR> g_prime;  // g'^a

    static CurrentParams trivial(int N) {
        CurrentParams p;
        p.N = N;
        p.gauge = GaugeAlgebra::none();
        return p;
    }
    /// Checks f^{ab}_c g^c = f^{ab}_c g'^c = 0 and the gauge algebra itself.
    void validate() const;
};

enum class CKind : std::uint8_t { L = 0, T = 1, J = 2 };

/// One rescaled current mode LL_m, TT^mu_{nu,m} or JJ^a_m.
struct CurrentMode {
    CKind kind;
    int i1 = 0;  // T: mu, J: a (1-based)
    int i2 = 0;  // T: nu
    int freq = 0;

    // PBW contract: sort by kind (L < T < J), then indices, then frequency.
    std::int32_t packed() const {
        return (static_cast<std::int32_t>(kind) << 28) | (i1 << 20) | (i2 << 12) |
               static_cast<std::int32_t>(static_cast<std::uint16_t>(freq + 2048) & 0xfff);
    }
    static CurrentMode unpack(std::int32_t p) {
        CurrentMode m;
        m.kind = static_cast<CKind>((p >> 28) & 0x3);
        m.i1 = (p >> 20) & 0xff;
        m.i2 = (p >> 12) & 0xff;
        m.freq = static_cast<int>(p & 0xfff) - 2048;
        return m;
    }
    std::string str() const;
    friend bool operator==(const CurrentMode&, const CurrentMode&) = default;
};

inline CurrentMode LMode(int m) { return CurrentMode{CKind::L, 0, 0, m}; }
inline CurrentMode TMode(int mu, int nu, int m) { return CurrentMode{CKind::T, mu, nu, m}; }
inline CurrentMode JMode(int a, int m) { return CurrentMode{CKind::J, a, 0, m}; }

/// Finite combination of current modes plus a central scalar.
struct ModeSum {
    std::map<std::int32_t, GR> terms;  // packed mode -> coefficient
    GR central;

    bool is_zero() const { return terms.empty() && central.is_zero(); }
    void add(const CurrentMode& m, const GR& c);
    void add_central(const GR& c) { central += c; }
    ModeSum& operator+=(const ModeSum& o);
    std::string str() const;
};

/// Mode-level bracket [x, y] with the central parameters of p substituted.
ModeSum current_bracket(const CurrentMode& x, const CurrentMode& y, const CurrentParams& p);

/// h: LL_0 eigenvalue; lambda: TT_0 acts as lambda*delta^mu_nu; mu_a: gauge
/// character (must kill the derived algebra: f^{ab}_c mu_c = 0).
struct HighestWeight {
    GR h;
    GR lambda;
    std::vector<GR> mu;

    static HighestWeight trivial() { return HighestWeight{}; }
    void validate(const CurrentParams& p) const;
};

/// PBW monomial: non-increasing (in packed order) sequence of creator
/// (negative-frequency) modes.
struct PBWMonomial {
    std::vector<std::int32_t> modes;

    static PBWMonomial hw() { return {}; }
    int width() const { return static_cast<int>(modes.size()); }
    /// Degree = minus the sum of the mode frequencies (>= 0 on creators).
    int degree() const;
    std::string str() const;  // "L(-2)*T[0,1](-1)*v", highest weight is "v"
    friend bool operator==(const PBWMonomial&, const PBWMonomial&) = default;
    friend auto operator<=>(const PBWMonomial&, const PBWMonomial&) = default;
};

struct PBWMonomialHash {
    std::size_t operator()(const PBWMonomial& m) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int32_t x : m.modes) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

class InducedState {
  public:
    using Map = std::unordered_map<PBWMonomial, GR, PBWMonomialHash>;

    InducedState() = default;
    static InducedState highest_weight() {
        InducedState v;
        v.add(PBWMonomial::hw(), GR::one());
        return v;
    }
    static InducedState single(const PBWMonomial& m) {
        InducedState v;
        v.add(m, GR::one());
        return v;
    }

    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }
    void add(const PBWMonomial& m, const GR& c);
    InducedState& operator+=(const InducedState& o);
    InducedState& operator-=(const InducedState& o);
    InducedState scaled(const GR& c) const;
    friend bool operator==(const InducedState& a, const InducedState& b) { return a.terms_ == b.terms_; }
    int max_degree() const;
    std::string str() const;

  private:
    Map terms_;
};

/// Character-induced highest-weight module of the mode current algebra with
/// memoized PBW rewriting.
class InducedModule {
  public:
    InducedModule(CurrentParams p, HighestWeight hw, long max_steps = 50'000'000);

    /// The distinguished one-dimensional module on which every current mode
    /// acts as zero (all parameters zero).
    static InducedModule trivial_module(int N);
    bool is_trivial() const { return trivial_; }

    const CurrentParams& params() const { return p_; }
    const HighestWeight& weight() const { return hw_; }

    /// PBW rewriting: commutes x rightward until it reaches the highest
    /// weight vector, where negative frequencies annihilate and zero modes
    /// act by the character.
    InducedState apply(const CurrentMode& x, const InducedState& v) const;
    void apply_to_monomial(const CurrentMode& x, const PBWMonomial& mon, const GR& coeff,
                           InducedState& out) const;

  private:
    const InducedState& monomial_image(const CurrentMode& x, const PBWMonomial& mon) const;
    GR character(const CurrentMode& x) const;

    CurrentParams p_;
    HighestWeight hw_;
    bool trivial_ = false;
    long max_steps_;
    mutable long steps_ = 0;
    struct Key {
        std::int32_t mode;
        PBWMonomial mon;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return PBWMonomialHash{}(k.mon) * 31 + static_cast<std::size_t>(static_cast<std::uint32_t>(k.mode));
        }
    };
    mutable std::unordered_map<Key, InducedState, KeyHash> memo_;
};

/// All PBW monomials with degree <= D and at most W factors over the modes
/// of p, enumerated by width, then lexicographically.
std::vector<PBWMonomial> pbw_basis(const CurrentParams& p, int D, int W);

/// Exact Jacobi identity of current_bracket on all mode triples with
/// |frequency| <= window.
Report verify_current_jacobi(const CurrentParams& p, int window);

}  // namespace exdiff
