#pragma once

#include "exdiff/scalar.hpp"
#include "exdiff/spacetime.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

namespace exdiff {

// Mode conventions
// ----------------
// The circle fields are expanded as
//     q^i(t) = sum_n qhat^i(n) e^{-int},
//     p_j(t) = (1/2pi) sum_n P_j(n) e^{-int},      P_j(n) = 2pi phat_j(n),
// so that [p_j(s), q^i(t)] = delta^i_j delta(s-t) becomes
//     [P_j(m), qhat^i(n)] = delta^i_j delta_{m+n,0},
// with all other mode brackets zero.  Creators are qhat^i(n >= 0) and
// P_j(n > 0); the orientation of the expansion is fixed by requiring the
// grading Hamiltonian to satisfy [H, qhat^i(n)] = +n qhat^i(n), i.e. to be
// bounded below on the module (see docs/conventions.md for the derivation).
// Normal ordering puts the non-positive p-modes to the right:
//     :F p_j: = F p_j^{<=} + p_j^{>} F.

enum class ModeKind : std::uint8_t { Q = 0, P = 1 };

struct Mode {
    ModeKind kind;
    int index;  // spatial index 1..N-1
    int freq;

    bool creator() const { return kind == ModeKind::Q ? freq >= 0 : freq > 0; }
    std::int32_t packed() const {
        return (static_cast<std::int32_t>(kind) << 24) | (index << 16) |
               static_cast<std::int32_t>(static_cast<std::uint16_t>(freq + 32768));
    }
    static Mode unpack(std::int32_t p) {
        return Mode{static_cast<ModeKind>((p >> 24) & 0xff), (p >> 16) & 0xff,
                    static_cast<int>((p & 0xffff)) - 32768};
    }
    friend bool operator==(const Mode& a, const Mode& b) {
        return a.kind == b.kind && a.index == b.index && a.freq == b.freq;
    }
    std::string str() const;
};

inline Mode Q(int index, int freq) { return Mode{ModeKind::Q, index, freq}; }
inline Mode P(int index, int freq) { return Mode{ModeKind::P, index, freq}; }

/// [a, b] as a scalar: delta^i_j delta_{m+n,0} for (P_j(m), qhat^i(n)),
/// minus that for (Q, P) order, zero otherwise.
GR mode_commutator(const Mode& a, const Mode& b);

/// Sorted multiset of creator modes; canonical order (kind, index, freq).
struct CreatorMonomial {
    std::vector<std::int32_t> modes;  // packed, ascending

    static CreatorMonomial vacuum() { return {}; }
    int width() const { return static_cast<int>(modes.size()); }
    int degree() const;
    int max_q_freq() const;  // largest frequency among Q creators (0 if none)
    int max_p_freq() const;  // largest frequency among P creators (0 if none)
    void insert(const Mode& m);
    /// Number of occurrences of m.
    int count(const Mode& m) const;
    /// Removes one occurrence (must be present).
    void remove_one(const Mode& m);
    std::string str() const;  // "q1(0)*q1(2)*P1(3)", vacuum is "1"

    friend bool operator==(const CreatorMonomial&, const CreatorMonomial&) = default;
    friend auto operator<=>(const CreatorMonomial&, const CreatorMonomial&) = default;
};

struct CreatorMonomialHash {
    std::size_t operator()(const CreatorMonomial& m) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int32_t x : m.modes) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Finite Gaussian-rational combination of creator monomials over the vacuum.
class FockState {
  public:
    using Map = std::unordered_map<CreatorMonomial, GR, CreatorMonomialHash>;

    FockState() = default;
    static FockState vacuum() {
        FockState v;
        v.add(CreatorMonomial::vacuum(), GR::one());
        return v;
    }
    static FockState single(const CreatorMonomial& m) {
        FockState v;
        v.add(m, GR::one());
        return v;
    }

    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }
    void add(const CreatorMonomial& m, const GR& c);
    FockState& operator+=(const FockState& o);
    FockState& operator-=(const FockState& o);
    FockState scaled(const GR& c) const;
    friend bool operator==(const FockState& a, const FockState& b) { return a.terms_ == b.terms_; }

    int max_degree() const;
    std::string str() const;

  private:
    Map terms_;
};

/// Action of a single mode: creators prepend; annihilators contract against
/// paired creators via mode_commutator and kill the vacuum remainder.
FockState apply_mode(const Mode& m, const FockState& v);
/// Same on one monomial, accumulating coeff * (m . mon) into out.
void apply_mode_to_monomial(const Mode& m, const CreatorMonomial& mon, const GR& coeff, FockState& out);

/// Splits v into homogeneous components by monomial degree.
std::map<int, FockState> grade(const FockState& v);

/// All canonical monomials with degree <= D and at most W factors,
/// enumerated by width, then lexicographically.
std::vector<CreatorMonomial> fock_basis(int N, int D, int W);

// ---------------------------------------------------------------------------
// Loop descriptors: finite polynomials in q^j(t), qdot^j(t), qddot^j(t) times
// a phase e^{i m t}, used as evaluation data for realized operators.

enum class Jet : std::uint8_t { Val = 0, Dot = 1, DDot = 2 };

struct LoopFactor {
    Jet jet;
    int index;  // 1..N-1
    friend auto operator<=>(const LoopFactor&, const LoopFactor&) = default;
};

struct LoopTerm {
    GR coeff;
    int phase = 0;  // e^{i m x^0} part evaluated at x^0 = t
    std::vector<LoopFactor> factors;
};

struct LoopPoly {
    int N = 0;
    std::vector<LoopTerm> terms;

    bool is_zero() const { return terms.empty(); }
    int max_abs_phase() const;
    /// f(q(t)) for a spacetime function f.
    static LoopPoly of_function(const SpacetimeFunction& f);
    /// Multiplies by a single jet factor.
    LoopPoly times_factor(Jet jet, int index) const;
    LoopPoly scaled(const GR& c) const;
    LoopPoly& operator+=(const LoopPoly& o);
};

/// Runtime evaluation limits; exceeding the degree cap is an error, never a
/// silent truncation.
struct EvalLimits {
    int degree_cap = 64;
};

/// Applies the frequency-zero Fourier component of :F(t) p_j(t): to one
/// monomial and accumulates into out (Eq-level contract of normal_apply).
void apply_normal_term(const LoopTerm& term, int j, const CreatorMonomial& mon, const GR& coeff,
                       FockState& out, const EvalLimits& lim);

/// Convenience wrapper over whole states: the zero-frequency part of
/// :F p_j: applied to v.
FockState normal_apply(const LoopPoly& f, int j, const FockState& v, const EvalLimits& lim);

/// Applies the frequency-zero Fourier component of the pure-q loop term
/// (no p factor) to one monomial; used by the multiplication operators.
void apply_scalar_term(const LoopTerm& term, const CreatorMonomial& mon, const GR& coeff,
                       FockState& out, const EvalLimits& lim);

/// Enumerates the Fourier pairing of a pure-q loop term with an external
/// mode of frequency b carrying e^{+ibt} (current coupling): calls
/// cb(b, contribution) for every b with b <= max_b that yields a nonzero
/// Fock contribution on mon.
void apply_coupling_term(const LoopTerm& term, const CreatorMonomial& mon, const GR& coeff, int max_b,
                         const EvalLimits& lim, std::map<int, FockState>& out_by_b);

}  // namespace exdiff
