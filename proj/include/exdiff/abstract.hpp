#pragma once

#include "exdiff/current.hpp"
#include "exdiff/report.hpp"
#include "exdiff/scalar.hpp"
#include "exdiff/spacetime.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace exdiff {

/// Parameters of the extended bracket: four cocycle coefficients, three
/// coboundary coefficients, the gauge level and abelian charges.
struct ExtensionParams {
    int N = 2;
    GR c1, c2, c3, c4;
    GR a1, a2, a3;
    GaugeAlgebra gauge;
    GR level;                 // k
    std::vector<GR> g;        // g^a
    std::vector<GR> g_prime;  // g'^a
};

/// Reduced S/R data.  The S sector is stored as a table tau -> function
/// where tau is a sorted multiset of spatial indices and the table entry
/// multiplies the single monomial prod_{j in tau} qdot^j; index value 0 is
/// already stripped (qdot^0 = 1) and R entries with distinguished index 0
/// are dropped (qddot^0 = 0).  The R sector is keyed by (rho, tau).
struct SRTables {
    using SKey = std::vector<int>;
    using RKey = std::pair<int, std::vector<int>>;
    std::map<SKey, SpacetimeFunction> V;
    std::map<RKey, SpacetimeFunction> W;

    bool is_zero() const { return V.empty() && W.empty(); }
    /// Adds fn at the ordered index tuple (values 0..N-1); zeros stripped.
    void add_S(std::vector<int> tuple, const SpacetimeFunction& fn);
    /// Adds fn at (rho | tuple); rho = 0 is dropped, tuple zeros stripped.
    void add_R(int rho, std::vector<int> tuple, const SpacetimeFunction& fn);
    SRTables& operator+=(const SRTables& o);
    SRTables scaled(const GR& c) const;
    void prune();
};

/// Formal combination of the generators: Lsym(xi), the S/R sector in
/// reduced form, Jsym(X), Csym(j) and a central scalar.
struct AbstractElement {
    int N = 0;
    VectorField L;                                     // Lsym part
    std::vector<SpacetimeFunction> Jp;                 // Jsym: one function per gauge generator
    std::map<std::pair<int, int>, SpacetimeFunction> C;  // Csym: key (nu < rho)
    SRTables sr;
    GR scalar;

    static AbstractElement zero(int N);
    static AbstractElement from_L(const VectorField& xi);
    static AbstractElement from_S(const SymTensorArg& g);
    static AbstractElement from_R(const MixedTensorArg& h);
    static AbstractElement from_J(int N, std::vector<SpacetimeFunction> X);
    /// Csym from a general two-index argument; only the antisymmetric part
    /// survives.
    static AbstractElement from_C(int N, const std::function<SpacetimeFunction(int, int)>& j);
    static AbstractElement from_scalar(int N, const GR& c);

    AbstractElement& operator+=(const AbstractElement& o);
    AbstractElement& operator-=(const AbstractElement& o);
    AbstractElement scaled(const GR& c) const;

    bool is_zero() const;
    std::string str() const;
};

/// Deterministic normal form modulo the relation ideal (exact per-sector
/// Gaussian reduction; time-only rank-0 entries evaluate to scalars).
AbstractElement canonicalize(const AbstractElement& x);

/// Are x and y equal modulo the relation ideal?
bool abstract_equal(const AbstractElement& x, const AbstractElement& y);

/// Bilinear extension of the generator brackets, canonicalized.
AbstractElement abstract_bracket(const AbstractElement& x, const AbstractElement& y,
                                 const ExtensionParams& p);

/// Canonicalized cyclic sum [[x,y],z] + [[y,z],x] + [[z,x],y].
AbstractElement jacobi_defect(const AbstractElement& x, const AbstractElement& y,
                              const AbstractElement& z, const ExtensionParams& p);

// ---------------------------------------------------------------------------
// Cocycle tables shared between the abstract bracket, the coefficient fit
// and the realized-extension checks.  ext(xi,eta) = sum_p coeff_p K_p with
//   K1 = S_1^rho(d_rho d_nu xi^mu d_mu eta^nu)                       (c1)
//   K2 = S_1^rho(d_rho d_mu xi^mu d_nu eta^nu)                       (c2)
//   K3 = R_1^{mu|nu}(d_mu xi^0 d_nu eta^0)
//        + S_3^{mu nu rho}(d_rho d_mu xi^0 d_nu eta^0)               (c3)
//   K4 = (1/2) S_2^{rho sig}(d_rho eta^0 d_sig d_mu xi^mu
//                            - d_rho xi^0 d_sig d_nu eta^nu)         (c4)
//   K5 = S_2^{rho sig}(d_rho d_sig xi^mu d_mu eta^0
//                      - d_rho d_sig eta^nu d_nu xi^0)
//        - S_3^{rho mu nu}(d_rho d_mu xi^0 d_nu eta^0
//                          - d_rho d_nu eta^0 d_mu xi^0)             (a1)
//   K6 = -S_1^rho(d_rho xi^0 eta^0)                                  (a2)
//   K7 = S_1^rho(d_rho eta^0 d_mu xi^mu - d_rho xi^0 d_nu eta^nu)    (a3)

constexpr int kNumCocycles = 7;
extern const char* const kCocycleNames[kNumCocycles];

SRTables cocycle_term(int which, const VectorField& xi, const VectorField& eta);
SRTables ext_tables(const VectorField& xi, const VectorField& eta, const ExtensionParams& p);

/// The transform of one reduced S entry under [Lsym(xi), .] from the action
/// bracket on S_n, expressed on reduced tables.
SRTables transform_S_entry(const VectorField& xi, const SRTables::SKey& tau, const SpacetimeFunction& g);
/// Likewise for one reduced R entry.
SRTables transform_R_entry(const VectorField& xi, const SRTables::RKey& key, const SpacetimeFunction& h);

// ---------------------------------------------------------------------------
// Whole-check operations on the abstract side.

/// Confirms on probe pairs that the redefined generators
/// L'_xi = L_xi + a1 S_2(d d xi^0) + (a2/2) S_0(xi^0) + a3 S_0(d_mu xi^mu)
/// obey the bracket with a1 = a2 = a3 = 0 and unchanged c1..c4.
Report eliminate_trivial(const ExtensionParams& p, const std::vector<VectorField>& probes);

/// Checks the exact one-chain substitution S_1^rho(g) := C^{nu rho}(d_nu g):
/// (i) S_1(df) = 0 by antisymmetry, (ii) the induced transformation matches
/// the rank-one action bracket on probe pairs.
Report exact_chain_check(int N, const std::vector<VectorField>& field_probes,
                         const std::vector<std::vector<SpacetimeFunction>>& oneform_probes);

}  // namespace exdiff
