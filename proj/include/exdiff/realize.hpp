#pragma once

#include "exdiff/abstract.hpp"
#include "exdiff/current.hpp"
#include "exdiff/fock.hpp"
#include "exdiff/scalar.hpp"
#include "exdiff/spacetime.hpp"

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace exdiff {

struct TensorKey {
    CreatorMonomial fock;
    PBWMonomial ind;
    int total_degree() const { return fock.degree() + ind.degree(); }
    friend bool operator==(const TensorKey&, const TensorKey&) = default;
    std::string str() const {
        return fock.str() + (ind.modes.empty() ? std::string("|v") : "|" + ind.str());
    }
};

struct TensorKeyHash {
    std::size_t operator()(const TensorKey& k) const {
        return CreatorMonomialHash{}(k.fock) * 1000003 + PBWMonomialHash{}(k.ind);
    }
};

/// Element of the tensor product of the Fock module and the induced module.
class TensorState {
  public:
    using Map = std::unordered_map<TensorKey, GR, TensorKeyHash>;

    TensorState() = default;
    static TensorState basis(const CreatorMonomial& f, const PBWMonomial& w) {
        TensorState v;
        v.add(TensorKey{f, w}, GR::one());
        return v;
    }

    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }
    void add(const TensorKey& k, const GR& c);
    TensorState& operator+=(const TensorState& o);
    TensorState& operator-=(const TensorState& o);
    TensorState scaled(const GR& c) const;
    friend bool operator==(const TensorState& a, const TensorState& b) { return a.terms_ == b.terms_; }
    std::string str() const;

  private:
    Map terms_;
};

/// Shared evaluation environment: the induced module and the runtime caps.
struct EvalContext {
    std::shared_ptr<InducedModule> module;
    EvalLimits limits;
    /// Counters backing the well-definedness evidence: every operator
    /// application checks its declared frequency budget.
    static std::atomic<long>& budget_checks();
};

/// Lazily evaluated linear endomorphism of the tensor module.  An operator
/// is a sum of parts:
///  - a multiple of the identity,
///  - normal-ordered parts  int dt :F_i(t) p_i(t):,
///  - multiplication parts  (zero-frequency extraction of a q-jet polynomial),
///  - current couplings     sum_b [F]_b (x) X_b for a current generator X,
///  - raw Fock modes (used by the q-transform checks).
/// Every part shifts the total degree by exactly its phase, so the operator
/// carries a frequency budget F = max |phase| that is asserted on every
/// application.
class RealizedOperator {
  public:
    RealizedOperator() = default;
    explicit RealizedOperator(int N, std::string desc = "0") : n_(N), desc_(std::move(desc)) {}

    static RealizedOperator identity(int N, const GR& c = GR::one());

    const std::string& descriptor() const { return desc_; }
    void set_descriptor(std::string d) { desc_ = std::move(d); }
    int frequency_budget() const { return budget_; }
    int dim() const { return n_; }

    /// Exact image A v; throws CapOverflow when intermediate degrees exceed
    /// the configured cap.
    TensorState apply(const TensorState& v, const EvalContext& ctx) const;
    void apply_to_key(const TensorKey& key, const GR& coeff, const EvalContext& ctx, TensorState& out) const;

    RealizedOperator& operator+=(const RealizedOperator& o);
    RealizedOperator scaled(const GR& c) const;

    // part builders (used by the build_* functions below)
    void add_normal_part(int j, LoopPoly F);
    void add_mult_part(LoopPoly F);
    void add_coupling_part(CKind kind, int i1, int i2, const GR& prefactor, LoopPoly F);
    void add_fock_mode(const Mode& m, const GR& c);
    void add_scalar(const GR& c) { scalar_ += c; }

  private:
    struct NormalPart {
        int j;
        LoopPoly F;
    };
    struct CouplingPart {
        CKind kind;
        int i1, i2;
        GR prefactor;
        LoopPoly F;
    };
    struct FockModePart {
        Mode m;
        GR c;
    };

    void bump_budget(const LoopPoly& F);

    int n_ = 0;
    std::string desc_;
    GR scalar_;
    std::vector<NormalPart> normal_;
    std::vector<LoopPoly> mult_;
    std::vector<CouplingPart> coupling_;
    std::vector<FockModePart> fock_modes_;
    int budget_ = 0;
};

/// The realized diffeomorphism generator
///   L_xi = int dt ( :xitilde^i p_i: ) + i sum_b [xi^0]_b LL_b
///          + sum_b [d_nu xi^mu]_b TT^nu_{mu,b},
/// with xitilde^i = xi^i(q) - xi^0(q) qdot^i and p_0 eliminated.
RealizedOperator build_L(const VectorField& xi, const CurrentParams& p);

/// Multiplication operator S_n: for every stored key the single monomial
/// -i [prod_{j in key} qdot^j g_key(q)]_0 (index 0 factors removed).
RealizedOperator build_S(const SymTensorArg& g);
/// Likewise R_n with the extra qddot^rho factor; rho = 0 gives the zero
/// operator.
RealizedOperator build_R(const MixedTensorArg& h);
/// Realization of reduced S/R tables (shared with the abstract module).
RealizedOperator realize_tables(int N, const SRTables& t, const std::string& desc = "SR");

/// Gauge generator J_X = sum_b [X_a]_b (x) JJ^a_b.
RealizedOperator build_J(const std::vector<SpacetimeFunction>& X, const CurrentParams& p);

/// The grading Hamiltonian L_{-i d_0}.
RealizedOperator build_hamiltonian(const CurrentParams& p);

/// A single Fock mode as an operator (for the q-transform checks).
RealizedOperator fock_mode_operator(int N, const Mode& m);

inline TensorState op_apply(const RealizedOperator& A, const TensorState& v, const EvalContext& ctx) {
    return A.apply(v, ctx);
}

/// A(B v) - B(A v), exact.
TensorState commutator_apply(const RealizedOperator& A, const RealizedOperator& B, const TensorState& v,
                             const EvalContext& ctx);

}  // namespace exdiff
