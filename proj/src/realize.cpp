#include "exdiff/realize.hpp"

#include <algorithm>

namespace exdiff {

void TensorState::add(const TensorKey& k, const GR& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TensorState& TensorState::operator+=(const TensorState& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
}

TensorState& TensorState::operator-=(const TensorState& o) {
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
}

TensorState TensorState::scaled(const GR& c) const {
    TensorState r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

std::string TensorState::str() const {
    if (terms_.empty()) return "0";
    std::vector<const TensorKey*> keys;
    for (const auto& [k, c] : terms_) keys.push_back(&k);
    std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) {
        return std::make_pair(a->fock, a->ind) < std::make_pair(b->fock, b->ind);
    });
    std::string s;
    for (auto* k : keys) {
        if (!s.empty()) s += " + ";
        s += "(" + terms_.at(*k).str() + ")*" + k->str();
    }
    return s;
}

std::atomic<long>& EvalContext::budget_checks() {
    static std::atomic<long> n{0};
    return n;
}

RealizedOperator RealizedOperator::identity(int N, const GR& c) {
    RealizedOperator op(N, "Id");
    op.scalar_ = c;
    return op;
}

void RealizedOperator::bump_budget(const LoopPoly& F) { budget_ = std::max(budget_, F.max_abs_phase()); }

void RealizedOperator::add_normal_part(int j, LoopPoly F) {
    if (F.is_zero()) return;
    bump_budget(F);
    normal_.push_back(NormalPart{j, std::move(F)});
}

void RealizedOperator::add_mult_part(LoopPoly F) {
    if (F.is_zero()) return;
    bump_budget(F);
    mult_.push_back(std::move(F));
}

void RealizedOperator::add_coupling_part(CKind kind, int i1, int i2, const GR& prefactor, LoopPoly F) {
    if (F.is_zero() || prefactor.is_zero()) return;
    bump_budget(F);
    coupling_.push_back(CouplingPart{kind, i1, i2, prefactor, std::move(F)});
}

void RealizedOperator::add_fock_mode(const Mode& m, const GR& c) {
    if (c.is_zero()) return;
    budget_ = std::max(budget_, std::abs(m.freq));
    fock_modes_.push_back(FockModePart{m, c});
}

RealizedOperator& RealizedOperator::operator+=(const RealizedOperator& o) {
    if (n_ == 0) n_ = o.n_;
    scalar_ += o.scalar_;
    for (const auto& p : o.normal_) normal_.push_back(p);
    for (const auto& p : o.mult_) mult_.push_back(p);
    for (const auto& p : o.coupling_) coupling_.push_back(p);
    for (const auto& p : o.fock_modes_) fock_modes_.push_back(p);
    budget_ = std::max(budget_, o.budget_);
    return *this;
}

RealizedOperator RealizedOperator::scaled(const GR& c) const {
    RealizedOperator r(n_, desc_);
    if (c.is_zero()) return r;
    r.scalar_ = scalar_ * c;
    for (const auto& p : normal_) r.normal_.push_back(NormalPart{p.j, p.F.scaled(c)});
    for (const auto& p : mult_) r.mult_.push_back(p.scaled(c));
    for (const auto& p : coupling_)
        r.coupling_.push_back(CouplingPart{p.kind, p.i1, p.i2, p.prefactor * c, p.F});
    for (const auto& p : fock_modes_) r.fock_modes_.push_back(FockModePart{p.m, p.c * c});
    r.budget_ = budget_;
    return r;
}

void RealizedOperator::apply_to_key(const TensorKey& key, const GR& coeff, const EvalContext& ctx,
                                    TensorState& out) const {
    const EvalLimits& lim = ctx.limits;
    if (!scalar_.is_zero()) out.add(key, coeff * scalar_);

    for (const auto& part : fock_modes_) {
        FockState f;
        apply_mode_to_monomial(part.m, key.fock, coeff * part.c, f);
        for (const auto& [m2, c2] : f.terms()) out.add(TensorKey{m2, key.ind}, c2);
    }

    for (const auto& part : normal_) {
        FockState f;
        for (const auto& term : part.F.terms) apply_normal_term(term, part.j, key.fock, coeff, f, lim);
        for (const auto& [m2, c2] : f.terms()) out.add(TensorKey{m2, key.ind}, c2);
    }

    for (const auto& part : mult_) {
        FockState f;
        for (const auto& term : part.terms) apply_scalar_term(term, key.fock, coeff, f, lim);
        for (const auto& [m2, c2] : f.terms()) out.add(TensorKey{m2, key.ind}, c2);
    }

    if (!coupling_.empty() && !ctx.module->is_trivial()) {
        const int max_b = key.ind.degree();
        for (const auto& part : coupling_) {
            std::map<int, FockState> by_b;
            for (const auto& term : part.F.terms)
                apply_coupling_term(term, key.fock, coeff * part.prefactor, max_b, lim, by_b);
            for (const auto& [b, fock_part] : by_b) {
                if (fock_part.is_zero()) continue;
                CurrentMode mode{part.kind, part.i1, part.i2, b};
                InducedState ind;
                ctx.module->apply_to_monomial(mode, key.ind, GR::one(), ind);
                if (ind.is_zero()) continue;
                for (const auto& [m2, c2] : fock_part.terms())
                    for (const auto& [w2, d2] : ind.terms()) out.add(TensorKey{m2, w2}, c2 * d2);
            }
        }
    }
}

TensorState RealizedOperator::apply(const TensorState& v, const EvalContext& ctx) const {
    TensorState out;
    for (const auto& [key, c] : v.terms()) {
        TensorState part;
        apply_to_key(key, c, ctx, part);
        // well-definedness: the image of a homogeneous state stays inside the
        // declared frequency budget
        const int d = key.total_degree();
        for (const auto& [k2, c2] : part.terms()) {
            int d2 = k2.total_degree();
            if (d2 < d - budget_ || d2 > d + budget_)
                throw Error("frequency budget violated by operator " + desc_);
        }
        EvalContext::budget_checks().fetch_add(1, std::memory_order_relaxed);
        out += part;
    }
    return out;
}

RealizedOperator build_L(const VectorField& xi, const CurrentParams& p) {
    const int N = xi.dim();
    RealizedOperator op(N, "L[" + xi.str_directional() + "]");
    LoopPoly xi0 = LoopPoly::of_function(xi.comp(0));
    for (int i = 1; i <= N - 1; ++i) {
        LoopPoly F = LoopPoly::of_function(xi.comp(i));
        F += xi0.times_factor(Jet::Dot, i).scaled(-GR::one());
        op.add_normal_part(i, std::move(F));
    }
    // current couplings: i [xi^0]_b LL_b and [d_nu xi^mu]_b TT^nu_{mu,b}
    op.add_coupling_part(CKind::L, 0, 0, GR::i(), xi0);
    for (int nu = 0; nu < N; ++nu)
        for (int mu = 0; mu < N; ++mu) {
            LoopPoly F = LoopPoly::of_function(partial(xi.comp(mu), nu));
            op.add_coupling_part(CKind::T, nu, mu, GR::one(), std::move(F));
        }
    (void)p;
    return op;
}

RealizedOperator realize_tables(int N, const SRTables& t, const std::string& desc) {
    RealizedOperator op(N, desc);
    for (const auto& [tau, g] : t.V) {
        LoopPoly F = LoopPoly::of_function(g);
        for (int j : tau) F = F.times_factor(Jet::Dot, j);
        op.add_mult_part(F.scaled(-GR::i()));
    }
    for (const auto& [key, h] : t.W) {
        LoopPoly F = LoopPoly::of_function(h);
        F = F.times_factor(Jet::DDot, key.first);
        for (int j : key.second) F = F.times_factor(Jet::Dot, j);
        op.add_mult_part(F.scaled(-GR::i()));
    }
    return op;
}

RealizedOperator build_S(const SymTensorArg& g) {
    SRTables t;
    for (const auto& [key, fn] : g.entries()) t.add_S(key, fn);
    return realize_tables(g.dim(), t, "S" + std::to_string(g.rank()));
}

RealizedOperator build_R(const MixedTensorArg& h) {
    SRTables t;
    for (const auto& [key, fn] : h.entries()) t.add_R(key.first, key.second, fn);
    return realize_tables(h.dim(), t, "R" + std::to_string(h.rank()));
}

RealizedOperator build_J(const std::vector<SpacetimeFunction>& X, const CurrentParams& p) {
    if (static_cast<int>(X.size()) != p.gauge.dim)
        throw DimensionMismatch("gauge-valued function has wrong number of components");
    const int N = p.N;
    RealizedOperator op(N, "J[X]");
    for (int a = 1; a <= p.gauge.dim; ++a)
        op.add_coupling_part(CKind::J, a, 0, GR::one(), LoopPoly::of_function(X[a - 1]));
    return op;
}

RealizedOperator build_hamiltonian(const CurrentParams& p) {
    VectorField xi(p.N);
    xi.comp(0) = SpacetimeFunction::constant(p.N, -GR::i());
    RealizedOperator op = build_L(xi, p);
    op.set_descriptor("H");
    return op;
}

RealizedOperator fock_mode_operator(int N, const Mode& m) {
    RealizedOperator op(N, m.str());
    op.add_fock_mode(m, GR::one());
    return op;
}

TensorState commutator_apply(const RealizedOperator& A, const RealizedOperator& B, const TensorState& v,
                             const EvalContext& ctx) {
    TensorState r = A.apply(B.apply(v, ctx), ctx);
    r -= B.apply(A.apply(v, ctx), ctx);
    return r;
}

}  // namespace exdiff
