#pragma once

#include "exdiff/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace exdiff {

/// One monomial key: spatial exponents a[0..N-2] for x^1..x^{N-1} and the
/// time frequency m of the phase e(m) = e^{i m x^0}.
struct MonoKey {
    std::vector<int> a;
    int m = 0;
    friend auto operator<=>(const MonoKey&, const MonoKey&) = default;
    int degree() const {
        int d = 0;
        for (int e : a) d += e;
        return d;
    }
};

/// Finite sum  sum c * (x^1)^{a_1}...(x^{N-1})^{a_{N-1}} e^{i m x^0}.
/// Time dependence is Fourier-only; polynomial x^0 dependence is rejected at
/// parse time.
class SpacetimeFunction {
  public:
    SpacetimeFunction() : n_(0) {}
    explicit SpacetimeFunction(int N) : n_(N) {}
    static SpacetimeFunction zero(int N) { return SpacetimeFunction(N); }
    static SpacetimeFunction constant(int N, const GR& c);
    /// c * x^a * e(m); a has length N-1.
    static SpacetimeFunction monomial(int N, const GR& c, std::vector<int> a, int m);
    /// x^k (1 <= k <= N-1).
    static SpacetimeFunction coordinate(int N, int k);
    /// e^{i m x^0}.
    static SpacetimeFunction phase(int N, int m);

    int dim() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<MonoKey, GR>& terms() const { return terms_; }

    /// True when every term has zero spatial exponents.
    bool time_only() const;
    int max_spatial_degree() const;
    int max_abs_frequency() const;

    void add_term(const MonoKey& k, const GR& c);

    SpacetimeFunction& operator+=(const SpacetimeFunction& o);
    SpacetimeFunction& operator-=(const SpacetimeFunction& o);
    friend SpacetimeFunction operator+(SpacetimeFunction a, const SpacetimeFunction& b) { return a += b; }
    friend SpacetimeFunction operator-(SpacetimeFunction a, const SpacetimeFunction& b) { return a -= b; }
    SpacetimeFunction operator-() const;
    SpacetimeFunction scaled(const GR& c) const;

    friend bool operator==(const SpacetimeFunction& a, const SpacetimeFunction& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    std::string str() const;
    /// Parses terms like "e(2)*x1^2", "-1/2*i*x1*x2", "(1+i)*x1". Rejects x0.
    static SpacetimeFunction parse(int N, std::string_view s);

  private:
    int n_;
    std::map<MonoKey, GR> terms_;  // zero coefficients pruned
};

/// Exact product; frequencies add, exponents add.
SpacetimeFunction fn_mul(const SpacetimeFunction& f, const SpacetimeFunction& g);
/// Exact partial derivative d_mu; d_0 multiplies each term by i*m.
SpacetimeFunction partial(const SpacetimeFunction& f, int mu);

/// Vector field xi = xi^mu d_mu with N SpacetimeFunction components.
class VectorField {
  public:
    VectorField() : n_(0) {}
    explicit VectorField(int N) : n_(N), comp_(N, SpacetimeFunction(N)) {}
    VectorField(int N, std::vector<SpacetimeFunction> comps);

    int dim() const { return n_; }
    const SpacetimeFunction& comp(int mu) const;
    SpacetimeFunction& comp(int mu);
    bool is_zero() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    VectorField scaled(const GR& c) const;
    friend bool operator==(const VectorField& a, const VectorField& b) {
        return a.n_ == b.n_ && a.comp_ == b.comp_;
    }

    int max_abs_frequency() const;
    int max_spatial_degree() const;

    /// "f0 ; f1 ; ... ; f{N-1}" with the component syntax of SpacetimeFunction.
    std::string str() const;
    /// Directional form "e(2)*x1*d1 + x2*d0" used in operator descriptors.
    std::string str_directional() const;
    static VectorField parse(int N, std::string_view s);

  private:
    int n_;
    std::vector<SpacetimeFunction> comp_;
};

/// [xi,eta]^nu = xi^mu d_mu eta^nu - eta^mu d_mu xi^nu.
VectorField lie_bracket(const VectorField& xi, const VectorField& eta);

/// Deterministic enumeration of all basis fields x^a e(m) d_mu with
/// |a| <= max_spatial_degree and |m| <= max_frequency, ordered by
/// (total degree, exponent tuple lex, frequency ascending, component).
std::vector<VectorField> probe_basis(int N, int max_spatial_degree, int max_frequency);

/// Totally symmetric tensor argument g_{nu_1..nu_n}; only sorted index
/// tuples are stored.
class SymTensorArg {
  public:
    SymTensorArg(int N, int rank) : n_(N), rank_(rank) {}
    int dim() const { return n_; }
    int rank() const { return rank_; }
    /// Sets the component at the sorted tuple key (tuple is sorted first).
    void set(std::vector<int> tuple, SpacetimeFunction f);
    /// Component at an arbitrary tuple (sorts internally); zero when absent.
    SpacetimeFunction get(std::vector<int> tuple) const;
    const std::map<std::vector<int>, SpacetimeFunction>& entries() const { return entries_; }

  private:
    int n_, rank_;
    std::map<std::vector<int>, SpacetimeFunction> entries_;
};

/// Mixed argument h_{rho|nu_1..nu_n}: distinguished index rho, symmetric
/// nu-block.
class MixedTensorArg {
  public:
    MixedTensorArg(int N, int rank) : n_(N), rank_(rank) {}
    int dim() const { return n_; }
    int rank() const { return rank_; }
    void set(int rho, std::vector<int> tuple, SpacetimeFunction f);
    SpacetimeFunction get(int rho, std::vector<int> tuple) const;
    const std::map<std::pair<int, std::vector<int>>, SpacetimeFunction>& entries() const { return entries_; }

  private:
    int n_, rank_;
    std::map<std::pair<int, std::vector<int>>, SpacetimeFunction> entries_;
};

}  // namespace exdiff
