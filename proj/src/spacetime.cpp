#include "exdiff/spacetime.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace exdiff {

SpacetimeFunction SpacetimeFunction::constant(int N, const GR& c) {
    SpacetimeFunction f(N);
    f.add_term(MonoKey{std::vector<int>(N - 1, 0), 0}, c);
    return f;
}

SpacetimeFunction SpacetimeFunction::monomial(int N, const GR& c, std::vector<int> a, int m) {
    if (static_cast<int>(a.size()) != N - 1) throw DimensionMismatch("monomial exponent tuple has wrong length");
    SpacetimeFunction f(N);
    f.add_term(MonoKey{std::move(a), m}, c);
    return f;
}

SpacetimeFunction SpacetimeFunction::coordinate(int N, int k) {
    if (k < 1 || k > N - 1) throw IndexRange("spatial coordinate index out of range");
    std::vector<int> a(N - 1, 0);
    a[k - 1] = 1;
    return monomial(N, GR::one(), std::move(a), 0);
}

SpacetimeFunction SpacetimeFunction::phase(int N, int m) {
    return monomial(N, GR::one(), std::vector<int>(N - 1, 0), m);
}

bool SpacetimeFunction::time_only() const {
    for (const auto& [k, c] : terms_)
        if (k.degree() != 0) return false;
    return true;
}

int SpacetimeFunction::max_spatial_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.degree());
    return d;
}

int SpacetimeFunction::max_abs_frequency() const {
    int f = 0;
    for (const auto& [k, c] : terms_) f = std::max(f, std::abs(k.m));
    return f;
}

void SpacetimeFunction::add_term(const MonoKey& k, const GR& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

SpacetimeFunction& SpacetimeFunction::operator+=(const SpacetimeFunction& o) {
    if (n_ == 0) n_ = o.n_;
    if (!o.terms_.empty() && n_ != o.n_) throw DimensionMismatch("adding functions of different dimension");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

SpacetimeFunction& SpacetimeFunction::operator-=(const SpacetimeFunction& o) {
    if (n_ == 0) n_ = o.n_;
    if (!o.terms_.empty() && n_ != o.n_) throw DimensionMismatch("subtracting functions of different dimension");
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

SpacetimeFunction SpacetimeFunction::operator-() const {
    SpacetimeFunction r(n_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

SpacetimeFunction SpacetimeFunction::scaled(const GR& c) const {
    SpacetimeFunction r(n_);
    if (c.is_zero()) return r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

SpacetimeFunction fn_mul(const SpacetimeFunction& f, const SpacetimeFunction& g) {
    if (f.dim() != g.dim() && !f.is_zero() && !g.is_zero())
        throw DimensionMismatch("multiplying functions of different dimension");
    SpacetimeFunction r(f.dim() ? f.dim() : g.dim());
    for (const auto& [ka, ca] : f.terms()) {
        for (const auto& [kb, cb] : g.terms()) {
            MonoKey k;
            k.a.resize(ka.a.size());
            for (size_t j = 0; j < ka.a.size(); ++j) k.a[j] = ka.a[j] + kb.a[j];
            k.m = ka.m + kb.m;
            r.add_term(k, ca * cb);
        }
    }
    return r;
}

SpacetimeFunction partial(const SpacetimeFunction& f, int mu) {
    if (mu < 0 || mu >= f.dim()) throw IndexRange("partial derivative index out of range");
    SpacetimeFunction r(f.dim());
    for (const auto& [k, c] : f.terms()) {
        if (mu == 0) {
            if (k.m == 0) continue;
            GR d = c;
            d.scale_int_i(k.m);  // d_0 e^{imx^0} = i m e^{imx^0}
            r.add_term(k, d);
        } else {
            int e = k.a[mu - 1];
            if (e == 0) continue;
            MonoKey kk = k;
            kk.a[mu - 1] -= 1;
            GR d = c;
            d.scale_int(e);
            r.add_term(kk, d);
        }
    }
    return r;
}

VectorField::VectorField(int N, std::vector<SpacetimeFunction> comps) : n_(N), comp_(std::move(comps)) {
    if (static_cast<int>(comp_.size()) != N) throw DimensionMismatch("vector field needs N components");
}

const SpacetimeFunction& VectorField::comp(int mu) const {
    if (mu < 0 || mu >= n_) throw IndexRange("vector field component out of range");
    return comp_[mu];
}

SpacetimeFunction& VectorField::comp(int mu) {
    if (mu < 0 || mu >= n_) throw IndexRange("vector field component out of range");
    return comp_[mu];
}

bool VectorField::is_zero() const {
    for (const auto& f : comp_)
        if (!f.is_zero()) return false;
    return true;
}

VectorField& VectorField::operator+=(const VectorField& o) {
    if (n_ != o.n_) throw DimensionMismatch("adding vector fields of different dimension");
    for (int mu = 0; mu < n_; ++mu) comp_[mu] += o.comp_[mu];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    if (n_ != o.n_) throw DimensionMismatch("subtracting vector fields of different dimension");
    for (int mu = 0; mu < n_; ++mu) comp_[mu] -= o.comp_[mu];
    return *this;
}

VectorField VectorField::scaled(const GR& c) const {
    VectorField r(n_);
    for (int mu = 0; mu < n_; ++mu) r.comp_[mu] = comp_[mu].scaled(c);
    return r;
}

int VectorField::max_abs_frequency() const {
    int f = 0;
    for (const auto& c : comp_) f = std::max(f, c.max_abs_frequency());
    return f;
}

int VectorField::max_spatial_degree() const {
    int d = 0;
    for (const auto& c : comp_) d = std::max(d, c.max_spatial_degree());
    return d;
}

VectorField lie_bracket(const VectorField& xi, const VectorField& eta) {
    if (xi.dim() != eta.dim()) throw DimensionMismatch("lie_bracket needs equal dimensions");
    int N = xi.dim();
    VectorField r(N);
    for (int nu = 0; nu < N; ++nu) {
        SpacetimeFunction acc(N);
        for (int mu = 0; mu < N; ++mu) {
            acc += fn_mul(xi.comp(mu), partial(eta.comp(nu), mu));
            acc -= fn_mul(eta.comp(mu), partial(xi.comp(nu), mu));
        }
        r.comp(nu) = std::move(acc);
    }
    return r;
}

std::vector<VectorField> probe_basis(int N, int max_spatial_degree, int max_frequency) {
    if (max_spatial_degree < 0 || max_frequency < 0) throw ConfigError("probe bounds must be >= 0");
    // Spatial monomials ordered by (total degree, exponent tuple lex).
    std::vector<std::vector<int>> monos;
    std::vector<int> cur(N - 1, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == N - 1) {
            monos.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[pos] = e;
            self(self, pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    std::vector<std::vector<int>> bydeg;
    for (int d = 0; d <= max_spatial_degree; ++d) {
        std::vector<std::vector<int>> level;
        monos.clear();
        rec(rec, 0, d);
        for (auto& a : monos) {
            int s = 0;
            for (int e : a) s += e;
            if (s == d) level.push_back(a);
        }
        std::sort(level.begin(), level.end());
        for (auto& a : level) bydeg.push_back(std::move(a));
    }
    std::vector<VectorField> out;
    for (const auto& a : bydeg) {
        for (int m = -max_frequency; m <= max_frequency; ++m) {
            for (int mu = 0; mu < N; ++mu) {
                VectorField v(N);
                v.comp(mu) = SpacetimeFunction::monomial(N, GR::one(), a, m);
                out.push_back(std::move(v));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// text form

namespace {

std::string mono_str(const MonoKey& k, const GR& c) {
    std::vector<std::string> factors;
    std::string cs = c.str();
    if (cs != "1" || (k.degree() == 0 && k.m == 0)) {
        bool needs_paren = cs.find_first_of("+-", 1) != std::string::npos;
        if (cs == "-1" && !(k.degree() == 0 && k.m == 0))
            factors.push_back("-1");
        else
            factors.push_back(needs_paren ? "(" + cs + ")" : cs);
    }
    for (size_t j = 0; j < k.a.size(); ++j) {
        if (k.a[j] == 0) continue;
        std::string f = "x" + std::to_string(j + 1);
        if (k.a[j] > 1) f += "^" + std::to_string(k.a[j]);
        factors.push_back(f);
    }
    if (k.m != 0) factors.push_back("e(" + std::to_string(k.m) + ")");
    std::string out;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "*";
        out += factors[i];
    }
    return out;
}

}  // namespace

std::string SpacetimeFunction::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        std::string t = mono_str(k, c);
        if (!first) {
            if (!t.empty() && t[0] == '-')
                out += " - ", t = t.substr(1);
            else
                out += " + ";
        }
        out += t;
        first = false;
    }
    return out;
}

SpacetimeFunction SpacetimeFunction::parse(int N, std::string_view sv) {
    std::string s;
    for (char c : sv)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    SpacetimeFunction out(N);
    if (s.empty() || s == "0") return out;

    size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+') {
            ++pos;
        } else if (s[pos] == '-') {
            sign = -1;
            ++pos;
        }
        // One term: factors separated by '*'.
        GR coeff = GR::one();
        std::vector<int> a(N - 1, 0);
        int m = 0;
        bool expect_factor = true;
        while (pos < s.size() && (expect_factor || s[pos] == '*')) {
            if (s[pos] == '*') ++pos;
            if (pos >= s.size()) throw ParseError("dangling '*' in '" + s + "'");
            if (s[pos] == '(') {
                size_t close = s.find(')', pos);
                if (close == std::string::npos) throw ParseError("unbalanced '(' in '" + s + "'");
                coeff *= GR::parse(s.substr(pos + 1, close - pos - 1));
                pos = close + 1;
            } else if (s[pos] == 'x') {
                size_t q = pos + 1;
                size_t digits = 0;
                while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q, ++digits;
                if (digits == 0) throw ParseError("expected coordinate index after 'x'");
                int idx = std::stoi(std::string(s.substr(pos + 1, q - pos - 1)));
                if (idx == 0)
                    throw ParseError("x0 is not a polynomial generator; time enters only through e(m)");
                if (idx < 1 || idx > N - 1) throw ParseError("coordinate x" + std::to_string(idx) + " out of range");
                int exp = 1;
                if (q < s.size() && s[q] == '^') {
                    ++q;
                    size_t r = q;
                    while (r < s.size() && std::isdigit(static_cast<unsigned char>(s[r]))) ++r;
                    if (r == q) throw ParseError("expected exponent after '^'");
                    exp = std::stoi(std::string(s.substr(q, r - q)));
                    q = r;
                }
                a[idx - 1] += exp;
                pos = q;
            } else if (s[pos] == 'e' && pos + 1 < s.size() && s[pos + 1] == '(') {
                size_t close = s.find(')', pos);
                if (close == std::string::npos) throw ParseError("unbalanced '(' in phase");
                m += std::stoi(std::string(s.substr(pos + 2, close - pos - 2)));
                pos = close + 1;
            } else if (s[pos] == 'i' || std::isdigit(static_cast<unsigned char>(s[pos]))) {
                // bare scalar factor: number, number/number, or i
                size_t q = pos;
                if (s[q] == 'i') {
                    ++q;
                } else {
                    while (q < s.size() && (std::isdigit(static_cast<unsigned char>(s[q])) || s[q] == '/')) ++q;
                    if (q < s.size() && s[q] == 'i') ++q;  // forms like "2i" not produced but accepted
                }
                coeff *= GR::parse(s.substr(pos, q - pos));
                pos = q;
            } else {
                throw ParseError("unexpected character '" + std::string(1, s[pos]) + "' in '" + s + "'");
            }
            expect_factor = false;
        }
        if (expect_factor) throw ParseError("empty term in '" + s + "'");
        if (sign < 0) coeff = -coeff;
        out.add_term(MonoKey{std::move(a), m}, coeff);
    }
    return out;
}

std::string VectorField::str() const {
    std::string out;
    for (int mu = 0; mu < n_; ++mu) {
        if (mu) out += " ; ";
        out += comp_[mu].str();
    }
    return out;
}

std::string VectorField::str_directional() const {
    std::string out;
    for (int mu = 0; mu < n_; ++mu) {
        if (comp_[mu].is_zero()) continue;
        std::string c = comp_[mu].str();
        if (!out.empty()) out += " + ";
        if (c == "1")
            out += "d" + std::to_string(mu);
        else
            out += c + "*d" + std::to_string(mu);
    }
    return out.empty() ? "0" : out;
}

VectorField VectorField::parse(int N, std::string_view s) {
    std::vector<SpacetimeFunction> comps;
    size_t start = 0;
    std::string str(s);
    for (size_t pos = 0; pos <= str.size(); ++pos) {
        if (pos == str.size() || str[pos] == ';') {
            comps.push_back(SpacetimeFunction::parse(N, str.substr(start, pos - start)));
            start = pos + 1;
        }
    }
    if (static_cast<int>(comps.size()) != N)
        throw ParseError("vector field needs exactly N components separated by ';'");
    return VectorField(N, std::move(comps));
}

void SymTensorArg::set(std::vector<int> tuple, SpacetimeFunction f) {
    if (static_cast<int>(tuple.size()) != rank_) throw DimensionMismatch("tensor tuple has wrong rank");
    for (int v : tuple)
        if (v < 0 || v >= n_) throw IndexRange("tensor index out of range");
    std::sort(tuple.begin(), tuple.end());
    if (f.is_zero())
        entries_.erase(tuple);
    else
        entries_[std::move(tuple)] = std::move(f);
}

SpacetimeFunction SymTensorArg::get(std::vector<int> tuple) const {
    std::sort(tuple.begin(), tuple.end());
    auto it = entries_.find(tuple);
    return it == entries_.end() ? SpacetimeFunction(n_) : it->second;
}

void MixedTensorArg::set(int rho, std::vector<int> tuple, SpacetimeFunction f) {
    if (static_cast<int>(tuple.size()) != rank_) throw DimensionMismatch("tensor tuple has wrong rank");
    if (rho < 0 || rho >= n_) throw IndexRange("distinguished index out of range");
    std::sort(tuple.begin(), tuple.end());
    auto key = std::make_pair(rho, std::move(tuple));
    if (f.is_zero())
        entries_.erase(key);
    else
        entries_[std::move(key)] = std::move(f);
}

SpacetimeFunction MixedTensorArg::get(int rho, std::vector<int> tuple) const {
    std::sort(tuple.begin(), tuple.end());
    auto it = entries_.find(std::make_pair(rho, std::move(tuple)));
    return it == entries_.end() ? SpacetimeFunction(n_) : it->second;
}

}  // namespace exdiff
