#pragma once
// Truncated multivariate Taylor ("jet") arithmetic.
//
// A Jet holds the Taylor coefficients of a scalar at a base point, over a
// dense lattice of multi-indices bounded separately in two variable groups:
// the first n_x "base" variables (total degree <= ord_x) and the remaining
// n_y "fiber" variables (total degree <= ord_y).  Arithmetic is exact to the
// lattice orders; everything beyond is truncated.
//
// Derivative shifts (Jet::deriv) reduce the exactly-known order by one in
// the shifted group: the top-order coefficients of the result receive
// contributions from beyond the lattice and must not be extracted.  Callers
// pick lattice orders with the headroom their extraction depth needs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

inline constexpr int kMaxJetVars = 6;
inline constexpr int kMaxOrderY = 5;
inline constexpr int kMaxOrderX = 1;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

/// Shared, immutable description of a jet lattice.  Obtain via JetConfig::make
/// (configs are cached; equality of shared_ptr implies matching lattices).
struct JetConfig {
    int n_x = 0;        // count of base variables (slots 0..n_x-1)
    int n_y = 0;        // count of fiber variables (slots n_x..n_x+n_y-1)
    int ord_x = 0;      // max total degree in the base group, 0 or 1
    int ord_y = 1;      // max total degree in the fiber group, 1..5

    std::vector<MultiIndex> exps;     // lattice entries, entry 0 is the zero index
    std::vector<double> fact;         // product of exponent factorials per entry
    std::vector<std::uint8_t> deg_x;  // total base degree per entry
    std::vector<std::uint8_t> deg_y;  // total fiber degree per entry
    std::vector<int> keys;            // mixed-radix key per entry
    std::vector<int> key2pos;         // key -> lattice position, -1 if absent
    std::array<int, kMaxJetVars> stride{};

    int n_vars() const { return n_x + n_y; }
    int size() const { return static_cast<int>(exps.size()); }
    int max_total_order() const { return ord_x + ord_y; }

    int position(const MultiIndex& e) const {
        int key = 0, dx = 0, dy = 0;
        for (int v = n_vars(); v < kMaxJetVars; ++v)
            if (e[v] != 0) return -1;
        for (int v = 0; v < n_vars(); ++v) {
            const int cap = v < n_x ? ord_x : ord_y;
            if (e[v] > cap) return -1;
            (v < n_x ? dx : dy) += e[v];
            key += stride[v] * e[v];
        }
        if (dx > ord_x || dy > ord_y) return -1;
        return key2pos[key];
    }

    static std::shared_ptr<const JetConfig> make(int n_x, int n_y, int ord_x, int ord_y);
};

namespace detail {

inline std::shared_ptr<const JetConfig> build_config(int n_x, int n_y, int ord_x, int ord_y) {
    if (n_x < 0 || n_y < 1 || n_x + n_y > kMaxJetVars)
        throw std::invalid_argument("JetConfig: variable counts out of range");
    if (ord_x < 0 || ord_x > kMaxOrderX || ord_y < 1 || ord_y > kMaxOrderY)
        throw std::invalid_argument("JetConfig: orders out of range");

    auto cfg = std::make_shared<JetConfig>();
    cfg->n_x = n_x;
    cfg->n_y = n_y;
    cfg->ord_x = ord_x;
    cfg->ord_y = ord_y;

    const int nv = n_x + n_y;
    std::array<int, kMaxJetVars> radix{};
    int table = 1;
    for (int v = 0; v < nv; ++v) {
        radix[v] = (v < n_x ? ord_x : ord_y) + 1;
        cfg->stride[v] = table;
        table *= radix[v];
    }
    cfg->key2pos.assign(table, -1);

    MultiIndex e{};
    // odometer over per-variable ranges, filtered by group totals
    while (true) {
        int dx = 0, dy = 0;
        for (int v = 0; v < n_x; ++v) dx += e[v];
        for (int v = n_x; v < nv; ++v) dy += e[v];
        if (dx <= ord_x && dy <= ord_y) {
            int key = 0;
            double f = 1.0;
            for (int v = 0; v < nv; ++v) {
                key += cfg->stride[v] * e[v];
                for (int k = 2; k <= e[v]; ++k) f *= k;
            }
            cfg->key2pos[key] = static_cast<int>(cfg->exps.size());
            cfg->exps.push_back(e);
            cfg->fact.push_back(f);
            cfg->deg_x.push_back(static_cast<std::uint8_t>(dx));
            cfg->deg_y.push_back(static_cast<std::uint8_t>(dy));
            cfg->keys.push_back(key);
        }
        int v = 0;
        while (v < nv && ++e[v] == radix[v]) e[v++] = 0;
        if (v == nv) break;
    }
    // entry 0 must be the zero multi-index (odometer starts there)
    return cfg;
}

} // namespace detail

inline std::shared_ptr<const JetConfig> JetConfig::make(int n_x, int n_y, int ord_x, int ord_y) {
    using Key = std::array<int, 4>;
    static std::map<Key, std::shared_ptr<const JetConfig>> cache;
    static std::mutex mtx;
    const Key k{n_x, n_y, ord_x, ord_y};
    std::lock_guard lock(mtx);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    auto cfg = detail::build_config(n_x, n_y, ord_x, ord_y);
    cache.emplace(k, cfg);
    return cfg;
}

class Jet {
public:
    Jet() = default;
    explicit Jet(std::shared_ptr<const JetConfig> cfg)
        : cfg_(std::move(cfg)), c_(cfg_->size(), 0.0) {}

    static Jet constant(std::shared_ptr<const JetConfig> cfg, double v) {
        Jet j(std::move(cfg));
        j.c_[0] = v;
        return j;
    }

    /// Coordinate jet: value v, unit first-order coefficient in variable `var`.
    static Jet variable(std::shared_ptr<const JetConfig> cfg, int var, double v) {
        Jet j(std::move(cfg));
        if (var < 0 || var >= j.cfg_->n_vars())
            throw std::out_of_range("Jet::variable: index out of range");
        j.c_[0] = v;
        MultiIndex e{};
        e[var] = 1;
        const int pos = j.cfg_->position(e);
        if (pos < 0) throw std::invalid_argument("Jet::variable: order-0 group");
        j.c_[pos] = 1.0;
        return j;
    }

    const std::shared_ptr<const JetConfig>& config() const { return cfg_; }
    double value() const { return c_[0]; }
    std::span<const double> coeffs() const { return c_; }
    double& coeff_at(int pos) { return c_[pos]; }
    double coeff_at(int pos) const { return c_[pos]; }

    double coeff(const MultiIndex& e) const {
        const int pos = cfg_->position(e);
        if (pos < 0) throw std::out_of_range("Jet::coeff: multi-index outside lattice");
        return c_[pos];
    }

    /// True partial derivative: Taylor coefficient times the multi-index factorial.
    double derivative(const MultiIndex& e) const {
        const int pos = cfg_->position(e);
        if (pos < 0) throw std::out_of_range("Jet::derivative: multi-index outside lattice");
        return c_[pos] * cfg_->fact[pos];
    }

    /// Jet of the partial derivative with respect to variable `var`.
    /// Top-order coefficients of the result are not exactly known.
    Jet deriv(int var) const {
        Jet out(cfg_);
        const auto& cfg = *cfg_;
        for (int p = 0; p < cfg.size(); ++p) {
            MultiIndex e = cfg.exps[p];
            e[var] += 1;
            const int src = cfg.position(e);
            if (src >= 0) out.c_[p] = c_[src] * e[var];
        }
        return out;
    }

    Jet& operator+=(const Jet& o) {
        check_same(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check_same(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }
    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(double s) {
        c_[0] -= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
    friend Jet operator-(const Jet& a) {
        Jet out = a;
        for (double& v : out.c_) v = -v;
        return out;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_same(b);
        const auto& cfg = *a.cfg_;
        Jet out(a.cfg_);
        const int n = cfg.size();
        for (int ia = 0; ia < n; ++ia) {
            const double ca = a.c_[ia];
            if (ca == 0.0) continue;
            const int dxa = cfg.deg_x[ia], dya = cfg.deg_y[ia], ka = cfg.keys[ia];
            for (int ib = 0; ib < n; ++ib) {
                const double cb = b.c_[ib];
                if (cb == 0.0) continue;
                if (dxa + cfg.deg_x[ib] > cfg.ord_x) continue;
                if (dya + cfg.deg_y[ib] > cfg.ord_y) continue;
                out.c_[cfg.key2pos[ka + cfg.keys[ib]]] += ca * cb;
            }
        }
        return out;
    }

    friend Jet operator/(const Jet& a, const Jet& b);

private:
    void check_same(const Jet& o) const {
        if (cfg_ != o.cfg_) throw std::invalid_argument("Jet: config mismatch");
    }

    std::shared_ptr<const JetConfig> cfg_;
    std::vector<double> c_;
};

/// Horner evaluation of sum_k coeffs[k] * (a - a.value())^k.
inline Jet compose_series(std::span<const double> coeffs, const Jet& a) {
    Jet w = a - a.value();
    const int K = static_cast<int>(coeffs.size()) - 1;
    Jet acc = Jet::constant(a.config(), K >= 0 ? coeffs[K] : 0.0);
    for (int k = K - 1; k >= 0; --k) acc = acc * w + coeffs[k];
    return acc;
}

inline Jet operator/(const Jet& a, const Jet& b) {
    a.check_same(b);
    const double b0 = b.value();
    if (b0 == 0.0) throw std::domain_error("Jet division: zero constant term");
    // 1/b = (1/b0) * sum (-w)^k, w = b/b0 - 1
    Jet w = b * (1.0 / b0) - 1.0;
    const int K = b.config()->max_total_order();
    Jet inv = Jet::constant(b.config(), 1.0);
    for (int k = 0; k < K; ++k) inv = 1.0 - w * inv;
    return a * inv * (1.0 / b0);
}

namespace detail {

// Taylor coefficients c_k = f^(k)(a0)/k! for the supported elementary
// functions, k = 0..K.  arctan/arctanh integrate the series of their
// rational derivative (three-term denominator recurrence).
inline std::vector<double> elem_series(int fn, double a0, int K, double p = 0.0) {
    std::vector<double> c(K + 1, 0.0);
    switch (fn) {
        case 0: { // exp
            const double e = std::exp(a0);
            double kf = 1.0;
            for (int k = 0; k <= K; ++k) {
                if (k > 0) kf *= k;
                c[k] = e / kf;
            }
            break;
        }
        case 1: { // log
            if (!(a0 > 0.0)) throw std::domain_error("jet log: constant term must be positive");
            c[0] = std::log(a0);
            double ip = 1.0;
            for (int k = 1; k <= K; ++k) {
                ip /= a0;
                c[k] = ((k % 2) ? 1.0 : -1.0) * ip / k;
            }
            break;
        }
        case 2: { // pow p (covers sqrt with p = 1/2)
            if (!(a0 > 0.0)) throw std::domain_error("jet pow: constant term must be positive");
            double binom = 1.0;
            for (int k = 0; k <= K; ++k) {
                if (k > 0) binom *= (p - (k - 1)) / k;
                c[k] = binom * std::pow(a0, p - k);
            }
            break;
        }
        case 3:   // atanh: d/dt = 1/(1-t^2)
        case 4: { // atan:  d/dt = 1/(1+t^2)
            const bool hyp = (fn == 3);
            if (hyp && !(std::abs(a0) < 1.0))
                throw std::domain_error("jet atanh: |constant term| must be < 1");
            const double q0 = hyp ? 1.0 - a0 * a0 : 1.0 + a0 * a0;
            const double q1 = hyp ? -2.0 * a0 : 2.0 * a0;
            const double q2 = hyp ? -1.0 : 1.0;
            std::vector<double> u(std::max(K, 1), 0.0);
            u[0] = 1.0 / q0;
            for (int m = 1; m < K; ++m)
                u[m] = -(q1 * u[m - 1] + (m >= 2 ? q2 * u[m - 2] : 0.0)) / q0;
            c[0] = hyp ? std::atanh(a0) : std::atan(a0);
            for (int k = 1; k <= K; ++k) c[k] = u[k - 1] / k;
            break;
        }
        default:
            throw std::invalid_argument("elem_series: unknown function tag");
    }
    return c;
}

} // namespace detail

enum class ElemFn { Exp, Log, Sqrt, Atanh, Atan };

inline Jet jet_elem(ElemFn fn, const Jet& a) {
    const int K = a.config()->max_total_order();
    switch (fn) {
        case ElemFn::Exp: return compose_series(detail::elem_series(0, a.value(), K), a);
        case ElemFn::Log: return compose_series(detail::elem_series(1, a.value(), K), a);
        case ElemFn::Sqrt: return compose_series(detail::elem_series(2, a.value(), K, 0.5), a);
        case ElemFn::Atanh: return compose_series(detail::elem_series(3, a.value(), K), a);
        case ElemFn::Atan: return compose_series(detail::elem_series(4, a.value(), K), a);
    }
    throw std::invalid_argument("jet_elem: unknown tag");
}

inline Jet exp(const Jet& a) { return jet_elem(ElemFn::Exp, a); }
inline Jet log(const Jet& a) { return jet_elem(ElemFn::Log, a); }
inline Jet sqrt(const Jet& a) { return jet_elem(ElemFn::Sqrt, a); }
inline Jet atanh(const Jet& a) { return jet_elem(ElemFn::Atanh, a); }
inline Jet atan(const Jet& a) { return jet_elem(ElemFn::Atan, a); }
inline Jet pow(const Jet& a, double p) {
    return compose_series(detail::elem_series(2, a.value(), a.config()->max_total_order(), p), a);
}

// double overloads so generic evaluators work unchanged on plain values
inline double exp(double v) { return std::exp(v); }
inline double log(double v) { return std::log(v); }
inline double sqrt(double v) { return std::sqrt(v); }
inline double atanh(double v) { return std::atanh(v); }
inline double atan(double v) { return std::atan(v); }
inline double pow(double v, double p) { return std::pow(v, p); }

inline double jet_value(double v) { return v; }
inline double jet_value(const Jet& a) { return a.value(); }

/// Sup norm over coefficients; doubles are their own norm.  Used by the
/// templated quadrature error control.
inline double sup_norm(double v) { return std::abs(v); }
inline double sup_norm(const Jet& a) {
    double m = 0.0;
    for (double c : a.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

} // namespace finsler
