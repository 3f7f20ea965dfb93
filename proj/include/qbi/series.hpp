#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbi/errors.hpp"

namespace qbi {

using cplx = std::complex<double>;

/// Truncation order used when a caller does not ask for one.
inline constexpr std::size_t default_order = 16;

/// Absolute tolerance below which a constant term counts as zero.
inline constexpr double zero_constant_tolerance = 1e-12;

/// Truncated power series c0 + c1 z + ... + cN z^N over complex coefficients.
///
/// A Series is a value: it is never resized after construction, and every
/// binary operation truncates to the smaller of the two operand orders.
class Series {
public:
    /// The zero series of order 0.
    Series() : coeffs_(1) {}

    /// The zero series of the given order.
    explicit Series(std::size_t order) : coeffs_(order + 1) {}

    /// Takes ownership of c0..cN; the order is coeffs.size() - 1.
    explicit Series(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw Error("Series needs at least one coefficient");
    }

    Series(std::initializer_list<cplx> coeffs) : Series(std::vector<cplx>(coeffs)) {}

    static Series constant(cplx c, std::size_t order) {
        Series s(order);
        s.coeffs_[0] = c;
        return s;
    }

    /// c z^n, or the zero series when n exceeds the order.
    static Series monomial(cplx c, std::size_t n, std::size_t order) {
        Series s(order);
        if (n <= order) s.coeffs_[n] = c;
        return s;
    }

    /// The identity map z.
    static Series identity(std::size_t order) { return monomial(1.0, 1, order); }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    std::span<const cplx> coeffs() const noexcept { return coeffs_; }

    /// Coefficient of z^n; zero beyond the truncation order.
    cplx operator[](std::size_t n) const noexcept { return n < coeffs_.size() ? coeffs_[n] : cplx{}; }

    /// Same coefficients up to min(order, new_order), zero-padded above the old order.
    Series truncated(std::size_t new_order) const {
        std::vector<cplx> c(new_order + 1);
        std::copy_n(coeffs_.begin(), std::min(coeffs_.size(), c.size()), c.begin());
        return Series(std::move(c));
    }

    friend Series operator+(const Series& a, const Series& b) {
        const std::size_t n = std::min(a.order(), b.order());
        std::vector<cplx> c(n + 1);
        for (std::size_t i = 0; i <= n; ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
        return Series(std::move(c));
    }

    friend Series operator-(const Series& a, const Series& b) {
        const std::size_t n = std::min(a.order(), b.order());
        std::vector<cplx> c(n + 1);
        for (std::size_t i = 0; i <= n; ++i) c[i] = a.coeffs_[i] - b.coeffs_[i];
        return Series(std::move(c));
    }

    friend Series operator-(const Series& a) { return cplx(-1.0) * a; }

    friend Series operator*(cplx s, const Series& a) {
        std::vector<cplx> c(a.coeffs_);
        for (auto& x : c) x *= s;
        return Series(std::move(c));
    }

    friend Series operator*(const Series& a, cplx s) { return s * a; }

    /// Cauchy product truncated at min order.
    friend Series operator*(const Series& a, const Series& b) {
        const std::size_t n = std::min(a.order(), b.order());
        std::vector<cplx> c(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            if (a.coeffs_[i] == cplx{}) continue;
            for (std::size_t j = 0; i + j <= n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Series(std::move(c));
    }

private:
    std::vector<cplx> coeffs_;
};

inline Series add(const Series& a, const Series& b) { return a + b; }
inline Series mul(const Series& a, const Series& b) { return a * b; }

/// Quotient q with q * b = a to order min(a.order, b.order).
/// Throws ZeroConstantTerm when |b0| < 1e-12.
inline Series divide(const Series& a, const Series& b) {
    if (std::abs(b[0]) < zero_constant_tolerance)
        throw ZeroConstantTerm("divisor has vanishing constant term");
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<cplx> q(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        cplx acc = a[i];
        for (std::size_t j = 1; j <= i; ++j) acc -= b[j] * q[i - j];
        q[i] = acc / b[0];
    }
    return Series(std::move(q));
}

/// outer(inner(z)) truncated at min order, by Horner's scheme on series.
/// Throws NonzeroInnerConstant unless inner(0) = 0.
inline Series compose(const Series& outer, const Series& inner) {
    if (std::abs(inner[0]) > zero_constant_tolerance)
        throw NonzeroInnerConstant("inner series must vanish at the origin");
    const std::size_t n = std::min(outer.order(), inner.order());
    const Series in = inner.truncated(n);
    Series acc = Series::constant(outer[n], n);
    for (std::size_t i = n; i-- > 0;) acc = acc * in + Series::constant(outer[i], n);
    return acc;
}

/// Horner evaluation of the truncated polynomial at z.
inline cplx evaluate(const Series& s, cplx z) {
    cplx acc = s[s.order()];
    for (std::size_t i = s.order(); i-- > 0;) acc = acc * z + s[i];
    return acc;
}

/// z * s: raises the order by one, exactly.
inline Series shift_up(const Series& s) {
    std::vector<cplx> c(s.order() + 2);
    for (std::size_t i = 0; i <= s.order(); ++i) c[i + 1] = s[i];
    return Series(std::move(c));
}

/// s / z for s(0) = 0: lowers the order by one. Order-0 input yields the zero series.
inline Series shift_down(const Series& s) {
    if (std::abs(s[0]) > zero_constant_tolerance)
        throw ZeroConstantTerm("cannot divide by z: constant term is nonzero");
    if (s.order() == 0) return Series(0);
    return Series(std::vector<cplx>(s.coeffs().begin() + 1, s.coeffs().end()));
}

/// exp(s) via the recurrence n e_n = sum_k k s_k e_{n-k}.
inline Series exp(const Series& s) {
    const std::size_t n = s.order();
    std::vector<cplx> e(n + 1);
    e[0] = std::exp(s[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        cplx acc{};
        for (std::size_t k = 1; k <= i; ++k) acc += static_cast<double>(k) * s[k] * e[i - k];
        e[i] = acc / static_cast<double>(i);
    }
    return Series(std::move(e));
}

/// A function of class A: z + a2 z^2 + a3 z^3 + ...
class NormalizedFunction {
public:
    /// Throws NotNormalized unless c0 = 0 and c1 = 1 exactly.
    explicit NormalizedFunction(Series s) : series_(std::move(s)) {
        if (series_.order() < 1 || series_[0] != cplx{} || series_[1] != cplx(1.0))
            throw NotNormalized("expected f(0) = 0 and f'(0) = 1");
    }

    /// z + a2 z^2 + a3 z^3 + ... from the list {a2, a3, ...}, truncated at `order`.
    static NormalizedFunction from_tail(std::span<const cplx> tail, std::size_t order) {
        std::vector<cplx> c(order + 1);
        if (order >= 1) c[1] = 1.0;
        for (std::size_t i = 0; i < tail.size() && i + 2 <= order; ++i) c[i + 2] = tail[i];
        return NormalizedFunction(Series(std::move(c)));
    }

    static NormalizedFunction from_tail(std::initializer_list<cplx> tail, std::size_t order) {
        return from_tail(std::span<const cplx>(tail.begin(), tail.size()), order);
    }

    static NormalizedFunction identity(std::size_t order) {
        return NormalizedFunction(Series::identity(order));
    }

    const Series& series() const noexcept { return series_; }
    std::size_t order() const noexcept { return series_.order(); }

    /// Coefficient a_n (a_1 = 1).
    cplx a(std::size_t n) const noexcept { return series_[n]; }

private:
    Series series_;
};

/// Compositional inverse g = f^{-1}, solved order by order from f(g(w)) = w.
/// g = w - a2 w^2 + (2 a2^2 - a3) w^3 + ...
inline NormalizedFunction comp_inverse(const NormalizedFunction& f) {
    const std::size_t n = f.order();
    std::vector<cplx> g(n + 1);
    g[1] = 1.0;
    for (std::size_t m = 2; m <= n; ++m) {
        // f(g) - w up to z^m, with g_m still zero; the z^m residue must be cancelled by g_m.
        const Series partial(std::vector<cplx>(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(m) + 1));
        const Series fm = f.series().truncated(m);
        g[m] = -compose(fm, partial)[m];
    }
    return NormalizedFunction(Series(std::move(g)));
}

}  // namespace qbi
