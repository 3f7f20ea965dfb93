#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbi/series.hpp"

namespace qbi {

/// Operator parameters: 0 < q < 1 strictly, k >= 0.
class QParams {
public:
    QParams(double q, unsigned k) : q_(q), k_(k) {
        if (!(q > 0.0 && q < 1.0))
            throw std::domain_error("q must lie in the open interval (0, 1), got " + std::to_string(q));
    }

    double q() const noexcept { return q_; }
    unsigned k() const noexcept { return k_; }

private:
    double q_;
    unsigned k_;
};

/// The q-number [n]_q = (1 - q^n) / (1 - q), evaluated as 1 + q + ... + q^{n-1}.
inline double q_bracket(unsigned n, double q) {
    if (n < 1) throw std::domain_error("q_bracket needs n >= 1");
    double acc = 1.0;
    for (unsigned i = 1; i < n; ++i) acc = acc * q + 1.0;
    return acc;
}

/// [n]_q^k; at k = 0 this is exactly 1.
inline double q_bracket_pow(unsigned n, double q, unsigned k) {
    return std::pow(q_bracket(n, q), static_cast<double>(k));
}

/// Jackson q-derivative (f(z) - f(qz)) / ((1 - q) z) on coefficients:
/// (D_q f)_{n-1} = [n]_q f_n. The result has order one less than f.
inline Series jackson_derivative(const Series& f, double q) {
    if (f.order() == 0) return Series(0);
    std::vector<cplx> c(f.order());
    for (std::size_t n = 1; n <= f.order(); ++n) c[n - 1] = q_bracket(static_cast<unsigned>(n), q) * f[n];
    return Series(std::move(c));
}

/// Ordinary derivative; order drops by one.
inline Series ordinary_derivative(const Series& f) {
    if (f.order() == 0) return Series(0);
    std::vector<cplx> c(f.order());
    for (std::size_t n = 1; n <= f.order(); ++n) c[n - 1] = static_cast<double>(n) * f[n];
    return Series(std::move(c));
}

/// q-Salagean operator in closed form: c_n -> [n]_q^k c_n.
/// Applies to any series; on f in A it gives z + sum [n]_q^k a_n z^n.
inline Series salagean_q(const Series& f, double q, unsigned k) {
    std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
    for (std::size_t n = 2; n < c.size(); ++n) c[n] *= q_bracket_pow(static_cast<unsigned>(n), q, k);
    return Series(std::move(c));
}

inline Series salagean_q(const NormalizedFunction& f, const QParams& qp) {
    return salagean_q(f.series(), qp.q(), qp.k());
}

}  // namespace qbi
