#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "qbi/classes.hpp"
#include "qbi/q_calculus.hpp"

namespace qbi {

/// Radicands and denominators below this magnitude are reported as degenerate.
inline constexpr double degenerate_tolerance = 1e-12;

/// Which power of [2]_q multiplies the (1+3 lambda) term inside the a2^2 bracket.
/// Doubled ([2]^{2k}) is correct; Single ([2]^k) reproduces a misprint and is
/// kept only to demonstrate that the relation chain rejects it.
enum class BracketExponent { Doubled, Single };

/// Applies the bracket-exponent choice to a set of relation coefficients.
inline RelationCoefficients with_bracket_exponent(RelationCoefficients c, const QParams& qp,
                                                  BracketExponent e) {
    if (e == BracketExponent::Single) c.square /= q_bracket_pow(2, qp.q(), qp.k());
    return c;
}

// Generic forms over the relation coefficients (lead L, cubic T, square S).
//   bracket   = (T - S) B1^2 + (B1 - B2) L^2
//   |a2|     <= B1 sqrt(B1) / sqrt|bracket|
//   |a3|     <= B1^2 / L^2 + B1 / T
//   Theta     = B1^2 (1 - tau) / (4 bracket)
//   |a3 - tau a2^2| <= 4 B1 max(|Theta|, 1 / (4T))

inline double relation_bracket(const RelationCoefficients& c, double b1, double b2) {
    return (c.cubic - c.square) * b1 * b1 + (b1 - b2) * c.lead * c.lead;
}

inline bool is_degenerate(double x) { return std::abs(x) < degenerate_tolerance; }

/// nullopt when the bracket is degenerate.
inline std::optional<double> a2_bound(const RelationCoefficients& c, double b1, double b2) {
    const double r = std::abs(relation_bracket(c, b1, b2));
    if (is_degenerate(r)) return std::nullopt;
    return b1 * std::sqrt(b1) / std::sqrt(r);
}

inline double a3_bound(const RelationCoefficients& c, double b1) {
    return b1 * b1 / (c.lead * c.lead) + b1 / c.cubic;
}

inline std::optional<cplx> fs_weight(const RelationCoefficients& c, cplx tau, double b1, double b2) {
    const double r = relation_bracket(c, b1, b2);
    if (is_degenerate(r)) return std::nullopt;
    return b1 * b1 * (1.0 - tau) / (4.0 * r);
}

/// Branch threshold 1 / (4T) of the Fekete-Szego estimate.
inline double fs_threshold(const RelationCoefficients& c) { return 1.0 / (4.0 * c.cubic); }

inline std::optional<double> fs_bound(const RelationCoefficients& c, cplx tau, double b1, double b2) {
    const auto w = fs_weight(c, tau, b1, b2);
    if (!w) return std::nullopt;
    const double t = fs_threshold(c);
    const double m = std::abs(*w);
    return m < t ? b1 / c.cubic : 4.0 * b1 * m;
}

// Named forms for the two classes with ordinary outer steps.

inline std::optional<double> a2_bound_M(double lambda, const QParams& qp, double b1, double b2) {
    return a2_bound(relation_coefficients(Family::M, lambda, qp), b1, b2);
}

/// B1 / (2(1+2l)[3]^k) + (B1 / ((1+l)[2]^k))^2
inline double a3_bound_M(double lambda, const QParams& qp, double b1) {
    return a3_bound(relation_coefficients(Family::M, lambda, qp), b1);
}

inline std::optional<double> a2_bound_F(double mu, const QParams& qp, double b1, double b2) {
    return a2_bound(relation_coefficients(Family::F, mu, qp), b1, b2);
}

/// B1 (B1 / ((1+m)^2 [2]^{2k}) + 1 / ((1+2m)[3]^k))
inline double a3_bound_F(double mu, const QParams& qp, double b1) {
    return a3_bound(relation_coefficients(Family::F, mu, qp), b1);
}

/// Theta(tau); nullopt when degenerate.
inline std::optional<cplx> theta(cplx tau, double lambda, const QParams& qp, double b1, double b2) {
    return fs_weight(relation_coefficients(Family::M, lambda, qp), tau, b1, b2);
}

/// B1 / (2(1+2l)[3]^k) if |Theta| < 1/(8(1+2l)[3]^k), else 4 B1 |Theta|.
inline std::optional<double> fs_bound_M(cplx tau, double lambda, const QParams& qp, double b1, double b2) {
    return fs_bound(relation_coefficients(Family::M, lambda, qp), tau, b1, b2);
}

/// Phi(tau); nullopt when degenerate.
inline std::optional<cplx> phi_fs(cplx tau, double mu, const QParams& qp, double b1, double b2) {
    return fs_weight(relation_coefficients(Family::F, mu, qp), tau, b1, b2);
}

/// B1 / ((1+2m)[3]^k) if |Phi| < 1/(4(1+2m)[3]^k), else 4 B1 |Phi|.
inline std::optional<double> fs_bound_F(cplx tau, double mu, const QParams& qp, double b1, double b2) {
    return fs_bound(relation_coefficients(Family::F, mu, qp), tau, b1, b2);
}

struct FsBound {
    cplx tau;
    std::optional<double> bound;
};

/// All bounds of one class. Degenerate entries are nullopt.
struct BoundReport {
    std::optional<double> a2_bound;
    double a3_bound = 0.0;
    std::vector<FsBound> fs_bounds;
    double bracket = 0.0;

    bool degenerate() const noexcept { return !a2_bound.has_value(); }
};

inline BoundReport evaluate_bounds(const ClassSpec& spec, const std::vector<cplx>& taus,
                                   BracketExponent e = BracketExponent::Doubled) {
    const auto c = with_bracket_exponent(relation_coefficients(spec), spec.qp(), e);
    const double b1 = spec.target().b1();
    const double b2 = spec.target().b2();
    BoundReport r;
    r.bracket = relation_bracket(c, b1, b2);
    r.a2_bound = a2_bound(c, b1, b2);
    r.a3_bound = a3_bound(c, b1);
    for (const cplx& tau : taus) r.fs_bounds.push_back({tau, fs_bound(c, tau, b1, b2)});
    return r;
}

}  // namespace qbi
