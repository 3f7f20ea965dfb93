#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbi/q_calculus.hpp"
#include "qbi/series.hpp"
#include "qbi/targets.hpp"

namespace qbi {

/// M: (1-l) D^{k+1}f / D^k f + l D^{k+2}f / D^{k+1}f.
/// F: (1-m) D^k f / z + m (D^k f)'.
enum class Family { M, F };

inline const char* to_string(Family f) { return f == Family::M ? "M" : "F"; }

/// How the operator steps beyond D_q^k are taken.
///
/// Ordinary: D^{k+j} f = (z d/dz)^j D_q^k f and the F-class prime is d/dz.
/// These are the steps under which the coefficient relations
/// c1 = (1+l)[2]^k a2, c2 = 2(1+2l)[3]^k a3 - (1+3l)[2]^{2k} a2^2 hold exactly.
///
/// Jackson: D^{k+j} f = D_q^{k+j} f (each step is z D_q) and the prime is D_q.
/// The relations then carry the factors [2]_q - 1 = q and [3]_q - 1 = q + q^2
/// in place of 1 and 2; both rules agree as q -> 1-.
enum class StepRule { Ordinary, Jackson };

inline const char* to_string(StepRule r) { return r == StepRule::Ordinary ? "ordinary" : "jackson"; }

/// A bi-univalent class M^k_q(lambda, phi) or F^k_q(mu, phi).
class ClassSpec {
public:
    ClassSpec(Family family, double weight, QParams qp, MindaTarget target, StepRule steps = StepRule::Ordinary)
        : family_(family), weight_(weight), qp_(qp), target_(std::move(target)), steps_(steps) {
        if (!(weight >= 0.0 && weight <= 1.0))
            throw std::domain_error(std::string(family == Family::M ? "lambda" : "mu") +
                                    " must lie in [0, 1], got " + std::to_string(weight));
    }

    Family family() const noexcept { return family_; }
    /// lambda for M, mu for F.
    double weight() const noexcept { return weight_; }
    const QParams& qp() const noexcept { return qp_; }
    const MindaTarget& target() const noexcept { return target_; }
    StepRule steps() const noexcept { return steps_; }

private:
    Family family_;
    double weight_;
    QParams qp_;
    MindaTarget target_;
    StepRule steps_;
};

namespace detail {

/// One operator step: z f' (Ordinary) or z D_q f (Jackson). Order is preserved.
inline Series step(const Series& s, double q, StepRule rule) {
    return shift_up(rule == StepRule::Ordinary ? ordinary_derivative(s) : jackson_derivative(s, q));
}

inline void require_order(const Series& f) {
    if (f.order() < 3) throw std::invalid_argument("class expressions need truncation order >= 3");
}

}  // namespace detail

/// The M-class expression; order drops by one relative to f.
inline Series m_expression(const Series& f, double lambda, const QParams& qp, StepRule rule = StepRule::Ordinary) {
    detail::require_order(f);
    const Series d0 = salagean_q(f, qp.q(), qp.k());
    const Series d1 = detail::step(d0, qp.q(), rule);
    const Series d2 = detail::step(d1, qp.q(), rule);
    const Series r0 = divide(shift_down(d1), shift_down(d0));
    const Series r1 = divide(shift_down(d2), shift_down(d1));
    return (1.0 - lambda) * r0 + cplx(lambda) * r1;
}

inline Series m_expression(const NormalizedFunction& f, double lambda, const QParams& qp,
                           StepRule rule = StepRule::Ordinary) {
    return m_expression(f.series(), lambda, qp, rule);
}

/// The F-class expression; order drops by one relative to f.
inline Series f_expression(const Series& f, double mu, const QParams& qp, StepRule rule = StepRule::Ordinary) {
    detail::require_order(f);
    const Series d = salagean_q(f, qp.q(), qp.k());
    const Series prime = rule == StepRule::Ordinary ? ordinary_derivative(d) : jackson_derivative(d, qp.q());
    return (1.0 - mu) * shift_down(d) + cplx(mu) * prime;
}

inline Series f_expression(const NormalizedFunction& f, double mu, const QParams& qp,
                           StepRule rule = StepRule::Ordinary) {
    return f_expression(f.series(), mu, qp, rule);
}

/// The defining expression of `spec` applied to f itself.
inline Series class_expression(const NormalizedFunction& f, const ClassSpec& spec) {
    return spec.family() == Family::M ? m_expression(f, spec.weight(), spec.qp(), spec.steps())
                                      : f_expression(f, spec.weight(), spec.qp(), spec.steps());
}

/// The defining expression applied to g = f^{-1} (truncated inverse of f).
inline Series g_expression(const NormalizedFunction& f, const ClassSpec& spec) {
    return class_expression(comp_inverse(f), spec);
}

/// Coefficients of the low-order relations satisfied by either class expression:
///   f side: c1 =  lead a2,  c2 = cubic a3 - square a2^2
///   g side: c1 = -lead a2,  c2 = (2 cubic - square) a2^2 - cubic a3
struct RelationCoefficients {
    double lead;
    double cubic;
    double square;
};

/// With step factor s(n) = n (Ordinary) or [n]_q (Jackson):
///   M: lead = (s2-1)(1-l+l s2)[2]^k, cubic = (s3-1)(1-l+l s3)[3]^k,
///      square = (s2-1)(1-l+l s2^2)[2]^{2k}
///   F: lead = (1-m+m s2)[2]^k, cubic = (1-m+m s3)[3]^k, square = 0
inline RelationCoefficients relation_coefficients(Family family, double weight, const QParams& qp,
                                                  StepRule rule = StepRule::Ordinary) {
    const double b2k = q_bracket_pow(2, qp.q(), qp.k());
    const double b3k = q_bracket_pow(3, qp.q(), qp.k());
    const double s2 = rule == StepRule::Ordinary ? 2.0 : q_bracket(2, qp.q());
    const double s3 = rule == StepRule::Ordinary ? 3.0 : q_bracket(3, qp.q());
    const double w = weight;
    if (family == Family::M) {
        return {(s2 - 1.0) * (1.0 - w + w * s2) * b2k,
                (s3 - 1.0) * (1.0 - w + w * s3) * b3k,
                (s2 - 1.0) * (1.0 - w + w * s2 * s2) * b2k * b2k};
    }
    return {(1.0 - w + w * s2) * b2k, (1.0 - w + w * s3) * b3k, 0.0};
}

inline RelationCoefficients relation_coefficients(const ClassSpec& spec) {
    return relation_coefficients(spec.family(), spec.weight(), spec.qp(), spec.steps());
}

/// Result of sampling one side of a subordination.
struct SideVerdict {
    bool pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    cplx witness_z{};      ///< sample with the smallest margin
    cplx witness_value{};  ///< expression value there
    std::size_t samples = 0;
};

/// Rings and density for subordination sampling.
struct SamplingPlan {
    std::vector<double> rings{0.1, 0.3, 0.5, 0.7, 0.9, 0.95};
    std::size_t points_per_ring = 64;
};

/// Sampled subordination test: expr(z) must lie in the target's image region at
/// every sample. A failure is a concrete witness; a pass is evidence only.
inline SideVerdict subordination_check(const Series& expr, const MindaTarget& target,
                                       const SamplingPlan& plan = {}) {
    if (!target.has_region())
        throw NoRegionOracle("subordination needs a target with an image-region predicate");
    SideVerdict v;
    for (double r : plan.rings) {
        for (std::size_t j = 0; j < plan.points_per_ring; ++j) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                                 static_cast<double>(plan.points_per_ring);
            const cplx z = std::polar(r, theta);
            const cplx w = evaluate(expr, z);
            const double m = std::isfinite(w.real()) && std::isfinite(w.imag())
                                 ? target.margin(w)
                                 : -std::numeric_limits<double>::infinity();
            ++v.samples;
            if (m < v.worst_margin || v.samples == 1) {
                v.worst_margin = m;
                v.witness_z = z;
                v.witness_value = w;
            }
            if (!(m > 0.0)) v.pass = false;
        }
    }
    return v;
}

struct MembershipVerdict {
    SideVerdict f_side;
    SideVerdict g_side;
    std::size_t truncation = 0;

    bool pass() const noexcept { return f_side.pass && g_side.pass; }
    double worst_margin() const noexcept { return std::min(f_side.worst_margin, g_side.worst_margin); }
    std::size_t samples_used() const noexcept { return f_side.samples + g_side.samples; }
};

/// Both subordinations of the class definition, checked by sampling.
inline MembershipVerdict membership(const NormalizedFunction& f, const ClassSpec& spec,
                                    const SamplingPlan& plan = {}) {
    MembershipVerdict v;
    v.truncation = f.order();
    v.f_side = subordination_check(class_expression(f, spec), spec.target(), plan);
    v.g_side = subordination_check(g_expression(f, spec), spec.target(), plan);
    return v;
}

}  // namespace qbi
