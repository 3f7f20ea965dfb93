#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "qbi/bounds.hpp"
#include "qbi/classes.hpp"
#include "qbi/series.hpp"

namespace qbi {

/// Low-order Caratheodory coefficients of p = (1+u)/(1-u), q = (1+v)/(1-v)
/// for the Schwarz functions u, v of the two subordinations.
struct CaratheodoryPoint {
    cplx p1{}, p2{}, q1{}, q2{};

    /// |p_i|, |q_i| <= 2 and p1 = -q1, up to `tol`.
    bool admissible(double tol = 1e-12) const {
        const double lim = 2.0 + tol;
        return std::abs(p1) <= lim && std::abs(p2) <= lim && std::abs(q1) <= lim && std::abs(q2) <= lim &&
               std::abs(p1 + q1) <= tol;
    }
};

struct DerivedCoefficients {
    cplx a2sq;
    cplx a3;
};

/// a2^2 = B1^3 (p2 + q2) / (4 bracket)
/// a3   = B1^2 (p1^2 + q1^2) / (8 L^2) + B1 (p2 - q2) / (4 T)
/// Throws Degenerate when the bracket vanishes.
inline DerivedCoefficients derive_a2sq_a3(const CaratheodoryPoint& cp, const RelationCoefficients& c, double b1,
                                          double b2) {
    const double bracket = relation_bracket(c, b1, b2);
    if (is_degenerate(bracket)) throw Degenerate("relation bracket vanishes");
    return {b1 * b1 * b1 * (cp.p2 + cp.q2) / (4.0 * bracket),
            b1 * b1 * (cp.p1 * cp.p1 + cp.q1 * cp.q1) / (8.0 * c.lead * c.lead) +
                b1 * (cp.p2 - cp.q2) / (4.0 * c.cubic)};
}

inline DerivedCoefficients derive_a2sq_a3_M(const CaratheodoryPoint& cp, double lambda, const QParams& qp, double b1,
                                            double b2, BracketExponent e = BracketExponent::Doubled) {
    return derive_a2sq_a3(cp, with_bracket_exponent(relation_coefficients(Family::M, lambda, qp), qp, e), b1, b2);
}

inline DerivedCoefficients derive_a2sq_a3_F(const CaratheodoryPoint& cp, double mu, const QParams& qp, double b1,
                                            double b2) {
    return derive_a2sq_a3(cp, relation_coefficients(Family::F, mu, qp), b1, b2);
}

/// The four relation residuals, in order:
/// f-side z, f-side z^2, g-side z, g-side z^2.
using Residuals = std::array<double, 4>;

namespace detail {

/// phi(u(z)) with u = (p - 1)/(p + 1), p = 1 + c1 z + c2 z^2.
inline Series subordinate_side(const MindaTarget& target, cplx c1, cplx c2) {
    const Series p{1.0, c1, c2};
    const Series u = divide(p - Series::constant(1.0, 2), p + Series::constant(1.0, 2));
    return compose(target.series().truncated(2), u);
}

}  // namespace detail

/// Rebuilds f = z + a2 z^2 + a3 z^3 from the derived values (a2 is the root of
/// a2^2 nearest B1 p1 / (2L)), pushes f and its inverse through the class
/// expressions and compares with phi(u), phi(v) to second order.
inline Residuals relation_residuals(const CaratheodoryPoint& cp, const ClassSpec& spec,
                                    std::size_t order = 8, BracketExponent e = BracketExponent::Doubled) {
    const auto c = with_bracket_exponent(relation_coefficients(spec), spec.qp(), e);
    const double b1 = spec.target().b1();
    const auto d = derive_a2sq_a3(cp, c, b1, spec.target().b2());
    const cplx guide = b1 * cp.p1 / (2.0 * c.lead);
    cplx a2 = std::sqrt(d.a2sq);
    if (std::abs(-a2 - guide) < std::abs(a2 - guide)) a2 = -a2;

    const auto f = NormalizedFunction::from_tail({a2, d.a3}, std::max<std::size_t>(order, 3));
    const Series ef = class_expression(f, spec);
    const Series eg = g_expression(f, spec);
    const Series pf = detail::subordinate_side(spec.target(), cp.p1, cp.p2);
    const Series pg = detail::subordinate_side(spec.target(), cp.q1, cp.q2);
    return {std::abs(ef[1] - pf[1]), std::abs(ef[2] - pf[2]), std::abs(eg[1] - pg[1]), std::abs(eg[2] - pg[2])};
}

/// Reads the Caratheodory point off a concrete f by inverting the second-order
/// expansion of phi(u): c1 = B1 p1 / 2, c2 = B1 (p2 - p1^2/2) / 2 + B2 p1^2 / 4.
inline CaratheodoryPoint caratheodory_point_of(const NormalizedFunction& f, const ClassSpec& spec) {
    const double b1 = spec.target().b1();
    const double b2 = spec.target().b2();
    const auto invert = [&](const Series& e, cplx& c1, cplx& c2) {
        c1 = 2.0 * e[1] / b1;
        c2 = 2.0 * (e[2] - 0.25 * b2 * c1 * c1) / b1 + 0.5 * c1 * c1;
    };
    CaratheodoryPoint cp;
    invert(class_expression(f, spec), cp.p1, cp.p2);
    invert(g_expression(f, spec), cp.q1, cp.q2);
    return cp;
}

/// Seeded sampler of admissible Caratheodory points. Each point comes from a
/// random f = z + a2 z^2 + a3 z^3 run through the series engine, so it satisfies
/// the whole relation chain; points with some |p_i| > 2 are rejected.
class AdmissiblePointSampler {
public:
    AdmissiblePointSampler(const ClassSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

    CaratheodoryPoint operator()() { return next().point; }

    struct Sample {
        CaratheodoryPoint point;
        cplx a2;
        cplx a3;
    };

    Sample next() {
        const auto c = relation_coefficients(spec_);
        const double b1 = spec_.target().b1();
        for (int attempt = 0; attempt < 100000; ++attempt) {
            // Scales keep |p1| <= 2 and |p2| = O(1); admissibility is decided below.
            const cplx a2 = unit_disk() * (b1 / std::abs(c.lead));
            const cplx a3 = (c.square * a2 * a2 + b1 * unit_disk()) / c.cubic;
            const auto f = NormalizedFunction::from_tail({a2, a3}, 4);
            const auto cp = caratheodory_point_of(f, spec_);
            if (cp.admissible(1e-9)) return {cp, a2, a3};
        }
        throw std::runtime_error("no admissible point found");
    }

private:
    cplx unit_disk() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = std::sqrt(u(rng_));
        return std::polar(r, 2.0 * std::numbers::pi * u(rng_));
    }

    ClassSpec spec_;
    std::mt19937_64 rng_;
};

/// Largest relation residual over `samples` seeded admissible points.
inline double relation_consistency(const ClassSpec& spec, std::size_t samples, std::uint64_t seed,
                                   std::size_t order = 8, BracketExponent e = BracketExponent::Doubled) {
    AdmissiblePointSampler sampler(spec, seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto r = relation_residuals(sampler(), spec, order, e);
        worst = std::max(worst, *std::max_element(r.begin(), r.end()));
    }
    return worst;
}

/// Observed maximum of one quantity against its bound.
struct Extremum {
    double observed = 0.0;
    CaratheodoryPoint argmax{};
    std::optional<double> bound;
    bool dominated = true;
};

struct FsExtremum {
    cplx tau;
    Extremum ext;
};

struct ProbeOptions {
    /// Requested spacing; rounded so that the grid hits -2 and 2 exactly.
    double grid_step = 0.05;
    /// 1 sweeps real p2, q2; n > 1 sweeps moduli times n phases each.
    std::size_t phases = 1;
    BracketExponent bracket = BracketExponent::Doubled;
};

inline constexpr double dominance_tolerance = 1e-9;

struct ProbeResult {
    Extremum a2;
    Extremum a3;
    std::vector<FsExtremum> fs;
    std::size_t visited = 0;
    std::size_t inadmissible = 0;
    /// Degenerate specs are reported but never asserted on.
    bool degenerate = false;

    bool all_dominated() const noexcept {
        if (degenerate) return true;
        bool ok = a2.dominated && a3.dominated;
        for (const auto& f : fs) ok = ok && f.ext.dominated;
        return ok;
    }
};

namespace detail {

inline void record(Extremum& e, double value, const CaratheodoryPoint& cp) {
    if (value > e.observed) {
        e.observed = value;
        e.argmax = cp;
    }
}

inline void settle(Extremum& e) {
    e.dominated = e.bound.has_value() && e.observed <= *e.bound + dominance_tolerance;
}

inline std::vector<cplx> probe_axis(const ProbeOptions& opt) {
    if (!(opt.grid_step > 0.0 && opt.grid_step <= 2.0)) throw std::invalid_argument("grid_step must lie in (0, 2]");
    std::vector<cplx> axis;
    if (opt.phases <= 1) {
        const auto n = std::max<long>(1, std::lround(4.0 / opt.grid_step));
        for (long i = 0; i <= n; ++i) axis.emplace_back(-2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(n));
    } else {
        const auto n = std::max<long>(1, std::lround(2.0 / opt.grid_step));
        axis.emplace_back(0.0);
        for (long i = 1; i <= n; ++i) {
            const double r = 2.0 * static_cast<double>(i) / static_cast<double>(n);
            for (std::size_t j = 0; j < opt.phases; ++j)
                axis.push_back(std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                                 static_cast<double>(opt.phases)));
        }
    }
    return axis;
}

}  // namespace detail

/// Grid search over admissible Caratheodory points. p2, q2 range over the grid;
/// p1 = -q1 is then fixed by 8 L^2 a2^2 = B1^2 (p1^2 + q1^2) and the point is kept
/// only if |p1| <= 2. Records max |a2|, |a3|, |a3 - tau a2^2| against the bounds.
inline ProbeResult probe_bounds(const ClassSpec& spec, const std::vector<cplx>& taus, const ProbeOptions& opt = {}) {
    const auto c = with_bracket_exponent(relation_coefficients(spec), spec.qp(), opt.bracket);
    const double b1 = spec.target().b1();
    const double b2 = spec.target().b2();
    const auto axis = detail::probe_axis(opt);

    ProbeResult res;
    res.a2.bound = a2_bound(c, b1, b2);
    res.a3.bound = a3_bound(c, b1);
    for (const cplx& tau : taus) res.fs.push_back({tau, Extremum{0.0, {}, fs_bound(c, tau, b1, b2), true}});
    if (!res.a2.bound) {
        res.degenerate = true;
        return res;
    }

    for (const cplx& p2 : axis) {
        for (const cplx& q2 : axis) {
            ++res.visited;
            const cplx a2sq = derive_a2sq_a3({0.0, p2, 0.0, q2}, c, b1, b2).a2sq;
            const cplx p1sq = 4.0 * c.lead * c.lead * a2sq / (b1 * b1);
            if (std::abs(p1sq) > 4.0 * (1.0 + 1e-12)) {
                ++res.inadmissible;
                continue;
            }
            const cplx p1 = std::sqrt(p1sq);
            const CaratheodoryPoint cp{p1, p2, -p1, q2};
            const auto d = derive_a2sq_a3(cp, c, b1, b2);
            detail::record(res.a2, std::sqrt(std::abs(d.a2sq)), cp);
            detail::record(res.a3, std::abs(d.a3), cp);
            for (auto& f : res.fs) detail::record(f.ext, std::abs(d.a3 - f.tau * d.a2sq), cp);
        }
    }
    detail::settle(res.a2);
    detail::settle(res.a3);
    for (auto& f : res.fs) detail::settle(f.ext);
    return res;
}

struct LimitRow {
    double q;
    std::optional<double> a2_bound;
    double a3_bound;
    std::optional<double> a2_classical;
    double a3_classical;
    double bracket2;  ///< [2]_q
    double bracket3;  ///< [3]_q
};

/// Coefficients of the classical (q = 1, k = 0) relations.
inline RelationCoefficients classical_relation_coefficients(Family family, double weight) {
    if (family == Family::M) return {1.0 + weight, 2.0 * (1.0 + 2.0 * weight), 1.0 + 3.0 * weight};
    return {1.0 + weight, 1.0 + 2.0 * weight, 0.0};
}

/// Bounds at k = 0 along a ladder of q values, beside the classical formulas.
inline std::vector<LimitRow> classical_limit_scan(Family family, double weight, const MindaTarget& target,
                                                  const std::vector<double>& q_ladder,
                                                  StepRule rule = StepRule::Ordinary) {
    const double b1 = target.b1();
    const double b2 = target.b2();
    const auto classical = classical_relation_coefficients(family, weight);
    std::vector<LimitRow> rows;
    for (double q : q_ladder) {
        const QParams qp(q, 0);
        const ClassSpec spec(family, weight, qp, target, rule);
        const auto c = relation_coefficients(spec);
        rows.push_back({q, a2_bound(c, b1, b2), a3_bound(c, b1), a2_bound(classical, b1, b2),
                        a3_bound(classical, b1), q_bracket(2, q), q_bracket(3, q)});
    }
    return rows;
}

}  // namespace qbi
