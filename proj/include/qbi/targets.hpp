#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbi/series.hpp"

namespace qbi {

enum class TargetKind { StronglyStarlike, StarlikeOrder, CustomSeries };

inline const char* to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::StronglyStarlike: return "alpha";
        case TargetKind::StarlikeOrder: return "beta";
        case TargetKind::CustomSeries: return "series";
    }
    return "?";
}

/// A Ma-Minda function phi(z) = 1 + B1 z + B2 z^2 + ... with B1 > 0.
///
/// The two built-in kinds also carry their closed form and an exact
/// predicate for the image phi(disk): a sector |arg w| < alpha pi / 2 for
/// ((1+z)/(1-z))^alpha, the half-plane Re w > beta for (1+(1-2 beta)z)/(1-z).
/// Custom targets support bound evaluation only.
class MindaTarget {
public:
    TargetKind kind() const noexcept { return kind_; }

    /// alpha or beta for the built-ins, NaN for custom series.
    double parameter() const noexcept { return parameter_; }

    double b1() const noexcept { return series_[1].real(); }
    double b2() const noexcept { return series_[2].real(); }
    /// B_n for n >= 1, read from the stored expansion (zero beyond its order).
    double b(std::size_t n) const noexcept { return series_[n].real(); }

    const Series& series() const noexcept { return series_; }

    bool has_region() const noexcept { return kind_ != TargetKind::CustomSeries; }

    /// Signed distance-like margin of w to the region boundary; positive inside.
    /// Sector: alpha pi/2 - |arg w|. Half-plane: Re w - beta.
    double margin(cplx w) const {
        switch (kind_) {
            case TargetKind::StronglyStarlike:
                if (w == cplx{}) return -parameter_ * std::numbers::pi / 2.0;
                return parameter_ * std::numbers::pi / 2.0 - std::abs(std::arg(w));
            case TargetKind::StarlikeOrder: return w.real() - parameter_;
            case TargetKind::CustomSeries: break;
        }
        throw NoRegionOracle("custom series targets have no image-region predicate");
    }

    bool contains(cplx w) const { return margin(w) > 0.0; }

    /// Closed-form phi(z) for the built-ins; nullopt for custom series.
    std::optional<cplx> value(cplx z) const {
        switch (kind_) {
            case TargetKind::StronglyStarlike:
                return std::exp(parameter_ * std::log((1.0 + z) / (1.0 - z)));
            case TargetKind::StarlikeOrder:
                return (1.0 + (1.0 - 2.0 * parameter_) * z) / (1.0 - z);
            case TargetKind::CustomSeries: break;
        }
        return std::nullopt;
    }

    friend MindaTarget strongly_starlike(double alpha, std::size_t order);
    friend MindaTarget starlike_order(double beta, std::size_t order);
    friend MindaTarget custom_target(Series series);

private:
    MindaTarget(TargetKind kind, double parameter, Series series)
        : kind_(kind), parameter_(parameter), series_(std::move(series)) {}

    TargetKind kind_;
    double parameter_;
    Series series_;
};

/// ((1+z)/(1-z))^alpha = exp(2 alpha atanh z), 0 < alpha <= 1.
inline MindaTarget strongly_starlike(double alpha, std::size_t order = default_order) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("strongly starlike order alpha must lie in (0, 1], got " + std::to_string(alpha));
    if (order < 2) throw std::domain_error("target expansion needs order >= 2");
    std::vector<cplx> c(order + 1);
    for (std::size_t n = 1; n <= order; n += 2) c[n] = 2.0 * alpha / static_cast<double>(n);
    return MindaTarget(TargetKind::StronglyStarlike, alpha, exp(Series(std::move(c))));
}

/// (1 + (1 - 2 beta) z) / (1 - z), 0 <= beta < 1; B_n = 2(1 - beta) for n >= 1.
inline MindaTarget starlike_order(double beta, std::size_t order = default_order) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::domain_error("starlike order beta must lie in [0, 1), got " + std::to_string(beta));
    if (order < 2) throw std::domain_error("target expansion needs order >= 2");
    std::vector<cplx> c(order + 1, cplx(2.0 * (1.0 - beta)));
    c[0] = 1.0;
    return MindaTarget(TargetKind::StarlikeOrder, beta, Series(std::move(c)));
}

/// A generic phi given by its expansion. Requires c0 = 1 and c1 real positive.
inline MindaTarget custom_target(Series series) {
    if (std::abs(series[0] - 1.0) > zero_constant_tolerance)
        throw BadNormalization("target series must satisfy phi(0) = 1");
    if (series.order() < 1 || std::abs(series[1].imag()) > zero_constant_tolerance || !(series[1].real() > 0.0))
        throw BadNormalization("target series must satisfy phi'(0) > 0");
    if (series.order() < 2) series = series.truncated(2);
    return MindaTarget(TargetKind::CustomSeries, std::numeric_limits<double>::quiet_NaN(), std::move(series));
}

}  // namespace qbi
