#pragma once

#include <algorithm>
#include <span>

#include "persist/error.hpp"

namespace persist {

/// Extremes of a belief vector and their spread H = Psi - psi.
struct AgreementMetrics {
    double psi;  ///< minimum belief
    double Psi;  ///< maximum belief
    double H;    ///< spread

    friend bool operator==(const AgreementMetrics&, const AgreementMetrics&) = default;
};

inline AgreementMetrics metrics(std::span<const double> x) {
    if (x.empty()) throw DomainError("metrics of an empty belief vector");
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return {*lo, *hi, *hi - *lo};
}

}  // namespace persist
