#include "netsde/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netsde {

CoefficientProfile CoefficientProfile::constant(double value) {
    CoefficientProfile p;
    p.kind_ = Kind::Constant;
    p.payload_ = {value};
    return p;
}

CoefficientProfile CoefficientProfile::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw std::invalid_argument("polynomial profile needs at least one coefficient");
    CoefficientProfile p;
    p.kind_ = Kind::Polynomial;
    p.payload_ = std::move(coeffs);
    return p;
}

CoefficientProfile CoefficientProfile::samples(std::vector<double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("sampled profile needs at least two values");
    CoefficientProfile p;
    p.kind_ = Kind::Samples;
    p.payload_ = std::move(values);
    return p;
}

double CoefficientProfile::operator()(double x) const {
    switch (kind_) {
    case Kind::Constant:
        return payload_[0];
    case Kind::Polynomial: {
        double acc = 0.0;
        for (std::size_t i = payload_.size(); i-- > 0;)
            acc = acc * x + payload_[i];
        return acc;
    }
    case Kind::Samples: {
        const double clamped = std::clamp(x, 0.0, 1.0);
        const double pos = clamped * static_cast<double>(payload_.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        if (lo + 1 >= payload_.size())
            return payload_.back();
        const double w = pos - static_cast<double>(lo);
        return (1.0 - w) * payload_[lo] + w * payload_[lo + 1];
    }
    }
    return 0.0;
}

double CoefficientProfile::min_sampled(std::size_t grid) const {
    double m = (*this)(0.0);
    for (std::size_t i = 1; i < grid; ++i)
        m = std::min(m, (*this)(static_cast<double>(i) / static_cast<double>(grid - 1)));
    if (kind_ == Kind::Samples)
        for (double v : payload_) m = std::min(m, v);
    return m;
}

double CoefficientProfile::max_sampled(std::size_t grid) const {
    double m = (*this)(0.0);
    for (std::size_t i = 1; i < grid; ++i)
        m = std::max(m, (*this)(static_cast<double>(i) / static_cast<double>(grid - 1)));
    if (kind_ == Kind::Samples)
        for (double v : payload_) m = std::max(m, v);
    return m;
}

} // namespace netsde
