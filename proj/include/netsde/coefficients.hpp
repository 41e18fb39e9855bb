#pragma once

#include <cstddef>
#include <vector>

namespace netsde {

/// Scalar coefficient on one edge, as a function of the edge parameter x in [0,1].
/// Three representations: a constant, a polynomial (coefficients lowest degree
/// first), or samples on a uniform grid with linear interpolation between them.
class CoefficientProfile {
public:
    enum class Kind { Constant, Polynomial, Samples };

    CoefficientProfile() : kind_(Kind::Constant), payload_{0.0} {}

    static CoefficientProfile constant(double value);
    static CoefficientProfile polynomial(std::vector<double> coeffs_lowest_first);
    static CoefficientProfile samples(std::vector<double> values); // size >= 2

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    const std::vector<double>& payload() const { return payload_; }

    // Extrema over a dense sample of [0,1] (includes sample knots when applicable).
    double min_sampled(std::size_t grid = 257) const;
    double max_sampled(std::size_t grid = 257) const;

    bool operator==(const CoefficientProfile&) const = default;

private:
    Kind kind_;
    std::vector<double> payload_;
};

} // namespace netsde
