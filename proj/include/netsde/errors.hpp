#pragma once

#include <stdexcept>
#include <string>

namespace netsde {

// A path hit a non-finite state entry; carries the time at which it happened.
class BlowupError : public std::runtime_error {
public:
    BlowupError(double t, std::string what)
        : std::runtime_error(std::move(what)), time_(t) {}
    double time() const { return time_; }

private:
    double time_;
};

// Eigensolver breakdown, blow-up quota exceeded, and similar numerical failures.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(std::string what) : std::runtime_error(std::move(what)) {}
};

} // namespace netsde
