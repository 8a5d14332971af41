// types.hpp — Shared numeric aliases, time grids and error types

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xymark {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// An engine declined a request it cannot serve (size caps, unsupported coupling site).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Uniform time grid t_n = n * dt, n = 0..steps.
struct TimeGrid {
    double dt{0.05};
    std::size_t steps{0};

    static TimeGrid from_final(double t_fin, double dt) {
        if (!(dt > 0.0) || !(t_fin >= 0.0)) {
            throw std::invalid_argument("time grid needs dt > 0 and t_fin >= 0");
        }
        return TimeGrid{dt, static_cast<std::size_t>(std::llround(t_fin / dt))};
    }

    double t(std::size_t n) const { return static_cast<double>(n) * dt; }
    double t_fin() const { return t(steps); }
    std::size_t size() const { return steps + 1; }
};

}  // namespace xymark
