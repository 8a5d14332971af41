// numeric.cpp — Finite differences and phase unwrapping

#include "xymark/numeric.hpp"

namespace xymark {

std::vector<double> derivative(const std::vector<double>& x, double dt) {
    const std::size_t n = x.size();
    std::vector<double> dx(n, 0.0);
    if (n < 2) return dx;
    if (n == 2) {
        dx[0] = dx[1] = (x[1] - x[0]) / dt;
        return dx;
    }
    dx[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * dt);
    dx[n - 1] = (3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * dt);
    for (std::size_t i = 1; i + 1 < n; ++i) dx[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    return dx;
}

std::vector<double> unwrapped_phase(const std::vector<cplx>& z) {
    std::vector<double> phase(z.size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
        phase[i] = (i == 0) ? std::arg(z[0]) : phase[i - 1] + std::arg(z[i] * std::conj(z[i - 1]));
    }
    return phase;
}

}  // namespace xymark
