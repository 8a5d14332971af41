// analytic.cpp — Resolvent quadrature and bound states of the infinite chain

#include "xymark/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace xymark {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

void require_supported(const SystemSpec& spec) {
    spec.validate();
    if (!spec.center_coupled() && !spec.edge_coupled()) {
        throw CapabilityError("infinite-chain resolvent needs center or edge coupling");
    }
}

bool is_center(const SystemSpec& spec) { return spec.center_coupled() && !spec.edge_coupled(); }

// Panel [lo, hi] with Kronrod nodes and the values of the smooth part of the integrand.
struct Panel {
    double lo, hi;
    std::vector<double> x;
    std::vector<double> w;
    std::vector<cplx> f;
};

// Nodes of the 15-point rule on [lo, hi], with the embedded 7-point Gauss weights (zero off the Gauss nodes).
void panel_rule(double lo, double hi, std::vector<double>& x, std::vector<double>& wk, std::vector<double>& wg) {
    const auto& ak = GK::abscissa();
    const auto& wkr = GK::weights();
    const auto& wgr = boost::math::quadrature::gauss<double, 7>::weights();
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    x.clear();
    wk.clear();
    wg.clear();
    for (int s : {-1, 1}) {
        for (std::size_t i = 0; i < ak.size(); ++i) {
            if (ak[i] == 0.0 && s == 1) continue;
            x.push_back(mid + s * half * ak[i]);
            wk.push_back(half * wkr[i]);
            // Gauss nodes are the even-indexed Kronrod abscissae.
            wg.push_back(i % 2 == 0 ? half * wgr[i / 2] : 0.0);
        }
    }
}

}  // namespace

ResolventPoint self_energy(cplx z, const SystemSpec& spec) {
    require_supported(spec);
    const double J = spec.J;
    const cplx w = z - 2.0 * spec.h;
    const cplx root = std::sqrt(w - 2.0 * J) * std::sqrt(w + 2.0 * J);
    ResolventPoint p;
    p.z = z;
    const double edge_gap = std::min(std::abs(w - 2.0 * J), std::abs(w + 2.0 * J));
    p.branch_point = edge_gap < 1e-14 * J;
    const double O2 = spec.Omega * spec.Omega;
    if (p.branch_point) {
        p.sigma = is_center(spec) ? cplx(std::copysign(std::numeric_limits<double>::infinity(), w.real()), 0.0)
                                  : O2 * w / (2.0 * J * J);
    } else if (is_center(spec)) {
        p.sigma = O2 / root;
    } else {
        p.sigma = O2 / (2.0 * J * J) * (w - root);
    }
    p.G = 1.0 / (z - spec.Delta - p.sigma);
    return p;
}

TdlAmplitude vacuum_amplitude_tdl(const SystemSpec& spec, const TimeGrid& grid, double eta) {
    require_supported(spec);
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
    const double J = spec.J;
    const double center = 2.0 * spec.h;

    // On the line z = E + i eta, C(t) = e^{-i Delta t} + (i / 2 pi) e^{eta t} int dE F(E) e^{-iEt}
    // with F = G(z) - 1 / (z - Delta), which falls off as 1/E^3.
    auto F = [&](double E) {
        const cplx z(E, eta);
        return self_energy(z, spec).G - 1.0 / (z - spec.Delta);
    };

    const double scale = std::max({J, std::abs(spec.Delta - center), spec.Omega});
    const double cutoff = 400.0 * scale;
    std::vector<double> breaks{center - cutoff, center - 2.0 * J, center + 2.0 * J, center + cutoff, spec.Delta};
    for (const auto& b : bound_states(spec)) breaks.push_back(b.energy);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double e) { return e < center - cutoff || e > center + cutoff; }),
                 breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                 breaks.end());

    // Adaptive refinement on the smooth factor, then a width cap for the oscillation at t_fin.
    const double tol = 1e-9;
    const std::size_t max_panels = 200000;
    std::vector<std::pair<double, double>> todo, done;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) todo.emplace_back(breaks[i], breaks[i + 1]);
    std::vector<double> x, wk, wg;
    while (!todo.empty()) {
        const auto [lo, hi] = todo.back();
        todo.pop_back();
        panel_rule(lo, hi, x, wk, wg);
        cplx ik = 0.0, ig = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const cplx v = F(x[i]);
            ik += wk[i] * v;
            ig += wg[i] * v;
        }
        const double err = std::abs(ik - ig);
        if (err > tol * (hi - lo) / (2.0 * cutoff) + 1e-15 && hi - lo > 1e-9 * J) {
            const double mid = 0.5 * (lo + hi);
            todo.emplace_back(lo, mid);
            todo.emplace_back(mid, hi);
        } else {
            done.emplace_back(lo, hi);
        }
        if (done.size() + todo.size() > max_panels) {
            std::ostringstream os;
            os << "resolvent quadrature did not converge: " << done.size() << " panels accepted, " << todo.size()
               << " pending, last panel [" << lo << ", " << hi << "] error " << err;
            throw std::runtime_error(os.str());
        }
    }
    const double width_cap = 2.0 / std::max(grid.t_fin(), 1.0 / J);
    std::vector<Panel> panels;
    std::sort(done.begin(), done.end());
    for (const auto& [lo, hi] : done) {
        const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / width_cap)));
        for (int p = 0; p < pieces; ++p) {
            Panel pn;
            pn.lo = lo + (hi - lo) * p / pieces;
            pn.hi = lo + (hi - lo) * (p + 1) / pieces;
            panel_rule(pn.lo, pn.hi, pn.x, pn.w, wg);
            for (double e : pn.x) pn.f.push_back(F(e));
            panels.push_back(std::move(pn));
        }
    }

    TdlAmplitude out;
    out.eta = eta;
    out.panels = panels.size();
    out.cutoff = cutoff;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double t = grid.t(n);
        cplx sum = 0.0;
        for (const auto& pn : panels) {
            cplx part = 0.0;
            for (std::size_t i = 0; i < pn.x.size(); ++i) part += pn.w[i] * pn.f[i] * std::exp(cplx(0.0, -pn.x[i] * t));
            sum += part;
        }
        out.t.push_back(t);
        out.C.push_back(std::exp(cplx(0.0, -spec.Delta * t)) + kI / (2.0 * kPi) * std::exp(eta * t) * sum);
    }
    return out;
}

ChannelTrajectory analytic_vacuum_channel(const SystemSpec& spec, const TimeGrid& grid, double eta) {
    const auto amp = vacuum_amplitude_tdl(spec, grid, eta);
    ChannelTrajectory tr;
    tr.dt = grid.dt;
    tr.engine = "analytic";
    tr.echo_horizon = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < grid.size(); ++n) tr.samples.push_back({amp.t[n], std::norm(amp.C[n]), 0.0, amp.C[n]});
    return tr;
}

std::vector<BoundState> bound_states(const SystemSpec& spec) {
    require_supported(spec);
    const double J = spec.J;
    const double center = 2.0 * spec.h;
    auto f = [&](double z) { return z - spec.Delta - self_energy(cplx(z, 0.0), spec).sigma.real(); };
    std::vector<BoundState> out;
    if (spec.Omega == 0.0) return out;
    const double reach = std::abs(spec.Delta - center) + 2.0 * J + spec.Omega * spec.Omega / J + spec.Omega + J;
    for (bool upper : {false, true}) {
        const double sgn = upper ? 1.0 : -1.0;
        // Just outside the edge the center-coupled self-energy diverges with the side's sign.
        const double edge = center + sgn * 2.0 * J;
        double near = std::nextafter(edge, sgn * std::numeric_limits<double>::infinity());
        double far = center + sgn * (2.0 * J + reach);
        double fn = f(near);
        const double ff = f(far);
        if (fn * ff > 0.0) {
            // Weak center coupling can leave the root closer to the edge than one ulp.
            if (is_center(spec)) out.push_back({near, upper});
            continue;
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (near + far);
            const double fm = f(mid);
            if (fm == 0.0) {
                near = far = mid;
                break;
            }
            if ((fm > 0.0) == (fn > 0.0)) {
                near = mid;
                fn = fm;
            } else {
                far = mid;
            }
            if (std::abs(far - near) < 1e-15 * std::max(1.0, std::abs(mid))) break;
        }
        out.push_back({0.5 * (near + far), upper});
    }
    return out;
}

double FrequencyLedger::line(const std::string& label) const {
    for (const auto& l : lines)
        if (l.label == label) return l.value;
    throw std::out_of_range("no line " + label);
}

double FrequencyLedger::beat(const std::string& a, const std::string& b) const {
    for (const auto& x : beats)
        if ((x.first == a && x.second == b) || (x.first == b && x.second == a)) return x.value;
    throw std::out_of_range("no beat " + a + "/" + b);
}

FrequencyLedger contribution_frequencies(const SystemSpec& spec) {
    FrequencyLedger led;
    const double center = 2.0 * spec.h;
    led.lines.push_back({"nu_r", spec.Delta});
    led.lines.push_back({"nu_e+", center + 2.0 * spec.J});
    led.lines.push_back({"nu_e-", center - 2.0 * spec.J});
    for (const auto& b : bound_states(spec)) led.lines.push_back({b.upper ? "nu_b+" : "nu_b-", b.energy});
    for (std::size_t i = 0; i < led.lines.size(); ++i)
        for (std::size_t j = i + 1; j < led.lines.size(); ++j)
            led.beats.push_back({led.lines[i].label, led.lines[j].label,
                                 std::abs(led.lines[i].value - led.lines[j].value)});
    return led;
}

}  // namespace xymark
