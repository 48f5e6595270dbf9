#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sdg/parallel.hpp"
#include "sdg/problems.hpp"
#include "sdg/schemes.hpp"
#include "sdg/types.hpp"

namespace sdg {

/// Amplification factor of one configured step on u' = lambda u over [0, 1]:
/// the endpoint value with u(0) = 1, dt = 1. Failed or non-finite solves are
/// reported as an infinite factor (unstable point).
inline Complex scheme_amplification(const SchemeConfig& config, Complex lambda) {
    const auto problem = make_dahlquist<Complex>(lambda);
    try {
        StateVec<Complex> u0(1);
        u0[0] = Complex(1.0);
        const auto [endpoint, state] = step(problem, config, u0, 0.0, 1.0);
        const Complex am = endpoint[0];
        if (!std::isfinite(std::abs(am)))
            return Complex(std::numeric_limits<double>::infinity(), 0.0);
        return am;
    } catch (const NewtonFailure&) {
        return Complex(std::numeric_limits<double>::infinity(), 0.0);
    }
}

/// Raster of |Am(lambda)| over a rectangle in the complex plane.
/// values[iy * nx + ix] holds the point re_i + i*im_j with both coordinates
/// ascending in their index.
struct RegionScan {
    double re_min = -15.0, re_max = 5.0;
    double im_min = -15.0, im_max = 15.0;
    int nx = 600, ny = 600;
    double threshold = 1.0;
    std::vector<double> values;

    double re_at(int ix) const { return re_min + ix * (re_max - re_min) / (nx - 1); }
    double im_at(int iy) const { return im_min + iy * (im_max - im_min) / (ny - 1); }
    double value(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
    bool stable(int ix, int iy) const { return value(ix, iy) <= threshold; }
    long stable_cells() const {
        long count = 0;
        for (double v : values)
            if (v <= threshold) ++count;
        return count;
    }
};

/// Evaluate |Am| on the grid; points are independent and may run on several
/// threads, results are keyed by grid index.
inline RegionScan region_scan(const SchemeConfig& config, double re_min, double re_max,
                              double im_min, double im_max, int nx, int ny, unsigned jobs = 0) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("region_scan: resolution must be >= 2x2");
    RegionScan scan;
    scan.re_min = re_min;
    scan.re_max = re_max;
    scan.im_min = im_min;
    scan.im_max = im_max;
    scan.nx = nx;
    scan.ny = ny;
    scan.values.resize(static_cast<std::size_t>(nx) * ny);
    operators(config.degree);  // build the shared tables before spawning
    parallel_for(static_cast<std::size_t>(ny), jobs, [&](std::size_t iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Complex lambda(scan.re_at(ix), scan.im_at(static_cast<int>(iy)));
            scan.values[iy * nx + ix] = std::abs(scheme_amplification(config, lambda));
        }
    });
    return scan;
}

struct StabilityProbe {
    double max_abs = 0.0;
    Complex worst{0.0, 0.0};
    bool pass = false;  ///< max |Am| <= 1 + 1e-8 over the sample set
};

/// Left-half-plane sample battery: the imaginary axis with log-spaced |y| up
/// to 1e4, plus log-spaced rays into the left half-plane with |lambda| up to 1e6.
inline std::vector<Complex> default_probe_samples() {
    std::vector<Complex> samples;
    samples.emplace_back(0.0, 0.0);
    const int n_axis = 61;
    for (int i = 0; i < n_axis; ++i) {
        const double y = std::pow(10.0, -3.0 + 7.0 * i / (n_axis - 1));
        samples.emplace_back(0.0, y);
        samples.emplace_back(0.0, -y);
    }
    const double pi = std::acos(-1.0);
    const double angles_deg[] = {91.0, 105.0, 120.0, 135.0, 150.0, 165.0, 180.0,
                                 195.0, 210.0, 225.0, 240.0, 255.0, 269.0};
    const int n_ray = 46;
    for (double deg : angles_deg) {
        const double a = deg * pi / 180.0;
        for (int i = 0; i < n_ray; ++i) {
            const double r = std::pow(10.0, -3.0 + 9.0 * i / (n_ray - 1));
            samples.emplace_back(r * std::cos(a), r * std::sin(a));
        }
    }
    return samples;
}

inline StabilityProbe a_stability_probe(const SchemeConfig& config,
                                        const std::vector<Complex>& samples = default_probe_samples(),
                                        unsigned jobs = 0) {
    std::vector<double> mags(samples.size());
    operators(config.degree);
    parallel_for(samples.size(), jobs,
                 [&](std::size_t i) { mags[i] = std::abs(scheme_amplification(config, samples[i])); });
    StabilityProbe probe;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (mags[i] > probe.max_abs) {
            probe.max_abs = mags[i];
            probe.worst = samples[i];
        }
    }
    probe.pass = probe.max_abs <= 1.0 + 1e-8;
    return probe;
}

}  // namespace sdg
