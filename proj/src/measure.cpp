#include "afy/measure.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "afy/errors.hpp"
#include "afy/rng.hpp"

namespace afy {

double rectangle_mass(double x1, double x2, double y1, double y2) {
    if (!(x1 < x2) || !(y1 < y2))
        throw DomainError("rectangle_mass: the box must have positive extent");
    if (y2 >= x1)
        throw DivergentIntegralError("rectangle_mass: the box touches the diagonal y = x");
    double mass = std::log((x2 - y2) / (x1 - y2));
    if (!std::isinf(y1)) mass -= std::log((x2 - y1) / (x1 - y1));
    return mass;
}

namespace {

struct StratumSum {
    double mean = 0;
    double variance = 0;  // of the sample mean
};

// Plain Monte Carlo average of f over [a1,a2] x [b1,b2].
template <typename F>
StratumSum mc_average(SplitRng& rng, double a1, double a2, double b1, double b2,
                      std::size_t n, F&& f) {
    double sum = 0, sum_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = a1 + (a2 - a1) * rng.next_unit();
        double b = b1 + (b2 - b1) * rng.next_unit();
        double v = f(a, b);
        sum += v;
        sum_sq += v * v;
    }
    StratumSum s;
    s.mean = sum / double(n);
    s.variance = (sum_sq / double(n) - s.mean * s.mean) / double(n);
    if (s.variance < 0) s.variance = 0;
    return s;
}

}  // namespace

MeasureEstimate measure_estimate(const ExactReal& alpha, const PlanarRegion& region,
                                 std::size_t n_samples, std::uint64_t seed) {
    if (alpha.sign() <= 0 || alpha > ExactReal(1L))
        throw DomainError("measure_estimate: alpha must lie in (0, 1]");
    if (n_samples == 0)
        throw DomainError("measure_estimate: n_samples must be positive");
    const BoundingBox& b = region.box;
    if (!(b.x1 < b.x2) || !(b.y1 < b.y2))
        throw DomainError("measure_estimate: the box must have positive extent");
    if (b.y2 >= b.x1)
        throw DivergentIntegralError("measure_estimate: the box touches the diagonal y = x");

    // The tail y <= -1 becomes a bounded integral over u = -1/y; anything
    // above -1 keeps the plain kernel.
    double direct_lo = std::max(b.y1, -1.0);
    bool have_direct = direct_lo < b.y2;
    double tail_hi = std::min(b.y2, -1.0);
    bool have_tail = b.y1 < tail_hi;
    double u_lo = std::isinf(b.y1) ? 0.0 : -1.0 / b.y1;
    double u_hi = -1.0 / tail_hi;

    SplitRng rng(seed, 0xE5);
    std::size_t n_tail = have_direct && have_tail ? n_samples / 2 : n_samples;
    std::size_t n_direct = have_direct ? n_samples - (have_tail ? n_tail : 0) : 0;

    MeasureEstimate est;
    double variance = 0;
    if (have_tail) {
        double area = (b.x2 - b.x1) * (u_hi - u_lo);
        StratumSum s = mc_average(rng, b.x1, b.x2, u_lo, u_hi, n_tail,
                                  [&](double x, double u) {
                                      double y = u == 0
                                          ? -std::numeric_limits<double>::infinity()
                                          : -1.0 / u;
                                      if (!region.contains(x, y)) return 0.0;
                                      double den = 1.0 + u * x;
                                      return 1.0 / (den * den);
                                  });
        est.value += area * s.mean;
        variance += area * area * s.variance;
    }
    if (have_direct) {
        double area = (b.x2 - b.x1) * (b.y2 - direct_lo);
        StratumSum s = mc_average(rng, b.x1, b.x2, direct_lo, b.y2, n_direct,
                                  [&](double x, double y) {
                                      if (!region.contains(x, y)) return 0.0;
                                      double den = x - y;
                                      return 1.0 / (den * den);
                                  });
        est.value += area * s.mean;
        variance += area * area * s.variance;
    }
    est.std_error = std::sqrt(variance);
    return est;
}

double cloud_mass(const DomainCloud& cloud, double resolution) {
    if (resolution <= 0) throw DomainError("cloud_mass: resolution must be positive");
    std::set<std::pair<long, long>> cells;
    for (const TaggedPlanarPoint& tp : cloud.points) {
        auto [x, u] = chart_xy(tp.point);
        if (!std::isfinite(x) || !std::isfinite(u)) continue;
        cells.insert({static_cast<long>(std::floor(x / resolution)),
                      static_cast<long>(std::floor(u / resolution))});
    }
    double total = 0;
    for (const auto& [ix, iu] : cells) {
        double x1 = double(ix) * resolution;
        double u1 = double(iu) * resolution;
        double u2 = u1 + resolution;
        double y1 = u1 <= 0 ? -std::numeric_limits<double>::infinity() : -1.0 / u1;
        double y2 = -1.0 / u2;
        total += rectangle_mass(x1, x1 + resolution, y1, y2);
    }
    return total;
}

}  // namespace afy
