#pragma once

#include <cstdint>
#include <functional>

#include "afy/exact_real.hpp"
#include "afy/natural_ext.hpp"

namespace afy {

// Mass of an axis-parallel rectangle under dx dy / (x-y)^2, in closed
// form.  y1 may be -infinity, in which case its term vanishes.  Boxes
// meeting the diagonal y = x carry infinite mass and are rejected.
double rectangle_mass(double x1, double x2, double y1, double y2);

struct BoundingBox {
    double x1 = 0;
    double x2 = 1;
    double y1 = 0;  // may be -infinity
    double y2 = 1;
};

// A region given by an indicator inside a finite-mass bounding box.  The
// indicator sees y = -infinity as an actual infinite double.
struct PlanarRegion {
    BoundingBox box;
    std::function<bool(double x, double y)> contains;
};

struct MeasureEstimate {
    double value = 0;
    double std_error = 0;
};

// Monte Carlo estimate of the kernel mass of the region.  The unbounded
// tail y <= -1 is sampled through u = -1/y, which turns the kernel into
// the bounded density 1/(1+ux)^2; the remaining strip is sampled directly.
MeasureEstimate measure_estimate(const ExactReal& alpha, const PlanarRegion& region,
                                 std::size_t n_samples, std::uint64_t seed);

// Grid-occupancy mass of a cloud: bin points in the (x, -1/y) chart at the
// given resolution and add up the exact kernel mass of occupied cells.
// Meant for domains whose points satisfy y <= -1.
double cloud_mass(const DomainCloud& cloud, double resolution);

}  // namespace afy
