#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "afy/exact_real.hpp"
#include "afy/mobius.hpp"

namespace afy {

// Point of a planar system: the x coordinate is the present, the y
// coordinate tracks the past and starts at -infinity before any history
// has accumulated.
struct PlanarPoint {
    ExactReal x;
    ExtendedValue y;
};

// Which piece of a planar domain a point belongs to.  The pieces have no
// usable closed-form membership test for general alpha, so orbit
// generators attach these tags and the piecewise-defined maps trust them.
//
//   OmegaStar   invariant domain of the two-sided fast map
//   UpsilonInv  transit fibre j steps before the next return to OmegaStar
//   VFlatMinus  negative-x part of the flattened planar domain
//   VFlatPlus   nonnegative-x part of the flattened planar domain
//   D1, D2      the two sheets carried by the change of coordinates psi
enum class RegionKind { OmegaStar, UpsilonInv, VFlatMinus, VFlatPlus, D1, D2 };

struct RegionTag {
    RegionKind kind = RegionKind::OmegaStar;
    mpz_class j;  // transit depth, meaningful for UpsilonInv only
};

struct TaggedPlanarPoint {
    PlanarPoint point;
    RegionTag tag;
};

// Vertical slab of the planar domain indexed by a digit value, and its
// images: OmegaStarCyl is the slab itself, OmegaHat its image under the
// fast planar map, OmegaHatShifted that image translated by -shift in
// both coordinates.
enum class CylinderRole { OmegaStarCyl, OmegaHat, OmegaHatShifted };

struct CylinderRegion {
    int sign = 1;  // +1 or -1; 0 marks an ended orbit
    mpz_class k = 2;
    CylinderRole role = CylinderRole::OmegaStarCyl;
    mpz_class shift;  // used by OmegaHatShifted only
};

enum class PlanarSystem { OmegaStar, V, VFlat };

// Deterministic sample of a planar domain: concatenated orbit segments of
// the system's map, each started from a fresh high-precision rational.
// Equal (alpha, system, n_points, seed) always reproduce the same cloud.
struct DomainCloud {
    ExactReal alpha;
    PlanarSystem system = PlanarSystem::OmegaStar;
    std::vector<TaggedPlanarPoint> points;
    std::uint64_t seed = 0;
    std::size_t orbit_length = 0;  // per-segment step budget
};

// One step of the two-sided fast planar map: both coordinates move by the
// reciprocal-and-shift of the digit read off x.  y = 0 is a pole.
PlanarPoint ghat_star_step(const ExactReal& alpha, const PlanarPoint& p);

// One step of the slow planar map: the branch selected by x acts on x and
// y simultaneously.  The top branch owns its left endpoint here, so the
// scalar slow map and this one disagree at that single abscissa.
PlanarPoint fhat_alpha_step(const ExactReal& alpha, const PlanarPoint& p);

// One step of the flattened planar map on {x <= 1}: the two steep branches
// of the slow map are replaced by their double steps, again acting on both
// coordinates at once.
PlanarPoint fhat_flat_step(const ExactReal& alpha, const PlanarPoint& p);

// Digit slab containing p: the slab index is the expansion digit of x,
// floor(1/|x| + 1 - alpha), so closed slab edges stay with the branch
// that maps them.
CylinderRegion classify_cylinder(const ExactReal& alpha, const PlanarPoint& p);

// Change of coordinates between the two sheets D1, D2 and the flattened
// domain: D1 translates down by (1,1) onto the negative-x part, D2 is the
// identity onto the nonnegative-x part.  The inverse trusts the VFlat tag.
TaggedPlanarPoint psi_forward(const TaggedPlanarPoint& p);
TaggedPlanarPoint psi_inverse(const TaggedPlanarPoint& p);

// Largest coordinate gap between chasing p around the conjugacy square
// (psi, then the flattened map at alpha, then psi back) and applying the
// alpha = 1 slow planar map directly.  Zero whenever the tag is truthful.
ExactReal conjugacy_residual(const ExactReal& alpha, const TaggedPlanarPoint& p);

// Jacobian of m at (x, y) weighted against the hyperbolic-area kernel
// 1/(x-y)^2: identically one for any unimodular m, which is the invariance
// of the kernel measure computed literally.
ExactReal density_ratio(const MobiusMatrix& m, const ExactReal& x, const ExactReal& y);

// Seeded cloud of the chosen planar system.  V and VFlat points carry the
// tags their generator maintained; OmegaStar points are tagged OmegaStar.
DomainCloud sample_domain(const ExactReal& alpha, PlanarSystem system,
                          std::size_t n_points, std::uint64_t seed);

// State of the return map to {y <= -1} of the flattened planar system:
// the point together with the slab-or-shifted-slab bookkeeping that picks
// its branch.  Stepping an ended orbit (x = 0) throws.
struct Flat1State {
    PlanarPoint point;
    CylinderRegion region;
};

Flat1State flat1_start(const ExactReal& alpha, const ExactReal& x0);
Flat1State flat1_step(const ExactReal& alpha, const Flat1State& p);

// Second-return set: shifted-slab states, any nonnegative-x state, and
// negative-x states with y <= -2.
bool in_flat2_domain(const Flat1State& p);

struct ReturnStep {
    Flat1State state;
    std::size_t time = 1;
};

// First return of flat1_step to the second-return set.
ReturnStep flat2_step(const ExactReal& alpha, const Flat1State& p);

// Chart used for geometry on clouds: (x, -1/y), sending y = -infinity to
// the segment {second coordinate 0}.
std::pair<double, double> chart_xy(const PlanarPoint& p);

// Connected components of the cloud in the chart above: points are
// deduplicated onto a square grid of the given resolution and grid cells
// within eps (single linkage) are merged.
std::size_t component_count(const DomainCloud& cloud, double resolution, double eps);

}  // namespace afy
