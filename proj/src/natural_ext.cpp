#include "afy/natural_ext.hpp"

#include <cmath>
#include <map>
#include <string>

#include "afy/errors.hpp"
#include "afy/rng.hpp"

namespace afy {

namespace {

const ExactReal kZero(0L);
const ExactReal kOne(1L);
const ExactReal kHalf = ExactReal::rational(1, 2);
const ExactReal kMinusHalf = ExactReal::rational(-1, 2);

void check_alpha(const ExactReal& alpha) {
    if (alpha.sign() <= 0 || alpha > kOne)
        throw DomainError("alpha must lie in (0, 1]");
}

void check_interval_x(const ExactReal& alpha, const ExactReal& x, const char* who) {
    if (compare_numeric(x, alpha - kOne) < 0 || compare_numeric(x, alpha) >= 0)
        throw DomainError(std::string(who) + ": x outside [alpha-1, alpha)");
}

void check_past(const ExtendedValue& y, const char* who) {
    if (!y.is_neg_infinity() && y.finite().sign() > 0)
        throw DomainError(std::string(who) + ": the past coordinate must be <= 0");
}

mpz_class digit_of(const ExactReal& alpha, const ExactReal& x) {
    return (x.abs().reciprocal() + kOne - alpha).floor();
}

PlanarPoint apply_both(const MobiusMatrix& m, const PlanarPoint& p) {
    return {mobius_apply(m, p.x), mobius_apply(m, p.y)};
}

}  // namespace

PlanarPoint ghat_star_step(const ExactReal& alpha, const PlanarPoint& p) {
    check_alpha(alpha);
    if (p.x.is_zero()) throw DomainError("ghat_star_step: x = 0 has no digit");
    check_interval_x(alpha, p.x, "ghat_star_step");
    if (!p.y.is_neg_infinity() && p.y.finite().is_zero())
        throw PoleError("ghat_star_step: y = 0 is a pole");
    mpz_class b = digit_of(alpha, p.x);
    MobiusMatrix m = p.x.sign() < 0 ? MobiusMatrix{-b, -1, 1, 0} : MobiusMatrix{-b, 1, 1, 0};
    return apply_both(m, p);
}

PlanarPoint fhat_alpha_step(const ExactReal& alpha, const PlanarPoint& p) {
    check_alpha(alpha);
    if (compare_numeric(p.x, alpha - kOne) < 0 ||
        compare_numeric(p.x, alpha.reciprocal()) > 0)
        throw DomainError("fhat_alpha_step: x outside [alpha-1, 1/alpha]");
    check_past(p.y, "fhat_alpha_step");
    MobiusMatrix m;
    if (p.x.sign() < 0)
        m = MobiusMatrix{-1, 0, 1, 1};
    else if (compare_numeric(p.x, (kOne + alpha).reciprocal()) < 0)
        m = MobiusMatrix{1, 0, -1, 1};
    else
        m = MobiusMatrix{-1, 1, 1, 0};
    return apply_both(m, p);
}

PlanarPoint fhat_flat_step(const ExactReal& alpha, const PlanarPoint& p) {
    check_alpha(alpha);
    if (compare_numeric(p.x, alpha - kOne) < 0 || p.x > kOne)
        throw DomainError("fhat_flat_step: x outside [alpha-1, 1]");
    check_past(p.y, "fhat_flat_step");
    MobiusMatrix m;
    if (p.x < kMinusHalf)
        m = MobiusMatrix{-2, -1, 1, 0};
    else if (p.x.sign() < 0)
        m = MobiusMatrix{-1, 0, 1, 1};
    else if (p.x < kHalf)
        m = MobiusMatrix{1, 0, -1, 1};
    else if (compare_numeric(p.x, (kOne + alpha).reciprocal()) <= 0)
        m = MobiusMatrix{-2, 1, 1, 0};
    else
        m = MobiusMatrix{-1, 1, 1, 0};
    return apply_both(m, p);
}

CylinderRegion classify_cylinder(const ExactReal& alpha, const PlanarPoint& p) {
    check_alpha(alpha);
    if (p.x.is_zero()) throw DomainError("classify_cylinder: x = 0 lies in no slab");
    check_interval_x(alpha, p.x, "classify_cylinder");
    CylinderRegion r;
    r.sign = p.x.sign() > 0 ? 1 : -1;
    // closed-left slabs: the digit formula keeps boundary points with the
    // branch that actually maps them
    r.k = digit_of(alpha, p.x);
    return r;
}

TaggedPlanarPoint psi_forward(const TaggedPlanarPoint& p) {
    if (p.tag.kind == RegionKind::D1) {
        const MobiusMatrix down{1, -1, 0, 1};
        return {apply_both(down, p.point), {RegionKind::VFlatMinus, 0}};
    }
    if (p.tag.kind == RegionKind::D2)
        return {p.point, {RegionKind::VFlatPlus, 0}};
    throw TagError("psi_forward: the point must be tagged D1 or D2");
}

TaggedPlanarPoint psi_inverse(const TaggedPlanarPoint& p) {
    if (p.tag.kind == RegionKind::VFlatMinus) {
        const MobiusMatrix up{1, 1, 0, 1};
        return {apply_both(up, p.point), {RegionKind::D1, 0}};
    }
    if (p.tag.kind == RegionKind::VFlatPlus)
        return {p.point, {RegionKind::D2, 0}};
    throw TagError("psi_inverse: the point must be tagged VFlatMinus or VFlatPlus");
}

namespace {

ExactReal coordinate_gap(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.is_neg_infinity() || b.is_neg_infinity())
        return a == b ? ExactReal(0L) : ExactReal(1L);  // one side escaped: unit gap
    return (a.finite() - b.finite()).abs();
}

}  // namespace

ExactReal conjugacy_residual(const ExactReal& alpha, const TaggedPlanarPoint& p) {
    if (p.tag.kind != RegionKind::D1 && p.tag.kind != RegionKind::D2)
        throw TagError("conjugacy_residual: the point must be tagged D1 or D2");
    PlanarPoint moved = fhat_flat_step(alpha, psi_forward(p).point);
    RegionKind side =
        moved.x.sign() < 0 ? RegionKind::VFlatMinus : RegionKind::VFlatPlus;
    PlanarPoint back = psi_inverse({moved, {side, 0}}).point;
    PlanarPoint direct = fhat_alpha_step(kOne, p.point);
    ExactReal dx = (back.x - direct.x).abs();
    ExactReal dy = coordinate_gap(back.y, direct.y);
    return compare_numeric(dx, dy) >= 0 ? dx : dy;
}

ExactReal density_ratio(const MobiusMatrix& m, const ExactReal& x, const ExactReal& y) {
    if (m.det() == 0) throw DomainError("density_ratio: the matrix is singular");
    if (compare_numeric(x, y) == 0) throw DomainError("density_ratio: x = y");
    ExactReal xp = mobius_apply(m, x);
    ExactReal yp = mobius_apply(m, y);
    ExactReal denx = ExactReal(m.a21) * x + ExactReal(m.a22);
    ExactReal deny = ExactReal(m.a21) * y + ExactReal(m.a22);
    ExactReal det(m.det());
    ExactReal jx = det / (denx * denx);
    ExactReal jy = det / (deny * deny);
    ExactReal gap = x - y;
    ExactReal gap_after = xp - yp;
    return jx * jy * gap * gap / (gap_after * gap_after);
}

namespace {

// Fresh segment seed: a 256-bit rational drawn uniformly from [-1, 1) and
// accepted once it falls inside [alpha-1, alpha).  The huge denominator
// keeps the exact orbit alive for a couple hundred digits.
ExactReal random_start(SplitRng& rng, const ExactReal& alpha) {
    static const mpz_class half = mpz_class(1) << 256;
    while (true) {
        mpz_class num = rng.next_mpz(257) - half;
        if (num == 0) continue;
        ExactReal x = ExactReal::rational(num, half);
        if (compare_numeric(x, alpha - kOne) >= 0 && compare_numeric(x, alpha) < 0)
            return x;
    }
}

// Six digit steps of unrecorded history, so the past coordinate has
// settled onto the invariant domain before any point is kept.
bool warm_up(const ExactReal& alpha, PlanarPoint& cur) {
    for (int i = 0; i < 6; ++i) {
        if (cur.x.is_zero()) return false;
        cur = ghat_star_step(alpha, cur);
    }
    return !cur.x.is_zero();
}

void grow_omega_segment(const ExactReal& alpha, std::size_t cap, std::size_t n,
                        SplitRng& rng, std::vector<TaggedPlanarPoint>& out) {
    PlanarPoint cur{random_start(rng, alpha), ExtendedValue()};
    if (!warm_up(alpha, cur)) return;
    for (std::size_t i = 0; i < cap && out.size() < n; ++i) {
        if (cur.x.is_zero()) break;
        out.push_back({cur, {RegionKind::OmegaStar, 0}});
        cur = ghat_star_step(alpha, cur);
    }
}

void grow_v_segment(const ExactReal& alpha, std::size_t cap, std::size_t n,
                    SplitRng& rng, std::vector<TaggedPlanarPoint>& out) {
    PlanarPoint cur{random_start(rng, alpha), ExtendedValue()};
    if (!warm_up(alpha, cur)) return;
    std::size_t steps = 0;
    while (steps < cap && out.size() < n) {
        if (cur.x.is_zero()) break;
        mpz_class a = digit_of(alpha, cur.x);
        for (mpz_class l = 0; l < a && steps < cap && out.size() < n; ++l) {
            RegionTag tag = l == 0 ? RegionTag{RegionKind::OmegaStar, 0}
                                   : RegionTag{RegionKind::UpsilonInv, a - l};
            out.push_back({cur, tag});
            cur = fhat_alpha_step(alpha, cur);
            ++steps;
        }
    }
}

void grow_flat_segment(const ExactReal& alpha, std::size_t cap, std::size_t n,
                       SplitRng& rng, std::vector<TaggedPlanarPoint>& out) {
    PlanarPoint cur{random_start(rng, alpha), ExtendedValue()};
    if (!warm_up(alpha, cur)) return;
    for (std::size_t i = 0; i < cap && out.size() < n; ++i) {
        if (cur.x.is_zero()) break;
        RegionKind side =
            cur.x.sign() < 0 ? RegionKind::VFlatMinus : RegionKind::VFlatPlus;
        out.push_back({cur, {side, 0}});
        cur = fhat_flat_step(alpha, cur);
    }
}

}  // namespace

DomainCloud sample_domain(const ExactReal& alpha, PlanarSystem system,
                          std::size_t n_points, std::uint64_t seed) {
    check_alpha(alpha);
    if (n_points == 0) throw DomainError("sample_domain: n_points must be positive");
    DomainCloud cloud{alpha, system, {}, seed, 512};
    cloud.points.reserve(n_points);
    SplitRng rng(seed, 0xD0);
    while (cloud.points.size() < n_points) {
        switch (system) {
            case PlanarSystem::OmegaStar:
                grow_omega_segment(alpha, cloud.orbit_length, n_points, rng, cloud.points);
                break;
            case PlanarSystem::V:
                grow_v_segment(alpha, cloud.orbit_length, n_points, rng, cloud.points);
                break;
            case PlanarSystem::VFlat:
                grow_flat_segment(alpha, cloud.orbit_length, n_points, rng, cloud.points);
                break;
        }
    }
    return cloud;
}

Flat1State flat1_start(const ExactReal& alpha, const ExactReal& x0) {
    PlanarPoint p{x0, ExtendedValue()};
    return {p, classify_cylinder(alpha, p)};
}

namespace {

CylinderRegion region_after(const ExactReal& alpha, const PlanarPoint& q) {
    if (q.x.is_zero()) return CylinderRegion{0, 0, CylinderRole::OmegaStarCyl, 0};
    return classify_cylinder(alpha, q);
}

}  // namespace

Flat1State flat1_step(const ExactReal& alpha, const Flat1State& p) {
    check_alpha(alpha);
    if (p.point.x.is_zero())
        throw TerminatedOrbitError("flat1_step: the orbit already ended at x = 0");
    if (p.region.role == CylinderRole::OmegaHatShifted) {
        if (p.point.x.sign() <= 0 || p.point.x > kOne)
            throw TagError("flat1_step: a shifted-slab point must have x in (0, 1]");
        mpz_class s = p.region.k - 1;
        MobiusMatrix m{-s, 1, 1, 0};
        PlanarPoint q = apply_both(m, p.point);
        return {q, region_after(alpha, q)};
    }
    if (p.region.role != CylinderRole::OmegaStarCyl)
        throw TagError("flat1_step: the state must sit in a slab or a shifted slab");
    CylinderRegion here = classify_cylinder(alpha, p.point);
    if (here.sign != p.region.sign || here.k != p.region.k)
        throw TagError("flat1_step: the slab tag does not match the point");
    if (p.region.sign > 0) {
        PlanarPoint q = ghat_star_step(alpha, p.point);
        return {q, region_after(alpha, q)};
    }
    if (p.region.k == 2 && p.point.x < kMinusHalf) {
        PlanarPoint q = ghat_star_step(alpha, p.point);
        return {q, region_after(alpha, q)};
    }
    MobiusMatrix m{-1, 0, 1, 1};
    PlanarPoint q = apply_both(m, p.point);
    CylinderRegion r = p.region;
    // The shifted index is the expansion digit, which exceeds the slab
    // label by one when x sits exactly on the slab's inner edge.
    r.k = digit_of(alpha, p.point.x);
    r.role = CylinderRole::OmegaHatShifted;
    r.shift = 1;
    return {q, r};
}

bool in_flat2_domain(const Flat1State& p) {
    if (p.point.x.is_zero()) return false;
    if (p.region.role == CylinderRole::OmegaHatShifted) return true;
    if (p.point.x.sign() > 0) return true;
    if (p.point.y.is_neg_infinity()) return true;
    return compare_numeric(p.point.y.finite(), ExactReal(-2L)) <= 0;
}

ReturnStep flat2_step(const ExactReal& alpha, const Flat1State& p) {
    if (!in_flat2_domain(p))
        throw DomainError("flat2_step: the state must start in the second-return set");
    Flat1State cur = p;
    for (std::size_t t = 1; t <= (std::size_t{1} << 20); ++t) {
        cur = flat1_step(alpha, cur);
        if (in_flat2_domain(cur)) return {cur, t};
    }
    throw IndexError("flat2_step: no return within 2^20 steps");
}

std::pair<double, double> chart_xy(const PlanarPoint& p) {
    double x = p.x.to_double();
    double u = p.y.is_neg_infinity() ? 0.0 : -1.0 / p.y.finite().to_double();
    return {x, u};
}

std::size_t component_count(const DomainCloud& cloud, double resolution, double eps) {
    if (resolution <= 0 || eps <= 0)
        throw DomainError("component_count: resolution and eps must be positive");
    std::map<std::pair<long, long>, std::size_t> cell_ids;
    for (const TaggedPlanarPoint& tp : cloud.points) {
        auto [x, u] = chart_xy(tp.point);
        if (!std::isfinite(x) || !std::isfinite(u)) continue;
        std::pair<long, long> cell{static_cast<long>(std::floor(x / resolution)),
                                   static_cast<long>(std::floor(u / resolution))};
        cell_ids.emplace(cell, cell_ids.size());
    }

    std::vector<std::size_t> parent(cell_ids.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };

    // Two cells are linked when their centres lie within eps.
    long reach = static_cast<long>(std::floor(eps / resolution));
    for (const auto& [cell, id] : cell_ids) {
        for (long di = -reach; di <= reach; ++di) {
            for (long dj = -reach; dj <= reach; ++dj) {
                if (di == 0 && dj == 0) continue;
                double d = resolution * std::sqrt(double(di * di + dj * dj));
                if (d > eps) continue;
                auto it = cell_ids.find({cell.first + di, cell.second + dj});
                if (it == cell_ids.end()) continue;
                parent[find(id)] = find(it->second);
            }
        }
    }

    std::size_t components = 0;
    for (std::size_t i = 0; i < parent.size(); ++i)
        if (find(i) == i) ++components;
    return components;
}

}  // namespace afy
