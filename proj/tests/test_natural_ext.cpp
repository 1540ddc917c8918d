#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "afy/alpha_cf.hpp"
#include "afy/farey.hpp"
#include "afy/measure.hpp"
#include "afy/natural_ext.hpp"
#include "afy/rng.hpp"

using namespace afy;

namespace {

const ExactReal kRoot = ExactReal::surd(-1, 1, 1, 2);  // sqrt(2) - 1

ExactReal rat(long p, long q) { return ExactReal::rational(p, q); }

PlanarPoint fresh(const ExactReal& x) { return {x, ExtendedValue()}; }

PlanarPoint at(const ExactReal& x, const ExactReal& y) { return {x, ExtendedValue(y)}; }

bool same_point(const PlanarPoint& a, const PlanarPoint& b) {
    return a.x == b.x && a.y == b.y;
}

// Rational with an odd three-digit denominator, uniform-ish in [lo, lo + len).
ExactReal random_in(SplitRng& rng, const ExactReal& lo, long num_len, long den_len) {
    mpz_class den = 2 * (rng.next_mpz(9) + 100) + 1;
    mpz_class num = rng.next_mpz(12) % (den * num_len / den_len);
    return lo + ExactReal::rational(num, den);
}

// Past coordinate below -1 with a modest odd denominator.
ExactReal random_past(SplitRng& rng) {
    mpz_class den = 2 * (rng.next_mpz(8) + 50) + 1;
    mpz_class num = rng.next_mpz(10) % (4 * den);
    return ExactReal(-1L) - ExactReal::rational(num, den);
}

std::vector<ExactReal> test_alphas() {
    return {rat(1, 10), rat(3, 10), rat(2, 5), kRoot, rat(11, 20), rat(7, 10), rat(4, 5)};
}

}  // namespace

TEST_CASE("fast planar step") {
    PlanarPoint q = ghat_star_step(ExactReal(1L), at(rat(5, 12), rat(-2, 1)));
    CHECK(q.x == rat(2, 5));
    CHECK(q.y.finite() == rat(-5, 2));

    q = ghat_star_step(rat(2, 5), at(rat(-3, 10), rat(-3, 1)));
    CHECK(q.x == rat(1, 3));
    CHECK(q.y.finite() == rat(-8, 3));

    // A fresh point has past -infinity, which one step turns into -digit.
    q = ghat_star_step(kRoot, fresh(ExactReal::surd(-2, 1, 1, 2)));
    CHECK(q.x == ExactReal::surd(-2, 1, 2, 2));
    CHECK(q.y.finite() == ExactReal(-2L));
    q = ghat_star_step(kRoot, q);
    CHECK(q.x == ExactReal::surd(-2, 1, 1, 2));
    CHECK(q.y.finite() == rat(-7, 2));

    CHECK_THROWS_AS(ghat_star_step(rat(2, 5), fresh(ExactReal(0L))), DomainError);
    CHECK_THROWS_AS(ghat_star_step(rat(2, 5), fresh(rat(2, 5))), DomainError);
    CHECK_THROWS_AS(ghat_star_step(rat(2, 5), at(rat(1, 3), ExactReal(0L))), PoleError);
    CHECK_THROWS_AS(ghat_star_step(rat(-1, 2), fresh(rat(1, 3))), DomainError);
}

TEST_CASE("slow planar step") {
    ExactReal a = rat(1, 4);
    PlanarPoint q = fhat_alpha_step(a, at(rat(-1, 2), rat(-3, 1)));
    CHECK(q.x == ExactReal(1L));
    CHECK(q.y.finite() == rat(-3, 2));

    q = fhat_alpha_step(a, at(ExactReal(2L), rat(-1, 1)));
    CHECK(q.x == rat(-1, 2));
    CHECK(q.y.finite() == rat(-2, 1));

    q = fhat_alpha_step(a, at(ExactReal(0L), rat(-3, 1)));
    CHECK(q.x.is_zero());
    CHECK(q.y.finite() == rat(-3, 4));

    // The planar top branch owns its left endpoint; the scalar slow map
    // sends that same abscissa through the middle branch instead.
    q = fhat_alpha_step(a, at(rat(4, 5), rat(-1, 1)));
    CHECK(q.x == rat(1, 4));
    CHECK(alpha_farey_step(a, rat(4, 5)) == ExactReal(4L));

    // -infinity pasts land at -1 under every branch.
    CHECK(fhat_alpha_step(rat(1, 2), fresh(rat(1, 3))).y.finite() == ExactReal(-1L));
    CHECK(fhat_alpha_step(rat(1, 2), fresh(rat(-1, 4))).y.finite() == ExactReal(-1L));
    CHECK(fhat_alpha_step(rat(1, 2), fresh(ExactReal(2L))).y.finite() == ExactReal(-1L));

    CHECK(fhat_alpha_step(rat(1, 2), at(ExactReal(2L), rat(-1, 1))).x == rat(-1, 2));
    CHECK_THROWS_AS(fhat_alpha_step(rat(1, 2), at(rat(5, 2), rat(-1, 1))), DomainError);
    CHECK_THROWS_AS(fhat_alpha_step(rat(1, 2), at(rat(1, 3), rat(1, 2))), DomainError);
}

TEST_CASE("flattened planar step") {
    ExactReal a = rat(3, 10);
    PlanarPoint q = fhat_flat_step(a, at(rat(-3, 5), rat(-3, 1)));
    CHECK(q.x == rat(-1, 3));
    CHECK(q.y.finite() == rat(-5, 3));

    q = fhat_flat_step(a, at(rat(3, 5), rat(-1, 1)));
    CHECK(q.x == rat(-1, 3));
    CHECK(q.y.finite() == rat(-3, 1));

    q = fhat_flat_step(a, at(rat(4, 5), rat(-4, 1)));
    CHECK(q.x == rat(1, 4));
    CHECK(q.y.finite() == rat(-5, 4));

    // The planar flat map keeps the branch corner in the double-step
    // branch for every alpha; the scalar flat map hands it to the top
    // branch when alpha < 1/2.
    q = fhat_flat_step(a, at(rat(10, 13), rat(-2, 1)));
    CHECK(q.x == rat(-7, 10));
    CHECK(flat_step(a, rat(10, 13)).value == rat(3, 10));
    q = fhat_flat_step(rat(7, 10), at(rat(10, 17), rat(-2, 1)));
    CHECK(q.x == rat(-3, 10));
    CHECK(flat_step(rat(7, 10), rat(10, 17)).value == rat(-3, 10));

    CHECK_THROWS_AS(fhat_flat_step(a, at(rat(11, 10), rat(-1, 1))), DomainError);
    CHECK_THROWS_AS(fhat_flat_step(a, at(rat(1, 3), rat(1, 3))), DomainError);
}

TEST_CASE("flattened planar step composes the slow one") {
    SplitRng rng(2041, 3);
    for (const ExactReal& alpha : test_alphas()) {
        ExactReal corner = (ExactReal(1L) + alpha).reciprocal();
        for (int trial = 0; trial < 60; ++trial) {
            ExactReal x = random_in(rng, alpha - ExactReal(1L), 2, 1);
            if (x > ExactReal(1L) || compare_numeric(x, corner) == 0) continue;
            PlanarPoint p = at(x, random_past(rng));
            FlatStep s = flat_step(alpha, x);
            PlanarPoint slow = fhat_alpha_step(alpha, p);
            if (s.steps == 2) slow = fhat_alpha_step(alpha, slow);
            PlanarPoint flat = fhat_flat_step(alpha, p);
            REQUIRE(same_point(flat, slow));
            REQUIRE(flat.x == s.value);
        }
    }
}

TEST_CASE("digit slabs") {
    CylinderRegion r = classify_cylinder(kRoot, fresh(rat(1, 5)));
    CHECK(r.sign == 1);
    CHECK(r.k == 5);
    CHECK(r.role == CylinderRole::OmegaStarCyl);

    r = classify_cylinder(kRoot, fresh(rat(-1, 4)));
    CHECK(r.sign == -1);
    CHECK(r.k == 4);

    CHECK_THROWS_AS(classify_cylinder(kRoot, fresh(ExactReal(0L))), DomainError);
    CHECK_THROWS_AS(classify_cylinder(kRoot, fresh(kRoot)), DomainError);

    // Slab indices agree with the first expansion digit away from slab
    // edges, negative slabs never sit below 2, and slabs that would fall
    // outside [alpha-1, alpha) never appear.
    SplitRng rng(2041, 4);
    for (const ExactReal& alpha : test_alphas()) {
        mpz_class least_plus = first_digit_of_alpha(alpha);
        for (int trial = 0; trial < 120; ++trial) {
            ExactReal x = random_in(rng, alpha - ExactReal(1L), 1, 1);
            if (x.is_zero()) continue;
            CylinderRegion c = classify_cylinder(alpha, fresh(x));
            ExactReal kr(c.k);
            if (c.sign > 0) {
                REQUIRE(c.k >= least_plus);
                REQUIRE(alpha * (kr + alpha) > ExactReal(1L));
            } else {
                REQUIRE(c.k >= 2);
                REQUIRE((kr + alpha) * (ExactReal(1L) - alpha) > ExactReal(1L));
            }
            ExactReal edge = x.abs().reciprocal() - alpha;
            if (x.sign() < 0 && edge == ExactReal(edge.floor())) continue;
            AlphaExpansion e = alpha_expand(alpha, x, 1);
            REQUIRE(c.k == e.digits[0]);
            REQUIRE(c.sign == e.eps[0]);
        }
    }
}

TEST_CASE("sheet change round trip") {
    TaggedPlanarPoint d1{at(rat(3, 4), rat(-3, 1)), {RegionKind::D1, 0}};
    TaggedPlanarPoint flat = psi_forward(d1);
    CHECK(flat.tag.kind == RegionKind::VFlatMinus);
    CHECK(flat.point.x == rat(-1, 4));
    CHECK(flat.point.y.finite() == rat(-4, 1));
    TaggedPlanarPoint back = psi_inverse(flat);
    CHECK(back.tag.kind == RegionKind::D1);
    CHECK(same_point(back.point, d1.point));

    TaggedPlanarPoint d2{at(rat(1, 3), rat(-2, 1)), {RegionKind::D2, 0}};
    flat = psi_forward(d2);
    CHECK(flat.tag.kind == RegionKind::VFlatPlus);
    CHECK(same_point(flat.point, d2.point));
    CHECK(psi_inverse(flat).tag.kind == RegionKind::D2);

    // -infinity survives the translation.
    flat = psi_forward({fresh(rat(3, 4)), {RegionKind::D1, 0}});
    CHECK(flat.point.y.is_neg_infinity());
    CHECK(psi_inverse(flat).point.y.is_neg_infinity());

    CHECK_THROWS_AS(psi_forward({fresh(rat(1, 3)), {RegionKind::OmegaStar, 0}}), TagError);
    CHECK_THROWS_AS(psi_inverse({fresh(rat(1, 3)), {RegionKind::D1, 0}}), TagError);
}

TEST_CASE("conjugacy square closes exactly") {
    ExactReal zero(0L);
    CHECK(conjugacy_residual(rat(3, 10), {at(rat(1, 3), rat(-2, 1)), {RegionKind::D2, 0}}) == zero);
    CHECK(conjugacy_residual(rat(3, 10), {at(rat(3, 5), rat(-7, 2)), {RegionKind::D2, 0}}) == zero);
    CHECK(conjugacy_residual(rat(3, 10), {at(rat(3, 4), rat(-3, 1)), {RegionKind::D1, 0}}) == zero);
    CHECK(conjugacy_residual(rat(3, 10), {at(rat(2, 5), rat(-2, 1)), {RegionKind::D1, 0}}) == zero);
    CHECK_THROWS_AS(conjugacy_residual(rat(3, 10), {fresh(rat(1, 3)), {RegionKind::OmegaStar, 0}}),
                    TagError);

    SplitRng rng(2041, 5);
    std::vector<ExactReal> alphas{rat(1, 10), rat(3, 10), rat(2, 5), kRoot};
    for (const ExactReal& alpha : alphas) {
        for (int trial = 0; trial < 250; ++trial) {
            ExactReal x = random_in(rng, ExactReal(0L), 1, 1);
            RegionKind sheet = RegionKind::D2;
            if (trial % 2 == 1) {
                // The first sheet only covers [alpha, 1).
                if (compare_numeric(x, alpha) < 0) continue;
                sheet = RegionKind::D1;
            }
            ExtendedValue y = trial % 7 == 0 ? ExtendedValue() : ExtendedValue(random_past(rng));
            TaggedPlanarPoint p{{x, y}, {sheet, 0}};
            REQUIRE(conjugacy_residual(alpha, p) == zero);
        }
    }
}

TEST_CASE("kernel measure is invariant") {
    // dx'/dx dy'/dy and (x'-y')^2/(x-y)^2 balance exactly.
    MobiusMatrix m{1, 0, -1, 1};
    ExactReal x = rat(1, 3), y = rat(-1, 1);
    ExactReal jac = (mobius_apply(m, x) - mobius_apply(m, y)) * (mobius_apply(m, x) - mobius_apply(m, y));
    CHECK(jac / ((x - y) * (x - y)) == rat(9, 16));
    CHECK(density_ratio(m, x, y) == ExactReal(1L));

    std::vector<MobiusMatrix> branches{
        {-1, 0, 1, 1}, {1, 0, -1, 1}, {-1, 1, 1, 0},   // slow branches
        {-2, -1, 1, 0}, {-2, 1, 1, 0},                 // flattened double steps
        {-2, -1, 1, 0}, {-3, -1, 1, 0}, {-2, 1, 1, 0}, // fast digit steps
        {-5, 1, 1, 0}, {-7, -1, 1, 0},
        {1, -1, 0, 1}, {1, 1, 0, 1},                   // sheet translations
        {-1, 1, 1, 0}, {-4, 1, 1, 0},                  // shifted-slab re-entries
    };
    SplitRng rng(2041, 6);
    for (const MobiusMatrix& b : branches) {
        for (int trial = 0; trial < 40; ++trial) {
            ExactReal u = random_in(rng, rat(-2, 1), 4, 1);
            ExactReal v = random_in(rng, rat(-2, 1), 4, 1);
            if (compare_numeric(u, v) == 0) continue;
            bool pole = false;
            for (const ExactReal& t : {u, v})
                if ((ExactReal(b.a21) * t + ExactReal(b.a22)).is_zero()) pole = true;
            if (pole) continue;
            REQUIRE(density_ratio(b, u, v) == ExactReal(1L));
        }
    }

    CHECK_THROWS_AS(density_ratio(m, x, x), DomainError);
    CHECK_THROWS_AS(density_ratio(MobiusMatrix{-1, 0, 1, 1}, rat(-1, 1), rat(1, 2)), PoleError);
    CHECK_THROWS_AS(density_ratio(MobiusMatrix{1, 1, 1, 1}, x, y), DomainError);

    // Surd inputs work too.
    CHECK(density_ratio(m, kRoot, ExactReal::surd(-3, 1, 1, 2)) == ExactReal(1L));
}

TEST_CASE("domain clouds are deterministic") {
    DomainCloud a = sample_domain(rat(2, 5), PlanarSystem::OmegaStar, 600, 97);
    DomainCloud b = sample_domain(rat(2, 5), PlanarSystem::OmegaStar, 600, 97);
    DomainCloud c = sample_domain(rat(2, 5), PlanarSystem::OmegaStar, 600, 98);
    REQUIRE(a.points.size() == 600);
    REQUIRE(b.points.size() == 600);
    bool all_equal = true;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if (!same_point(a.points[i].point, b.points[i].point)) all_equal = false;
    CHECK(all_equal);
    CHECK_FALSE(same_point(a.points[0].point, c.points[0].point));

    // Fast-map clouds stay inside [alpha-1, alpha) x [-inf, -1].
    ExactReal lo = rat(2, 5) - ExactReal(1L);
    for (const TaggedPlanarPoint& tp : a.points) {
        REQUIRE(tp.tag.kind == RegionKind::OmegaStar);
        REQUIRE(tp.point.x >= lo);
        REQUIRE(tp.point.x < rat(2, 5));
        if (!tp.point.y.is_neg_infinity())
            REQUIRE(tp.point.y.finite() <= ExactReal(-1L));
    }
}

TEST_CASE("slow clouds carry the transit ladder") {
    ExactReal alpha = rat(2, 5);
    DomainCloud cloud = sample_domain(alpha, PlanarSystem::V, 1500, 41);
    REQUIRE(cloud.points.size() == 1500);
    ExactReal lo = alpha - ExactReal(1L);
    ExactReal hi = alpha.reciprocal();
    std::size_t ladder_checks = 0;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const TaggedPlanarPoint& tp = cloud.points[i];
        REQUIRE(tp.point.x >= lo);
        REQUIRE(tp.point.x <= hi);
        if (i + 1 == cloud.points.size()) break;
        const TaggedPlanarPoint& next = cloud.points[i + 1];
        // Segment breaks show up as a slow step that does not map one
        // recorded point to the next.
        if (!same_point(fhat_alpha_step(alpha, tp.point), next.point)) continue;
        ++ladder_checks;
        if (tp.tag.kind == RegionKind::OmegaStar) {
            mpz_class a = alpha_expand(alpha, tp.point.x, 1).digits[0];
            if (a == 1)
                REQUIRE(next.tag.kind == RegionKind::OmegaStar);
            else {
                REQUIRE(next.tag.kind == RegionKind::UpsilonInv);
                REQUIRE(next.tag.j == a - 1);
            }
        } else {
            REQUIRE(tp.tag.kind == RegionKind::UpsilonInv);
            REQUIRE(tp.tag.j >= 1);
            if (tp.tag.j == 1)
                REQUIRE(next.tag.kind == RegionKind::OmegaStar);
            else {
                REQUIRE(next.tag.kind == RegionKind::UpsilonInv);
                REQUIRE(next.tag.j == tp.tag.j - 1);
            }
        }
    }
    REQUIRE(ladder_checks > 1200);

    // The alpha = 1 slow cloud fills the unit-square picture.
    DomainCloud unit = sample_domain(ExactReal(1L), PlanarSystem::V, 800, 42);
    for (const TaggedPlanarPoint& tp : unit.points) {
        REQUIRE(tp.point.x.sign() >= 0);
        REQUIRE(tp.point.x <= ExactReal(1L));
        if (!tp.point.y.is_neg_infinity())
            REQUIRE(tp.point.y.finite().sign() <= 0);
    }

    // Flattened clouds stay in [alpha-1, 1] and are tagged by side.
    DomainCloud flat = sample_domain(rat(7, 10), PlanarSystem::VFlat, 800, 43);
    for (const TaggedPlanarPoint& tp : flat.points) {
        REQUIRE(tp.point.x >= rat(7, 10) - ExactReal(1L));
        REQUIRE(tp.point.x <= ExactReal(1L));
        if (tp.point.x.sign() < 0)
            REQUIRE(tp.tag.kind == RegionKind::VFlatMinus);
        else
            REQUIRE(tp.tag.kind == RegionKind::VFlatPlus);
    }
}

TEST_CASE("invariant domain splits in two exactly once") {
    DomainCloud narrow = sample_domain(kRoot, PlanarSystem::OmegaStar, 40000, 7);
    CHECK(component_count(narrow, 0.01, 0.05) == 2);
    DomainCloud wide = sample_domain(rat(4, 5), PlanarSystem::OmegaStar, 30000, 7);
    CHECK(component_count(wide, 0.01, 0.05) == 1);
}

TEST_CASE("slab images tile without overlap") {
    // Images of the k+1 negative slab, translated down by (1,1), stay clear
    // of the images of the k-th positive slab.
    DomainCloud cloud = sample_domain(kRoot, PlanarSystem::OmegaStar, 25000, 11);
    const double res = 0.01;
    std::set<std::pair<long, long>> shifted, plain;
    for (const TaggedPlanarPoint& tp : cloud.points) {
        CylinderRegion c = classify_cylinder(kRoot, tp.point);
        PlanarPoint q = ghat_star_step(kRoot, tp.point);
        if (c.sign < 0 && c.k == 4) {
            ExtendedValue y = q.y.is_neg_infinity()
                ? ExtendedValue()
                : ExtendedValue(q.y.finite() - ExactReal(1L));
            auto [gx, gu] = chart_xy({q.x - ExactReal(1L), y});
            shifted.insert({long(std::floor(gx / res)), long(std::floor(gu / res))});
        } else if (c.sign > 0 && c.k == 3) {
            auto [gx, gu] = chart_xy(q);
            plain.insert({long(std::floor(gx / res)), long(std::floor(gu / res))});
        }
    }
    REQUIRE(shifted.size() > 100);
    REQUIRE(plain.size() > 100);
    std::size_t overlap = 0;
    for (const auto& cell : shifted)
        if (plain.count(cell)) ++overlap;
    CHECK(overlap == 0);
}

TEST_CASE("planar step is one-to-one and onto the sampled domain") {
    ExactReal alpha = rat(3, 10);
    DomainCloud cloud = sample_domain(alpha, PlanarSystem::V, 3000, 23);

    std::vector<std::pair<double, double>> images;
    std::map<std::pair<long, long>, std::vector<std::pair<double, double>>> image_cells;
    const double eps = 1e-3;
    for (const TaggedPlanarPoint& tp : cloud.points) {
        auto xy = chart_xy(fhat_alpha_step(alpha, tp.point));
        images.push_back(xy);
        image_cells[{long(std::floor(xy.first / eps)), long(std::floor(xy.second / eps))}]
            .push_back(xy);
    }

    // One-to-one: distinct sampled points never collide in the chart.
    std::vector<std::pair<double, double>> sorted = images;
    std::sort(sorted.begin(), sorted.end());
    std::size_t collisions = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        double dx = sorted[i].first - sorted[i - 1].first;
        double du = std::fabs(sorted[i].second - sorted[i - 1].second);
        if (dx < 1e-12 && du < 1e-12) ++collisions;
    }
    CHECK(collisions == 0);

    // Onto: nearly every sampled point has an image point within eps.
    std::size_t covered = 0;
    for (const TaggedPlanarPoint& tp : cloud.points) {
        auto [px, pu] = chart_xy(tp.point);
        long cx = long(std::floor(px / eps)), cu = long(std::floor(pu / eps));
        bool hit = false;
        for (long di = -1; di <= 1 && !hit; ++di)
            for (long dj = -1; dj <= 1 && !hit; ++dj) {
                auto it = image_cells.find({cx + di, cu + dj});
                if (it == image_cells.end()) continue;
                for (const auto& q : it->second) {
                    double dx = q.first - px, du = q.second - pu;
                    if (dx * dx + du * du <= eps * eps) { hit = true; break; }
                }
            }
        if (hit) ++covered;
    }
    CHECK(double(covered) >= 0.99 * double(cloud.points.size()));
}

TEST_CASE("first return machine") {
    ExactReal alpha = rat(2, 5);
    Flat1State s = flat1_start(alpha, rat(-3, 8));
    CHECK(s.region.sign == -1);
    CHECK(s.region.k == 3);
    CHECK(s.region.role == CylinderRole::OmegaStarCyl);

    s = flat1_step(alpha, s);
    CHECK(s.point.x == rat(3, 5));
    CHECK(s.point.y.finite() == ExactReal(-1L));
    CHECK(s.region.role == CylinderRole::OmegaHatShifted);
    CHECK(s.region.k == 3);

    s = flat1_step(alpha, s);
    CHECK(s.point.x == rat(-1, 3));
    CHECK(s.point.y.finite() == ExactReal(-3L));
    CHECK(s.region.role == CylinderRole::OmegaStarCyl);
    CHECK(s.region.sign == -1);
    CHECK(s.region.k == 3);
    // Two machine steps across a shifted slab equal one fast digit step.
    CHECK(same_point(s.point, ghat_star_step(alpha, fresh(rat(-3, 8)))));

    s = flat1_step(alpha, s);
    s = flat1_step(alpha, s);
    CHECK(s.point.x.is_zero());  // the rational orbit has ended
    CHECK(s.region.sign == 0);
    CHECK_THROWS_AS(flat1_step(alpha, s), TerminatedOrbitError);

    // A mismatched slab tag is refused.
    Flat1State bad = flat1_start(alpha, rat(-3, 8));
    bad.region.k = 5;
    CHECK_THROWS_AS(flat1_step(alpha, bad), TagError);
}

TEST_CASE("second return set and its first-return map") {
    ExactReal alpha = rat(3, 10);
    Flat1State s{at(rat(-11, 20), rat(-3, 1)), classify_cylinder(alpha, fresh(rat(-11, 20)))};
    REQUIRE(s.region.sign == -1);
    REQUIRE(s.region.k == 2);
    REQUIRE(in_flat2_domain(s));

    ReturnStep r = flat2_step(alpha, s);
    CHECK(r.time == 2);
    CHECK(r.state.point.x == rat(2, 9));
    CHECK(r.state.point.y.finite() == rat(-5, 2));
    CHECK(r.state.region.role == CylinderRole::OmegaHatShifted);
    CHECK(r.state.region.k == 6);

    // The intermediate state sits outside the second-return set: a negative
    // point whose past is above -2.
    Flat1State mid = flat1_step(alpha, s);
    CHECK(mid.point.x == rat(-2, 11));
    CHECK(mid.point.y.finite() == rat(-5, 3));
    CHECK_FALSE(in_flat2_domain(mid));
    CHECK_THROWS_AS(flat2_step(alpha, mid), DomainError);

    // At alpha = 1 the whole machine collapses onto the fast planar map.
    SplitRng rng(2041, 9);
    for (int trial = 0; trial < 150; ++trial) {
        ExactReal x = random_in(rng, rat(1, 100), 9, 10);
        if (x.is_zero() || x >= ExactReal(1L)) continue;
        ExactReal r = x.reciprocal();
        if (r == ExactReal(r.floor())) continue;  // a one-step orbit would end immediately
        ExactReal y = random_past(rng);
        Flat1State w{at(x, y), classify_cylinder(ExactReal(1L), fresh(x))};
        REQUIRE(in_flat2_domain(w));
        ReturnStep one = flat2_step(ExactReal(1L), w);
        REQUIRE(one.time == 1);
        REQUIRE(same_point(one.state.point, ghat_star_step(ExactReal(1L), at(x, y))));
    }
}

TEST_CASE("machine states follow their grammar") {
    ExactReal alpha = rat(3, 10);
    SplitRng rng(2041, 10);
    const ExactReal minus_half = rat(-1, 2);
    std::size_t transitions = 0;
    ExactReal lo = alpha - ExactReal(1L);
    while (transitions < 12000) {
        mpz_class den = (mpz_class(1) << 192) + 1;
        mpz_class num = rng.next_mpz(193) % (2 * den);
        ExactReal x0 = lo + ExactReal::rational(num, 2 * den);
        if (x0.is_zero() || compare_numeric(x0, alpha) >= 0) continue;
        Flat1State cur = flat1_start(alpha, x0);
        while (!cur.point.x.is_zero() && transitions < 12000) {
            Flat1State next = flat1_step(alpha, cur);
            ++transitions;
            bool ended = next.point.x.is_zero();
            if (cur.region.role == CylinderRole::OmegaStarCyl && cur.region.sign < 0) {
                if (cur.region.k >= 3 || cur.point.x >= minus_half) {
                    // Gentle negative slabs hop onto the shifted copy indexed
                    // by their expansion digit (the slab label, except on a
                    // slab's inner edge where the digit is one larger).
                    REQUIRE(next.region.role == CylinderRole::OmegaHatShifted);
                    REQUIRE(next.region.k == alpha_expand(alpha, cur.point.x, 1).digits[0]);
                    REQUIRE(next.point.x.sign() > 0);
                } else {
                    // Steep digit-2 points take a full fast step and stay negative.
                    REQUIRE(!ended);
                    REQUIRE(next.region.role == CylinderRole::OmegaStarCyl);
                    REQUIRE(next.point.x.sign() < 0);
                }
            } else if (cur.region.role == CylinderRole::OmegaHatShifted) {
                if (!ended) REQUIRE(next.region.role == CylinderRole::OmegaStarCyl);
                if (cur.region.k == 2) REQUIRE(next.point.x.sign() >= 0);
            } else {
                REQUIRE(cur.region.sign > 0);
                if (!ended) REQUIRE(next.region.role == CylinderRole::OmegaStarCyl);
            }
            // The machine never leaves {y <= -1}.
            if (!next.point.y.is_neg_infinity())
                REQUIRE(next.point.y.finite() <= ExactReal(-1L));
            cur = next;
        }
    }
}

TEST_CASE("rectangle mass") {
    const double inf = -std::numeric_limits<double>::infinity();
    CHECK(rectangle_mass(0, 1, inf, -1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(rectangle_mass(0.5, 1, inf, -1) ==
          doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));
    CHECK(rectangle_mass(0.5, 1, inf, -1) / rectangle_mass(0, 1, inf, -1) ==
          doctest::Approx(0.41504).epsilon(1e-4));

    // Splitting a box splits its mass.
    double whole = rectangle_mass(0, 1, -4, -2);
    CHECK(rectangle_mass(0, 0.3, -4, -2) + rectangle_mass(0.3, 1, -4, -2) ==
          doctest::Approx(whole).epsilon(1e-12));
    CHECK(rectangle_mass(0, 1, -4, -3) + rectangle_mass(0, 1, -3, -2) ==
          doctest::Approx(whole).epsilon(1e-12));

    // Translating a box changes nothing: the kernel sees differences only.
    CHECK(rectangle_mass(-0.8, -0.6, -4, -3) ==
          doctest::Approx(rectangle_mass(0.2, 0.4, -3, -2)).epsilon(1e-12));

    CHECK_THROWS_AS(rectangle_mass(0, 1, -1, 0.5), DivergentIntegralError);
    CHECK_THROWS_AS(rectangle_mass(0, 1, -1, 0), DivergentIntegralError);
    CHECK_THROWS_AS(rectangle_mass(1, 0, -3, -2), DomainError);
}

TEST_CASE("monte carlo mass") {
    const double inf = -std::numeric_limits<double>::infinity();
    PlanarRegion whole{{0, 1, inf, -1}, [](double, double) { return true; }};
    MeasureEstimate est = measure_estimate(ExactReal(1L), whole, 200000, 5);
    CHECK(est.std_error < 0.01);
    CHECK(std::fabs(est.value - std::log(2.0)) < 3 * est.std_error + 1e-9);

    PlanarRegion strip{{0, 1, inf, -1}, [](double x, double) { return x > 0.5; }};
    MeasureEstimate narrow = measure_estimate(ExactReal(1L), strip, 200000, 5);
    CHECK(std::fabs(narrow.value - std::log(4.0 / 3.0)) < 3 * narrow.std_error + 1e-9);

    // A box straddling y = -1 exercises both sampling strata.
    PlanarRegion straddle{{0.5, 1, -3, -0.5}, [](double, double) { return true; }};
    MeasureEstimate two = measure_estimate(ExactReal(1L), straddle, 200000, 6);
    double want = rectangle_mass(0.5, 1, -3, -0.5);
    CHECK(std::fabs(two.value - want) < 3 * two.std_error + 1e-9);

    PlanarRegion nothing{{0, 1, -4, -2}, [](double, double) { return false; }};
    MeasureEstimate zero = measure_estimate(ExactReal(1L), nothing, 2000, 7);
    CHECK(zero.value == 0);
    CHECK(zero.std_error == 0);

    PlanarRegion bad{{0, 1, -1, 0.5}, [](double, double) { return true; }};
    CHECK_THROWS_AS(measure_estimate(ExactReal(1L), bad, 100, 8), DivergentIntegralError);
}

TEST_CASE("cloud occupancy mass") {
    DomainCloud cloud = sample_domain(ExactReal(1L), PlanarSystem::OmegaStar, 30000, 13);
    double mass = cloud_mass(cloud, 0.02);
    CHECK(std::fabs(mass - std::log(2.0)) < 0.05 * std::log(2.0));
}
