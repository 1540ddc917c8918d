#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "afy/alpha_cf.hpp"
#include "afy/ergodic.hpp"
#include "afy/errors.hpp"
#include "afy/natural_ext.hpp"
#include "afy/rng.hpp"

using namespace afy;

namespace {

const ExactReal kRoot = ExactReal::surd(-1, 1, 1, 2);  // sqrt(2) - 1

ExactReal rat(long p, long q) { return ExactReal::rational(p, q); }

PlanarPoint at(const ExactReal& x, const ExactReal& y) { return {x, ExtendedValue(y)}; }

Flat1State tagged(const ExactReal& alpha, const PlanarPoint& p) {
    return {p, classify_cylinder(alpha, p)};
}

std::vector<ExactReal> test_alphas() {
    return {rat(1, 10), rat(3, 10), rat(2, 5), rat(11, 20), rat(7, 10),
            rat(4, 5),  ExactReal(1L)};
}

// Rational in [alpha-1, alpha) with a 36-bit denominator, never zero.
ExactReal random_x(SplitRng& rng, const ExactReal& alpha) {
    mpz_class den = 1;
    den <<= 36;
    for (;;) {
        ExactReal x = alpha - ExactReal(1L) + ExactReal::rational(rng.next_mpz(36), den);
        if (!x.is_zero()) return x;
    }
}

// Symbols of the first-return machine until the orbit dies or cap is hit.
DeltaWord machine_stream(const ExactReal& alpha, const ExactReal& x0, std::size_t cap) {
    Flat1State s = flat1_start(alpha, x0);
    DeltaWord out;
    for (std::size_t i = 0; i < cap; ++i) {
        if (s.point.x.is_zero()) break;
        out.push_back(delta_digit(alpha, s));
        s = flat1_step(alpha, s);
    }
    return out;
}

// Grammar-respecting random words.  The delta generator additionally keeps
// runs of Minus_2 away from a closing Zero_2 so that deletion stays inside
// the pair-free language and the round trip is exact.
DeltaWord random_delta_word(SplitRng& rng, std::size_t len) {
    DeltaWord w;
    std::size_t chain = 0;
    while (w.size() < len) {
        if (!w.empty()) {
            const DeltaSymbol p = w.back();
            if (p.cls == DeltaClass::Minus && p.k >= 3) {
                w.push_back({DeltaClass::Zero, p.k});
                chain = 0;
                continue;
            }
            if (p.cls == DeltaClass::Zero && p.k == 2) {
                w.push_back(sym_plus(1 + rng.next_in(0, 5)));
                chain = 0;
                continue;
            }
            if (p.cls == DeltaClass::Minus && p.k == 2) {
                long pick = rng.next_in(0, chain == 1 ? 2 : 1);
                if (pick == 2) {
                    w.push_back(sym_zero(2));
                    chain = 0;
                } else if (pick == 1) {
                    w.push_back(sym_minus(2));
                    ++chain;
                } else {
                    w.push_back(sym_minus(3 + rng.next_in(0, 3)));
                    chain = 0;
                }
                continue;
            }
        }
        long pick = rng.next_in(0, 2);
        if (pick == 0) {
            w.push_back(sym_plus(1 + rng.next_in(0, 5)));
            chain = 0;
        } else if (pick == 1) {
            w.push_back(sym_minus(2));
            chain = 1;
        } else {
            w.push_back(sym_minus(3 + rng.next_in(0, 3)));
            chain = 0;
        }
    }
    return w;
}

DeltaWord random_eta_word(SplitRng& rng, std::size_t len) {
    DeltaWord w;
    while (w.size() < len) {
        if (!w.empty()) {
            const DeltaSymbol p = w.back();
            if (p.cls == DeltaClass::Minus && p.k >= 3) {
                w.push_back({DeltaClass::Zero, p.k});
                continue;
            }
            if (p.cls == DeltaClass::Zero && p.k == 2) {
                w.push_back(sym_plus(1 + rng.next_in(0, 5)));
                continue;
            }
            if (p.cls == DeltaClass::Minus && p.k == 2) {
                w.push_back(rng.next_in(0, 1) == 0 ? sym_minus(2)
                                                   : sym_minus(3 + rng.next_in(0, 3)));
                continue;
            }
        }
        long pick = rng.next_in(0, 3);
        if (pick == 0)
            w.push_back(sym_plus(1 + rng.next_in(0, 5)));
        else if (pick == 1)
            w.push_back(sym_minus(2));
        else if (pick == 2)
            w.push_back(sym_minus(3 + rng.next_in(0, 3)));
        else
            w.push_back(sym_zero(2));
    }
    return w;
}

}  // namespace

TEST_CASE("first-return digits by region") {
    const ExactReal a = kRoot;

    CHECK(delta_digit(a, tagged(a, at(rat(-1, 4), rat(-3, 1)))) == sym_minus(4));
    CHECK(delta_digit(a, tagged(a, at(rat(1, 5), rat(-3, 1)))) == sym_plus(5));

    // a gentle slab-2 point climbs into the shifted copy
    Flat1State s0 = tagged(a, at(rat(-9, 20), rat(-3, 1)));
    CHECK(delta_digit(a, s0) == sym_minus(2));
    Flat1State s1 = flat1_step(a, s0);
    CHECK(s1.point.x == rat(9, 11));
    CHECK(s1.point.y.finite() == rat(-3, 2));
    CHECK(s1.region.role == CylinderRole::OmegaHatShifted);
    CHECK(delta_digit(a, s1) == sym_zero(2));
    Flat1State s2 = flat1_step(a, s1);
    CHECK(s2.point.x == rat(2, 9));
    CHECK(delta_digit(a, s2) == sym_plus(5));

    // a steep slab-2 point steps straight down and its successor leaves the
    // second-return set
    Flat1State t0 = tagged(a, at(rat(-11, 20), rat(-3, 1)));
    CHECK(delta_digit(a, t0) == sym_minus(2));
    Flat1State t1 = flat1_step(a, t0);
    CHECK(t1.point.x == rat(-2, 11));
    CHECK(t1.point.y.finite() == rat(-5, 3));
    CHECK(delta_digit(a, t1) == sym_minus(6));
    CHECK(!in_flat2_domain(t1));

    Flat1State dead{{ExactReal(0L), ExtendedValue()},
                    CylinderRegion{0, 0, CylinderRole::OmegaStarCyl, 0}};
    CHECK_THROWS_AS(delta_digit(a, dead), TerminatedOrbitError);

    Flat1State far{{rat(3, 2), ExtendedValue(rat(-3, 2))},
                   CylinderRegion{-1, 2, CylinderRole::OmegaHatShifted, 1}};
    CHECK_THROWS_AS(delta_digit(a, far), DomainError);
    Flat1State neg{{rat(-1, 2), ExtendedValue(rat(-3, 2))},
                   CylinderRegion{-1, 2, CylinderRole::OmegaHatShifted, 1}};
    CHECK_THROWS_AS(delta_digit(a, neg), DomainError);
    Flat1State low{{rat(1, 2), ExtendedValue(rat(-3, 2))},
                   CylinderRegion{-1, 1, CylinderRole::OmegaHatShifted, 1}};
    CHECK_THROWS_AS(delta_digit(a, low), DomainError);

    Flat1State shallow{at(rat(1, 5), rat(-1, 2)), CylinderRegion{1, 5, CylinderRole::OmegaStarCyl, 0}};
    CHECK_THROWS_AS(delta_digit(a, shallow), DomainError);
    Flat1State wrong{at(rat(1, 5), rat(-3, 1)), CylinderRegion{1, 4, CylinderRole::OmegaStarCyl, 0}};
    CHECK_THROWS_AS(delta_digit(a, wrong), TagError);
    Flat1State hat{at(rat(1, 5), rat(-3, 1)), CylinderRegion{1, 5, CylinderRole::OmegaHat, 0}};
    CHECK_THROWS_AS(delta_digit(a, hat), TagError);
}

TEST_CASE("word grammars and recodings") {
    DeltaWord sample{sym_minus(2), sym_zero(2), sym_plus(3)};
    DeltaWord recoded = delta_to_eta(sample);
    CHECK((recoded == DeltaWord{sym_zero(2), sym_plus(3)}));
    CHECK(eta_to_delta(recoded) == sample);

    DeltaWord clean{sym_plus(3), sym_minus(4), sym_zero(4), sym_plus(1)};
    CHECK(delta_to_eta(clean) == clean);
    CHECK(eta_to_delta(clean) == clean);

    // grammar violations
    CHECK_THROWS_AS(validate_delta_word({sym_zero(2)}), GrammarError);
    CHECK_THROWS_AS(validate_delta_word({sym_minus(3), sym_plus(2)}), GrammarError);
    CHECK_THROWS_AS(validate_delta_word({sym_minus(2), sym_zero(2), sym_minus(3)}), GrammarError);
    CHECK_THROWS_AS(validate_delta_word({sym_plus(2), sym_zero(2)}), GrammarError);
    CHECK_THROWS_AS(validate_delta_word({sym_minus(1)}), GrammarError);
    CHECK_THROWS_AS(validate_delta_word({sym_plus(0)}), GrammarError);
    CHECK_THROWS_AS(validate_delta_word({sym_minus(3), sym_zero(4)}), GrammarError);
    CHECK_NOTHROW(validate_delta_word({sym_minus(2), sym_minus(2), sym_minus(5), sym_zero(5)}));

    CHECK_NOTHROW(validate_eta_word({sym_zero(2), sym_plus(4)}));
    CHECK_THROWS_AS(validate_eta_word({sym_minus(2), sym_zero(2)}), GrammarError);
    CHECK_THROWS_AS(validate_eta_word({sym_minus(2), sym_plus(3)}), GrammarError);
    CHECK_THROWS_AS(validate_eta_word({sym_zero(3)}), GrammarError);
    CHECK_THROWS_AS(validate_eta_word({sym_zero(2), sym_minus(2)}), GrammarError);

    // deleting inside a run of Minus_2 leaves the pair behind; the eta
    // grammar rejects that image
    DeltaWord run{sym_minus(2), sym_minus(2), sym_zero(2)};
    CHECK_NOTHROW(validate_delta_word(run));
    DeltaWord image = delta_to_eta(run);
    CHECK((image == DeltaWord{sym_minus(2), sym_zero(2)}));
    CHECK_THROWS_AS(eta_to_delta(image), GrammarError);

    SplitRng rng(1105, 2);
    for (int t = 0; t < 1000; ++t) {
        DeltaWord w = random_delta_word(rng, 1 + static_cast<std::size_t>(rng.next_in(0, 17)));
        DeltaWord e = delta_to_eta(w);
        CHECK(eta_to_delta(e) == w);
    }
    for (int t = 0; t < 1000; ++t) {
        DeltaWord v = random_eta_word(rng, 1 + static_cast<std::size_t>(rng.next_in(0, 17)));
        DeltaWord d = eta_to_delta(v);
        CHECK(delta_to_eta(d) == v);
    }
}

TEST_CASE("digit reconstruction matches the machine") {
    SplitRng rng(31337, 1);
    for (const ExactReal& a : test_alphas()) {
        for (int t = 0; t < 125; ++t) {
            ExactReal x = random_x(rng, a);
            AlphaExpansion e = alpha_expand(a, x, 4000);
            REQUIRE(e.terminated);
            std::vector<mpz_class> c;
            for (std::size_t j = 1; j <= e.digits.size(); ++j) c.push_back(e.c(j));
            if (c.empty()) continue;
            DeltaWord expected = delta_word_from_digits(c, true);
            DeltaWord got = machine_stream(a, x, expected.size() + 8);
            CHECK(got == expected);
            CHECK(digits_from_delta_word(expected) == c);
            CHECK_NOTHROW(validate_delta_word(got));
        }
    }
    CHECK_THROWS_AS(delta_word_from_digits({mpz_class(0)}, false), GrammarError);
    CHECK_THROWS_AS(delta_word_from_digits({mpz_class(-1)}, false), GrammarError);
}

TEST_CASE("orbit decomposition bookkeeping") {
    struct Pick {
        ExactReal alpha;
        ExactReal x;
    };
    std::vector<Pick> picks = {{rat(3, 10), ExactReal::surd(-17, 10, 20, 2)},
                               {kRoot, ExactReal::surd(-16, 10, 20, 2)},
                               {rat(2, 5), ExactReal::surd(-11, 10, 20, 2)}};
    for (const Pick& p : picks) {
        const std::size_t n = 500;
        Flat1State start = flat1_start(p.alpha, p.x);
        OrbitDecomposition d = orbit_decomposition(p.alpha, start, n);
        REQUIRE(d.symbols.size() == n);
        CHECK(d.r == d.n1);
        REQUIRE(!d.r.empty());
        CHECK(d.r[0] == 1);
        for (std::size_t j = 1; j < d.r.size(); ++j) {
            std::size_t gap = d.r[j] - d.r[j - 1];
            CHECK(gap >= 1);
            CHECK(gap <= 2);
        }
        std::vector<bool> seen(n + 1, false);
        for (std::size_t idx : d.n1) seen[idx] = !seen[idx];
        for (std::size_t idx : d.n2) seen[idx] = !seen[idx];
        for (std::size_t idx = 1; idx <= n; ++idx) CHECK(seen[idx]);

        std::vector<Flat1State> states{start};
        for (std::size_t i = 1; i < n; ++i) states.push_back(flat1_step(p.alpha, states.back()));
        for (std::size_t i = 0; i < n; ++i) {
            const DeltaSymbol& s = d.symbols[i];
            CHECK(delta_digit(p.alpha, states[i]) == s);
            if (s.cls == DeltaClass::Zero) {
                REQUIRE(i > 0);
                CHECK(d.symbols[i - 1].cls == DeltaClass::Minus);
                CHECK(d.symbols[i - 1].k == s.k);
            }
            if (i + 1 == n) continue;
            if (s.cls == DeltaClass::Plus) CHECK(d.symbols[i + 1].cls != DeltaClass::Zero);
            if (s.cls == DeltaClass::Minus && s.k >= 3) {
                CHECK((d.symbols[i + 1] == DeltaSymbol{DeltaClass::Zero, s.k}));
            }
            if (s.cls == DeltaClass::Minus && s.k == 2) {
                if (states[i].point.x >= rat(-1, 2))
                    CHECK(d.symbols[i + 1] == sym_zero(2));
                else
                    CHECK(d.symbols[i + 1].cls == DeltaClass::Minus);
            }
        }
    }

    ExactReal one(1L);
    ExactReal x1 = ExactReal::surd(-13, 10, 10, 2);
    OrbitDecomposition d1 = orbit_decomposition(one, flat1_start(one, x1), 300);
    CHECK(d1.n2.empty());
    CHECK(d1.n1.size() == 300);

    CHECK_THROWS_AS(orbit_decomposition(one, flat1_start(one, x1), 0), PreconditionError);
    Flat1State gentle = flat1_start(rat(3, 10), rat(-9, 20));
    Flat1State shifted = flat1_step(rat(3, 10), gentle);
    REQUIRE(shifted.region.role == CylinderRole::OmegaHatShifted);
    CHECK_THROWS_AS(orbit_decomposition(rat(3, 10), shifted, 5), DomainError);
}

TEST_CASE("scalar cylinder frequencies") {
    ExactReal one(1L);

    CylinderSpec two;
    two.digits = {2};
    FrequencyResult fixed = cylinder_frequency(one, kRoot, two, 500);
    CHECK(fixed.count == 500);
    CHECK(fixed.windows == 500);
    CHECK(fixed.freq == 1.0);

    // long seeded pseudo-orbit: digit-1 density of the unit map
    SplitRng rng(424242, 9);
    mpz_class den = 1;
    den <<= 1024;
    ExactReal x0(ExactReal::rational(rng.next_mpz(1024), den).to_bigfloat(1024));
    CylinderSpec ones;
    ones.digits = {1};
    FrequencyResult g = cylinder_frequency(one, x0, ones, 200000);
    CHECK(std::abs(g.freq - 0.41504) < 0.012);

    // pattern longer than the run
    CylinderSpec tri;
    tri.digits = {2, 2, 2};
    FrequencyResult shortrun = cylinder_frequency(one, kRoot, tri, 2);
    CHECK(shortrun.count == 0);
    CHECK(shortrun.windows == 0);
    CHECK(shortrun.freq == 0.0);

    // the empty pattern matches at every position
    CylinderSpec empty;
    FrequencyResult all = cylinder_frequency(one, kRoot, empty, 50);
    CHECK(all.count == 50);
    CHECK(all.freq == 1.0);

    // refinements can only lose mass
    ExactReal xs = ExactReal::surd(-13, 10, 10, 2);
    CylinderSpec head;
    head.digits = {1};
    CylinderSpec refined;
    refined.digits = {1, 2};
    FrequencyResult fh = cylinder_frequency(one, xs, head, 3000);
    FrequencyResult fr = cylinder_frequency(one, xs, refined, 3000);
    CHECK(fr.freq <= fh.freq);
    CHECK(fr.count <= fh.count);

    // a window opening at the current digit reproduces the plain count
    CylinderSpec planar = refined;
    planar.family = CylinderFamily::GaussPlanar;
    planar.window_lo = 1;
    FrequencyResult fp = cylinder_frequency(one, xs, planar, 3000);
    CHECK(fp.count == fr.count);
    CHECK(fp.windows == fr.windows);

    // a window reaching one digit back skips the first position
    CylinderSpec back = two;
    back.family = CylinderFamily::GaussPlanar;
    back.window_lo = -1;
    FrequencyResult fb = cylinder_frequency(one, kRoot, back, 400);
    CHECK(fb.windows == 398);
    CHECK(fb.count == 398);

    CHECK_THROWS_AS(cylinder_frequency(one, rat(3, 10), ones, 100), TerminatedOrbitError);
    CHECK_THROWS_AS(cylinder_frequency(one, rat(3, 2), ones, 10), DomainError);
    CHECK_THROWS_AS(cylinder_frequency(one, kRoot, ones, 0), PreconditionError);
    CylinderSpec bad;
    bad.digits = {mpz_class(-1)};
    CHECK_THROWS_AS(cylinder_frequency(one, kRoot, bad, 10), GrammarError);
}

TEST_CASE("return map frequencies and second-return filtering") {
    ExactReal a = rat(3, 10);
    ExactReal x = ExactReal::surd(-17, 10, 20, 2);
    const std::size_t n = 400;

    OrbitDecomposition d = orbit_decomposition(a, flat1_start(a, x), n);
    std::size_t m2s = 0, pairs = 0;
    for (std::size_t i = 0; i < d.symbols.size(); ++i) {
        m2s += d.symbols[i] == sym_minus(2);
        if (i + 1 < d.symbols.size())
            pairs += d.symbols[i] == sym_minus(2) && d.symbols[i + 1] == sym_zero(2);
    }
    CylinderSpec just_m2;
    just_m2.family = CylinderFamily::Flat1;
    just_m2.symbols = {sym_minus(2)};
    FrequencyResult fz = cylinder_frequency(a, x, just_m2, n);
    CHECK(fz.count == m2s);
    CHECK(fz.windows == n);

    CylinderSpec pair;
    pair.family = CylinderFamily::Flat1;
    pair.symbols = {sym_minus(2), sym_zero(2)};
    FrequencyResult fp = cylinder_frequency(a, x, pair, n);
    CHECK(fp.count == pairs);
    CHECK(fp.windows == n - 1);
    CHECK(fp.count <= fz.count);

    // under the unit slope nothing is ever skipped, so the second-return
    // reading agrees with the plain digit reading
    ExactReal one(1L);
    ExactReal x1 = ExactReal::surd(-13, 10, 10, 2);
    CylinderSpec p1;
    p1.family = CylinderFamily::Flat2;
    p1.symbols = {sym_plus(1)};
    CylinderSpec c1;
    c1.digits = {1};
    FrequencyResult fa = cylinder_frequency(one, x1, c1, 600);
    FrequencyResult fb = cylinder_frequency(one, x1, p1, 600);
    CHECK(fa.count == fb.count);
    CHECK(fa.windows == fb.windows);

    // the eta grammar gates second-return patterns
    CylinderSpec gated;
    gated.family = CylinderFamily::Flat2;
    gated.symbols = {sym_minus(2), sym_zero(2)};
    CHECK_THROWS_AS(cylinder_frequency(a, x, gated, 50), GrammarError);
    gated.family = CylinderFamily::Flat1;
    CHECK_NOTHROW(validate_cylinder_spec(gated));

    // the second return visits exactly the states the domain test keeps,
    // and the skipped states are the successors of steep slab-2 states
    struct Pick {
        ExactReal alpha;
        ExactReal x;
    };
    std::vector<Pick> picks = {{kRoot, ExactReal::surd(-16, 10, 20, 2)},
                               {rat(3, 10), ExactReal::surd(-17, 10, 20, 2)}};
    for (const Pick& p : picks) {
        const std::size_t steps = 260;
        std::vector<Flat1State> states{flat1_start(p.alpha, p.x)};
        for (std::size_t i = 1; i < steps; ++i)
            states.push_back(flat1_step(p.alpha, states.back()));
        DeltaWord filtered;
        for (const Flat1State& s : states)
            if (in_flat2_domain(s)) filtered.push_back(delta_digit(p.alpha, s));
        for (std::size_t i = 1; i < steps; ++i) {
            const Flat1State& prev = states[i - 1];
            bool steep_prev = prev.region.role == CylinderRole::OmegaStarCyl &&
                              prev.region.sign < 0 && prev.region.k == 2 &&
                              prev.point.x < rat(-1, 2) && !prev.point.y.is_neg_infinity();
            CHECK(!in_flat2_domain(states[i]) == steep_prev);
            if (steep_prev) CHECK(delta_digit(p.alpha, states[i]).cls == DeltaClass::Minus);
        }

        Flat1State cur = states[0];
        REQUIRE(in_flat2_domain(cur));
        DeltaWord got;
        std::size_t when = 0;
        while (when < steps) {
            got.push_back(delta_digit(p.alpha, cur));
            ReturnStep rs = flat2_step(p.alpha, cur);
            when += rs.time;
            cur = rs.state;
        }
        CHECK(got == filtered);
        CHECK_NOTHROW(validate_delta_word(machine_stream(p.alpha, p.x, steps)));
    }
}

TEST_CASE("matching detection") {
    auto m1 = matching_detect(rat(11, 20), 10);
    REQUIRE(m1.has_value());
    CHECK(m1->alpha_steps == 2);
    CHECK(m1->alpha_minus_one_steps == 2);

    auto m2 = matching_detect(rat(7, 10), 10);
    REQUIRE(m2.has_value());
    CHECK(m2->alpha_steps == 2);
    CHECK(m2->alpha_minus_one_steps == 1);

    auto m3 = matching_detect(rat(3, 10), 10);
    REQUIRE(m3.has_value());
    CHECK(m3->alpha_steps == 3);
    CHECK(m3->alpha_minus_one_steps == 3);

    auto m4 = matching_detect(kRoot, 10);
    REQUIRE(m4.has_value());
    CHECK(m4->alpha_steps == 2);
    CHECK(m4->alpha_minus_one_steps == 1);
    CHECK(m4->tail_checked == 100);

    CHECK(!matching_detect(rat(11, 20), 1).has_value());

    // a float names its dyadic value; both orbits merge exactly at (2, 2),
    // ride through one huge digit, and die together three digits later
    ExactReal af(rat(11, 20).to_bigfloat(1024));
    auto mf = matching_detect(af, 10);
    REQUIRE(mf.has_value());
    CHECK(mf->alpha_steps == 2);
    CHECK(mf->alpha_minus_one_steps == 2);
    CHECK(mf->tail_checked == 3);

    CHECK_THROWS_AS(matching_detect(ExactReal(1L), 5), DomainError);
    CHECK_THROWS_AS(matching_detect(rat(-1, 2), 5), DomainError);
    CHECK_THROWS_AS(matching_detect(rat(1, 2), 0), PreconditionError);
}

TEST_CASE("normality report") {
    ExactReal one(1L);
    ExactReal x1 = ExactReal::surd(-13, 10, 10, 2);
    NormalityReport flat = farey_normality_report(one, x1, {}, 4000, 5);
    CHECK(flat.steps == 4000);
    CHECK(flat.n2_fraction == 0.0);
    CHECK(flat.n1_fraction == 1.0);
    CHECK(flat.n2_consistent);
    CHECK(flat.stretches >= 1);

    ExactReal a = rat(3, 10);
    ExactReal x0 = ExactReal::surd(-17, 10, 20, 2);
    std::vector<CylinderSpec> specs(2);
    specs[0].family = CylinderFamily::Flat1;
    specs[0].symbols = {sym_minus(2)};
    specs[1].family = CylinderFamily::Flat1;
    specs[1].symbols = {sym_minus(2), sym_zero(2)};
    NormalityReport rep = farey_normality_report(a, x0, specs, 20000, 7);
    CHECK(rep.steps == 20000);
    CHECK(rep.n2_fraction > 0.05);
    CHECK(rep.n2_fraction < 0.6);
    CHECK(rep.n1_fraction == doctest::Approx(1.0 - rep.n2_fraction));
    CHECK(rep.n2_std_error > 0.0);
    CHECK(rep.n2_consistent);
    REQUIRE(rep.specs.size() == 2);
    CHECK(rep.specs[0].consistent);
    CHECK(rep.specs[1].consistent);
    CHECK(rep.specs[1].freq <= rep.specs[0].freq * 1.1 + 1e-9);

    std::vector<CylinderSpec> wrong(1);
    wrong[0].digits = {1};
    CHECK_THROWS_AS(farey_normality_report(a, x0, wrong, 100, 1), PreconditionError);
    CHECK_THROWS_AS(farey_normality_report(a, x0, {}, 0, 1), PreconditionError);
}

TEST_CASE("thin cylinders") {
    ExactReal one(1L);
    // every branch of the unit map is onto, so no word can pinch the image
    CHECK(!thin_cylinder_search(one, rat(1, 10), 40).has_value());

    // with a small denominator the endpoint orbits die young and cylinder
    // images come from a short list of intervals, bounded away from zero
    CHECK(!thin_cylinder_search(rat(2, 5), rat(1, 20), 60).has_value());
    CHECK(!thin_cylinder_search(kRoot, rat(1, 8), 60).has_value());

    // a 129-bit denominator behaves generically for a long while: following
    // an endpoint orbit pinches the image
    SplitRng arng(2024, 40);
    mpz_class base = 1;
    base <<= 127;
    mpz_class den = 1;
    den <<= 129;
    ExactReal deep = ExactReal::rational(base + arng.next_mpz(126), den);
    auto r2 = thin_cylinder_search(deep, rat(1, 20), 90);
    REQUIRE(r2.has_value());
    CHECK(!r2->word.empty());
    CHECK(r2->image_hi - r2->image_lo < rat(1, 20));
    ThinCylinder again = cylinder_certificate(deep, r2->word);
    CHECK(again.image_lo == r2->image_lo);
    CHECK(again.image_hi == r2->image_hi);
    CHECK(again.cylinder_lo == r2->cylinder_lo);
    CHECK(again.cylinder_hi == r2->cylinder_hi);
    CHECK(r2->cylinder_lo >= deep - one);
    CHECK(r2->cylinder_hi <= deep);
    CHECK(r2->cylinder_lo < r2->cylinder_hi);

    // single-branch hulls
    ThinCylinder c5 = cylinder_certificate(rat(2, 5), {mpz_class(5)});
    CHECK(c5.cylinder_lo == rat(5, 27));
    CHECK(c5.cylinder_hi == rat(5, 22));
    CHECK(c5.image_lo == rat(-3, 5));
    CHECK(c5.image_hi == rat(2, 5));
    ThinCylinder c3 = cylinder_certificate(rat(2, 5), {mpz_class(-3)});
    CHECK(c3.cylinder_lo == rat(-5, 12));
    CHECK(c3.cylinder_hi == rat(-5, 17));
    CHECK(c3.image_lo == rat(-3, 5));
    CHECK(c3.image_hi == rat(2, 5));

    // a unit interval already qualifies for a loose bound
    auto loose = thin_cylinder_search(rat(2, 5), ExactReal(2L), 10);
    REQUIRE(loose.has_value());
    CHECK(loose->word.empty());
    CHECK(loose->image_hi - loose->image_lo == ExactReal(1L));

    CHECK_THROWS_AS(cylinder_certificate(rat(1, 10), {mpz_class(2)}), DomainError);
    CHECK_THROWS_AS(cylinder_certificate(one, {mpz_class(0)}), GrammarError);
    CHECK_THROWS_AS(cylinder_certificate(one, {mpz_class(-1)}), GrammarError);
    CHECK_THROWS_AS(thin_cylinder_search(one, ExactReal(0L), 5), PreconditionError);
}
