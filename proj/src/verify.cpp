#include <afy/verify.hpp>

#include <afy/alpha_cf.hpp>
#include <afy/ergodic.hpp>
#include <afy/errors.hpp>
#include <afy/farey.hpp>
#include <afy/measure.hpp>
#include <afy/mobius.hpp>
#include <afy/natural_ext.hpp>
#include <afy/rcf.hpp>
#include <afy/rng.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace afy {

namespace {

const ExactReal kRoot = ExactReal::surd(-1, 1, 1, 2);  // sqrt(2) - 1

ExactReal rat(long p, long q) { return ExactReal::rational(p, q); }

std::vector<ExactReal> nine_alphas() {
    return {rat(1, 10), rat(3, 10), rat(2, 5),   kRoot,     rat(9, 20),
            rat(11, 20), rat(7, 10), rat(4, 5), rat(1, 1)};
}

// Rational on a 2^bits grid reduced mod 1 into I_alpha, nonzero.  Staying
// rational keeps orbits finite even when alpha itself is a surd.
ExactReal random_x(SplitRng& rng, const ExactReal& alpha, unsigned bits) {
    mpz_class den = 1;
    den <<= bits;
    for (;;) {
        ExactReal u = ExactReal::rational(rng.next_mpz(bits), den);
        ExactReal x = compare_numeric(u, alpha) < 0 ? u : u - ExactReal(1L);
        if (!x.is_zero()) return x;
    }
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

std::pair<mpz_class, mpz_class> conv(const AlphaExpansion& e, long n) {
    if (n <= -1) return {1, 0};
    if (n == 0) return {0, 1};
    return e.convergents[static_cast<std::size_t>(n) - 1];
}

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

// Grammar-respecting random words.  The first generator keeps runs of
// Minus_2 away from a closing Zero_2 so that pair deletion stays inside
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

// The induced slow map agrees with the fast step pointwise.
CheckResult check_induced(const VerifyOptions& opt) {
    const std::size_t n = opt.samples ? opt.samples : 10000;
    std::vector<ExactReal> alphas =
        opt.alpha ? std::vector<ExactReal>{*opt.alpha} : nine_alphas();
    SplitRng rng(opt.seed, 101);
    // the return time grows like 1/|x|, so keep draws away from zero
    const ExactReal tiny = rat(1, 1L << 16);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const ExactReal& alpha = alphas[i % alphas.size()];
        const ExactReal corner = (ExactReal(1L) + alpha).reciprocal();
        ExactReal x;
        for (;;) {
            x = random_x(rng, alpha, 30);
            if (x.abs() < tiny) continue;
            if (x == corner) continue;  // the branch corner is the one excluded point
            break;
        }
        if (!(induced_FJ(alpha, x) == alpha_gauss_step(alpha, x))) ++bad;
    }
    std::ostringstream d;
    d << "pairs=" << n << " alphas=" << alphas.size() << " mismatches=" << bad;
    return {"induced-map", bad == 0, d.str(), 0};
}

// Running symbol-matrix products carry the convergent and mediant columns.
CheckResult check_mediant_matrices(const VerifyOptions& opt) {
    const std::size_t pairs = opt.samples ? opt.samples : 1000;
    std::vector<ExactReal> alphas = nine_alphas();
    SplitRng rng(opt.seed, 102);
    std::size_t bad = 0, principal = 0, interior = 0;
    for (std::size_t t = 0; t < pairs; ++t) {
        const ExactReal& alpha = alphas[t % alphas.size()];
        ExactReal x;
        AlphaExpansion e;
        mpz_class total;
        for (;;) {
            x = random_x(rng, alpha, 20);
            e = alpha_expand(alpha, x, 20);
            total = 0;
            for (const mpz_class& dg : e.digits) total += dg;
            if (total <= 2000) break;  // keep the slow walk bounded
        }
        std::vector<mpz_class> s(e.digits.size() + 1);
        for (std::size_t i = 0; i < e.digits.size(); ++i) s[i + 1] = s[i] + e.digits[i];
        const std::size_t t_end = total.get_ui();

        MobiusMatrix m;
        ExactReal cur = x;
        std::size_t block = 1;
        for (std::size_t k = 1; k <= t_end; ++k) {
            m = m * symbol_of(alpha, cur).matrix;
            cur = alpha_farey_step(alpha, cur);
            while (block < s.size() && s[block] < static_cast<unsigned long>(k)) ++block;
            if (block >= s.size()) break;
            auto [pm1, qm1] = conv(e, static_cast<long>(block) - 1);
            if (s[block] == static_cast<unsigned long>(k)) {
                auto [pn, qn] = conv(e, static_cast<long>(block));
                if (!(m == MobiusMatrix{pm1, pn, qm1, qn})) ++bad;
                ++principal;
            } else {
                auto [pm2, qm2] = conv(e, static_cast<long>(block) - 2);
                mpz_class ell = mpz_class(static_cast<unsigned long>(k)) - s[block - 1];
                int eps = e.eps[block - 1];
                if (!(m == MobiusMatrix{ell * pm1 + eps * pm2, pm1, ell * qm1 + eps * qm2,
                                        qm1}))
                    ++bad;
                ++interior;
            }
        }
        if (t_end > 0 && !(pi_product(alpha, x, t_end) == m)) ++bad;
    }
    std::ostringstream d;
    d << "pairs=" << pairs << " principal=" << principal << " mediant=" << interior
      << " mismatches=" << bad;
    return {"mediant-matrices", bad == 0, d.str(), 0};
}

// The flattened stream is the full stream minus exactly the sign-change
// mediants (and the terminal one away from -1/2).
CheckResult check_flat_stream(const VerifyOptions& opt) {
    const std::size_t per_alpha = opt.samples ? opt.samples : 500;
    SplitRng rng(opt.seed, 103);
    std::size_t bad = 0, samples = 0, matched = 0;
    for (const ExactReal& alpha : nine_alphas()) {
        const ExactReal corner = (ExactReal(1L) + alpha).reciprocal();
        const bool low = alpha < rat(1, 2);
        std::size_t done = 0, attempts = 0;
        while (done < per_alpha && attempts < 60 * per_alpha) {
            ++attempts;
            ExactReal x = random_x(rng, alpha, 24);
            AlphaExpansion e = alpha_expand(alpha, x, 4096);
            if (!e.terminated) continue;
            mpz_class total = 0;
            for (const mpz_class& dg : e.digits) total += dg;
            if (total > 2500) continue;
            const std::size_t tt = total.get_ui();

            // replay the slow orbit; step aside if it lands on the corner
            // of the short flattening table
            std::vector<ExactReal> forbit{x};
            bool corner_hit = false;
            for (std::size_t k = 0; k < tt; ++k) {
                if (low && forbit.back() == corner) corner_hit = true;
                forbit.push_back(alpha_farey_step(alpha, forbit.back()));
            }
            if (corner_hit) continue;
            ++done;
            ++samples;
            if (!forbit[tt].is_zero()) {
                ++bad;
                continue;
            }

            const std::size_t nblocks = e.digits.size();
            std::vector<std::size_t> s(nblocks + 1, 0);
            mpz_class acc = 0;
            for (std::size_t i = 0; i < nblocks; ++i) {
                acc += e.digits[i];
                s[i + 1] = acc.get_ui();
            }
            std::set<std::size_t> skipped;
            for (std::size_t b = 1; b < nblocks; ++b)
                if (e.eps[b] == -1) skipped.insert(s[b] - 1);
            if (!(e.orbit[nblocks - 1] == rat(-1, 2))) skipped.insert(s[nblocks] - 1);

            MediantStream full = mediant_sequence(alpha, x, tt);
            MediantStream flat = flat_mediant_sequence(alpha, x, tt);
            std::set<std::size_t> stream_ks, expect;
            for (const StreamEntry& en : flat.entries)
                if (en.k >= 1 && en.k <= tt) stream_ks.insert(en.k);
            for (std::size_t i = 1; i <= tt; ++i)
                if (!skipped.count(i)) expect.insert(i);
            if (stream_ks != expect) ++bad;

            // the kept rows carry the same fractions as the full stream
            for (const StreamEntry& en : flat.entries) {
                if (en.k < 1 || en.k > tt) continue;
                const StreamEntry& fu = full.entries[en.k - 1];
                if (fu.k != en.k || fu.p != en.p || fu.q != en.q) ++bad;
                ++matched;
            }
        }
        if (done < per_alpha) ++bad;  // draw budget exhausted: flag, never spin
    }
    std::ostringstream d;
    d << "orbits=" << samples << " rows=" << matched << " mismatches=" << bad;
    return {"flat-stream", bad == 0, d.str(), 0};
}

// The sheet change of coordinates closes the square with the fast maps.
CheckResult check_conjugacy(const VerifyOptions& opt) {
    const std::size_t per_alpha = opt.samples ? opt.samples : 10000;
    std::vector<ExactReal> alphas =
        opt.alpha ? std::vector<ExactReal>{*opt.alpha}
                  : std::vector<ExactReal>{rat(1, 10), rat(3, 10), kRoot, rat(2, 5)};
    SplitRng rng(opt.seed, 104);
    const ExactReal zero(0L);
    std::size_t bad = 0, total = 0;
    for (const ExactReal& alpha : alphas) {
        for (std::size_t done = 0; done < per_alpha;) {
            ExactReal x = random_in(rng, ExactReal(0L), 1, 1);
            RegionKind sheet = RegionKind::D2;
            if (done % 2 == 1) {
                // the first sheet only covers [alpha, 1)
                if (compare_numeric(x, alpha) < 0) continue;
                sheet = RegionKind::D1;
            }
            ExtendedValue y =
                done % 7 == 0 ? ExtendedValue() : ExtendedValue(random_past(rng));
            if (!(conjugacy_residual(alpha, {{x, y}, {sheet, 0}}) == zero)) ++bad;
            ++done;
            ++total;
        }
    }
    std::ostringstream d;
    d << "points=" << total << " alphas=" << alphas.size() << " nonzero=" << bad;
    return {"conjugacy", bad == 0, d.str(), 0};
}

// Every branch matrix preserves the kernel density exactly.
CheckResult check_density(const VerifyOptions& opt) {
    const std::size_t per_branch = opt.samples ? opt.samples : 1000;
    std::vector<MobiusMatrix> branches{
        {-1, 0, 1, 1}, {1, 0, -1, 1}, {-1, 1, 1, 0},  // slow branches
        {-2, -1, 1, 0}, {-2, 1, 1, 0},                // flattened double steps
        {1, -1, 0, 1}, {1, 1, 0, 1},                  // sheet translations
    };
    for (long k : {2L, 3L, 4L, 5L, 7L, 12L}) {  // fast digit steps, both signs
        branches.push_back({mpz_class(-k), -1, 1, 0});
        branches.push_back({mpz_class(-k), 1, 1, 0});
    }
    for (long k : {1L, 4L})  // shifted-slab re-entries
        branches.push_back({mpz_class(-k), 1, 1, 0});

    SplitRng rng(opt.seed, 105);
    const ExactReal one(1L);
    std::size_t bad = 0, total = 0;
    for (const MobiusMatrix& b : branches) {
        for (std::size_t done = 0; done < per_branch;) {
            ExactReal u = random_in(rng, rat(-2, 1), 4, 1);
            ExactReal v = random_in(rng, rat(-2, 1), 4, 1);
            if (compare_numeric(u, v) == 0) continue;
            bool pole = false;
            for (const ExactReal& t : {u, v})
                if ((ExactReal(b.a21) * t + ExactReal(b.a22)).is_zero()) pole = true;
            if (pole) continue;
            if (!(density_ratio(b, u, v) == one)) ++bad;
            ++done;
            ++total;
        }
    }
    std::ostringstream d;
    d << "branches=" << branches.size() << " points=" << total << " off=" << bad;
    return {"density", bad == 0, d.str(), 0};
}

// Classical approximation bounds along regular expansions of surds.
CheckResult check_theta(const VerifyOptions& opt) {
    const std::size_t count = opt.samples ? opt.samples : 1000;
    static const long kNonSquares[] = {2,  3,  5,  6,  7,  10, 11, 13, 14, 15,
                                       17, 19, 21, 22, 23, 26, 29, 30, 31, 33,
                                       34, 35, 37, 38, 39, 41, 42, 43, 46, 47};
    SplitRng rng(opt.seed, 106);
    std::size_t bad = 0, checks = 0;
    for (std::size_t t = 0; t < count; ++t) {
        const long d = kNonSquares[rng.next_u64() % 30];
        long b = 1 + rng.next_in(0, 19);
        if (rng.next_u64() & 1) b = -b;
        const long a = rng.next_in(-40, 40);
        const long c = 1 + rng.next_in(0, 29);
        ExactReal x = ExactReal::surd(a, b, c, d);
        const mpz_class fl = x.floor();
        x = x - ExactReal::rational(fl, 1);  // fractional part: irrational in (0,1)
        RcfExpansion e = rcf_expand(x, 52);
        for (std::size_t n = 1; n <= 50; ++n) {
            DiophantineReport r = vahlen_borel_check(e, n);
            if (!r.vahlen || !r.borel) ++bad;
            ++checks;
        }
    }
    std::ostringstream d;
    d << "surds=" << count << " windows=" << checks << " violations=" << bad;
    return {"theta-bounds", bad == 0, d.str(), 0};
}

// Orbit matching at the sample parameters, with tail confirmation.
CheckResult check_matching(const VerifyOptions&) {
    auto fmt = [](const std::optional<MatchingResult>& m) {
        if (!m) return std::string("none");
        std::ostringstream s;
        s << "(" << m->alpha_steps << "," << m->alpha_minus_one_steps
          << ") tail=" << m->tail_checked;
        return s.str();
    };
    auto m1 = matching_detect(rat(11, 20), 2000);
    auto m2 = matching_detect(rat(7, 10), 2000);
    auto m3 = matching_detect(rat(3, 10), 2000);
    auto m4 = matching_detect(kRoot, 2000);
    bool ok = m1 && m1->alpha_steps == 2 && m1->alpha_minus_one_steps == 2;
    ok = ok && m2 && m2->alpha_steps == 2 && m2->alpha_minus_one_steps == 1;
    // rational orbits die at the meeting point, so the agreeing tail is
    // everything both orbits still have
    ok = ok && m3.has_value();
    ok = ok && m4 && m4->alpha_steps == 2 && m4->alpha_minus_one_steps == 1 &&
         m4->tail_checked == 100;
    std::ostringstream d;
    d << "11/20=" << fmt(m1) << " 7/10=" << fmt(m2) << " 3/10=" << fmt(m3)
      << " sqrt2-1=" << fmt(m4);
    return {"matching", ok, d.str(), 0};
}

// Mass numerics: closed forms, Monte Carlo, and a long digit-frequency run.
CheckResult check_measure(const VerifyOptions& opt) {
    const double inf = -std::numeric_limits<double>::infinity();
    bool ok = true;
    std::ostringstream d;

    const double whole = rectangle_mass(0, 1, inf, -1);
    const double cell = rectangle_mass(0.5, 1, inf, -1);
    ok = ok && std::fabs(whole - std::log(2.0)) < 1e-3;
    ok = ok && std::fabs(cell / whole - 0.41504) < 0.005;
    d << "mass=" << whole << " cellshare=" << cell / whole;

    const std::size_t mc = opt.samples ? opt.samples : 200000;
    PlanarRegion region{{0, 1, inf, -1}, [](double, double) { return true; }};
    MeasureEstimate est = measure_estimate(ExactReal(1L), region, mc, opt.seed);
    ok = ok && std::fabs(est.value - std::log(2.0)) < 3 * est.std_error + 1e-9;
    PlanarRegion strip{{0, 1, inf, -1}, [](double x, double) { return x > 0.5; }};
    MeasureEstimate cest = measure_estimate(ExactReal(1L), strip, mc, opt.seed + 1);
    ok = ok && std::fabs(cest.value - std::log(4.0 / 3.0)) < 3 * cest.std_error + 1e-9;
    d << " mc=" << est.value << "+-" << est.std_error;

    const std::size_t n = opt.samples ? opt.samples : 1000000;
    SplitRng rng(opt.seed, 9);
    mpz_class den = 1;
    den <<= 1024;
    ExactReal x0(ExactReal::rational(rng.next_mpz(1024), den).to_bigfloat(1024));
    CylinderSpec ones;
    ones.digits = {1};
    FrequencyResult f = cylinder_frequency(ExactReal(1L), x0, ones, n);
    ok = ok && std::fabs(f.freq - 0.41504) < 0.01;
    d << " freq[1]=" << f.freq << " n=" << n;

    return {"measure", ok, d.str(), 0};
}

// Cloud geometry: the invariant domain splits in two only where it should.
CheckResult check_components(const VerifyOptions& opt) {
    const std::size_t pts = opt.samples ? opt.samples : 100000;
    DomainCloud narrow = sample_domain(kRoot, PlanarSystem::OmegaStar, pts, opt.seed);
    const std::size_t c_narrow = component_count(narrow, 0.01, 0.05);
    DomainCloud wide = sample_domain(rat(4, 5), PlanarSystem::OmegaStar, pts, opt.seed);
    const std::size_t c_wide = component_count(wide, 0.01, 0.05);
    std::ostringstream d;
    d << "points=" << pts << " sqrt2-1:components=" << c_narrow
      << " 4/5:components=" << c_wide;
    return {"components", c_narrow == 2 && c_wide == 1, d.str(), 0};
}

// Word recodings invert each other and machine words obey their grammar.
CheckResult check_recoding(const VerifyOptions& opt) {
    const std::size_t words = opt.samples ? opt.samples : 1000;
    SplitRng rng(opt.seed, 110);
    std::size_t bad = 0;
    std::size_t longest = 0;
    for (std::size_t t = 0; t < words; ++t) {
        const std::size_t len = 1 + static_cast<std::size_t>(rng.next_u64() % 1000);
        longest = std::max(longest, len);
        DeltaWord w = random_delta_word(rng, len);
        DeltaWord ew = delta_to_eta(w);
        try {
            validate_delta_word(w);
            validate_eta_word(ew);
            if (!(eta_to_delta(ew) == w)) ++bad;
        } catch (const GrammarError&) {
            ++bad;
        }
        DeltaWord v = random_eta_word(rng, len);
        try {
            validate_eta_word(v);
            if (!(delta_to_eta(eta_to_delta(v)) == v)) ++bad;
        } catch (const GrammarError&) {
            ++bad;
        }
    }

    // machine-emitted words across a long budget of return steps
    const std::size_t budget = words >= 1000 ? 1000000 : 1000 * words;
    std::vector<ExactReal> alphas{rat(3, 10), rat(2, 5), rat(11, 20), kRoot};
    std::size_t steps = 0, stretches = 0, pick = 0;
    while (steps < budget) {
        const ExactReal& alpha = alphas[pick++ % alphas.size()];
        ExactReal x = random_x(rng, alpha, 256);
        DeltaWord w = machine_stream(alpha, x, budget - steps);
        if (w.empty()) continue;
        try {
            validate_delta_word(w);
        } catch (const GrammarError&) {
            ++bad;
        }
        steps += w.size();
        ++stretches;
    }
    std::ostringstream d;
    d << "words=" << 2 * words << " longest=" << longest << " machine_steps=" << steps
      << " stretches=" << stretches << " violations=" << bad;
    return {"recoding", bad == 0, d.str(), 0};
}

struct Entry {
    const char* name;
    CheckResult (*fn)(const VerifyOptions&);
};

const Entry kChecks[] = {
    {"induced-map", check_induced},
    {"mediant-matrices", check_mediant_matrices},
    {"flat-stream", check_flat_stream},
    {"conjugacy", check_conjugacy},
    {"density", check_density},
    {"theta-bounds", check_theta},
    {"matching", check_matching},
    {"measure", check_measure},
    {"components", check_components},
    {"recoding", check_recoding},
};

CheckResult timed(const Entry& entry, const VerifyOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = entry.fn(opt);
    const auto t1 = std::chrono::steady_clock::now();
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    return r;
}

}  // namespace

std::vector<std::string> check_names() {
    std::vector<std::string> out;
    for (const Entry& e : kChecks) out.push_back(e.name);
    return out;
}

CheckResult run_check(const std::string& name, const VerifyOptions& opt) {
    std::string want = name;
    if (want == "prop1") want = "induced-map";
    for (const Entry& e : kChecks)
        if (want == e.name) return timed(e, opt);
    throw DomainError("unknown check: " + name);
}

std::vector<CheckResult> run_all_checks(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    for (const Entry& e : kChecks) out.push_back(timed(e, opt));
    return out;
}

}  // namespace afy
