#include "afy/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "afy/alpha_cf.hpp"
#include "afy/errors.hpp"
#include "afy/mobius.hpp"
#include "afy/rng.hpp"

namespace afy {

namespace {

const ExactReal kOne(1L);
const ExactReal kMinusOne(-1L);

void check_symbol(const DeltaSymbol& s) {
    if (s.cls == DeltaClass::Plus) {
        if (s.k < 1) throw GrammarError("a Plus symbol needs k >= 1");
        return;
    }
    if (s.k < 2) throw GrammarError("Minus and Zero symbols need k >= 2");
}

bool is_minus(const DeltaSymbol& s) { return s.cls == DeltaClass::Minus; }
bool is_zero2(const DeltaSymbol& s) { return s.cls == DeltaClass::Zero && s.k == 2; }
bool is_minus2(const DeltaSymbol& s) { return s.cls == DeltaClass::Minus && s.k == 2; }

}  // namespace

DeltaSymbol delta_digit(const ExactReal& alpha, const Flat1State& p) {
    if (p.region.sign == 0 || p.point.x.is_zero())
        throw TerminatedOrbitError("delta_digit: the orbit already ended at x = 0");
    if (p.region.role == CylinderRole::OmegaHatShifted) {
        if (p.point.x.sign() <= 0 || p.point.x > kOne)
            throw DomainError("delta_digit: a shifted-slab point must have x in (0, 1]");
        if (p.region.k < 2) throw DomainError("delta_digit: shifted-slab index must be >= 2");
        return {DeltaClass::Zero, p.region.k};
    }
    if (p.region.role != CylinderRole::OmegaStarCyl)
        throw TagError("delta_digit: the state must sit in a slab or a shifted slab");
    if (!p.point.y.is_neg_infinity() && p.point.y.finite() > kMinusOne)
        throw DomainError("delta_digit: a slab state must lie on or below y = -1");
    CylinderRegion here = classify_cylinder(alpha, p.point);
    if (here.sign != p.region.sign || here.k != p.region.k)
        throw TagError("delta_digit: the slab tag does not match the point");
    return {p.region.sign < 0 ? DeltaClass::Minus : DeltaClass::Plus, p.region.k};
}

void validate_delta_word(const DeltaWord& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        check_symbol(w[i]);
        const bool last = i + 1 == w.size();
        switch (w[i].cls) {
            case DeltaClass::Zero:
                if (i == 0 || !is_minus(w[i - 1]) || w[i - 1].k != w[i].k)
                    throw GrammarError("Zero_k must follow Minus_k");
                if (w[i].k == 2 && !last && w[i + 1].cls != DeltaClass::Plus)
                    throw GrammarError("Zero_2 must be followed by a Plus symbol");
                break;
            case DeltaClass::Minus:
                if (w[i].k >= 3 && !last &&
                    (w[i + 1].cls != DeltaClass::Zero || w[i + 1].k != w[i].k))
                    throw GrammarError("Minus_k with k >= 3 must be followed by Zero_k");
                if (w[i].k == 2 && !last && !is_zero2(w[i + 1]) && !is_minus(w[i + 1]))
                    throw GrammarError("Minus_2 must be followed by Zero_2 or a Minus symbol");
                break;
            case DeltaClass::Plus:
                if (!last && w[i + 1].cls == DeltaClass::Zero)
                    throw GrammarError("Zero_k must follow Minus_k");
                break;
        }
    }
}

void validate_eta_word(const DeltaWord& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        check_symbol(w[i]);
        const bool last = i + 1 == w.size();
        switch (w[i].cls) {
            case DeltaClass::Zero:
                if (w[i].k == 2) {
                    if (i > 0 && is_minus2(w[i - 1]))
                        throw GrammarError("Minus_2 Zero_2 never appear adjacent here");
                    if (!last && w[i + 1].cls != DeltaClass::Plus)
                        throw GrammarError("Zero_2 must be followed by a Plus symbol");
                } else if (i == 0 || !is_minus(w[i - 1]) || w[i - 1].k != w[i].k) {
                    throw GrammarError("Zero_k with k >= 3 must follow Minus_k");
                }
                break;
            case DeltaClass::Minus:
                if (w[i].k >= 3 && !last &&
                    (w[i + 1].cls != DeltaClass::Zero || w[i + 1].k != w[i].k))
                    throw GrammarError("Minus_k with k >= 3 must be followed by Zero_k");
                if (w[i].k == 2 && !last && !is_minus(w[i + 1]))
                    throw GrammarError("Minus_2 must be followed by a Minus symbol here");
                break;
            case DeltaClass::Plus:
                if (!last && w[i + 1].cls == DeltaClass::Zero && w[i + 1].k != 2)
                    throw GrammarError("Zero_k with k >= 3 must follow Minus_k");
                break;
        }
    }
}

DeltaWord delta_to_eta(const DeltaWord& w) {
    validate_delta_word(w);
    DeltaWord out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (is_minus2(w[i]) && i + 1 < w.size() && is_zero2(w[i + 1])) continue;
        out.push_back(w[i]);
    }
    return out;
}

DeltaWord eta_to_delta(const DeltaWord& w) {
    validate_eta_word(w);
    DeltaWord out;
    out.reserve(w.size() + w.size() / 2);
    for (const DeltaSymbol& s : w) {
        if (is_zero2(s)) out.push_back(sym_minus(2));
        out.push_back(s);
    }
    return out;
}

DeltaWord delta_word_from_digits(const std::vector<mpz_class>& c, bool ended) {
    DeltaWord out;
    out.reserve(c.size() + c.size() / 2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] > 0) {
            out.push_back({DeltaClass::Plus, c[i]});
            continue;
        }
        mpz_class a = -c[i];
        if (a < 2) throw GrammarError("a negative digit must have magnitude >= 2");
        out.push_back({DeltaClass::Minus, a});
        const bool more = i + 1 < c.size();
        if (a >= 3 || (more && c[i + 1] > 0) || (!more && ended))
            out.push_back({DeltaClass::Zero, a});
    }
    return out;
}

std::vector<mpz_class> digits_from_delta_word(const DeltaWord& w) {
    validate_delta_word(w);
    std::vector<mpz_class> out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].cls == DeltaClass::Plus) {
            out.push_back(w[i].k);
            continue;
        }
        out.push_back(-w[i].k);
        if (i + 1 < w.size() && w[i + 1].cls == DeltaClass::Zero) ++i;
    }
    return out;
}

OrbitDecomposition orbit_decomposition(const ExactReal& alpha, const Flat1State& start,
                                       std::size_t n) {
    if (n == 0) throw PreconditionError("orbit_decomposition: need at least one step");
    if (start.region.role != CylinderRole::OmegaStarCyl || start.region.sign == 0)
        throw DomainError("orbit_decomposition: the start must sit in a slab");
    OrbitDecomposition d;
    d.symbols.reserve(n);
    Flat1State cur = start;
    for (std::size_t idx = 1; idx <= n; ++idx) {
        DeltaSymbol s = delta_digit(alpha, cur);
        d.symbols.push_back(s);
        if (s.cls == DeltaClass::Zero) {
            d.n2.push_back(idx);
        } else {
            d.r.push_back(idx);
            d.n1.push_back(idx);
        }
        if (idx < n) cur = flat1_step(alpha, cur);
    }
    return d;
}

void validate_cylinder_spec(const CylinderSpec& spec) {
    switch (spec.family) {
        case CylinderFamily::AlphaCF:
        case CylinderFamily::GaussPlanar:
            for (const mpz_class& c : spec.digits) {
                if (c == 0) throw GrammarError("digits are nonzero");
                if (c < 0 && c > -2) throw GrammarError("a negative digit must have magnitude >= 2");
            }
            break;
        case CylinderFamily::Flat1:
            validate_delta_word(spec.symbols);
            break;
        case CylinderFamily::Flat2:
            validate_eta_word(spec.symbols);
            break;
    }
}

namespace {

// Signed digits of the scalar expansion of x0, computed in place.  A float
// start keeps everything at its own precision; exact starts stop dead at
// zero.
std::vector<mpz_class> signed_digit_stream(const ExactReal& alpha, const ExactReal& x0,
                                           std::size_t n) {
    ExactReal a = alpha;
    if (x0.is_bigfloat() && !alpha.is_bigfloat())
        a = ExactReal(alpha.to_bigfloat(x0.float_value().precision()));
    const ExactReal lo = a - kOne;
    if (x0 < lo || x0 > a)
        throw DomainError("cylinder_frequency: x0 must lie in [alpha-1, alpha]");
    std::vector<mpz_class> out;
    out.reserve(n);
    ExactReal v = x0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v.is_zero())
            throw TerminatedOrbitError("cylinder_frequency: the expansion ended early");
        const ExactReal r = v.abs().reciprocal();
        mpz_class d = (r + kOne - a).floor();
        out.push_back(v.sign() > 0 ? d : mpz_class(-d));
        v = r - ExactReal(d);
    }
    return out;
}

std::size_t count_matches(const std::vector<mpz_class>& stream, const std::vector<mpz_class>& word,
                          std::size_t from, std::size_t to_inclusive) {
    std::size_t hits = 0;
    for (std::size_t p = from; p <= to_inclusive; ++p) {
        bool ok = true;
        for (std::size_t j = 0; j < word.size() && ok; ++j) ok = stream[p + j] == word[j];
        hits += ok;
    }
    return hits;
}

std::size_t count_symbol_matches(const DeltaWord& stream, const DeltaWord& word) {
    if (word.empty() || stream.size() < word.size()) return 0;
    std::size_t hits = 0;
    for (std::size_t p = 0; p + word.size() <= stream.size(); ++p) {
        bool ok = true;
        for (std::size_t j = 0; j < word.size() && ok; ++j) ok = stream[p + j] == word[j];
        hits += ok;
    }
    return hits;
}

// Symbols of up to `cap` states of the first-return machine, stopping when
// the orbit dies.
DeltaWord walk_symbols(const ExactReal& alpha, Flat1State s, std::size_t cap) {
    DeltaWord out;
    out.reserve(std::min<std::size_t>(cap, 4096));
    for (std::size_t i = 0; i < cap; ++i) {
        if (s.point.x.is_zero()) break;
        out.push_back(delta_digit(alpha, s));
        if (i + 1 < cap) {
            try {
                s = flat1_step(alpha, s);
            } catch (const TerminatedOrbitError&) {
                break;
            }
        }
    }
    return out;
}

}  // namespace

FrequencyResult cylinder_frequency(const ExactReal& alpha, const ExactReal& x0,
                                   const CylinderSpec& spec, std::size_t n) {
    if (n == 0) throw PreconditionError("cylinder_frequency: need at least one step");
    validate_cylinder_spec(spec);
    FrequencyResult res;
    const std::size_t len = spec.length();

    if (spec.family == CylinderFamily::AlphaCF || spec.family == CylinderFamily::GaussPlanar) {
        std::vector<mpz_class> stream = signed_digit_stream(alpha, x0, n);
        const long lo = spec.family == CylinderFamily::AlphaCF ? 1 : spec.window_lo;
        // orbit position j (0-based) reads digit indices j+lo .. j+lo+len-1
        if (len == 0) {
            res.windows = res.count = n;
        } else {
            const long j_min = std::max<long>(0, 1 - lo);
            const long j_max = std::min<long>(static_cast<long>(n) - 1,
                                              static_cast<long>(n) - lo - static_cast<long>(len) + 1);
            if (j_max >= j_min) {
                res.windows = static_cast<std::size_t>(j_max - j_min + 1);
                res.count = count_matches(stream, spec.digits,
                                          static_cast<std::size_t>(j_min + lo - 1),
                                          static_cast<std::size_t>(j_max + lo - 1));
            }
        }
    } else {
        Flat1State s = flat1_start(alpha, x0);
        while (spec.family == CylinderFamily::Flat2 && !in_flat2_domain(s))
            s = flat1_step(alpha, s);
        DeltaWord stream;
        stream.reserve(n);
        for (std::size_t j = 1; j <= n; ++j) {
            if (s.point.x.is_zero())
                throw TerminatedOrbitError("cylinder_frequency: the orbit ended early");
            stream.push_back(delta_digit(alpha, s));
            if (j < n)
                s = spec.family == CylinderFamily::Flat1 ? flat1_step(alpha, s)
                                                         : flat2_step(alpha, s).state;
        }
        if (len == 0) {
            res.windows = res.count = n;
        } else if (n >= len) {
            res.windows = n - len + 1;
            res.count = count_symbol_matches(stream, spec.symbols);
        }
    }
    res.freq = static_cast<double>(res.count) / static_cast<double>(n);
    return res;
}

namespace {

constexpr std::size_t kStretchCap = 1500;
constexpr std::size_t kWarmup = 6;
constexpr std::size_t kBatchFloor = 400;
constexpr unsigned kSeedBits = 2048;

ExactReal random_interval_point(const ExactReal& alpha, SplitRng& rng) {
    mpz_class den = 1;
    den <<= kSeedBits;
    for (;;) {
        ExactReal x = alpha - kOne + ExactReal::rational(rng.next_mpz(kSeedBits), den);
        if (!x.is_zero()) return x;
    }
}

// Accumulates stretch counts for the shifted-time fraction and each
// requested pattern; per-stretch rates feed the batch-means sigma.
struct SideTotals {
    std::size_t steps = 0;
    std::size_t zero_hits = 0;
    std::vector<std::size_t> hits;
    std::vector<std::size_t> windows;
    std::vector<double> zero_rates;
    std::vector<std::vector<double>> spec_rates;

    explicit SideTotals(std::size_t n_specs)
        : hits(n_specs, 0), windows(n_specs, 0), spec_rates(n_specs) {}

    void absorb(const DeltaWord& syms, const std::vector<CylinderSpec>& specs) {
        if (syms.empty()) return;
        std::size_t z = 0;
        for (const DeltaSymbol& s : syms) z += s.cls == DeltaClass::Zero;
        steps += syms.size();
        zero_hits += z;
        if (syms.size() >= kBatchFloor)
            zero_rates.push_back(static_cast<double>(z) / static_cast<double>(syms.size()));
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const std::size_t len = specs[i].symbols.size();
            if (syms.size() < len || len == 0) continue;
            const std::size_t w = syms.size() - len + 1;
            const std::size_t h = count_symbol_matches(syms, specs[i].symbols);
            windows[i] += w;
            hits[i] += h;
            if (syms.size() >= kBatchFloor)
                spec_rates[i].push_back(static_cast<double>(h) / static_cast<double>(w));
        }
    }
};

double batch_sigma(const std::vector<double>& rates) {
    if (rates.size() < 2) return 0;
    double mean = 0;
    for (double r : rates) mean += r;
    mean /= static_cast<double>(rates.size());
    double ss = 0;
    for (double r : rates) ss += (r - mean) * (r - mean);
    const double b = static_cast<double>(rates.size());
    return std::sqrt(ss / (b - 1) / b);
}

std::optional<Flat1State> warmed_start(const ExactReal& alpha, const ExactReal& x0) {
    if (x0.is_zero()) return std::nullopt;
    try {
        Flat1State s = flat1_start(alpha, x0);
        for (std::size_t i = 0; i < kWarmup; ++i) s = flat1_step(alpha, s);
        if (s.point.x.is_zero()) return std::nullopt;
        return s;
    } catch (const TerminatedOrbitError&) {
        return std::nullopt;
    }
}

// One side of the report: a first stretch from x0 (possibly dead on
// arrival), then seeded stretches until n steps are in.
SideTotals run_side(const ExactReal& alpha, const ExactReal& x0,
                    const std::vector<CylinderSpec>& specs, std::size_t n, SplitRng rng,
                    bool use_x0, std::size_t* stretches_out) {
    SideTotals totals(specs.size());
    std::size_t seeded = 0;
    if (use_x0) {
        Flat1State s = flat1_start(alpha, x0);  // domain errors propagate
        totals.absorb(walk_symbols(alpha, s, std::min(kStretchCap, n)), specs);
    }
    while (totals.steps < n) {
        std::optional<Flat1State> s = warmed_start(alpha, random_interval_point(alpha, rng));
        if (!s) continue;
        ++seeded;
        totals.absorb(walk_symbols(alpha, *s, std::min(kStretchCap, n - totals.steps)), specs);
    }
    if (stretches_out) *stretches_out = seeded;
    return totals;
}

}  // namespace

NormalityReport farey_normality_report(const ExactReal& alpha, const ExactReal& x0,
                                       const std::vector<CylinderSpec>& specs, std::size_t n,
                                       std::uint64_t seed) {
    if (n == 0) throw PreconditionError("farey_normality_report: need at least one step");
    for (const CylinderSpec& spec : specs) {
        if (spec.family != CylinderFamily::Flat1)
            throw PreconditionError("farey_normality_report: patterns use the first-return coding");
        validate_cylinder_spec(spec);
    }
    SplitRng rng(seed, 0xFA);
    NormalityReport rep;
    rep.specs.resize(specs.size());

    std::size_t stretches = 0;
    SideTotals main = run_side(alpha, x0, specs, n, rng.split(1), true, &stretches);
    SideTotals ref = run_side(alpha, x0, specs, n, rng.split(2), false, nullptr);
    rep.steps = main.steps;
    rep.stretches = stretches;

    const double steps_main = static_cast<double>(main.steps);
    rep.n2_fraction = static_cast<double>(main.zero_hits) / steps_main;
    rep.n1_fraction = 1.0 - rep.n2_fraction;
    rep.n2_mu_estimate = static_cast<double>(ref.zero_hits) / static_cast<double>(ref.steps);
    const double sig_main = batch_sigma(main.zero_rates);
    const double sig_ref = batch_sigma(ref.zero_rates);
    rep.n2_std_error = std::sqrt(sig_main * sig_main + sig_ref * sig_ref);
    rep.n2_consistent =
        std::abs(rep.n2_fraction - rep.n2_mu_estimate) <= 3 * rep.n2_std_error + 1e-12;

    for (std::size_t i = 0; i < specs.size(); ++i) {
        SpecReport& sr = rep.specs[i];
        sr.spec = specs[i];
        sr.freq = main.windows[i] == 0 ? 0.0
                                       : static_cast<double>(main.hits[i]) /
                                             static_cast<double>(main.windows[i]);
        sr.mu_estimate = ref.windows[i] == 0 ? 0.0
                                             : static_cast<double>(ref.hits[i]) /
                                                   static_cast<double>(ref.windows[i]);
        const double sm = batch_sigma(main.spec_rates[i]);
        const double sp = batch_sigma(ref.spec_rates[i]);
        sr.std_error = std::sqrt(sm * sm + sp * sp);
        sr.consistent = std::abs(sr.freq - sr.mu_estimate) <= 3 * sr.std_error + 1e-12;
    }
    return rep;
}

namespace {

// Orbit value at a given iterate; expansions that ended stay at zero.
std::optional<ExactReal> orbit_value(const AlphaExpansion& e, std::size_t idx) {
    if (idx < e.orbit.size()) return e.orbit[idx];
    if (e.terminated) return ExactReal(0L);
    return std::nullopt;
}

}  // namespace

std::optional<MatchingResult> matching_detect(const ExactReal& alpha, std::size_t max_steps,
                                              std::size_t tail_digits) {
    if (alpha.sign() <= 0 || alpha >= kOne)
        throw DomainError("matching_detect: alpha must lie in (0, 1)");
    if (max_steps == 0) throw PreconditionError("matching_detect: need at least one step");
    // A float names the dyadic rational it stores; work with that value
    // exactly so equality and digit tails mean something.
    ExactReal a0 = alpha;
    if (alpha.is_bigfloat()) {
        const mpq_class q = alpha.float_value().to_rational();
        a0 = ExactReal::rational(q.get_num(), q.get_den());
    }
    const std::size_t total = max_steps + tail_digits;
    const AlphaExpansion ea = alpha_expand(a0, a0, total);
    const AlphaExpansion eb = alpha_expand(a0, a0 - kOne, total);

    for (std::size_t t = 2; t <= 2 * max_steps; ++t) {
        for (std::size_t n0 = t > max_steps ? t - max_steps : 1; n0 < t && n0 <= max_steps; ++n0) {
            const std::size_t m0 = t - n0;
            std::optional<ExactReal> va = orbit_value(ea, m0);
            std::optional<ExactReal> vb = orbit_value(eb, n0);
            if (!va || !vb || *va != *vb) continue;
            std::size_t avail_a = ea.digits.size() > m0 ? ea.digits.size() - m0 : 0;
            std::size_t avail_b = eb.digits.size() > n0 ? eb.digits.size() - n0 : 0;
            std::size_t checked = std::min({avail_a, avail_b, tail_digits});
            bool tails_agree = true;
            for (std::size_t j = 1; j <= checked && tails_agree; ++j)
                tails_agree = ea.c(m0 + j) == eb.c(n0 + j);
            if (!tails_agree) continue;  // a float coincidence, not a meeting
            return MatchingResult{m0, n0, checked};
        }
    }
    return std::nullopt;
}

namespace {

// Refine the image hull by one digit and push the branch matrix onto the
// running composition.
void refine_hull(const ExactReal& alpha, const mpz_class& c, ExactReal& lo, ExactReal& hi,
                 MobiusMatrix& m) {
    const mpz_class a = abs(c);
    const mpz_class a1 = a - 1;
    ExactReal b_lo, b_hi;
    if (c > 0) {
        b_lo = (ExactReal(a) + alpha).reciprocal();
        b_hi = (ExactReal(a1) + alpha).reciprocal();
    } else {
        b_lo = -(ExactReal(a1) + alpha).reciprocal();
        b_hi = -(ExactReal(a) + alpha).reciprocal();
    }
    if (b_lo > lo) lo = b_lo;
    if (b_hi < hi) hi = b_hi;
    if (!(lo < hi)) throw DomainError("the word names an empty cylinder");
    const MobiusMatrix step =
        c > 0 ? MobiusMatrix{-a, 1, 1, 0} : MobiusMatrix{-a, mpz_class(-1), 1, 0};
    const ExactReal i1 = mobius_apply(step, lo);
    const ExactReal i2 = mobius_apply(step, hi);
    if (i1 < i2) {
        lo = i1;
        hi = i2;
    } else {
        lo = i2;
        hi = i1;
    }
    m = step * m;
}

}  // namespace

ThinCylinder cylinder_certificate(const ExactReal& alpha, const std::vector<mpz_class>& word) {
    ThinCylinder t;
    t.word = word;
    ExactReal lo = alpha - kOne;
    ExactReal hi = alpha;
    MobiusMatrix m = MobiusMatrix::identity();
    for (const mpz_class& c : word) {
        if (c == 0) throw GrammarError("digits are nonzero");
        if (c < 0 && c > -2) throw GrammarError("a negative digit must have magnitude >= 2");
        refine_hull(alpha, c, lo, hi, m);
    }
    t.image_lo = lo;
    t.image_hi = hi;
    const MobiusMatrix inv = m.inverse();
    const ExactReal e1 = mobius_apply(inv, lo);
    const ExactReal e2 = mobius_apply(inv, hi);
    if (e1 < e2) {
        t.cylinder_lo = e1;
        t.cylinder_hi = e2;
    } else {
        t.cylinder_lo = e2;
        t.cylinder_hi = e1;
    }
    return t;
}

std::optional<ThinCylinder> thin_cylinder_search(const ExactReal& alpha, const ExactReal& eps,
                                                 std::size_t max_len, std::uint64_t seed) {
    if (eps.sign() <= 0) throw PreconditionError("thin_cylinder_search: eps must be positive");
    SplitRng rng(seed, 0x7C);
    constexpr std::size_t kAttempts = 6;

    for (std::size_t attempt = 0; attempt < kAttempts; ++attempt) {
        // both endpoint orbits clip their own cylinders at every level, so
        // they pinch as soon as they come back near an endpoint; random
        // starts are a fallback
        ExactReal v = attempt == 0   ? alpha - kOne
                      : attempt == 1 ? alpha
                                     : random_interval_point(alpha, rng);
        if (v.is_zero()) continue;  // alpha = 1 has no left endpoint orbit
        ExactReal lo = alpha - kOne;
        ExactReal hi = alpha;
        MobiusMatrix m = MobiusMatrix::identity();
        std::vector<mpz_class> word;
        for (;;) {
            if (hi - lo < eps) return cylinder_certificate(alpha, word);
            if (word.size() == max_len || v.is_zero()) break;
            const ExactReal r = v.abs().reciprocal();
            const mpz_class a = (r + kOne - alpha).floor();
            const mpz_class c = v.sign() > 0 ? a : mpz_class(-a);
            word.push_back(c);
            refine_hull(alpha, c, lo, hi, m);
            v = r - ExactReal(a);
        }
    }
    return std::nullopt;
}

}  // namespace afy
