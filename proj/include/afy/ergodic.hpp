#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "afy/exact_real.hpp"
#include "afy/natural_ext.hpp"

namespace afy {

// One symbol of the first-return coding.  Minus and Plus name the negative
// and positive slabs of the invariant domain; Zero names the shifted copy
// a gentle negative slab passes through on its way back down.
enum class DeltaClass { Minus, Plus, Zero };

struct DeltaSymbol {
    DeltaClass cls = DeltaClass::Plus;
    mpz_class k = 1;

    bool operator==(const DeltaSymbol& o) const { return cls == o.cls && k == o.k; }
    bool operator!=(const DeltaSymbol& o) const { return !(*this == o); }
};

using DeltaWord = std::vector<DeltaSymbol>;

inline DeltaSymbol sym_minus(long k) { return {DeltaClass::Minus, mpz_class(k)}; }
inline DeltaSymbol sym_plus(long k) { return {DeltaClass::Plus, mpz_class(k)}; }
inline DeltaSymbol sym_zero(long k) { return {DeltaClass::Zero, mpz_class(k)}; }

// Symbol read off one state of the first-return machine: the slab pair for
// slab states, Zero_k for shifted states (whose first coordinate stays in
// (0, 1]).  TerminatedOrbitError once the orbit has ended.
DeltaSymbol delta_digit(const ExactReal& alpha, const Flat1State& p);

// Grammar of the words the first-return machine can emit:
//   Minus and Zero need k >= 2, Plus needs k >= 1;
//   Zero_k appears only right after Minus_k;
//   Minus_k with k >= 3 is followed by Zero_k, or ends the word;
//   Zero_2 is followed by a Plus symbol, or ends the word;
//   Minus_2 is followed by Zero_2 or a Minus symbol, or ends the word.
// GrammarError on violation.
void validate_delta_word(const DeltaWord& w);

// Words of the second-return coding obey the same local rules except that
// Minus_2 Zero_2 never appear adjacent (the recoding below contracts that
// pair away), so a word may open with a bare Zero_2 and a Minus_2 can only
// be followed by another Minus symbol.
void validate_eta_word(const DeltaWord& w);

// Drop each Minus_2 that sits right before a Zero_2 / put one back in
// front of every Zero_2.  Mutually inverse on words whose validator
// accepts them.
DeltaWord delta_to_eta(const DeltaWord& w);
DeltaWord eta_to_delta(const DeltaWord& w);

// Signed scalar digits c_i <-> the symbol word of the same stretch of
// orbit.  An index-2 negative digit is gentle exactly when the next digit
// is positive, so a trailing -2 stays bare unless the orbit is known to
// have ended right there; deeper negative digits always drag their Zero_k
// behind them.
DeltaWord delta_word_from_digits(const std::vector<mpz_class>& c, bool ended = false);
std::vector<mpz_class> digits_from_delta_word(const DeltaWord& w);

// Steps 1..n of a first-return orbit split by symbol class: r lists the
// slab times (so r.front() == 1: the start must sit in a slab), n1 is the
// same list, n2 the shifted times.  Consecutive slab times differ by 1
// or 2.
struct OrbitDecomposition {
    DeltaWord symbols;
    std::vector<std::size_t> r;
    std::vector<std::size_t> n1;
    std::vector<std::size_t> n2;
};

OrbitDecomposition orbit_decomposition(const ExactReal& alpha, const Flat1State& start,
                                       std::size_t n);

// A finite digit pattern to count along an orbit.  AlphaCF and GaussPlanar
// use signed digits; Flat1 and Flat2 use symbol words.  GaussPlanar looks
// the pattern up through a window of digit indices starting at window_lo
// relative to the current time, so window_lo <= 0 reaches into the digits
// already consumed.
enum class CylinderFamily { AlphaCF, Flat1, Flat2, GaussPlanar };

struct CylinderSpec {
    CylinderFamily family = CylinderFamily::AlphaCF;
    std::vector<mpz_class> digits;
    DeltaWord symbols;
    long window_lo = 1;

    std::size_t length() const {
        return family == CylinderFamily::Flat1 || family == CylinderFamily::Flat2
                   ? symbols.size()
                   : digits.size();
    }
};

void validate_cylinder_spec(const CylinderSpec& spec);

struct FrequencyResult {
    double freq = 0;       // count / n
    std::size_t count = 0;
    std::size_t windows = 0;  // positions the pattern was actually tested at
};

// Birkhoff frequency of the pattern over n steps of the orbit of x0 (the
// return-map families start their machine at (x0, -infinity)).  Exact
// rational starts die and throw TerminatedOrbitError before reaching n;
// float starts run as fixed-precision pseudo-orbits at the precision of
// x0.  Patterns longer than the run count zero.
FrequencyResult cylinder_frequency(const ExactReal& alpha, const ExactReal& x0,
                                   const CylinderSpec& spec, std::size_t n);

// Empirical-vs-ensemble comparison for the first-return coding.  The main
// side walks n steps starting from x0; exact orbits only live for finitely
// many steps, so once a stretch dies the walk continues from independently
// seeded starts, and the ensemble side is built the same way from a split
// seed.  Standard errors are batch means across stretches; a comparison is
// consistent when the two sides agree within three combined sigma.
struct SpecReport {
    CylinderSpec spec;
    double freq = 0;
    double mu_estimate = 0;
    double std_error = 0;
    bool consistent = true;
};

struct NormalityReport {
    std::size_t steps = 0;      // steps accumulated on the main side
    std::size_t stretches = 0;  // seeded stretches the main side needed
    double n1_fraction = 0;
    double n2_fraction = 0;
    double n2_mu_estimate = 0;
    double n2_std_error = 0;
    bool n2_consistent = true;
    std::vector<SpecReport> specs;
};

NormalityReport farey_normality_report(const ExactReal& alpha, const ExactReal& x0,
                                       const std::vector<CylinderSpec>& specs, std::size_t n,
                                       std::uint64_t seed = 97);

// Smallest pair of iterate counts at which the orbit of alpha meets the
// orbit of alpha - 1 (smallest total first, then fewer steps on the
// alpha - 1 side).  Rational and surd alpha compare exactly; a float alpha
// must back a candidate up with tail_digits agreeing digits or it is
// dropped.  tail_checked reports how many digit pairs past the meeting
// point were compared.
struct MatchingResult {
    std::size_t alpha_steps = 0;
    std::size_t alpha_minus_one_steps = 0;
    std::size_t tail_checked = 0;
};

std::optional<MatchingResult> matching_detect(const ExactReal& alpha, std::size_t max_steps,
                                              std::size_t tail_digits = 100);

// Closed hull of the set of points whose expansion starts with `word`,
// together with the hull of its image under the word-length iterate.  The
// word must name a cylinder with interior (DomainError otherwise).
struct ThinCylinder {
    std::vector<mpz_class> word;
    ExactReal cylinder_lo, cylinder_hi;
    ExactReal image_lo, image_hi;
};

ThinCylinder cylinder_certificate(const ExactReal& alpha, const std::vector<mpz_class>& word);

// First prefix of the orbit of alpha - 1 whose image hull is shorter than
// eps.  When an exact orbit dies first (alpha = 1 kills it immediately),
// the search restarts from seeded points; empty optional once max_len
// digits per attempt never get there.
std::optional<ThinCylinder> thin_cylinder_search(const ExactReal& alpha, const ExactReal& eps,
                                                 std::size_t max_len, std::uint64_t seed = 11);

}  // namespace afy
