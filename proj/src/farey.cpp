#include "afy/farey.hpp"

#include <cstddef>
#include <string>
#include <utility>

#include "afy/alpha_cf.hpp"
#include "afy/errors.hpp"

namespace afy {

namespace {

const ExactReal kZero(0L);
const ExactReal kOne(1L);
const ExactReal kTwo(2L);
const ExactReal kHalf = ExactReal::rational(1, 2);
const ExactReal kMinusHalf = ExactReal::rational(-1, 2);

void check_alpha_slow(const ExactReal& alpha) {
    if (alpha.sign() <= 0 || alpha > kOne)
        throw DomainError("slow-map alpha must lie in (0, 1]");
}

ExactReal minus_branch(const ExactReal& x) { return -x / (kOne + x); }
ExactReal plus_branch(const ExactReal& x) { return x / (kOne - x); }
ExactReal r_branch(const ExactReal& x) { return (kOne - x) / x; }

// The corner between the middle and top branches.
ExactReal branch_corner(const ExactReal& alpha) { return (kOne + alpha).reciprocal(); }

void check_slow_domain(const ExactReal& alpha, const ExactReal& x, const char* who) {
    if (compare_numeric(x, alpha - kOne) < 0 ||
        compare_numeric(x, alpha.reciprocal()) > 0)
        throw DomainError(std::string(who) + " needs x in [alpha-1, 1/alpha]");
}

// (p_n, q_n) with seeds (p_{-1}, q_{-1}) = (1, 0) and (p_0, q_0) = (0, 1).
std::pair<mpz_class, mpz_class> convergent_pair(const AlphaExpansion& e, long n) {
    if (n <= -1) return {1, 0};
    if (n == 0) return {0, 1};
    return e.convergents[static_cast<std::size_t>(n) - 1];
}

}  // namespace

FareySymbol farey_symbol(FareyTag tag) {
    FareySymbol s;
    s.tag = tag;
    switch (tag) {
        case FareyTag::Minus:
            s.matrix = MobiusMatrix{-1, 0, 1, 1};
            break;
        case FareyTag::Plus:
            s.matrix = MobiusMatrix{1, 0, 1, 1};
            break;
        case FareyTag::R:
            s.matrix = MobiusMatrix{0, 1, 1, 1};
            break;
        case FareyTag::Id:
            break;
    }
    return s;
}

ExactReal farey_step(const ExactReal& x) {
    if (x.sign() < 0 || x > kOne) throw DomainError("farey_step needs x in [0, 1]");
    if (x < kHalf) return plus_branch(x);
    return r_branch(x);
}

ExactReal alpha_farey_step(const ExactReal& alpha, const ExactReal& x) {
    check_alpha_slow(alpha);
    check_slow_domain(alpha, x, "alpha_farey_step");
    if (x.sign() < 0) return minus_branch(x);
    if (compare_numeric(x, branch_corner(alpha)) <= 0) return plus_branch(x);
    return r_branch(x);
}

FareySymbol symbol_of(const ExactReal& alpha, const ExactReal& x) {
    check_alpha_slow(alpha);
    check_slow_domain(alpha, x, "symbol_of");
    if (x.sign() < 0) return farey_symbol(FareyTag::Minus);
    if (x.is_zero()) return farey_symbol(FareyTag::Id);
    if (compare_numeric(x, branch_corner(alpha)) <= 0) return farey_symbol(FareyTag::Plus);
    return farey_symbol(FareyTag::R);
}

MobiusMatrix pi_product(const ExactReal& alpha, const ExactReal& x, std::size_t k) {
    MobiusMatrix m;
    ExactReal cur = x;
    for (std::size_t i = 0; i < k; ++i) {
        m = m * symbol_of(alpha, cur).matrix;
        cur = alpha_farey_step(alpha, cur);
    }
    return m;
}

std::size_t j_index(const ExactReal& alpha, const ExactReal& x) {
    check_alpha_slow(alpha);
    if (compare_numeric(x, alpha - kOne) < 0 || compare_numeric(x, alpha) >= 0)
        throw DomainError("j_index needs x in [alpha-1, alpha)");
    if (x.is_zero()) return 0;
    static const ExactReal golden = ExactReal::surd(-1, 1, 2, 5);
    if (compare_numeric(alpha, golden) > 0 && alpha < kOne &&
        compare_numeric(x, branch_corner(alpha)) >= 0)
        return 0;
    ExactReal cur = x;
    for (std::size_t k = 0; k < (std::size_t{1} << 20); ++k) {
        if (symbol_of(alpha, cur).tag == FareyTag::R) return k;
        cur = alpha_farey_step(alpha, cur);
    }
    throw IndexError("j_index: no visit to the top branch within 2^20 steps");
}

ExactReal induced_FJ(const ExactReal& alpha, const ExactReal& x) {
    std::size_t j = j_index(alpha, x);
    ExactReal cur = x;
    for (std::size_t i = 0; i <= j; ++i) cur = alpha_farey_step(alpha, cur);
    return cur;
}

FlatStep flat_step(const ExactReal& alpha, const ExactReal& x) {
    check_alpha_slow(alpha);
    if (compare_numeric(x, alpha - kOne) < 0 || x > kOne)
        throw DomainError("flat_step needs x in [alpha-1, 1]");
    ExactReal corner = branch_corner(alpha);
    if (compare_numeric(alpha, kHalf) < 0) {
        if (x < kMinusHalf) return {-x.reciprocal() - kTwo, 2};
        if (x.sign() < 0) return {minus_branch(x), 1};
        if (x < kHalf) return {plus_branch(x), 1};
        if (compare_numeric(x, corner) < 0) return {x.reciprocal() - kTwo, 2};
        return {r_branch(x), 1};
    }
    if (x.sign() < 0) return {minus_branch(x), 1};
    if (x < kHalf) return {plus_branch(x), 1};
    if (compare_numeric(x, corner) <= 0) return {x.reciprocal() - kTwo, 2};
    return {r_branch(x), 1};
}

ExactReal sharp_step(const ExactReal& alpha, const ExactReal& x) {
    check_alpha_slow(alpha);
    check_slow_domain(alpha, x, "sharp_step");
    if (x.sign() < 0) {
        ExactReal den = kOne + kTwo * x;
        if (den.is_zero()) throw PoleError("sharp_step has its pole at x = -1/2");
        return -x / den;
    }
    if (compare_numeric(x, branch_corner(alpha)) < 0) return plus_branch(x);
    return r_branch(x);
}

MediantStream mediant_sequence(const ExactReal& alpha, const ExactReal& x,
                               std::size_t count) {
    check_alpha_slow(alpha);
    if (compare_numeric(x, alpha - kOne) < 0 || compare_numeric(x, alpha) >= 0)
        throw DomainError("mediant_sequence needs x in [alpha-1, alpha)");
    MediantStream out{alpha, x, {}};
    if (count == 0) return out;
    AlphaExpansion e = alpha_expand(alpha, x, count + 2);

    // s[n] = a_1 + ... + a_n; block n owns stream indices (s[n-1], s[n]].
    std::vector<mpz_class> s(e.digits.size() + 1);
    for (std::size_t i = 0; i < e.digits.size(); ++i) s[i + 1] = s[i] + e.digits[i];

    std::size_t block = 1;
    for (std::size_t k = 1; k <= count; ++k) {
        while (block <= e.digits.size() && s[block] < static_cast<unsigned long>(k))
            ++block;
        StreamEntry entry;
        entry.k = k;
        if (block > e.digits.size()) {
            // past the end of a finite orbit; the product is frozen and the
            // stream keeps reporting x itself
            auto [pn, qn] = convergent_pair(e, static_cast<long>(e.digits.size()));
            entry.p = pn;
            entry.q = qn;
            entry.kind = EntryKind::Terminal;
            entry.n = e.digits.size();
        } else {
            auto [pm1, qm1] = convergent_pair(e, static_cast<long>(block) - 1);
            if (s[block] == static_cast<unsigned long>(k)) {
                entry.p = pm1;
                entry.q = qm1;
                entry.kind = EntryKind::Principal;
                entry.n = block;
            } else {
                auto [pm2, qm2] = convergent_pair(e, static_cast<long>(block) - 2);
                mpz_class ell = mpz_class(static_cast<unsigned long>(k)) - s[block - 1];
                int eps = e.eps[block - 1];
                entry.p = ell * pm1 + eps * pm2;
                entry.q = ell * qm1 + eps * qm2;
                entry.kind = EntryKind::Mediant;
                entry.n = block;
                entry.ell = ell.get_ui();
            }
        }
        out.entries.push_back(entry);
    }
    return out;
}

MediantStream flat_mediant_sequence(const ExactReal& alpha, const ExactReal& x,
                                    std::size_t count) {
    MediantStream full = mediant_sequence(alpha, x, 2 * count + 2);
    MediantStream out{alpha, x, {}};
    ExactReal cur = x;
    std::size_t k = 0;
    for (std::size_t j = 0; j < count; ++j) {
        if (cur.is_zero()) {
            k += 1;
        } else {
            FlatStep step = flat_step(alpha, cur);
            k += static_cast<std::size_t>(step.steps);
            cur = step.value;
        }
        out.entries.push_back(full.entries[k - 1]);
    }
    return out;
}

}  // namespace afy
