#pragma once
// Expected cardinality, variance, and the q-error confidence bound of a
// conjunctive query over a summary.
//
// Two evaluation routes share one traversal scheme over the answers of the
// bucket-level query on the summarisation graph:
//   * the product form, valid when no two atoms can collapse onto one
//     summary triple after bucket mapping;
//   * the general form, which weighs every satisfied atom partition with
//     signed chain-count coefficients so that expansions equating atoms are
//     counted exactly once.
// Both run either in exact rational arithmetic or in double.

#include "sumcard/errors.hpp"
#include "sumcard/eval.hpp"
#include "sumcard/partition.hpp"
#include "sumcard/query.hpp"
#include "sumcard/rational.hpp"
#include "sumcard/summary.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

namespace sumcard {

enum class ArithmeticMode { Exact, Floating };
enum class EstimatePath { UnificationFree, General };

struct EstimatorOptions {
    ArithmeticMode mode = ArithmeticMode::Exact;
    int atom_cap = PartitionBase::kDefaultAtomCap;
    std::uint64_t answer_cap = 50'000'000;
};

struct Estimate {
    double value = 0.0;
    std::optional<Rational> exact;  // set in exact mode
    std::uint64_t answers_over_h = 0;
    EstimatePath path = EstimatePath::General;
};

struct VarianceEstimate {
    double value = 0.0;             // clamped at zero in floating mode
    double raw = 0.0;               // pre-clamp value, for diagnostics
    std::optional<Rational> exact;
    Estimate expectation;           // estimate of the base query
    std::uint64_t doubled_answers_over_h = 0;
};

struct BoundEstimate {
    double value = 0.0;  // upper bound on P(q-error >= eps), clamped to [0,1]
    std::optional<Rational> exact;
    VarianceEstimate variance;
};

namespace detail {

template <class Num>
struct NumTraits;

template <>
struct NumTraits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_u64(std::uint64_t v) { return Rational(v); }
    static Rational from_i64(std::int64_t v) { return Rational(static_cast<long long>(v)); }
    static Rational ratio(unsigned __int128 n, unsigned __int128 d) {
        return Rational::from_u128_ratio(n, d);
    }
    static bool negative(const Rational& v) { return v.is_negative(); }
};

template <>
struct NumTraits<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_u64(std::uint64_t v) { return static_cast<double>(v); }
    static double from_i64(std::int64_t v) { return static_cast<double>(v); }
    static double ratio(unsigned __int128 n, unsigned __int128 d) {
        return static_cast<double>(n) / static_cast<double>(d);
    }
    static bool negative(double v) { return v < -1e-9; }
};

struct MappedQuery {
    std::vector<Atom> atoms;  // per original atom, resources replaced by buckets
    Query bucket_query;       // deduplicated form evaluated over H
};

inline MappedQuery map_query(const Query& q, const Summary& s) {
    MappedQuery m;
    m.atoms.reserve(q.size());
    for (const Atom& a : q.atoms()) {
        Atom out = a;
        for (int i = 0; i < 3; ++i) {
            Term t = a.at(i);
            if (t.is_resource()) {
                auto b = s.map_resource(t.id);
                if (!b) {
                    throw UnknownResourceError("query resource " +
                                               s.h.dictionary().token(t.id) +
                                               " is not covered by the summary");
                }
                Term& slot = i == 0 ? out.s : i == 1 ? out.p : out.o;
                slot = Term::resource(*b);
            }
        }
        m.atoms.push_back(out);
    }
    m.bucket_query = Query(m.atoms, std::vector<std::string>(q.var_names()));
    return m;
}

inline Triple image_of(const Atom& mapped, const std::vector<ResourceId>& tau) {
    auto value = [&](Term t) { return t.is_resource() ? t.id : tau[t.id]; };
    return Triple{value(mapped.s), value(mapped.p), value(mapped.o)};
}

// Product form: expansions per variable times per-atom weight fractions.
template <class Num>
Num fold_product_form(const Query& q, const Summary& s, const MappedQuery& m,
                      const EstimatorOptions& opts, std::uint64_t& answers) {
    using T = NumTraits<Num>;
    Num total = T::zero();
    answers = 0;
    for_each_answer(m.bucket_query, s.h, [&](const std::vector<ResourceId>& tau) {
        if (++answers > opts.answer_cap) {
            throw CapExceededError("answer cap exceeded while summing over " +
                                   std::to_string(opts.answer_cap) + " summary answers");
        }
        Num contribution = T::one();
        for (std::uint64_t v : q.variables()) {
            contribution = contribution * T::from_u64(s.size_of_bucket(tau[v]));
        }
        for (const Atom& mapped : m.atoms) {
            Triple hit = image_of(mapped, tau);
            contribution = contribution * T::ratio(s.weight_of(hit), s.size_of_triple(hit));
        }
        total = total + contribution;
    });
    return total;
}

inline bool partition_satisfied(const QueryPartition& p, const Query& q, const Summary& s,
                                const std::vector<ResourceId>& tau) {
    for (std::uint64_t v : q.variables()) {
        Term target = p.unifier[v];
        if (target.is_variable()) {
            if (tau[v] != tau[target.id]) return false;
        } else {
            auto bucket = s.map_resource(target.id);
            if (!bucket || tau[v] != *bucket) return false;
        }
    }
    return true;
}

// number of expansions complying with the partition's unifier: one free
// choice per variable in the unifier's range
template <class Num>
Num expansion_count(const QueryPartition& p, const Query& q, const Summary& s,
                    const std::vector<ResourceId>& tau) {
    using T = NumTraits<Num>;
    std::vector<std::uint64_t> range_vars;
    for (std::uint64_t v : q.variables()) {
        if (p.unifier[v].is_variable()) range_vars.push_back(p.unifier[v].id);
    }
    std::sort(range_vars.begin(), range_vars.end());
    range_vars.erase(std::unique(range_vars.begin(), range_vars.end()), range_vars.end());
    Num c = T::one();
    for (std::uint64_t v : range_vars) c = c * T::from_u64(s.size_of_bucket(tau[v]));
    return c;
}

// probability that a prototypical expansion's triples all appear in a random
// world: falling-factorial ratios per hit summary triple, zero when a triple
// must host more distinct expansion triples than its weight allows
template <class Num>
Num containment_factor(const QueryPartition& p, const Summary& s, const MappedQuery& m,
                       const std::vector<ResourceId>& tau) {
    using T = NumTraits<Num>;
    std::vector<std::pair<Triple, std::uint64_t>> hits;  // summary triple -> block count
    for (const auto& block : p.blocks) {
        Triple h = image_of(m.atoms[block.front()], tau);
        bool found = false;
        for (auto& [t, n] : hits) {
            if (t == h) { n += 1; found = true; break; }
        }
        if (!found) hits.emplace_back(h, 1);
    }
    Num f = T::one();
    for (const auto& [h, n] : hits) {
        std::uint64_t w = s.weight_of(h);
        if (n > w) return T::zero();
        unsigned __int128 size = s.size_of_triple(h);
        for (std::uint64_t i = 0; i < n; ++i) {
            f = f * T::ratio(w - i, size - i);
        }
    }
    return f;
}

// General form over the partition base.
template <class Num>
Num fold_general_form(const Query& q, const Summary& s, const MappedQuery& m,
                      const PartitionBase& base, const EstimatorOptions& opts,
                      std::uint64_t& answers) {
    using T = NumTraits<Num>;
    const auto& parts = base.partitions();
    Num total = T::zero();
    answers = 0;

    std::vector<std::size_t> satisfied;
    std::vector<Num> coeff_c;
    std::vector<Num> factor_f;

    for_each_answer(m.bucket_query, s.h, [&](const std::vector<ResourceId>& tau) {
        if (++answers > opts.answer_cap) {
            throw CapExceededError("answer cap exceeded while summing over " +
                                   std::to_string(opts.answer_cap) + " summary answers");
        }
        satisfied.clear();
        for (std::size_t pi = 0; pi < parts.size(); ++pi) {
            if (partition_satisfied(parts[pi], q, s, tau)) satisfied.push_back(pi);
        }
        coeff_c.clear();
        factor_f.clear();
        for (std::size_t pi : satisfied) {
            coeff_c.push_back(expansion_count<Num>(parts[pi], q, s, tau));
            factor_f.push_back(containment_factor<Num>(parts[pi], s, m, tau));
        }
        Num contribution = T::zero();
        for (std::size_t a = 0; a < satisfied.size(); ++a) {
            Num inner = T::zero();
            for (std::size_t b = 0; b < satisfied.size(); ++b) {
                if (base.refines(satisfied[a], satisfied[b])) {
                    std::int64_t k = base.kappa(satisfied[a], satisfied[b]);
                    inner = inner + T::from_i64(k) * coeff_c[b];
                }
            }
            // inner counts the maximal expansions complying with exactly this
            // partition, so it can never be negative
            if (T::negative(inner)) {
                throw EstimationError("internal error: negative expansion count");
            }
            contribution = contribution + factor_f[a] * inner;
        }
        total = total + contribution;
    });
    return total;
}

}  // namespace detail

// True when no two distinct atoms can be mapped to one summary triple: every
// pair of bucket-level atom images fails to unify. Atoms whose images
// coincide unify trivially.
inline bool is_unification_free(const Query& q, const Summary& s) {
    detail::MappedQuery m = detail::map_query(q, s);
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < m.atoms.size(); ++j) {
            if (atoms_unifiable(m.atoms[i], m.atoms[j])) return false;
        }
    }
    return true;
}

namespace detail {

inline void require_usable(const Query& q, const Summary& s) {
    (void)q;
    if (!s.is_consistent()) {
        throw InconsistentSummaryError("summary is inconsistent: some weight exceeds its size");
    }
}

template <class Num>
Estimate run_product_form(const Query& q, const Summary& s, const EstimatorOptions& opts) {
    MappedQuery m = map_query(q, s);
    Estimate e;
    e.path = EstimatePath::UnificationFree;
    Num total = fold_product_form<Num>(q, s, m, opts, e.answers_over_h);
    if constexpr (std::is_same_v<Num, Rational>) {
        e.exact = total;
        e.value = total.to_double();
    } else {
        e.value = total;
    }
    return e;
}

template <class Num>
Estimate run_general_form(const Query& q, const Summary& s, const EstimatorOptions& opts) {
    MappedQuery m = map_query(q, s);
    PartitionBase base(q, opts.atom_cap);
    Estimate e;
    e.path = EstimatePath::General;
    Num total = fold_general_form<Num>(q, s, m, base, opts, e.answers_over_h);
    if constexpr (std::is_same_v<Num, Rational>) {
        e.exact = total;
        e.value = total.to_double();
    } else {
        e.value = total;
    }
    return e;
}

}  // namespace detail

// Product-form estimator; rejects queries it cannot handle.
inline Estimate expectation_fast(const Query& q, const Summary& s,
                                 const EstimatorOptions& opts = {}) {
    detail::require_usable(q, s);
    if (!is_unification_free(q, s)) {
        throw NotUnificationFreeError(
            "product form requested for a query whose atoms can merge after bucket mapping");
    }
    return opts.mode == ArithmeticMode::Exact ? detail::run_product_form<Rational>(q, s, opts)
                                              : detail::run_product_form<double>(q, s, opts);
}

// General estimator via the partition base; works for every query.
inline Estimate expectation_general(const Query& q, const Summary& s,
                                    const EstimatorOptions& opts = {}) {
    detail::require_usable(q, s);
    return opts.mode == ArithmeticMode::Exact ? detail::run_general_form<Rational>(q, s, opts)
                                              : detail::run_general_form<double>(q, s, opts);
}

// Dispatching front door: product form when sound, general form otherwise.
inline Estimate expectation(const Query& q, const Summary& s, const EstimatorOptions& opts = {}) {
    detail::require_usable(q, s);
    if (is_unification_free(q, s)) {
        return opts.mode == ArithmeticMode::Exact ? detail::run_product_form<Rational>(q, s, opts)
                                                  : detail::run_product_form<double>(q, s, opts);
    }
    return opts.mode == ArithmeticMode::Exact ? detail::run_general_form<Rational>(q, s, opts)
                                              : detail::run_general_form<double>(q, s, opts);
}

// q with every variable renamed fresh, unioned with q itself.
inline Query doubled_query(const Query& q) {
    std::vector<std::string> names(q.var_names());
    std::uint64_t offset = names.size();
    for (std::size_t i = 0; i < offset; ++i) names.push_back(names[i] + "'");
    std::vector<Atom> atoms(q.atoms());
    for (const Atom& a : q.atoms()) {
        Atom shifted = a;
        for (int i = 0; i < 3; ++i) {
            Term t = a.at(i);
            if (t.is_variable()) {
                Term& slot = i == 0 ? shifted.s : i == 1 ? shifted.p : shifted.o;
                slot = Term::variable(t.id + offset);
            }
        }
        atoms.push_back(shifted);
    }
    return Query(std::move(atoms), std::move(names));
}

// Variance through the second moment: E[q union fresh-renamed q] - E[q]^2.
inline VarianceEstimate variance(const Query& q, const Summary& s,
                                 const EstimatorOptions& opts = {}) {
    detail::require_usable(q, s);
    VarianceEstimate out;
    out.expectation = expectation(q, s, opts);
    Query doubled = doubled_query(q);
    Estimate second;
    try {
        second = expectation(doubled, s, opts);
    } catch (const CapExceededError& e) {
        throw CapExceededError(std::string("variance intractable: ") + e.what());
    }
    out.doubled_answers_over_h = second.answers_over_h;
    if (opts.mode == ArithmeticMode::Exact) {
        Rational var = *second.exact - *out.expectation.exact * *out.expectation.exact;
        if (var.is_negative()) {
            throw EstimationError("internal error: negative exact variance");
        }
        out.exact = var;
        out.value = out.raw = var.to_double();
        return out;
    }
    double e1 = out.expectation.value;
    double var = second.value - e1 * e1;
    out.raw = var;
    if (var < 0.0) {
        if (var >= -1e-6 * e1 * e1 - 1e-12) {
            var = 0.0;  // rounding residue of the alternating sums
        } else {
            throw EstimationError("internal error: variance " + std::to_string(var) +
                                  " is negative beyond rounding tolerance");
        }
    }
    out.value = var;
    return out;
}

// Bound on P(q-error >= eps) from precomputed moments. The sharper
// numerator applies only when eps strictly exceeds the expectation: at
// eps == E the tail event still includes worlds with answer counts at or
// below one, which the narrow concentration interval misses (two worlds
// with counts {1, 3} give a tail of 1/2 against a claimed cap of 1/4).
inline double bound_from_moments(double expectation, double var, double eps) {
    if (eps <= 1.0) throw std::invalid_argument("q-error threshold must exceed 1");
    if (expectation < 1.0) {
        throw BoundInapplicableError("bound inapplicable: expectation below one");
    }
    double denom = (eps - 1.0) * expectation;
    double scale = eps > expectation ? 1.0 / denom : eps / denom;
    return std::min(1.0, var * scale * scale);
}

inline Rational bound_from_moments_exact(const Rational& expectation, const Rational& var,
                                         const Rational& eps) {
    if (eps <= Rational(1)) throw std::invalid_argument("q-error threshold must exceed 1");
    if (expectation < Rational(1)) {
        throw BoundInapplicableError("bound inapplicable: expectation below one");
    }
    Rational denom = (eps - Rational(1)) * expectation;
    Rational scale = eps > expectation ? Rational(1) / denom : eps / denom;
    Rational bound = var * scale * scale;
    return bound > Rational(1) ? Rational(1) : bound;
}

// Upper bound on P(q-error >= eps) from expectation and variance; requires
// an expectation of at least one and eps > 1. The sharper numerator applies
// when eps dominates the expectation.
inline BoundEstimate qerror_bound(const Query& q, const Summary& s, const Rational& eps,
                                  const EstimatorOptions& opts = {}) {
    if (eps <= Rational(1)) {
        throw std::invalid_argument("q-error threshold must exceed 1");
    }
    BoundEstimate out;
    out.variance = variance(q, s, opts);
    const Estimate& e = out.variance.expectation;
    if (opts.mode == ArithmeticMode::Exact) {
        out.exact = bound_from_moments_exact(*e.exact, *out.variance.exact, eps);
        out.value = out.exact->to_double();
        return out;
    }
    out.value = bound_from_moments(e.value, out.variance.value, eps.to_double());
    return out;
}

}  // namespace sumcard
