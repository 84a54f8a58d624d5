#pragma once
// Exact conjunctive query evaluation by index nested loop joins. Join order
// is greedy per recursion level: most bound positions first, ties broken by
// the smaller index range, then input order, so answer enumeration order is
// deterministic. Answers stream through a callback; nothing is materialised
// unless the caller asks for it.

#include "sumcard/query.hpp"
#include "sumcard/rational.hpp"
#include "sumcard/rdf_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace sumcard {

namespace detail {

// binding uses kNoResource as the unbound sentinel
inline TriplePattern pattern_of(const Atom& a, const std::vector<ResourceId>& binding) {
    TriplePattern p;
    auto slot = [&](Term t) -> std::optional<ResourceId> {
        if (t.is_resource()) return t.id;
        ResourceId b = binding[t.id];
        if (b != kNoResource) return b;
        return std::nullopt;
    };
    p.s = slot(a.s);
    p.p = slot(a.p);
    p.o = slot(a.o);
    return p;
}

inline int bound_positions(const Atom& a, const std::vector<ResourceId>& binding) {
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        Term t = a.at(i);
        if (t.is_resource() || binding[t.id] != kNoResource) ++n;
    }
    return n;
}

// Extends the binding with one matched triple; returns the vars newly bound,
// or nullopt when a repeated variable in the atom disagrees.
inline bool bind_triple(const Atom& a, const Triple& t, std::vector<ResourceId>& binding,
                        std::vector<std::uint64_t>& newly_bound) {
    ResourceId values[3] = {t.s, t.p, t.o};
    for (int i = 0; i < 3; ++i) {
        Term term = a.at(i);
        if (term.is_resource()) {
            if (term.id != values[i]) return false;  // cannot happen for index matches
            continue;
        }
        ResourceId& slot = binding[term.id];
        if (slot == kNoResource) {
            slot = values[i];
            newly_bound.push_back(term.id);
        } else if (slot != values[i]) {
            return false;
        }
    }
    return true;
}

template <class Fn>
class Evaluator {
public:
    Evaluator(const Query& q, const RdfGraph& g, Fn& fn) : q_(q), g_(g), fn_(fn) {}

    // first_splits > 1 restricts the top-level match range to chunk
    // first_index; the union over all chunks equals the unsplit stream.
    void run(std::size_t first_splits = 1, std::size_t first_index = 0) {
        binding_.assign(q_.var_count(), kNoResource);
        remaining_.resize(q_.size());
        for (std::size_t i = 0; i < q_.size(); ++i) remaining_[i] = i;
        recurse(true, first_splits, first_index);
    }

private:
    const Query& q_;
    const RdfGraph& g_;
    Fn& fn_;
    std::vector<ResourceId> binding_;
    std::vector<std::size_t> remaining_;

    void recurse(bool top, std::size_t splits, std::size_t split_index) {
        if (remaining_.empty()) {
            const std::vector<ResourceId>& answer = binding_;
            fn_(answer);
            return;
        }
        std::size_t pick = select_atom();
        const Atom& atom = q_.atoms()[remaining_[pick]];
        std::size_t saved = remaining_[pick];
        remaining_.erase(remaining_.begin() + static_cast<std::ptrdiff_t>(pick));

        auto matches = g_.match(pattern_of(atom, binding_));
        std::size_t lo = 0, hi = matches.size();
        if (top && splits > 1) {
            std::size_t chunk = (matches.size() + splits - 1) / splits;
            lo = std::min(matches.size(), split_index * chunk);
            hi = std::min(matches.size(), lo + chunk);
        }
        std::vector<std::uint64_t> newly_bound;
        for (std::size_t i = lo; i < hi; ++i) {
            newly_bound.clear();
            if (bind_triple(atom, matches[i], binding_, newly_bound)) {
                recurse(false, 1, 0);
            }
            for (std::uint64_t v : newly_bound) binding_[v] = kNoResource;
        }
        remaining_.insert(remaining_.begin() + static_cast<std::ptrdiff_t>(pick), saved);
    }

    std::size_t select_atom() const {
        std::size_t best = 0;
        int best_bound = -1;
        std::size_t best_count = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < remaining_.size(); ++i) {
            const Atom& a = q_.atoms()[remaining_[i]];
            int nb = bound_positions(a, binding_);
            std::size_t cnt = 0;
            if (nb >= best_bound) cnt = g_.match_count(pattern_of(a, binding_));
            if (nb > best_bound || (nb == best_bound && cnt < best_count)) {
                best = i;
                best_bound = nb;
                best_count = cnt;
            }
        }
        return best;
    }
};

}  // namespace detail

// Streams every answer to q on g exactly once. An answer is the vector of
// resource ids indexed by variable id. The empty query yields one answer.
template <class Fn>
void for_each_answer(const Query& q, const RdfGraph& g, Fn&& fn) {
    detail::Evaluator<Fn> ev(q, g, fn);
    ev.run();
}

// Split variant: processes chunk `index` of the top-level atom's match range.
template <class Fn>
void for_each_answer_split(const Query& q, const RdfGraph& g, std::size_t splits,
                           std::size_t index, Fn&& fn) {
    if (q.empty()) {
        // single empty answer belongs to chunk 0 only
        if (index == 0) {
            const std::vector<ResourceId> empty;
            fn(empty);
        }
        return;
    }
    detail::Evaluator<Fn> ev(q, g, fn);
    ev.run(splits, index);
}

inline std::uint64_t cardinality(const Query& q, const RdfGraph& g) {
    std::uint64_t n = 0;
    for_each_answer(q, g, [&](const std::vector<ResourceId>&) { ++n; });
    return n;
}

inline std::vector<std::vector<ResourceId>> all_answers(const Query& q, const RdfGraph& g) {
    std::vector<std::vector<ResourceId>> out;
    for_each_answer(q, g, [&](const std::vector<ResourceId>& b) { out.push_back(b); });
    return out;
}

// Multiplicative error of estimate e against truth n, both clamped to >= 1.
inline double qerror(double n, double e) {
    double np = n < 1.0 ? 1.0 : n;
    double ep = e < 1.0 ? 1.0 : e;
    return np > ep ? np / ep : ep / np;
}

inline Rational qerror_exact(const Rational& n, const Rational& e) {
    Rational one(1);
    Rational np = n < one ? one : n;
    Rational ep = e < one ? one : e;
    return np > ep ? np / ep : ep / np;
}

}  // namespace sumcard
