#pragma once
// Brute-force ground truth. A consistent summary stands for the graphs
// obtained by independently expanding each summary triple into weight-many
// triples of its preimage. Worlds are addressed by a mixed-radix rank: one
// k-subset rank per summary triple, unranked on demand, so cursors are O(1)
// and ranges can be split. Strictly a desk-scale tool.

#include "sumcard/bigint.hpp"
#include "sumcard/errors.hpp"
#include "sumcard/eval.hpp"
#include "sumcard/query.hpp"
#include "sumcard/rational.hpp"
#include "sumcard/rdf_graph.hpp"
#include "sumcard/summary.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace sumcard {

namespace detail {

inline std::uint64_t small_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return static_cast<std::uint64_t>(c);
}

// lexicographic rank -> ascending k-subset of [0, n)
inline void unrank_subset(std::uint64_t n, std::uint64_t k, std::uint64_t rank,
                          std::vector<std::uint64_t>& out) {
    out.clear();
    std::uint64_t start = 0;
    while (k > 0) {
        for (std::uint64_t c = start; c < n; ++c) {
            std::uint64_t with_c = small_binomial(n - c - 1, k - 1);
            if (rank < with_c) {
                out.push_back(c);
                start = c + 1;
                k -= 1;
                break;
            }
            rank -= with_c;
        }
    }
}

}  // namespace detail

class WorldSpace {
public:
    static constexpr std::uint64_t kDefaultCap = 1'000'000;

    // Enumeration requires the world count to fit under `cap`; sampling does
    // not, so the cap check is deferred until a full-enumeration entry point.
    explicit WorldSpace(const Summary& s, std::uint64_t cap = kDefaultCap) : summary_(&s) {
        consistent_ = s.is_consistent();
        if (!consistent_) {
            count_ = 0;
            enumerable_ = true;
            return;
        }
        BigInt exact = s.count_worlds();
        enumerable_ = exact <= BigInt(cap);
        cap_message_ = enumerable_ ? std::string()
                                   : "world space holds " + exact.to_string() +
                                         " graphs, enumeration cap is " + std::to_string(cap);
        count_ = enumerable_ ? exact.as_u64() : 0;

        auto pre = s.preimages();
        for (const Triple& t : s.h.triples()) {
            Slot slot;
            slot.subjects = pre.at(t.s);
            slot.predicates = pre.at(t.p);
            slot.objects = pre.at(t.o);
            slot.weight = s.weight_of(t);
            slot.size = slot.subjects.size() * slot.predicates.size() * slot.objects.size();
            slot.combinations = enumerable_ ? detail::small_binomial(slot.size, slot.weight) : 0;
            slots_.push_back(std::move(slot));
        }
    }

    bool consistent() const { return consistent_; }
    bool enumerable() const { return enumerable_; }

    std::uint64_t count() const {
        require_enumerable();
        return count_;
    }

    // world at a given mixed-radix rank, deterministic across runs
    RdfGraph world_at(std::uint64_t rank) const {
        require_enumerable();
        if (rank >= count_) throw std::out_of_range("world rank out of range");
        std::vector<Triple> triples;
        std::vector<std::uint64_t> subset;
        for (const Slot& slot : slots_) {
            std::uint64_t r = rank % slot.combinations;
            rank /= slot.combinations;
            detail::unrank_subset(slot.size, slot.weight, r, subset);
            slot.emit(subset, triples);
        }
        return RdfGraph(summary_->h.dict(), std::move(triples));
    }

    template <class Fn>
    void for_each_world(Fn&& fn) const {
        require_enumerable();
        if (!consistent_) return;
        // odometer over per-slot combination ranks; world 0 first
        std::vector<std::uint64_t> ranks(slots_.size(), 0);
        std::vector<std::uint64_t> subset;
        for (std::uint64_t w = 0; w < count_; ++w) {
            std::vector<Triple> triples;
            for (std::size_t i = 0; i < slots_.size(); ++i) {
                detail::unrank_subset(slots_[i].size, slots_[i].weight, ranks[i], subset);
                slots_[i].emit(subset, triples);
            }
            fn(RdfGraph(summary_->h.dict(), std::move(triples)));
            for (std::size_t i = 0; i < ranks.size(); ++i) {
                if (++ranks[i] < slots_[i].combinations) break;
                ranks[i] = 0;
            }
        }
    }

    // uniform draw: an independent uniform weight-subset per summary triple
    RdfGraph sample(std::mt19937_64& rng) const {
        if (!consistent_) throw EstimationError("cannot sample an inconsistent summary");
        std::vector<Triple> triples;
        std::vector<std::uint64_t> chosen;
        for (const Slot& slot : slots_) {
            chosen.clear();
            // Floyd's algorithm over [0, size)
            for (std::uint64_t j = slot.size - slot.weight; j < slot.size; ++j) {
                std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
                if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) {
                    chosen.push_back(j);
                } else {
                    chosen.push_back(t);
                }
            }
            std::sort(chosen.begin(), chosen.end());
            slot.emit(chosen, triples);
        }
        return RdfGraph(summary_->h.dict(), std::move(triples));
    }

private:
    struct Slot {
        std::vector<ResourceId> subjects, predicates, objects;
        std::uint64_t weight = 0;
        std::uint64_t size = 0;
        std::uint64_t combinations = 1;

        void emit(const std::vector<std::uint64_t>& subset, std::vector<Triple>& out) const {
            std::uint64_t po = predicates.size() * objects.size();
            for (std::uint64_t flat : subset) {
                out.push_back(Triple{subjects[flat / po],
                                     predicates[(flat % po) / objects.size()],
                                     objects[flat % objects.size()]});
            }
        }
    };

    const Summary* summary_;
    std::vector<Slot> slots_;
    bool consistent_ = false;
    bool enumerable_ = false;
    std::uint64_t count_ = 0;
    std::string cap_message_;

    void require_enumerable() const {
        if (!enumerable_) throw CapExceededError(cap_message_);
    }
};

struct ExactMoments {
    Rational expectation;
    Rational variance;
    std::uint64_t worlds = 0;
};

// Expected cardinality and variance straight from the definition: average of
// answer counts over every represented graph.
inline ExactMoments exact_moments(const Query& q, const Summary& s,
                                  std::uint64_t cap = WorldSpace::kDefaultCap) {
    WorldSpace space(s, cap);
    if (!space.consistent()) {
        throw InconsistentSummaryError("no worlds: summary is inconsistent");
    }
    unsigned __int128 sum = 0, sum_sq = 0;
    space.for_each_world([&](const RdfGraph& world) {
        std::uint64_t c = cardinality(q, world);
        sum += c;
        sum_sq += static_cast<unsigned __int128>(c) * c;
    });
    ExactMoments m;
    m.worlds = space.count();
    Rational n = Rational(BigInt(m.worlds));
    m.expectation = Rational(BigInt::from_u128(sum)) / n;
    m.variance = Rational(BigInt::from_u128(sum_sq)) / n - m.expectation * m.expectation;
    return m;
}

inline Rational exact_expectation(const Query& q, const Summary& s,
                                  std::uint64_t cap = WorldSpace::kDefaultCap) {
    return exact_moments(q, s, cap).expectation;
}

inline Rational exact_variance(const Query& q, const Summary& s,
                               std::uint64_t cap = WorldSpace::kDefaultCap) {
    return exact_moments(q, s, cap).variance;
}

}  // namespace sumcard
