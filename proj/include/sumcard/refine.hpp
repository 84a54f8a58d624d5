#pragma once
// Summary size reduction by iterated MinHash/LSH merging.
//
// Starting from the trivial summary (every resource its own bucket), each
// round computes signatures per bucket within each type, bins each signature
// row with a locality-sensitive hash, and schedules every bin's buckets to
// merge into its smallest member. When a round barely shrinks the graph the
// type set itself is coarsened by merging the most similar sampled type
// pair, which widens the merge candidates of later rounds. Merged buckets
// never cross types, and self-mapped resources (predicates, class objects)
// never participate.

#include "sumcard/minhash.hpp"
#include "sumcard/rational.hpp"
#include "sumcard/resource_types.hpp"
#include "sumcard/summary.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace sumcard {

struct MergedType {
    std::vector<ResourceId> classes;
    std::uint32_t partition = 0;
    std::vector<Rational> out, in;      // element-wise averages survive merging
    std::vector<ResourceId> buckets;    // sorted live members
    bool active = true;
};

// Average of the generalised Jaccard indexes of the degree vectors,
// normalised per entry; zero when class or partition types differ.
inline Rational type_similarity(const MergedType& a, const MergedType& b) {
    if (a.classes != b.classes || a.partition != b.partition) return Rational(0);
    if (a.out.size() != b.out.size() || a.in.size() != b.in.size()) return Rational(0);
    std::size_t k = a.out.size();
    if (k == 0) return Rational(1);
    auto ratio = [](const Rational& x, const Rational& y) {
        if (x == y) return Rational(1);
        const Rational& lo = x < y ? x : y;
        const Rational& hi = x < y ? y : x;
        if (hi.is_zero()) return Rational(1);
        return lo / hi;
    };
    Rational sum_out(0), sum_in(0);
    for (std::size_t i = 0; i < k; ++i) {
        sum_out += ratio(a.out[i], b.out[i]);
        sum_in += ratio(a.in[i], b.in[i]);
    }
    Rational norm(static_cast<long long>(k));
    return (sum_out / norm + sum_in / norm) / Rational(2);
}

inline MergedType merge_types(const MergedType& a, const MergedType& b) {
    MergedType m;
    m.classes = a.classes;
    m.partition = a.partition;
    Rational half(1, 2);
    m.out.reserve(a.out.size());
    m.in.reserve(a.in.size());
    for (std::size_t i = 0; i < a.out.size(); ++i) m.out.push_back((a.out[i] + b.out[i]) * half);
    for (std::size_t i = 0; i < a.in.size(); ++i) m.in.push_back((a.in[i] + b.in[i]) * half);
    m.buckets.reserve(a.buckets.size() + b.buckets.size());
    std::merge(a.buckets.begin(), a.buckets.end(), b.buckets.begin(), b.buckets.end(),
               std::back_inserter(m.buckets));
    return m;
}

// Repeatedly samples type pairs within (class, partition) groups and merges
// the most similar pair when it clears the 50% threshold, until the type
// count drops by a fifth or no sampled pair qualifies. Returns the number of
// merges performed.
inline std::size_t merge_similar_types(std::vector<MergedType>& registry, std::mt19937_64& rng,
                                       std::size_t sample_pairs = 500) {
    auto active_count = [&] {
        std::size_t n = 0;
        for (const auto& t : registry) n += t.active;
        return n;
    };
    std::size_t original = active_count();
    std::size_t floor_active = original - original / 5;  // stop at a 20% reduction
    std::size_t merges = 0;

    while (active_count() > floor_active) {
        // group active type indices by their comparable key
        std::map<std::pair<std::vector<ResourceId>, std::uint32_t>, std::vector<std::size_t>>
            groups;
        for (std::size_t i = 0; i < registry.size(); ++i) {
            if (registry[i].active) groups[{registry[i].classes, registry[i].partition}].push_back(i);
        }
        std::vector<const std::vector<std::size_t>*> pair_groups;
        for (const auto& [key, members] : groups) {
            (void)key;
            if (members.size() >= 2) pair_groups.push_back(&members);
        }
        if (pair_groups.empty()) break;

        std::size_t best_a = 0, best_b = 0;
        Rational best_sim(-1);
        for (std::size_t trial = 0; trial < sample_pairs; ++trial) {
            const auto& members = *pair_groups[rng() % pair_groups.size()];
            std::size_t x = members[rng() % members.size()];
            std::size_t y = members[rng() % members.size()];
            if (x == y) continue;
            if (x > y) std::swap(x, y);
            Rational sim = type_similarity(registry[x], registry[y]);
            if (sim > best_sim) {
                best_sim = sim;
                best_a = x;
                best_b = y;
            }
        }
        if (best_sim < Rational(1, 2)) break;
        registry[best_a] = merge_types(registry[best_a], registry[best_b]);
        registry[best_b].active = false;
        registry[best_b].buckets.clear();
        ++merges;
    }
    return merges;
}

struct RefineConfig {
    std::uint32_t minhash_rows = 20;
    std::uint32_t minhash_cols = 2;
    std::uint64_t seed = 0;
    std::uint64_t target = 30'000;
};

struct RefineResult {
    Summary summary;
    bool achieved = false;                 // |H| <= target reached
    std::vector<std::uint64_t> size_trace; // |H| after each round, front = initial
    std::uint64_t iterations = 0;
    std::uint64_t type_merges = 0;
    std::vector<std::pair<ResourceId, ResourceId>> merges;  // (source, target) provenance
};

inline RefineResult minhash_refine(const RdfGraph& g, const TypeAssignment& types,
                                   const RefineConfig& cfg, ResourceId rdf_type = kNoResource) {
    RefineResult result;
    result.summary = identity_summary(g);
    result.size_trace.push_back(result.summary.h.size());

    MinHashScheme scheme(cfg.minhash_rows, cfg.minhash_cols, cfg.seed);
    std::uint64_t lsh_seed = cfg.seed ^ 0xA24BAED4963EE407ull;
    std::mt19937_64 type_rng(cfg.seed ^ 0x9E6C63D0876A9A23ull);

    // type registry over non-self resources, deterministic order
    auto self = self_mapped_resources(g, rdf_type);
    std::map<ResourceType, std::vector<ResourceId>> grouped;
    for (ResourceId r : g.resources()) {
        if (!self.count(r)) grouped[types.of(r)].push_back(r);
    }
    std::vector<MergedType> registry;
    registry.reserve(grouped.size());
    for (auto& [t, members] : grouped) {
        MergedType rec;
        rec.classes = t.classes;
        rec.partition = t.partition;
        for (std::uint32_t v : t.out) rec.out.emplace_back(static_cast<long long>(v));
        for (std::uint32_t v : t.in) rec.in.emplace_back(static_cast<long long>(v));
        std::sort(members.begin(), members.end());
        rec.buckets = std::move(members);
        registry.push_back(std::move(rec));
    }

    for (;;) {
        if (result.summary.h.size() <= cfg.target) {
            result.achieved = true;
            return result;
        }
        ++result.iterations;
        std::vector<std::pair<ResourceId, ResourceId>> queue;

        for (MergedType& type : registry) {
            if (!type.active || type.buckets.size() < 2) continue;
            std::map<ResourceId, Signature> signatures;
            for (ResourceId b : type.buckets) {
                signatures[b] = signature_of(scheme, vicinity(result.summary, b, rdf_type));
            }
            for (std::uint32_t row = 0; row < scheme.rows(); ++row) {
                std::map<std::uint64_t, std::vector<ResourceId>> bins;
                for (ResourceId b : type.buckets) {
                    const Signature& sig = signatures[b];
                    std::uint64_t key =
                        lsh_row(sig.data() + static_cast<std::size_t>(row) * scheme.cols(),
                                scheme.cols(), lsh_seed);
                    bins[key].push_back(b);
                }
                std::vector<ResourceId> removed;
                for (const auto& [key, bin] : bins) {
                    (void)key;
                    if (bin.size() < 2) continue;
                    ResourceId target = bin.front();  // members arrive sorted
                    for (std::size_t i = 1; i < bin.size(); ++i) {
                        queue.emplace_back(bin[i], target);
                        removed.push_back(bin[i]);
                    }
                }
                if (!removed.empty()) {
                    std::sort(removed.begin(), removed.end());
                    std::vector<ResourceId> kept;
                    kept.reserve(type.buckets.size() - removed.size());
                    for (ResourceId b : type.buckets) {
                        if (!std::binary_search(removed.begin(), removed.end(), b))
                            kept.push_back(b);
                    }
                    type.buckets = std::move(kept);
                }
            }
        }

        std::uint64_t size_before = result.summary.h.size();
        if (!queue.empty()) {
            result.summary = result.summary.apply_merges(queue);
            result.merges.insert(result.merges.end(), queue.begin(), queue.end());
        }
        result.size_trace.push_back(result.summary.h.size());

        std::uint64_t size_after = result.summary.h.size();
        if (size_after <= cfg.target) continue;  // success test runs at loop head
        double shrink = static_cast<double>(size_before - size_after);
        double slack = static_cast<double>(size_after - cfg.target) * 0.01;
        if (shrink <= slack) {
            std::size_t merged = merge_similar_types(registry, type_rng);
            result.type_merges += merged;
            if (merged == 0) {
                result.achieved = false;
                return result;
            }
        }
    }
}

}  // namespace sumcard
