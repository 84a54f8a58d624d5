#pragma once
// MinHash signatures over bucket vicinities. A vicinity is the set of
// (predicate, neighbour) pairs around a bucket in the summarisation graph,
// class-membership edges excluded; signature cells are minima of per-cell
// multiply-shift hashes, and the fraction of equal cells approximates the
// Jaccard similarity of the underlying vicinities.

#include "sumcard/dictionary.hpp"
#include "sumcard/summary.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace sumcard {

using VicinityPair = std::pair<ResourceId, ResourceId>;
using Signature = std::vector<std::uint64_t>;  // m*n cells, row-major

inline constexpr std::uint64_t kEmptySignatureCell = ~std::uint64_t{0};

class MinHashScheme {
public:
    MinHashScheme(std::uint32_t m, std::uint32_t n, std::uint64_t seed) : m_(m), n_(n) {
        std::mt19937_64 rng(seed);
        mults_.reserve(static_cast<std::size_t>(m) * n);
        for (std::size_t i = 0; i < static_cast<std::size_t>(m) * n; ++i) {
            unsigned __int128 hi = rng(), lo = rng();
            mults_.push_back(((hi << 64) | lo) | 1);  // odd multiplier
        }
    }

    std::uint32_t rows() const { return m_; }
    std::uint32_t cols() const { return n_; }

    std::uint64_t cell_hash(std::size_t cell, const VicinityPair& pair) const {
        unsigned __int128 x = (static_cast<unsigned __int128>(pair.first) << 64) | pair.second;
        return static_cast<std::uint64_t>((x * mults_[cell]) >> 64);
    }

private:
    std::uint32_t m_, n_;
    std::vector<unsigned __int128> mults_;
};

inline Signature signature_of(const MinHashScheme& scheme,
                              const std::vector<VicinityPair>& vicinity) {
    std::size_t cells = static_cast<std::size_t>(scheme.rows()) * scheme.cols();
    Signature sig(cells, kEmptySignatureCell);
    if (vicinity.empty()) return sig;
    for (std::size_t c = 0; c < cells; ++c) {
        std::uint64_t best = kEmptySignatureCell;
        for (const VicinityPair& p : vicinity) {
            best = std::min(best, scheme.cell_hash(c, p));
        }
        sig[c] = best;
    }
    return sig;
}

// fraction of matching cells; empty-against-empty cells match
inline double approx_jaccard(const Signature& a, const Signature& b) {
    std::size_t equal = 0;
    for (std::size_t i = 0; i < a.size(); ++i) equal += a[i] == b[i];
    return a.empty() ? 1.0 : static_cast<double>(equal) / static_cast<double>(a.size());
}

// (predicate, object) pairs out of b plus (subject, predicate) pairs into b,
// class-membership edges excluded; sorted and deduplicated.
inline std::vector<VicinityPair> vicinity(const Summary& s, ResourceId bucket,
                                          ResourceId class_predicate_bucket = kNoResource) {
    std::vector<VicinityPair> vic;
    for (const Triple& t : s.h.match(TriplePattern{bucket, std::nullopt, std::nullopt})) {
        if (t.p != class_predicate_bucket) vic.emplace_back(t.p, t.o);
    }
    for (const Triple& t : s.h.match(TriplePattern{std::nullopt, std::nullopt, bucket})) {
        if (t.p != class_predicate_bucket) vic.emplace_back(t.s, t.p);
    }
    std::sort(vic.begin(), vic.end());
    vic.erase(std::unique(vic.begin(), vic.end()), vic.end());
    return vic;
}

// exact Jaccard similarity of two vicinities; 1 when both are empty
inline double jaccard(const Summary& s, ResourceId b1, ResourceId b2,
                      ResourceId class_predicate_bucket = kNoResource) {
    auto v1 = vicinity(s, b1, class_predicate_bucket);
    auto v2 = vicinity(s, b2, class_predicate_bucket);
    std::vector<VicinityPair> inter, uni;
    std::set_intersection(v1.begin(), v1.end(), v2.begin(), v2.end(), std::back_inserter(inter));
    std::set_union(v1.begin(), v1.end(), v2.begin(), v2.end(), std::back_inserter(uni));
    if (uni.empty()) return 1.0;
    return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

// row hash for binning: order-dependent 64-bit mix of the row's cells
inline std::uint64_t lsh_row(const std::uint64_t* cells, std::size_t n, std::uint64_t seed) {
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= cells[i];
        h *= 0x100000001b3ull;
        h ^= h >> 29;
        h *= 0xbf58476d1ce4e5b9ull;
    }
    return h ^ (h >> 32);
}

}  // namespace sumcard
