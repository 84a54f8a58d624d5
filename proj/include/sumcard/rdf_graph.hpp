#pragma once
// Immutable triple set with SPO/POS/OSP orderings. Any pattern with bound
// positions maps to a contiguous range of exactly one ordering, so match()
// returns a span and enumeration order is deterministic.

#include "sumcard/dictionary.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sumcard {

struct Triple {
    ResourceId s = 0, p = 0, o = 0;
    friend bool operator==(const Triple& a, const Triple& b) {
        return a.s == b.s && a.p == b.p && a.o == b.o;
    }
    friend bool operator!=(const Triple& a, const Triple& b) { return !(a == b); }
    friend bool operator<(const Triple& a, const Triple& b) {
        if (a.s != b.s) return a.s < b.s;
        if (a.p != b.p) return a.p < b.p;
        return a.o < b.o;
    }
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        auto mix = [](std::uint64_t x) {
            x += 0x9e3779b97f4a7c15ull;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            return x ^ (x >> 31);
        };
        return static_cast<std::size_t>(mix(t.s ^ mix(t.p ^ mix(t.o))));
    }
};

struct TriplePattern {
    std::optional<ResourceId> s, p, o;
    static TriplePattern all() { return {}; }
};

class RdfGraph {
public:
    RdfGraph() : dict_(std::make_shared<Dictionary>()) {}

    explicit RdfGraph(std::shared_ptr<Dictionary> dict) : dict_(std::move(dict)) {}

    RdfGraph(std::shared_ptr<Dictionary> dict, std::vector<Triple> triples)
        : dict_(std::move(dict)), spo_(std::move(triples)) {
        std::sort(spo_.begin(), spo_.end());
        spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());
        pos_ = spo_;
        std::sort(pos_.begin(), pos_.end(), pos_less);
        osp_ = spo_;
        std::sort(osp_.begin(), osp_.end(), osp_less);
        for (const Triple& t : spo_) {
            resources_.push_back(t.s);
            resources_.push_back(t.p);
            resources_.push_back(t.o);
        }
        std::sort(resources_.begin(), resources_.end());
        resources_.erase(std::unique(resources_.begin(), resources_.end()), resources_.end());
    }

    const std::shared_ptr<Dictionary>& dict() const { return dict_; }
    Dictionary& dictionary() const { return *dict_; }

    const std::vector<Triple>& triples() const { return spo_; }
    std::size_t size() const { return spo_.size(); }
    bool empty() const { return spo_.empty(); }

    // distinct resources occurring in any position, ascending ids
    const std::vector<ResourceId>& resources() const { return resources_; }

    bool contains(const Triple& t) const {
        return std::binary_search(spo_.begin(), spo_.end(), t);
    }

    std::span<const Triple> match(const TriplePattern& q) const {
        const bool bs = q.s.has_value(), bp = q.p.has_value(), bo = q.o.has_value();
        if (bs && bp && bo) {
            Triple t{*q.s, *q.p, *q.o};
            auto [lo, hi] = std::equal_range(spo_.begin(), spo_.end(), t);
            return {&*lo, static_cast<std::size_t>(hi - lo)};
        }
        if (bs) {
            if (bo) return range(osp_, Triple{*q.s, 0, *q.o}, /*fields=*/2);
            if (bp) return range(spo_, Triple{*q.s, *q.p, 0}, 2);
            return range(spo_, Triple{*q.s, 0, 0}, 1);
        }
        if (bp) {
            if (bo) return range(pos_, Triple{0, *q.p, *q.o}, 2);
            return range(pos_, Triple{0, *q.p, 0}, 1);
        }
        if (bo) return range(osp_, Triple{0, 0, *q.o}, 1);
        return {spo_.data(), spo_.size()};
    }

    std::size_t match_count(const TriplePattern& q) const { return match(q).size(); }

private:
    std::shared_ptr<Dictionary> dict_;
    std::vector<Triple> spo_, pos_, osp_;
    std::vector<ResourceId> resources_;

    static bool spo_less(const Triple& a, const Triple& b) { return a < b; }
    static bool pos_less(const Triple& a, const Triple& b) {
        if (a.p != b.p) return a.p < b.p;
        if (a.o != b.o) return a.o < b.o;
        return a.s < b.s;
    }
    static bool osp_less(const Triple& a, const Triple& b) {
        if (a.o != b.o) return a.o < b.o;
        if (a.s != b.s) return a.s < b.s;
        return a.p < b.p;
    }

    std::span<const Triple> range(const std::vector<Triple>& index, Triple probe,
                                  int fields) const {
        // ordering of each index lists its bound fields first, so a prefix
        // comparison over `fields` components yields one contiguous run
        auto prefix_less = [&](const Triple& a, const Triple& b) {
            ResourceId ka[3], kb[3];
            key_of(index, a, ka);
            key_of(index, b, kb);
            for (int i = 0; i < fields; ++i) {
                if (ka[i] != kb[i]) return ka[i] < kb[i];
            }
            return false;
        };
        auto lo = std::lower_bound(index.begin(), index.end(), probe, prefix_less);
        auto hi = std::upper_bound(index.begin(), index.end(), probe, prefix_less);
        if (lo == hi) return {};
        return {&*lo, static_cast<std::size_t>(hi - lo)};
    }

    void key_of(const std::vector<Triple>& index, const Triple& t, ResourceId out[3]) const {
        if (&index == &spo_) { out[0] = t.s; out[1] = t.p; out[2] = t.o; }
        else if (&index == &pos_) { out[0] = t.p; out[1] = t.o; out[2] = t.s; }
        else { out[0] = t.o; out[1] = t.s; out[2] = t.p; }
    }
};

}  // namespace sumcard
