#pragma once
// Resource typing for summarisation: class membership, per-predicate
// in/out degree histogram buckets, and a graph partition id. Resources of
// equal type are candidates for sharing a summary bucket.

#include "sumcard/dictionary.hpp"
#include "sumcard/rdf_graph.hpp"
#include "sumcard/summary.hpp"
#include "sumcard/term_text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sumcard {

struct ResourceType {
    std::vector<ResourceId> classes;   // sorted; datatype for literals
    std::vector<std::uint32_t> out;    // histogram bucket per predicate, global order
    std::vector<std::uint32_t> in;
    std::uint32_t partition = 0;

    friend bool operator==(const ResourceType& a, const ResourceType& b) {
        return a.partition == b.partition && a.classes == b.classes && a.out == b.out &&
               a.in == b.in;
    }
    friend bool operator<(const ResourceType& a, const ResourceType& b) {
        if (a.classes != b.classes) return a.classes < b.classes;
        if (a.partition != b.partition) return a.partition < b.partition;
        if (a.out != b.out) return a.out < b.out;
        return a.in < b.in;
    }
};

struct HistogramSpec {
    std::uint32_t default_buckets = 1;
    std::map<std::pair<ResourceId, bool>, std::uint32_t> per_predicate;  // (pred, outgoing)
    bool auto_freedman_diaconis = false;

    std::uint32_t buckets_for(ResourceId pred, bool outgoing) const {
        auto it = per_predicate.find({pred, outgoing});
        return it == per_predicate.end() ? default_buckets : it->second;
    }
};

struct PartitionAssignment {
    std::unordered_map<ResourceId, std::uint32_t> part;  // missing resources sit in partition 0
    std::uint32_t parts = 1;

    std::uint32_t of(ResourceId r) const {
        auto it = part.find(r);
        return it == part.end() ? 0 : it->second;
    }
};

inline PartitionAssignment single_partition() { return {}; }

// fraction of triples whose subject and object land in different partitions
inline double edge_cut_fraction(const RdfGraph& g, const PartitionAssignment& pa) {
    if (g.empty()) return 0.0;
    std::uint64_t cut = 0;
    for (const Triple& t : g.triples()) {
        if (pa.of(t.s) != pa.of(t.o)) ++cut;
    }
    return static_cast<double>(cut) / static_cast<double>(g.size());
}

// falls back to one partition when the cut is too expensive to be useful
inline PartitionAssignment apply_cut_fallback(const RdfGraph& g, PartitionAssignment pa,
                                              double max_cut = 0.20) {
    if (pa.parts > 1 && edge_cut_fraction(g, pa) > max_cut) return single_partition();
    return pa;
}

// Seeded label propagation over the undirected subject-object adjacency.
inline PartitionAssignment label_propagation_partition(const RdfGraph& g, std::uint64_t seed,
                                                       int rounds = 10) {
    const auto& res = g.resources();
    std::unordered_map<ResourceId, std::uint32_t> index;
    for (std::uint32_t i = 0; i < res.size(); ++i) index[res[i]] = i;
    std::vector<std::vector<std::uint32_t>> adj(res.size());
    for (const Triple& t : g.triples()) {
        std::uint32_t a = index[t.s], b = index[t.o];
        if (a == b) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());

    std::vector<std::uint32_t> label(res.size());
    for (std::uint32_t i = 0; i < label.size(); ++i) label[i] = i;
    std::vector<std::uint32_t> order(res.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed);

    for (int round = 0; round < rounds; ++round) {
        std::shuffle(order.begin(), order.end(), rng);
        bool changed = false;
        std::unordered_map<std::uint32_t, std::uint32_t> freq;
        for (std::uint32_t i : order) {
            if (adj[i].empty()) continue;
            freq.clear();
            for (std::uint32_t nb : adj[i]) freq[label[nb]] += 1;
            std::uint32_t best = label[i], best_count = 0;
            for (const auto& [lab, count] : freq) {
                if (count > best_count || (count == best_count && lab < best)) {
                    best = lab;
                    best_count = count;
                }
            }
            if (best != label[i]) {
                label[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }

    PartitionAssignment pa;
    std::unordered_map<std::uint32_t, std::uint32_t> compact;
    for (std::uint32_t i = 0; i < res.size(); ++i) {
        auto [it, fresh] = compact.try_emplace(label[i], static_cast<std::uint32_t>(compact.size()));
        pa.part[res[i]] = it->second;
        (void)fresh;
    }
    pa.parts = compact.empty() ? 1 : static_cast<std::uint32_t>(compact.size());
    return pa;
}

// `resource<TAB>partition-id` per line
inline PartitionAssignment load_partition_file(const std::string& path, Dictionary& dict) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    PartitionAssignment pa;
    std::uint32_t max_part = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(line_no, "expected <resource>\\t<id>");
        std::size_t pos = 0;
        auto lexed = term_text::read_term(line.substr(0, tab), pos, dict, false);
        std::uint32_t id = static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1)));
        pa.part[lexed.resource] = id;
        max_part = std::max(max_part, id);
    }
    pa.parts = max_part + 1;
    return pa;
}

struct TypeAssignment {
    std::vector<ResourceId> predicates;  // non-class predicates, ascending id
    std::unordered_map<ResourceId, ResourceType> types;

    const ResourceType& of(ResourceId r) const { return types.at(r); }
};

namespace detail {

// Freedman-Diaconis bucket count over a sorted frequency sample.
inline std::uint32_t fd_bucket_count(const std::vector<std::uint64_t>& sorted_counts) {
    if (sorted_counts.size() < 2) return 1;
    double n = static_cast<double>(sorted_counts.size());
    double q1 = static_cast<double>(sorted_counts[sorted_counts.size() / 4]);
    double q3 = static_cast<double>(sorted_counts[(sorted_counts.size() * 3) / 4]);
    double iqr = q3 - q1;
    if (iqr <= 0.0) return 1;
    double width = 2.0 * iqr / std::cbrt(n);
    double range = static_cast<double>(sorted_counts.back() - sorted_counts.front());
    if (width <= 0.0 || range <= 0.0) return 1;
    double buckets = std::ceil(range / width);
    if (buckets < 1.0) return 1;
    if (buckets > 64.0) return 64;
    return static_cast<std::uint32_t>(buckets);
}

}  // namespace detail

// Computes a type for every resource of g. Histogram semantics: with one
// bucket the whole histogram collapses (every resource gets bucket 1); with
// J >= 2 buckets, resources without edges for the predicate/direction get
// the reserved entry 0 and the others are equi-depth sliced by ascending
// (count, id) into buckets 1..J.
inline TypeAssignment compute_types(const RdfGraph& g, const HistogramSpec& spec,
                                    const PartitionAssignment& partition,
                                    ResourceId rdf_type = kNoResource) {
    TypeAssignment out;
    const Dictionary& dict = g.dictionary();
    const auto& resources = g.resources();

    std::unordered_set<ResourceId> predicate_set;
    for (const Triple& t : g.triples()) {
        if (t.p != rdf_type) predicate_set.insert(t.p);
    }
    out.predicates.assign(predicate_set.begin(), predicate_set.end());
    std::sort(out.predicates.begin(), out.predicates.end());
    std::unordered_map<ResourceId, std::size_t> pred_index;
    for (std::size_t i = 0; i < out.predicates.size(); ++i) pred_index[out.predicates[i]] = i;

    std::unordered_map<ResourceId, std::vector<ResourceId>> classes;
    std::vector<std::unordered_map<ResourceId, std::uint64_t>> out_count(out.predicates.size());
    std::vector<std::unordered_map<ResourceId, std::uint64_t>> in_count(out.predicates.size());
    for (const Triple& t : g.triples()) {
        if (t.p == rdf_type) {
            classes[t.s].push_back(t.o);
            continue;
        }
        std::size_t pi = pred_index[t.p];
        out_count[pi][t.s] += 1;
        in_count[pi][t.o] += 1;
    }
    for (auto& [r, c] : classes) {
        (void)r;
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }

    for (ResourceId r : resources) {
        ResourceType t;
        if (dict.info(r).kind == ResourceKind::Literal) {
            t.classes = {dict.info(r).datatype};
        } else if (auto it = classes.find(r); it != classes.end()) {
            t.classes = it->second;
        }
        t.out.assign(out.predicates.size(), 0);
        t.in.assign(out.predicates.size(), 0);
        t.partition = partition.of(r);
        out.types.emplace(r, std::move(t));
    }

    auto fill_histogram = [&](std::size_t pi, bool outgoing) {
        const auto& count = outgoing ? out_count[pi] : in_count[pi];
        std::uint32_t j = spec.buckets_for(out.predicates[pi], outgoing);
        if (spec.auto_freedman_diaconis) {
            std::vector<std::uint64_t> sample;
            sample.reserve(count.size());
            for (const auto& [r, c] : count) {
                (void)r;
                sample.push_back(c);
            }
            std::sort(sample.begin(), sample.end());
            j = detail::fd_bucket_count(sample);
        }
        auto entry = [&](ResourceId r) -> std::uint32_t& {
            ResourceType& t = out.types.at(r);
            return outgoing ? t.out[pi] : t.in[pi];
        };
        if (j <= 1) {
            for (ResourceId r : resources) entry(r) = 1;
            return;
        }
        std::vector<std::pair<std::uint64_t, ResourceId>> ranked;
        ranked.reserve(count.size());
        for (const auto& [r, c] : count) ranked.emplace_back(c, r);
        std::sort(ranked.begin(), ranked.end());
        std::uint64_t slice = (ranked.size() + j - 1) / j;
        if (slice == 0) slice = 1;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            entry(ranked[i].second) = static_cast<std::uint32_t>(i / slice) + 1;
        }
        // resources absent from the count map keep the reserved entry 0
    };
    for (std::size_t pi = 0; pi < out.predicates.size(); ++pi) {
        fill_histogram(pi, true);
        fill_histogram(pi, false);
    }
    return out;
}

// Resources that keep their own bucket: predicates and class objects.
inline std::unordered_set<ResourceId> self_mapped_resources(const RdfGraph& g,
                                                            ResourceId rdf_type = kNoResource) {
    std::unordered_set<ResourceId> self;
    for (const Triple& t : g.triples()) {
        self.insert(t.p);
        if (t.p == rdf_type) self.insert(t.o);
    }
    return self;
}

// Summary whose buckets group same-type resources; predicates and class
// objects map to themselves.
inline Summary typed_summary(const RdfGraph& g, const TypeAssignment& types,
                             ResourceId rdf_type = kNoResource) {
    auto self = self_mapped_resources(g, rdf_type);
    std::unordered_map<ResourceId, ResourceId> mu;
    std::map<ResourceType, ResourceId> bucket_of_type;
    for (ResourceId r : g.resources()) {
        if (self.count(r)) {
            mu[r] = r;
            continue;
        }
        const ResourceType& t = types.of(r);
        auto it = bucket_of_type.find(t);
        if (it == bucket_of_type.end()) {
            it = bucket_of_type.emplace(t, g.dict()->fresh_bucket("t")).first;
        }
        mu[r] = it->second;
    }
    return Summary::summarize(g, mu);
}

}  // namespace sumcard
