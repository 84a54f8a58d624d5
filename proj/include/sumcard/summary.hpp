#pragma once
// The summary structure: a weighted summarisation graph H over buckets, a
// surjective resource-to-bucket map mu, and per-bucket sizes. A summary
// stands for the family of graphs that collapse onto it exactly; weights
// count how many original triples collapsed onto each summary triple.
//
// File format (UTF-8, line-based, fields in term spelling):
//   SUMRDF 1
//   B <bucket> <size>          one per bucket
//   M <resource> <bucket>      one per non-identity mu entry
//   T <s> <p> <o> <weight>     one per summary triple
// A resource with no M line maps to the bucket with the same lexical form.

#include "sumcard/bigint.hpp"
#include "sumcard/dictionary.hpp"
#include "sumcard/rdf_graph.hpp"
#include "sumcard/term_text.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sumcard {

struct SummaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Summary {
public:
    RdfGraph h;                                                // summarisation graph
    std::unordered_map<Triple, std::uint64_t, TripleHash> weight;  // dom(weight) == triples of h
    std::unordered_map<ResourceId, ResourceId> mu;             // complete map, identity included
    std::unordered_map<ResourceId, std::uint64_t> bucket_size; // |mu^-1(b)| per bucket

    Summary() = default;

    std::uint64_t weight_of(const Triple& t) const {
        auto it = weight.find(t);
        if (it == weight.end()) throw SummaryError("weight requested for non-summary triple");
        return it->second;
    }

    std::uint64_t size_of_bucket(ResourceId b) const {
        auto it = bucket_size.find(b);
        if (it == bucket_size.end()) throw SummaryError("unknown bucket");
        return it->second;
    }

    unsigned __int128 size_of_triple(const Triple& t) const {
        return static_cast<unsigned __int128>(size_of_bucket(t.s)) * size_of_bucket(t.p) *
               size_of_bucket(t.o);
    }

    std::optional<ResourceId> map_resource(ResourceId r) const {
        auto it = mu.find(r);
        if (it == mu.end()) return std::nullopt;
        return it->second;
    }

    bool is_consistent() const {
        for (const Triple& t : h.triples()) {
            if (static_cast<unsigned __int128>(weight_of(t)) > size_of_triple(t)) return false;
        }
        return true;
    }

    // number of graphs the summary stands for; 0 when inconsistent
    BigInt count_worlds() const {
        if (!is_consistent()) return BigInt(0);
        BigInt n(1);
        for (const Triple& t : h.triples()) {
            n *= binomial(size_of_triple(t), weight_of(t));
        }
        return n;
    }

    std::uint64_t total_weight() const {
        std::uint64_t sum = 0;
        for (const Triple& t : h.triples()) sum += weight_of(t);
        return sum;
    }

    // bucket -> ascending list of its source resources
    std::map<ResourceId, std::vector<ResourceId>> preimages() const {
        std::map<ResourceId, std::vector<ResourceId>> pre;
        for (const auto& [r, b] : mu) pre[b].push_back(r);
        for (auto& [b, v] : pre) std::sort(v.begin(), v.end());
        return pre;
    }

    // Collapses a data graph through mu. mu must cover every resource of g;
    // the result represents g by construction.
    static Summary summarize(const RdfGraph& g,
                             const std::unordered_map<ResourceId, ResourceId>& mu) {
        Summary s;
        s.mu = mu;
        for (ResourceId r : g.resources()) {
            if (!mu.count(r)) {
                throw SummaryError("resource " + g.dictionary().token(r) +
                                   " missing from summarisation function");
            }
        }
        for (const auto& [r, b] : mu) {
            (void)r;
            s.bucket_size[b] += 1;
        }
        std::vector<Triple> collapsed;
        collapsed.reserve(g.size());
        for (const Triple& t : g.triples()) {
            collapsed.push_back(Triple{mu.at(t.s), mu.at(t.p), mu.at(t.o)});
            s.weight[collapsed.back()] += 1;
        }
        s.h = RdfGraph(g.dict(), std::move(collapsed));
        // surjectivity: buckets reachable through mu but absent from H can
        // only arise from a mu domain wider than res(g)
        for (const auto& [b, n] : s.bucket_size) {
            (void)n;
            if (!std::binary_search(s.h.resources().begin(), s.h.resources().end(), b)) {
                throw SummaryError("summarisation function maps onto bucket " +
                                   g.dictionary().token(b) + " that no summary triple uses");
            }
        }
        return s;
    }

    Summary merge_buckets(ResourceId from, ResourceId into) const {
        if (from == into) throw SummaryError("cannot merge a bucket into itself");
        return apply_merges({{from, into}});
    }

    // Applies a queue of (source, target) merges. Later pairs may reference
    // buckets already merged away; redirects are followed.
    Summary apply_merges(const std::vector<std::pair<ResourceId, ResourceId>>& pairs) const {
        std::unordered_map<ResourceId, ResourceId> redirect;
        auto resolve = [&](ResourceId b) {
            while (true) {
                auto it = redirect.find(b);
                if (it == redirect.end()) return b;
                b = it->second;
            }
        };
        for (auto [from, into] : pairs) {
            if (!bucket_size.count(from) || !bucket_size.count(into))
                throw SummaryError("merge of unknown bucket");
            ResourceId f = resolve(from), t = resolve(into);
            if (f == t) continue;
            redirect[f] = t;
        }
        Summary out;
        for (const auto& [r, b] : mu) out.mu[r] = resolve(b);
        for (const auto& [r, b] : out.mu) {
            (void)r;
            out.bucket_size[b] += 1;
        }
        std::vector<Triple> rewritten;
        rewritten.reserve(h.size());
        for (const Triple& t : h.triples()) {
            Triple nt{resolve(t.s), resolve(t.p), resolve(t.o)};
            rewritten.push_back(nt);
            out.weight[nt] += weight_of(t);
        }
        out.h = RdfGraph(h.dict(), std::move(rewritten));
        return out;
    }

    // Structural invariants; throws on violation.
    void validate() const {
        if (weight.size() != h.size()) throw SummaryError("weight domain differs from H");
        for (const Triple& t : h.triples()) {
            if (weight_of(t) == 0) throw SummaryError("zero weight");
        }
        std::unordered_map<ResourceId, std::uint64_t> counted;
        for (const auto& [r, b] : mu) {
            (void)r;
            counted[b] += 1;
        }
        if (counted.size() != bucket_size.size()) throw SummaryError("bucket set mismatch");
        for (const auto& [b, n] : counted) {
            auto it = bucket_size.find(b);
            if (it == bucket_size.end() || it->second != n)
                throw SummaryError("bucket size differs from preimage count");
        }
        for (ResourceId b : h.resources()) {
            if (!bucket_size.count(b)) throw SummaryError("summary triple over unknown bucket");
        }
        for (const auto& [b, n] : bucket_size) {
            (void)n;
            if (!std::binary_search(h.resources().begin(), h.resources().end(), b))
                throw SummaryError("bucket unused by any summary triple");
        }
    }

    bool structurally_equal(const Summary& other) const {
        return h.triples() == other.h.triples() && weight == other.weight && mu == other.mu &&
               bucket_size == other.bucket_size;
    }

    void save(std::ostream& out) const {
        const Dictionary& dict = h.dictionary();
        out << "SUMRDF 1\n";
        std::vector<std::string> lines;
        for (const auto& [b, n] : bucket_size) {
            lines.push_back("B " + dict.token(b) + " " + std::to_string(n));
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& l : lines) out << l << "\n";
        lines.clear();
        for (const auto& [r, b] : mu) {
            if (r == b) continue;  // identity entries are implicit
            lines.push_back("M " + dict.token(r) + " " + dict.token(b));
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& l : lines) out << l << "\n";
        lines.clear();
        for (const Triple& t : h.triples()) {
            lines.push_back("T " + dict.token(t.s) + " " + dict.token(t.p) + " " +
                            dict.token(t.o) + " " + std::to_string(weight_of(t)));
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& l : lines) out << l << "\n";
    }

    void save_file(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        save(out);
    }

    static Summary load(std::istream& in, std::shared_ptr<Dictionary> dict) {
        std::string line;
        std::size_t line_no = 0;
        if (!std::getline(in, line)) throw SummaryError("empty summary file");
        ++line_no;
        if (line != "SUMRDF 1") throw SummaryError("unsupported summary format header: " + line);

        Summary s;
        std::unordered_map<ResourceId, std::uint64_t> declared_size;
        std::unordered_map<ResourceId, std::uint64_t> mapped_count;
        std::vector<Triple> triples;

        auto read_resource = [&](const std::string& text, std::size_t& pos) {
            auto lexed = term_text::read_term(text, pos, *dict, /*allow_variable=*/false);
            return lexed.resource;
        };
        auto read_u64 = [&](const std::string& text, std::size_t& pos) {
            term_text::skip_space(text, pos);
            std::size_t start = pos;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
            if (pos == start) throw TermSyntaxError("expected a number");
            return std::stoull(text.substr(start, pos - start));
        };
        auto expect_end = [&](const std::string& text, std::size_t pos) {
            term_text::skip_space(text, pos);
            if (pos < text.size()) throw TermSyntaxError("unexpected trailing content");
        };

        while (std::getline(in, line)) {
            ++line_no;
            std::size_t pos = 0;
            term_text::skip_space(line, pos);
            if (pos >= line.size() || line[pos] == '#') continue;
            char tag = line[pos++];
            try {
                if (tag == 'B') {
                    ResourceId b = read_resource(line, pos);
                    std::uint64_t n = read_u64(line, pos);
                    expect_end(line, pos);
                    if (n == 0) throw TermSyntaxError("bucket size must be positive");
                    if (declared_size.count(b)) throw TermSyntaxError("duplicate bucket line");
                    declared_size[b] = n;
                } else if (tag == 'M') {
                    ResourceId r = read_resource(line, pos);
                    ResourceId b = read_resource(line, pos);
                    expect_end(line, pos);
                    if (s.mu.count(r)) throw TermSyntaxError("duplicate mapping line");
                    s.mu[r] = b;
                    mapped_count[b] += 1;
                } else if (tag == 'T') {
                    Triple t;
                    t.s = read_resource(line, pos);
                    t.p = read_resource(line, pos);
                    t.o = read_resource(line, pos);
                    std::uint64_t w = read_u64(line, pos);
                    expect_end(line, pos);
                    if (w == 0) throw TermSyntaxError("triple weight must be positive");
                    if (s.weight.count(t)) throw TermSyntaxError("duplicate summary triple");
                    triples.push_back(t);
                    s.weight[t] = w;
                } else {
                    throw TermSyntaxError("unknown record tag");
                }
            } catch (const TermSyntaxError& e) {
                throw ParseError(line_no, e.what());
            }
        }

        // reconstruct implicit identity entries and check counts
        for (const auto& [b, n] : declared_size) {
            std::uint64_t have = mapped_count.count(b) ? mapped_count[b] : 0;
            if (have == n) continue;
            if (have + 1 == n && !s.mu.count(b)) {
                s.mu[b] = b;
                continue;
            }
            throw SummaryError("bucket " + dict->token(b) + ": declared size " +
                               std::to_string(n) + " does not match mapping lines");
        }
        for (const auto& [r, b] : s.mu) {
            (void)r;
            if (!declared_size.count(b)) throw SummaryError("mapping onto undeclared bucket");
        }
        s.bucket_size = std::move(declared_size);
        s.h = RdfGraph(std::move(dict), std::move(triples));
        s.validate();
        return s;
    }

    static Summary load_file(const std::string& path, std::shared_ptr<Dictionary> dict) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        return load(in, std::move(dict));
    }
};

// identity summary: H = g, unit weights, singleton buckets
inline Summary identity_summary(const RdfGraph& g) {
    std::unordered_map<ResourceId, ResourceId> mu;
    for (ResourceId r : g.resources()) mu[r] = r;
    return Summary::summarize(g, mu);
}

}  // namespace sumcard
