#include "sumcard/summary.hpp"

#include "support/fixtures.hpp"
#include "support/gen.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

using namespace sumcard;

TEST_CASE("figure bucketing produces the drawn summary") {
    auto f = fixtures::make_fig1();
    const Summary& s = f.summary;
    REQUIRE(s.h.size() == 5);

    std::map<std::uint64_t, int> weight_histogram;
    for (const Triple& t : s.h.triples()) weight_histogram[s.weight_of(t)] += 1;
    CHECK(weight_histogram[1] == 3);
    CHECK(weight_histogram[2] == 2);

    CHECK(s.weight_of(Triple{f.b1, f.manages, f.b1}) == 1);
    CHECK(s.weight_of(Triple{f.b1, f.manages, f.b3}) == 2);
    CHECK(s.weight_of(Triple{f.b1, f.owns, f.b2}) == 1);
    CHECK(s.weight_of(Triple{f.b3, f.owns, f.b4}) == 2);
    CHECK(s.weight_of(Triple{f.b3, f.owns, f.b2}) == 1);

    CHECK(s.size_of_bucket(f.b1) == 2);
    CHECK(s.size_of_bucket(f.manages) == 1);
    CHECK(s.size_of_triple(Triple{f.b1, f.manages, f.b1}) == 4);
    CHECK(s.total_weight() == f.graph.size());
    CHECK(s.is_consistent());
}

TEST_CASE("class membership triples collapse onto class buckets") {
    auto f = fixtures::make_fig1(/*with_types=*/true);
    CHECK(f.graph.size() == 15);
    CHECK(f.summary.h.size() == 9);
    ResourceId type = f.id(std::string(kRdfType));
    ResourceId van = f.id("<Van>");
    CHECK(f.summary.weight_of(Triple{f.b4, type, van}) == 2);
    CHECK(f.summary.size_of_triple(Triple{f.b4, type, van}) == 2);
    CHECK(f.summary.is_consistent());
}

TEST_CASE("identity bucketing is the graph itself") {
    auto f = fixtures::make_fig1();
    Summary s = identity_summary(f.graph);
    CHECK(s.h.triples() == f.graph.triples());
    for (const Triple& t : s.h.triples()) CHECK(s.weight_of(t) == 1);
    for (const auto& [b, n] : s.bucket_size) {
        (void)b;
        CHECK(n == 1);
    }
    CHECK(s.count_worlds() == BigInt(1));
}

TEST_CASE("empty graph summarizes to the empty summary") {
    auto dict = std::make_shared<Dictionary>();
    RdfGraph g(dict, {});
    Summary s = Summary::summarize(g, {});
    CHECK(s.h.empty());
    CHECK(s.count_worlds() == BigInt(1));
    CHECK(s.is_consistent());
}

TEST_CASE("missing resource in the bucketing is an error") {
    auto f = fixtures::make_fig1();
    std::unordered_map<ResourceId, ResourceId> partial;
    partial[f.id("<e1>")] = f.b1;
    CHECK_THROWS_AS(Summary::summarize(f.graph, partial), SummaryError);
}

TEST_CASE("consistency is the weight-versus-size test") {
    auto f = fixtures::make_fig1();
    Summary bad = f.summary;
    bad.weight[Triple{f.b1, f.manages, f.b1}] = 5;  // size is 4
    CHECK_FALSE(bad.is_consistent());
    CHECK(bad.count_worlds() == BigInt(0));
}

TEST_CASE("world count is a product of binomials") {
    auto f = fixtures::make_fig1();
    // sizes are all 4; weights 1,1,1,2,2 -> 4 * 4 * 4 * 6 * 6
    CHECK(f.summary.count_worlds() == BigInt(2304));

    auto dict = std::make_shared<Dictionary>();
    Summary s;
    ResourceId b = dict->intern("<b>", ResourceKind::Uri);
    ResourceId p = dict->intern("<p>", ResourceKind::Uri);
    for (int i = 0; i < 4; ++i) {
        s.mu[dict->intern("<r" + std::to_string(i) + ">", ResourceKind::Uri)] = b;
    }
    s.mu[p] = p;
    s.bucket_size[b] = 4;
    s.bucket_size[p] = 1;
    Triple t{b, p, b};
    s.weight[t] = 2;
    s.h = RdfGraph(dict, {t});
    s.validate();
    // size 4*1*4 = 16, weight 2 -> C(16,2) = 120
    CHECK(s.count_worlds() == BigInt(120));
}

TEST_CASE("merging buckets equals re-summarizing under the composed map") {
    auto f = fixtures::make_fig1();
    Summary merged = f.summary.merge_buckets(f.b2, f.b4);

    std::unordered_map<ResourceId, ResourceId> composed;
    for (const auto& [r, b] : f.summary.mu) composed[r] = b == f.b2 ? f.b4 : b;
    Summary direct = Summary::summarize(f.graph, composed);

    CHECK(merged.structurally_equal(direct));
    CHECK(merged.total_weight() == f.summary.total_weight());
    merged.validate();
}

TEST_CASE("merge rejects unknown buckets and self-merges") {
    auto f = fixtures::make_fig1();
    CHECK_THROWS_AS(f.summary.merge_buckets(f.b1, f.b1), SummaryError);
    CHECK_THROWS_AS(f.summary.merge_buckets(999999, f.b1), SummaryError);
}

TEST_CASE("parallel edges collapse with summed weights") {
    auto dict = std::make_shared<Dictionary>();
    RdfGraph g = parse_ntriples("<a> <p> <x> .\n<b> <p> <y> .\n", dict);
    std::unordered_map<ResourceId, ResourceId> mu;
    for (ResourceId r : g.resources()) mu[r] = r;
    Summary s = Summary::summarize(g, mu);
    Summary m1 = s.merge_buckets(*dict->find("<b>"), *dict->find("<a>"));
    Summary m2 = m1.merge_buckets(*dict->find("<y>"), *dict->find("<x>"));
    Triple collapsed{*dict->find("<a>"), *dict->find("<p>"), *dict->find("<x>")};
    CHECK(m2.h.size() == 1);
    CHECK(m2.weight_of(collapsed) == 2);
}

TEST_CASE("random merge chains match one-shot re-summarization") {
    std::mt19937_64 rng(55);
    for (int round = 0; round < 25; ++round) {
        auto inst = gen::random_typed_graph(rng, 12, 2, 2, 30);
        Summary s = identity_summary(inst.graph);
        std::unordered_map<ResourceId, ResourceId> composed;
        for (const auto& [r, b] : s.mu) composed[r] = b;

        const auto& res = inst.graph.resources();
        Summary rolling = s;
        for (int m = 0; m < 5; ++m) {
            // pick a surviving pair under the composed map
            ResourceId from = composed.at(res[rng() % res.size()]);
            ResourceId to = composed.at(res[rng() % res.size()]);
            if (from == to) continue;
            rolling = rolling.merge_buckets(from, to);
            for (auto& [r, b] : composed) {
                if (b == from) b = to;
            }
        }
        Summary direct = Summary::summarize(inst.graph, composed);
        CHECK(rolling.structurally_equal(direct));
        CHECK(rolling.total_weight() == inst.graph.size());
    }
}

TEST_CASE("summary file round trip") {
    for (bool with_types : {false, true}) {
        auto f = fixtures::make_fig1(with_types);
        std::ostringstream out;
        f.summary.save(out);

        auto dict2 = std::make_shared<Dictionary>();
        std::istringstream in(out.str());
        Summary loaded = Summary::load(in, dict2);
        loaded.validate();

        // compare through lexical forms since ids differ across dictionaries
        std::ostringstream out2;
        loaded.save(out2);
        CHECK(out.str() == out2.str());
        CHECK(loaded.h.size() == f.summary.h.size());
        CHECK(loaded.count_worlds() == f.summary.count_worlds());
    }
}

TEST_CASE("literal buckets and mappings survive the file round trip") {
    auto dict = std::make_shared<Dictionary>();
    RdfGraph g = parse_ntriples(
        "<a> <p> \"hello world\" .\n"
        "<b> <p> \"with \\\"quotes\\\", commas\"@en .\n"
        "<c> <p> \"5\"^^<xsd:integer> .\n",
        dict);
    // group the three literals into one bucket
    std::unordered_map<ResourceId, ResourceId> mu;
    ResourceId lit_bucket = dict->intern("_:lits", ResourceKind::Uri);
    for (ResourceId r : g.resources()) {
        mu[r] = dict->info(r).kind == ResourceKind::Literal ? lit_bucket : r;
    }
    Summary s = Summary::summarize(g, mu);
    std::ostringstream out;
    s.save(out);
    std::istringstream in(out.str());
    Summary loaded = Summary::load(in, std::make_shared<Dictionary>());
    loaded.validate();
    std::ostringstream out2;
    loaded.save(out2);
    CHECK(out.str() == out2.str());
    CHECK(loaded.count_worlds() == s.count_worlds());
}

TEST_CASE("empty summary round trips") {
    auto dict = std::make_shared<Dictionary>();
    RdfGraph g(dict, {});
    Summary s = Summary::summarize(g, {});
    std::ostringstream out;
    s.save(out);
    CHECK(out.str() == "SUMRDF 1\n");
    std::istringstream in(out.str());
    Summary loaded = Summary::load(in, std::make_shared<Dictionary>());
    CHECK(loaded.h.empty());
}

TEST_CASE("loader rejects damaged files") {
    auto f = fixtures::make_fig1();
    std::ostringstream out;
    f.summary.save(out);
    std::string good = out.str();

    auto load_str = [](const std::string& text) {
        std::istringstream in(text);
        return Summary::load(in, std::make_shared<Dictionary>());
    };

    CHECK_THROWS(load_str(""));
    CHECK_THROWS(load_str("SUMRDF 2\n"));

    // corrupt one weight into a non-number
    std::string corrupt = good;
    auto pos = corrupt.find("T ");
    auto end = corrupt.find('\n', pos);
    auto space = corrupt.rfind(' ', end);
    corrupt.replace(space + 1, end - space - 1, "x");
    CHECK_THROWS(load_str(corrupt));

    // truncate mid-line
    CHECK_THROWS(load_str(good.substr(0, good.size() / 2)));

    // size that disagrees with the mapping lines
    std::string bad_size = good;
    auto bpos = bad_size.find("B <b1> 2");
    REQUIRE(bpos != std::string::npos);
    bad_size.replace(bpos, 8, "B <b1> 9");
    CHECK_THROWS(load_str(bad_size));
}

TEST_CASE("every generated summary passes validation and re-saves identically") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 50; ++i) {
        auto inst = gen::random_summary(rng);
        std::ostringstream a;
        inst.summary.save(a);
        std::istringstream in(a.str());
        Summary loaded = Summary::load(in, std::make_shared<Dictionary>());
        std::ostringstream b;
        loaded.save(b);
        CHECK(a.str() == b.str());
    }
}
