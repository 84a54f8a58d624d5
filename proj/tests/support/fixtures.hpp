#pragma once
// Shared fixtures: the worked-example graph (two employees managing two
// married employees who own cars), its hand-chosen bucketing, and the three
// walkthrough queries.

#include "sumcard/ntriples.hpp"
#include "sumcard/query.hpp"
#include "sumcard/summary.hpp"

#include <memory>
#include <string>
#include <unordered_map>

namespace fixtures {

using namespace sumcard;

inline const char* kEdgeGraphNt =
    "<e1> <manages> <e2> .\n"
    "<e1> <manages> <e3> .\n"
    "<e2> <manages> <e4> .\n"
    "<e2> <owns> <c1> .\n"
    "<e3> <owns> <c3> .\n"
    "<e4> <owns> <c2> .\n"
    "<e4> <owns> <c4> .\n";

inline std::string full_graph_nt() {
    std::string nt = kEdgeGraphNt;
    std::string type = std::string(kRdfType);
    nt += "<e1> " + type + " <Single> .\n";
    nt += "<e2> " + type + " <Single> .\n";
    nt += "<e3> " + type + " <Married> .\n";
    nt += "<e4> " + type + " <Married> .\n";
    nt += "<c1> " + type + " <Roadster> .\n";
    nt += "<c2> " + type + " <Roadster> .\n";
    nt += "<c3> " + type + " <Van> .\n";
    nt += "<c4> " + type + " <Van> .\n";
    return nt;
}

struct Fig1 {
    std::shared_ptr<Dictionary> dict;
    RdfGraph graph;
    Summary summary;
    ResourceId b1, b2, b3, b4;
    ResourceId manages, owns;

    ResourceId id(const std::string& token) const { return *dict->find(token); }
};

// graph + the hand bucketing: employees pairwise, cars pairwise, predicates
// and class objects to themselves
inline Fig1 make_fig1(bool with_types = false) {
    Fig1 f;
    f.dict = std::make_shared<Dictionary>();
    f.graph = parse_ntriples(with_types ? full_graph_nt() : std::string(kEdgeGraphNt), f.dict);
    f.b1 = f.dict->intern("<b1>", ResourceKind::Uri);
    f.b2 = f.dict->intern("<b2>", ResourceKind::Uri);
    f.b3 = f.dict->intern("<b3>", ResourceKind::Uri);
    f.b4 = f.dict->intern("<b4>", ResourceKind::Uri);
    f.manages = f.id("<manages>");
    f.owns = f.id("<owns>");

    std::unordered_map<ResourceId, ResourceId> mu;
    mu[f.id("<e1>")] = f.b1;
    mu[f.id("<e2>")] = f.b1;
    mu[f.id("<c1>")] = f.b2;
    mu[f.id("<c2>")] = f.b2;
    mu[f.id("<e3>")] = f.b3;
    mu[f.id("<e4>")] = f.b3;
    mu[f.id("<c3>")] = f.b4;
    mu[f.id("<c4>")] = f.b4;
    for (ResourceId r : f.graph.resources()) {
        if (!mu.count(r)) mu[r] = r;
    }
    f.summary = Summary::summarize(f.graph, mu);
    return f;
}

inline Query q1(const Fig1& f) {
    return parse_query("<e1> <manages> <e3> .\n<e3> <owns> <c3> .\n", *f.dict);
}
inline Query q2(const Fig1& f) {
    return parse_query("?x <manages> ?y .\n?y <owns> ?z .\n", *f.dict);
}
inline Query q3(const Fig1& f) {
    return parse_query("<e3> <owns> ?x .\n<e3> <owns> ?y .\n", *f.dict);
}
inline Query q4(const Fig1& f) {
    return parse_query("<e3> <owns> ?x .\n<e4> <owns> ?y .\n", *f.dict);
}

}  // namespace fixtures
