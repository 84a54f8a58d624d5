#pragma once
// Line-oriented N-Triples reader/writer. Strict: a malformed line is an
// error carrying its line number, never skipped. Comment lines (#) and blank
// lines are allowed. Duplicate triples collapse by set semantics.

#include "sumcard/dictionary.hpp"
#include "sumcard/rdf_graph.hpp"
#include "sumcard/term_text.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumcard {

inline std::vector<Triple> parse_ntriples_into(std::istream& in, Dictionary& dict) {
    std::vector<Triple> triples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = 0;
        term_text::skip_space(line, pos);
        if (pos >= line.size() || line[pos] == '#') continue;
        try {
            auto subject = term_text::read_term(line, pos, dict, /*allow_variable=*/false);
            if (dict.info(subject.resource).kind == ResourceKind::Literal)
                throw TermSyntaxError("literal not allowed in subject position");
            auto predicate = term_text::read_term(line, pos, dict, false);
            const std::string& ptok = dict.token(predicate.resource);
            if (ptok.empty() || ptok[0] != '<')
                throw TermSyntaxError("predicate must be an IRI");
            auto object = term_text::read_term(line, pos, dict, false);
            term_text::skip_space(line, pos);
            if (pos >= line.size() || line[pos] != '.')
                throw TermSyntaxError("expected terminating '.'");
            ++pos;
            term_text::skip_space(line, pos);
            if (pos < line.size() && line[pos] != '#')
                throw TermSyntaxError("unexpected trailing content after '.'");
            triples.push_back(Triple{subject.resource, predicate.resource, object.resource});
        } catch (const TermSyntaxError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return triples;
}

inline RdfGraph parse_ntriples(std::istream& in, std::shared_ptr<Dictionary> dict) {
    auto triples = parse_ntriples_into(in, *dict);
    return RdfGraph(std::move(dict), std::move(triples));
}

inline RdfGraph parse_ntriples(const std::string& text, std::shared_ptr<Dictionary> dict) {
    std::istringstream in(text);
    return parse_ntriples(in, std::move(dict));
}

inline RdfGraph load_ntriples_file(const std::string& path, std::shared_ptr<Dictionary> dict) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_ntriples(in, std::move(dict));
}

inline void serialize_ntriples(const RdfGraph& g, std::ostream& out) {
    const Dictionary& dict = g.dictionary();
    for (const Triple& t : g.triples()) {
        out << dict.token(t.s) << ' ' << dict.token(t.p) << ' ' << dict.token(t.o) << " .\n";
    }
}

}  // namespace sumcard
