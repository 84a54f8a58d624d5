#pragma once
// Conjunctive queries: a set of triple atoms over resources and variables.
// Variables may occur in any position, including the predicate. Atoms are
// deduplicated at construction; variable ids are dense per query.

#include "sumcard/dictionary.hpp"
#include "sumcard/term_text.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumcard {

struct Atom {
    Term s, p, o;
    friend bool operator==(const Atom& a, const Atom& b) {
        return a.s == b.s && a.p == b.p && a.o == b.o;
    }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }

    Term at(int position) const { return position == 0 ? s : position == 1 ? p : o; }
};

class Query {
public:
    Query() = default;

    Query(std::vector<Atom> atoms, std::vector<std::string> var_names)
        : var_names_(std::move(var_names)) {
        for (const Atom& a : atoms) {
            if (std::find(atoms_.begin(), atoms_.end(), a) == atoms_.end()) atoms_.push_back(a);
        }
        collect_terms();
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    std::size_t var_count() const { return var_names_.size(); }
    const std::vector<std::string>& var_names() const { return var_names_; }
    const std::string& var_name(std::uint64_t v) const { return var_names_.at(v); }

    // distinct resource ids occurring in the atoms, ascending
    const std::vector<ResourceId>& resources() const { return resources_; }
    // distinct variable ids occurring in the atoms, ascending
    const std::vector<std::uint64_t>& variables() const { return variables_; }

private:
    std::vector<Atom> atoms_;
    std::vector<std::string> var_names_;
    std::vector<ResourceId> resources_;
    std::vector<std::uint64_t> variables_;

    void collect_terms() {
        for (const Atom& a : atoms_) {
            for (int i = 0; i < 3; ++i) {
                Term t = a.at(i);
                if (t.is_resource()) resources_.push_back(t.id);
                else variables_.push_back(t.id);
            }
        }
        std::sort(resources_.begin(), resources_.end());
        resources_.erase(std::unique(resources_.begin(), resources_.end()), resources_.end());
        std::sort(variables_.begin(), variables_.end());
        variables_.erase(std::unique(variables_.begin(), variables_.end()), variables_.end());
    }
};

// Text form: one triple pattern per line, terms in N-Triples spelling plus
// ?var, each line terminated by '.'. Empty input is the empty query.
inline Query parse_query(std::istream& in, Dictionary& dict) {
    std::vector<Atom> atoms;
    std::vector<std::string> var_names;
    auto var_id = [&](const std::string& name) -> std::uint64_t {
        for (std::size_t i = 0; i < var_names.size(); ++i) {
            if (var_names[i] == name) return i;
        }
        var_names.push_back(name);
        return var_names.size() - 1;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = 0;
        term_text::skip_space(line, pos);
        if (pos >= line.size() || line[pos] == '#') continue;
        try {
            Term terms[3];
            for (auto& slot : terms) {
                auto lexed = term_text::read_term(line, pos, dict, /*allow_variable=*/true);
                slot = lexed.is_variable ? Term::variable(var_id(lexed.var_name))
                                         : Term::resource(lexed.resource);
            }
            term_text::skip_space(line, pos);
            if (pos >= line.size() || line[pos] != '.')
                throw TermSyntaxError("expected terminating '.'");
            ++pos;
            term_text::skip_space(line, pos);
            if (pos < line.size() && line[pos] != '#')
                throw TermSyntaxError("unexpected trailing content after '.'");
            atoms.push_back(Atom{terms[0], terms[1], terms[2]});
        } catch (const TermSyntaxError& e) {
            throw ParseError(line_no,
                             "column " + std::to_string(pos + 1) + ": " + e.what());
        }
    }
    return Query(std::move(atoms), std::move(var_names));
}

inline Query parse_query(const std::string& text, Dictionary& dict) {
    std::istringstream in(text);
    return parse_query(in, dict);
}

inline Query load_query_file(const std::string& path, Dictionary& dict) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_query(in, dict);
}

}  // namespace sumcard
