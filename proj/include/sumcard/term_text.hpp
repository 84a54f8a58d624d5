#pragma once
// Lexer for term tokens shared by the N-Triples parser, the query parser and
// the summary file loader. Tokens follow N-Triples spelling:
//   <uri>   "literal"(@lang | ^^<datatype>)?   _:blank   ?var
// Literal escapes are canonicalised so that two spellings of the same string
// intern to the same resource.

#include "sumcard/dictionary.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sumcard {

struct TermSyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

namespace term_text {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

inline void skip_space(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && is_space(s[pos])) ++pos;
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

inline std::uint32_t hex_value(char c) {
    if (c >= '0' && c <= '9') return static_cast<std::uint32_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint32_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint32_t>(c - 'A' + 10);
    throw TermSyntaxError("bad hex digit in escape");
}

// Reads the string body after the opening quote, resolving escapes.
inline std::string read_quoted(std::string_view s, std::size_t& pos) {
    std::string value;
    while (pos < s.size()) {
        char c = s[pos];
        if (c == '"') { ++pos; return value; }
        if (c == '\\') {
            if (pos + 1 >= s.size()) throw TermSyntaxError("dangling escape");
            char e = s[pos + 1];
            pos += 2;
            switch (e) {
                case 't': value.push_back('\t'); break;
                case 'b': value.push_back('\b'); break;
                case 'n': value.push_back('\n'); break;
                case 'r': value.push_back('\r'); break;
                case 'f': value.push_back('\f'); break;
                case '"': value.push_back('"'); break;
                case '\'': value.push_back('\''); break;
                case '\\': value.push_back('\\'); break;
                case 'u': {
                    if (pos + 4 > s.size()) throw TermSyntaxError("short \\u escape");
                    std::uint32_t cp = 0;
                    for (int i = 0; i < 4; ++i) cp = cp * 16 + hex_value(s[pos + i]);
                    pos += 4;
                    append_utf8(value, cp);
                    break;
                }
                case 'U': {
                    if (pos + 8 > s.size()) throw TermSyntaxError("short \\U escape");
                    std::uint32_t cp = 0;
                    for (int i = 0; i < 8; ++i) cp = cp * 16 + hex_value(s[pos + i]);
                    pos += 8;
                    append_utf8(value, cp);
                    break;
                }
                default:
                    throw TermSyntaxError(std::string("unknown escape \\") + e);
            }
        } else {
            value.push_back(c);
            ++pos;
        }
    }
    throw TermSyntaxError("unterminated string literal");
}

inline void write_quoted(std::string& out, std::string_view value) {
    out.push_back('"');
    for (char c : value) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
}

struct LexedTerm {
    bool is_variable = false;
    std::string var_name;         // when variable
    ResourceId resource = kNoResource;  // when resource (interned)
};

// Reads one term starting at pos. allow_variable enables the ?var form used
// by the query language. Resources are interned into dict with canonical
// spelling; plain literals get xsd:string, @lang literals rdf:langString.
inline LexedTerm read_term(std::string_view s, std::size_t& pos, Dictionary& dict,
                           bool allow_variable) {
    skip_space(s, pos);
    if (pos >= s.size()) throw TermSyntaxError("expected term, found end of line");
    char c = s[pos];
    LexedTerm out;

    if (c == '<') {
        std::size_t end = s.find('>', pos + 1);
        if (end == std::string_view::npos) throw TermSyntaxError("unterminated <...> IRI");
        std::string token(s.substr(pos, end - pos + 1));
        pos = end + 1;
        out.resource = dict.intern(std::move(token), ResourceKind::Uri);
        return out;
    }
    if (c == '_') {
        if (pos + 1 >= s.size() || s[pos + 1] != ':')
            throw TermSyntaxError("blank node must start with _:");
        std::size_t end = pos + 2;
        while (end < s.size() && !is_space(s[end]) && s[end] != '.') ++end;
        if (end == pos + 2) throw TermSyntaxError("empty blank node label");
        std::string token(s.substr(pos, end - pos));
        pos = end;
        // blank nodes behave like URIs downstream
        out.resource = dict.intern(std::move(token), ResourceKind::Uri);
        return out;
    }
    if (c == '"') {
        ++pos;
        std::string value = read_quoted(s, pos);
        std::string token;
        write_quoted(token, value);
        ResourceId datatype;
        if (pos < s.size() && s[pos] == '@') {
            std::size_t end = pos + 1;
            while (end < s.size() && !is_space(s[end]) && s[end] != '.') ++end;
            if (end == pos + 1) throw TermSyntaxError("empty language tag");
            token.append(s.substr(pos, end - pos));
            pos = end;
            datatype = dict.rdf_lang_string();
        } else if (pos + 1 < s.size() && s[pos] == '^' && s[pos + 1] == '^') {
            pos += 2;
            if (pos >= s.size() || s[pos] != '<')
                throw TermSyntaxError("datatype must be an IRI");
            std::size_t end = s.find('>', pos + 1);
            if (end == std::string_view::npos) throw TermSyntaxError("unterminated datatype IRI");
            std::string dt_token(s.substr(pos, end - pos + 1));
            pos = end + 1;
            datatype = dict.intern(dt_token, ResourceKind::Uri);
            token += "^^";
            token += dt_token;
        } else {
            datatype = dict.xsd_string();
        }
        out.resource = dict.intern(std::move(token), ResourceKind::Literal, datatype);
        return out;
    }
    if (c == '?' && allow_variable) {
        std::size_t end = pos + 1;
        while (end < s.size() && !is_space(s[end]) && s[end] != '.') ++end;
        if (end == pos + 1) throw TermSyntaxError("empty variable name");
        out.is_variable = true;
        out.var_name = std::string(s.substr(pos + 1, end - pos - 1));
        pos = end;
        return out;
    }
    throw TermSyntaxError(std::string("unexpected character '") + c + "' at start of term");
}

}  // namespace term_text
}  // namespace sumcard
