#pragma once
// Resource interning. Every lexical form (URI, literal, blank node) gets a
// dense id; all downstream structures work on ids only. Interning is
// injective: one canonical token, one id.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sumcard {

using ResourceId = std::uint64_t;
inline constexpr ResourceId kNoResource = ~ResourceId{0};

enum class TermKind : std::uint8_t { Resource, Variable };

// Terms appear in query atoms; graph triples hold bare ResourceIds.
// For variables, id is a query-local variable index.
struct Term {
    TermKind kind = TermKind::Resource;
    std::uint64_t id = 0;

    static Term resource(ResourceId r) { return Term{TermKind::Resource, r}; }
    static Term variable(std::uint64_t v) { return Term{TermKind::Variable, v}; }
    bool is_resource() const { return kind == TermKind::Resource; }
    bool is_variable() const { return kind == TermKind::Variable; }
    friend bool operator==(const Term& a, const Term& b) {
        return a.kind == b.kind && a.id == b.id;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
};

enum class ResourceKind : std::uint8_t { Uri, Literal };

struct ResourceInfo {
    ResourceKind kind = ResourceKind::Uri;
    ResourceId datatype = kNoResource;  // set for literals
};

inline constexpr std::string_view kXsdString = "<http://www.w3.org/2001/XMLSchema#string>";
inline constexpr std::string_view kRdfLangString =
    "<http://www.w3.org/1999/02/22-rdf-syntax-ns#langString>";
inline constexpr std::string_view kRdfType =
    "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";

class Dictionary {
public:
    ResourceId intern(std::string token, ResourceKind kind, ResourceId datatype = kNoResource) {
        auto it = by_token_.find(token);
        if (it != by_token_.end()) return it->second;
        ResourceId id = tokens_.size();
        by_token_.emplace(token, id);
        tokens_.push_back(std::move(token));
        infos_.push_back(ResourceInfo{kind, datatype});
        return id;
    }

    std::optional<ResourceId> find(std::string_view token) const {
        auto it = by_token_.find(std::string(token));
        if (it == by_token_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& token(ResourceId id) const { return tokens_.at(id); }
    const ResourceInfo& info(ResourceId id) const { return infos_.at(id); }
    std::size_t size() const { return tokens_.size(); }

    ResourceId xsd_string() { return intern(std::string(kXsdString), ResourceKind::Uri); }
    ResourceId rdf_lang_string() { return intern(std::string(kRdfLangString), ResourceKind::Uri); }

    // Fresh synthetic bucket names; never collides with an existing token.
    ResourceId fresh_bucket(std::string_view stem) {
        for (;;) {
            std::string candidate = "_:" + std::string(stem) + std::to_string(fresh_counter_++);
            if (!by_token_.count(candidate)) {
                return intern(std::move(candidate), ResourceKind::Uri);
            }
        }
    }

private:
    std::vector<std::string> tokens_;
    std::vector<ResourceInfo> infos_;
    std::unordered_map<std::string, ResourceId> by_token_;
    std::uint64_t fresh_counter_ = 0;
};

}  // namespace sumcard
