// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/error.hpp"
#include "mono2rest/tokenize.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace mono2rest::restify {

enum class HttpVerb { get, put, post, del };

inline constexpr std::array<HttpVerb, 4> all_verbs{HttpVerb::get, HttpVerb::put, HttpVerb::post, HttpVerb::del};

inline const char* to_string(HttpVerb v)
{
    switch (v) {
    case HttpVerb::get: return "GET";
    case HttpVerb::put: return "PUT";
    case HttpVerb::post: return "POST";
    case HttpVerb::del: return "DELETE";
    }
    return "POST";
}

/// OpenAPI path-item keys are lowercase.
inline std::string lowercase(HttpVerb v)
{
    std::string s = to_string(v);
    for (auto& c : s) {
        c = mono2rest::detail::to_lower(c);
    }
    return s;
}

/// Case-insensitive.
inline std::optional<HttpVerb> parse_verb(std::string_view s)
{
    for (auto v : all_verbs) {
        if (s == to_string(v) || s == lowercase(v)) {
            return v;
        }
    }
    return std::nullopt;
}

enum class ClassificationSource { lexicon, external_file };

inline const char* to_string(ClassificationSource s)
{
    return s == ClassificationSource::lexicon ? "lexicon" : "external-file";
}

struct Classification {
    std::string method_key;
    HttpVerb verb = HttpVerb::post;
    double confidence = 0.0;
    ClassificationSource source = ClassificationSource::lexicon;
    bool fell_back = false; // external file lacked the method; lexicon answered
};

class HttpClassifier {
public:
    virtual ~HttpClassifier() = default;
    virtual std::string id() const = 0;
    virtual Classification classify(const MethodRef& method) const = 0;
};

/// Verb from the first token of the method name.
class LexiconClassifier final : public HttpClassifier {
public:
    std::string id() const override { return "lexicon"; }

    Classification classify(const MethodRef& method) const override
    {
        static const std::map<std::string, HttpVerb, std::less<>> lexicon = [] {
            std::map<std::string, HttpVerb, std::less<>> m;
            for (const char* w : {"get", "find", "fetch", "read", "list", "retrieve", "is", "has", "show"}) {
                m.emplace(w, HttpVerb::get);
            }
            for (const char* w : {"set", "update", "replace", "modify", "change"}) {
                m.emplace(w, HttpVerb::put);
            }
            for (const char* w : {"delete", "remove", "clear", "cancel"}) {
                m.emplace(w, HttpVerb::del);
            }
            return m;
        }();

        Classification c{method.key(), HttpVerb::post, 0.5, ClassificationSource::lexicon, false};
        const auto tokens = tokenize_identifier(method.method_name);
        if (!tokens.empty()) {
            if (auto it = lexicon.find(tokens.front()); it != lexicon.end()) {
                c.verb = it->second;
                c.confidence = 1.0;
            }
        }
        return c;
    }
};

/// Verbs precomputed by an external classifier:
/// {"<method key>": {"verb": "GET", "confidence": 0.96}}.
/// Methods missing from the file are answered by the lexicon and flagged.
class FileClassifier final : public HttpClassifier {
public:
    static FileClassifier from_json(const nlohmann::json& doc)
    {
        if (!doc.is_object()) {
            throw ParseError("classification file must be a JSON object keyed by method key");
        }
        FileClassifier fc;
        for (const auto& [key, entry] : doc.items()) {
            if (!entry.is_object() || !entry.contains("verb") || !entry["verb"].is_string() ||
                !entry.contains("confidence") || !entry["confidence"].is_number()) {
                throw ParseError("classification for '" + key + "' needs string 'verb' and number 'confidence'");
            }
            auto verb = parse_verb(entry["verb"].get<std::string>());
            if (!verb) {
                throw ParseError("classification for '" + key + "' has unknown verb '" +
                                 entry["verb"].get<std::string>() + "'");
            }
            const double confidence = entry["confidence"].get<double>();
            if (!(confidence >= 0.0 && confidence <= 1.0)) {
                throw ParseError("classification for '" + key + "' has confidence outside [0, 1]");
            }
            fc.entries_.emplace(key, Entry{*verb, confidence});
        }
        return fc;
    }

    std::string id() const override { return "file"; }
    std::size_t size() const noexcept { return entries_.size(); }

    Classification classify(const MethodRef& method) const override
    {
        const auto key = method.key();
        if (auto it = entries_.find(key); it != entries_.end()) {
            return {key, it->second.verb, it->second.confidence, ClassificationSource::external_file, false};
        }
        auto c = fallback_.classify(method);
        c.fell_back = true;
        return c;
    }

private:
    struct Entry {
        HttpVerb verb;
        double confidence;
    };
    std::map<std::string, Entry, std::less<>> entries_;
    LexiconClassifier fallback_;
};

inline Classification classify_http(const MethodRef& method, const HttpClassifier& classifier)
{
    return classifier.classify(method);
}

} // namespace mono2rest::restify
