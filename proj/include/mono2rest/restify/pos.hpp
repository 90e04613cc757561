// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/error.hpp"
#include "mono2rest/tokenize.hpp"

#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mono2rest::restify {

enum class PosTag { verb, noun, adjective, other };

inline const char* to_string(PosTag t)
{
    switch (t) {
    case PosTag::verb: return "verb";
    case PosTag::noun: return "noun";
    case PosTag::adjective: return "adjective";
    case PosTag::other: return "other";
    }
    return "other";
}

inline std::optional<PosTag> parse_pos_tag(std::string_view s)
{
    for (auto t : {PosTag::verb, PosTag::noun, PosTag::adjective, PosTag::other}) {
        if (s == to_string(t)) {
            return t;
        }
    }
    return std::nullopt;
}

/// Word-list part-of-speech tagger for identifier tokens. Unknown words are
/// nouns. Entries from a tag file ("word tag" per line, '#' comments)
/// override the built-in list.
class PosTagger {
public:
    PosTagger()
    {
        for (const char* w :
             {"get",      "set",     "find",     "fetch",    "read",     "list",      "retrieve", "is",
              "has",      "show",    "update",   "replace",  "modify",   "change",    "delete",   "remove",
              "clear",    "cancel",  "create",   "add",      "save",     "insert",    "process",  "send",
              "post",     "put",     "load",     "store",    "init",     "initialize", "compute", "calculate",
              "build",    "make",    "handle",   "validate", "check",    "parse",     "convert",  "render",
              "register", "populate", "edit",    "apply",    "execute",  "run",       "start",    "stop",
              "open",     "close",   "reset",    "select",   "search",   "query",     "count",    "sort",
              "filter",   "format",  "print",    "write",    "display",  "submit",    "schedule", "assign",
              "accept",   "reject",  "approve",  "lookup",   "compare",  "merge",     "copy",     "move",
              "mark",     "enable",  "disable",  "contains", "do",       "can",       "should",   "init",
              "destroy",  "refresh", "notify",   "publish",  "subscribe", "emit",     "generate", "prepare",
              "ensure",   "verify",  "resolve",  "map",      "bind",     "evict",     "persist",  "flush",
              "fill",     "clean",   "mock",     "setup",    "teardown", "invoke",    "call",     "dispatch",
              "exists",   "matches", "equals"}) {
            tags_[w] = PosTag::verb;
        }
        for (const char* w : {"new", "old", "current", "active", "valid", "invalid", "empty", "last", "first",
                              "next", "previous", "default", "main", "full", "raw", "total", "available",
                              "recent", "visible", "hidden", "single", "multiple", "local", "remote", "global"}) {
            tags_[w] = PosTag::adjective;
        }
        for (const char* w : {"for", "by", "with", "of", "to", "from", "and", "or", "in", "on", "at", "as", "all",
                              "if", "the", "a", "an", "into", "per", "via"}) {
            tags_[w] = PosTag::other;
        }
        for (const char* w : {"owner", "pet", "vet", "city", "type", "name", "id", "address", "telephone",
                              "specialty", "date", "birth", "description", "user", "account", "order", "item",
                              "service", "controller", "repository", "request", "response", "entity", "model",
                              "value", "key", "data", "info", "details", "status", "page", "result", "error",
                              "visit"}) {
            tags_[w] = PosTag::noun;
        }
    }

    static PosTagger from_tag_file(std::string_view text)
    {
        PosTagger tagger;
        std::istringstream in{std::string(text)};
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            std::istringstream words(line);
            std::string word;
            std::string tag;
            if (!(words >> word)) {
                continue;
            }
            if (!(words >> tag)) {
                throw ParseError("tag file line " + std::to_string(line_no) + ": expected '<word> <tag>'");
            }
            auto parsed = parse_pos_tag(tag);
            if (!parsed) {
                throw ParseError("tag file line " + std::to_string(line_no) + ": unknown tag '" + tag + "'");
            }
            for (auto& c : word) {
                c = mono2rest::detail::to_lower(c);
            }
            tagger.tags_[word] = *parsed;
        }
        return tagger;
    }

    PosTag tag(std::string_view token) const
    {
        if (auto it = tags_.find(token); it != tags_.end()) {
            return it->second;
        }
        return PosTag::noun;
    }

    bool is_verb(std::string_view token) const { return tag(token) == PosTag::verb; }

private:
    std::map<std::string, PosTag, std::less<>> tags_;
};

inline PosTag pos_tag(std::string_view token, const PosTagger& tagger = PosTagger{})
{
    return tagger.tag(token);
}

/// URI segment for a method name: tokens joined by hyphens, with verbs dropped
/// when the name has more than one token and something other than verbs.
inline std::string method_segment(std::string_view name, const PosTagger& tagger)
{
    auto tokens = tokenize_identifier(name);
    if (tokens.empty()) {
        return "operation";
    }
    if (tokens.size() > 1) {
        std::vector<std::string> kept;
        for (const auto& t : tokens) {
            if (!tagger.is_verb(t)) {
                kept.push_back(t);
            }
        }
        if (!kept.empty()) {
            tokens = std::move(kept);
        }
    }
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) {
            out += '-';
        }
        out += tokens[i];
    }
    return out;
}

inline std::string method_segment(std::string_view name)
{
    static const PosTagger tagger;
    return method_segment(name, tagger);
}

} // namespace mono2rest::restify
