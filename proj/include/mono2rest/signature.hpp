// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/callgraph.hpp"
#include "mono2rest/tokenize.hpp"

#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mono2rest {

enum class Visibility { public_, protected_, package_, private_ };

inline const char* to_string(Visibility v)
{
    switch (v) {
    case Visibility::public_: return "public";
    case Visibility::protected_: return "protected";
    case Visibility::package_: return "package";
    case Visibility::private_: return "private";
    }
    return "package";
}

/// A method declaration read from a `javap` listing.
struct MethodSignature {
    MethodRef owner; // return_type is filled in
    std::string return_type;
    std::vector<std::string> param_types;
    Visibility visibility = Visibility::package_;
    bool is_static = false;

    /// "return_type method(param,param)" with simple type names.
    std::string display() const
    {
        std::string s = return_type + " " + owner.method_name + "(";
        for (std::size_t i = 0; i < param_types.size(); ++i) {
            s += (i > 0 ? "," : "") + param_types[i];
        }
        return s + ")";
    }
};

struct ParsedSignatures {
    std::map<std::string, MethodSignature> methods; // keyed by MethodRef::key()
    std::vector<ParseWarning> warnings;

    std::vector<MethodRef> declared() const
    {
        std::vector<MethodRef> out;
        out.reserve(methods.size());
        for (const auto& [key, sig] : methods) {
            out.push_back(sig.owner);
        }
        return out;
    }
};

namespace detail {

inline bool is_modifier(std::string_view word)
{
    for (std::string_view m : {"public", "protected", "private", "static", "final", "abstract", "synchronized",
                               "native", "default", "transient", "volatile", "strictfp", "sealed", "non-sealed"}) {
        if (word == m) {
            return true;
        }
    }
    return false;
}

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Splits on spaces that are not inside <...>.
inline std::vector<std::string> split_words(std::string_view s)
{
    std::vector<std::string> out;
    std::string current;
    int depth = 0;
    for (char c : s) {
        if (c == '<') {
            ++depth;
        } else if (c == '>') {
            --depth;
        }
        if (c == ' ' && depth == 0) {
            if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        current.push_back(c);
    }
    if (!current.empty()) {
        out.push_back(std::move(current));
    }
    return out;
}

} // namespace detail

/// Parse concatenated `javap` output. Class headers open a scope; member lines
/// with a parameter list become signatures. Constructors and static
/// initializers are skipped, fields are ignored, anything unrecognized is
/// reported as a warning.
inline ParsedSignatures parse_javap(std::string_view text)
{
    using detail::trim;
    ParsedSignatures out;
    std::string current_class;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line == "}" || line.starts_with("Compiled from")) {
            continue;
        }

        if (line.back() == '{') {
            auto words = detail::split_words(line.substr(0, line.size() - 1));
            std::size_t i = 0;
            while (i < words.size() && detail::is_modifier(words[i])) {
                ++i;
            }
            if (i + 1 < words.size() && (words[i] == "class" || words[i] == "interface" || words[i] == "enum" ||
                                         words[i] == "record" || words[i] == "@interface")) {
                current_class = words[i + 1];
                if (auto lt = current_class.find('<'); lt != std::string::npos) {
                    current_class.erase(lt);
                }
                continue;
            }
            out.warnings.push_back({line_no, std::string(line)});
            continue;
        }

        if (line.back() != ';') {
            out.warnings.push_back({line_no, std::string(line)});
            continue;
        }
        auto body = line.substr(0, line.size() - 1);
        if (body == "static {}" || body == "static") {
            continue;
        }
        const auto open = body.find('(');
        if (open == std::string_view::npos) {
            continue; // field
        }
        const auto close = body.rfind(')');
        if (current_class.empty() || close == std::string_view::npos || close < open) {
            out.warnings.push_back({line_no, std::string(line)});
            continue;
        }

        auto words = detail::split_words(trim(body.substr(0, open)));
        MethodSignature sig;
        std::size_t i = 0;
        for (; i < words.size() && detail::is_modifier(words[i]); ++i) {
            if (words[i] == "public") {
                sig.visibility = Visibility::public_;
            } else if (words[i] == "protected") {
                sig.visibility = Visibility::protected_;
            } else if (words[i] == "private") {
                sig.visibility = Visibility::private_;
            } else if (words[i] == "static") {
                sig.is_static = true;
            }
        }
        if (i < words.size() && words[i].starts_with('<')) {
            ++i; // generic method type parameters
        }
        const std::size_t remaining = words.size() - i;
        if (remaining == 1) {
            continue; // constructor: name only, no return type
        }
        if (remaining != 2) {
            out.warnings.push_back({line_no, std::string(line)});
            continue;
        }
        const auto& name = words[i + 1];
        if (name == current_class || name == simple_type_name(current_class)) {
            continue;
        }

        auto strip_generics = [](std::string t) {
            // erase <...> groups, keep array/varargs suffixes
            std::string out;
            int depth = 0;
            for (char c : t) {
                if (c == '<') {
                    ++depth;
                } else if (c == '>') {
                    --depth;
                } else if (depth == 0) {
                    out.push_back(c);
                }
            }
            return out;
        };

        sig.return_type = strip_generics(words[i]);
        for (auto& p : split_param_list(body.substr(open + 1, close - open - 1))) {
            sig.param_types.push_back(strip_generics(p));
        }
        sig.owner = MethodRef{current_class, name, sig.param_types, sig.return_type};
        out.methods.emplace(sig.owner.key(), std::move(sig));
    }
    return out;
}

} // namespace mono2rest
