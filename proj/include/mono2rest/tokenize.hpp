// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace mono2rest {

namespace detail {
inline bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
inline bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
inline bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
} // namespace detail

/// Split an identifier into lowercase word tokens.
///
/// Anything that is not an ASCII letter or digit separates tokens. Inside an
/// alphanumeric run a token starts at a lower-to-upper transition, at the last
/// capital of an acronym that is followed by a lowercase letter ("HTTPServer"
/// gives http, server) and at a digit-to-letter transition ("v2api" gives
/// v2, api). Letters followed by digits stay together.
inline std::vector<std::string> tokenize_identifier(std::string_view name)
{
    using namespace detail;
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };

    for (std::size_t i = 0; i < name.size(); ++i) {
        const char c = name[i];
        if (!is_alnum(c)) {
            flush();
            continue;
        }
        if (!current.empty()) {
            const char prev = name[i - 1];
            const bool camel = is_upper(c) && is_lower(prev);
            const bool acronym_end = is_upper(c) && is_upper(prev) && i + 1 < name.size() && is_lower(name[i + 1]);
            const bool after_digit = is_alpha(c) && is_digit(prev);
            if (camel || acronym_end || after_digit) {
                flush();
            }
        }
        current.push_back(to_lower(c));
    }
    flush();
    return tokens;
}

/// Inverse of tokenize_identifier for alphabetic tokens: lowerCamelCase join.
inline std::string camel_join(const std::vector<std::string>& tokens)
{
    std::string out;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        for (std::size_t i = 0; i < tokens[t].size(); ++i) {
            const char c = tokens[t][i];
            out.push_back(t > 0 && i == 0 ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
        }
    }
    return out;
}

/// Last dot-separated component of a qualified name, with generic arguments,
/// array brackets and varargs dots removed ("java.util.List<a.Pet>" -> "List").
inline std::string simple_type_name(std::string_view qualified)
{
    if (auto lt = qualified.find('<'); lt != std::string_view::npos) {
        qualified = qualified.substr(0, lt);
    }
    while (!qualified.empty() && (qualified.back() == ']' || qualified.back() == '[' || qualified.back() == '.')) {
        qualified.remove_suffix(1);
    }
    if (auto dot = qualified.rfind('.'); dot != std::string_view::npos) {
        qualified = qualified.substr(dot + 1);
    }
    // nested classes: Outer$Inner -> Inner
    if (auto dollar = qualified.rfind('$'); dollar != std::string_view::npos && dollar + 1 < qualified.size()) {
        qualified = qualified.substr(dollar + 1);
    }
    return std::string(qualified);
}

} // namespace mono2rest
