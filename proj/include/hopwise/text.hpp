#pragma once

// Shared text utilities: tokenization and subject normalization.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace hopwise::text {

inline char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

inline bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

/// Lowercase, drop apostrophes, turn remaining ASCII punctuation into
/// separators and split on whitespace.
inline std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : s) {
        if (c == '\'') continue;
        const auto uc = static_cast<unsigned char>(c);
        if (std::isspace(uc) || std::ispunct(uc)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
            continue;
        }
        current.push_back(lower(c));
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

/// Canonical key used for exact subject matching in tuple stores.
inline std::string normalize(std::string_view s) {
    return join(tokenize(s), " ");
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace hopwise::text
