#pragma once

// Token embeddings loaded from "token v1 ... vd" text files, phrase
// vectors by token averaging, and cosine closeness.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hopwise/error.hpp"
#include "hopwise/text.hpp"

namespace hopwise {

struct PhraseVector {
    std::vector<double> vector;
    std::size_t in_vocab_count = 0;

    bool is_zero() const { return in_vocab_count == 0; }
};

class EmbeddingTable {
public:
    EmbeddingTable() = default;

    explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return index_.size(); }

    /// Returns false when the token is already present (first occurrence wins).
    bool insert(std::string token, std::span<const double> values) {
        if (values.size() != dimension_) {
            throw Error(ErrorCode::DimensionMismatch, "vector for '" + token + "' has " +
                                                          std::to_string(values.size()) +
                                                          " values, expected " +
                                                          std::to_string(dimension_));
        }
        const auto [it, inserted] = index_.try_emplace(std::move(token), index_.size());
        if (!inserted) return false;
        data_.insert(data_.end(), values.begin(), values.end());
        return true;
    }

    std::span<const double> lookup(std::string_view token) const {
        const auto it = index_.find(std::string(token));
        if (it == index_.end()) return {};
        return {data_.data() + it->second * dimension_, dimension_};
    }

    bool contains(std::string_view token) const { return !lookup(token).empty(); }

private:
    std::size_t dimension_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;
};

namespace detail {

inline std::vector<double> parse_values(std::string_view rest, std::size_t line_no) {
    std::vector<double> values;
    const char* p = rest.data();
    const char* end = rest.data() + rest.size();
    while (p < end) {
        while (p < end && text::is_space(*p)) ++p;
        if (p == end) break;
        double v = 0.0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc()) {
            throw Error(ErrorCode::ParseError,
                        "bad number on embedding line " + std::to_string(line_no));
        }
        values.push_back(v);
        p = next;
    }
    return values;
}

} // namespace detail

inline EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::EmptyFile, "cannot open embedding file " + path.string());

    EmbeddingTable table;
    bool have_dimension = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view view = text::trim(line);
        if (view.empty()) continue;
        const auto sep = view.find_first_of(" \t");
        if (sep == std::string_view::npos) {
            throw Error(ErrorCode::DimensionMismatch,
                        "line " + std::to_string(line_no) + " has no vector");
        }
        auto values = detail::parse_values(view.substr(sep + 1), line_no);
        if (!have_dimension) {
            if (values.empty()) {
                throw Error(ErrorCode::DimensionMismatch, "first line has no vector");
            }
            table = EmbeddingTable(values.size());
            have_dimension = true;
        }
        if (values.size() != table.dimension()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "line " + std::to_string(line_no) + " has " +
                            std::to_string(values.size()) + " values, expected " +
                            std::to_string(table.dimension()));
        }
        table.insert(std::string(view.substr(0, sep)), values);
    }
    if (!have_dimension) throw Error(ErrorCode::EmptyFile, path.string() + " holds no embeddings");
    return table;
}

/// Mean of the in-vocabulary token vectors; OOV tokens are skipped.
inline PhraseVector embed_phrase(const EmbeddingTable& table, std::span<const std::string> tokens) {
    PhraseVector pv;
    pv.vector.assign(table.dimension(), 0.0);
    for (const auto& token : tokens) {
        const auto v = table.lookup(token);
        if (v.empty()) continue;
        for (std::size_t i = 0; i < v.size(); ++i) pv.vector[i] += v[i];
        ++pv.in_vocab_count;
    }
    if (pv.in_vocab_count > 0) {
        const double n = static_cast<double>(pv.in_vocab_count);
        for (auto& x : pv.vector) x /= n;
    }
    return pv;
}

inline PhraseVector embed_phrase(const EmbeddingTable& table, std::string_view phrase) {
    const auto tokens = text::tokenize(phrase);
    return embed_phrase(table, tokens);
}

/// Cosine similarity clamped to [-1, 1]; 0 when either side is the zero vector.
inline double closeness(const PhraseVector& a, const PhraseVector& b) {
    if (a.is_zero() || b.is_zero() || a.vector.size() != b.vector.size()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.vector.size(); ++i) {
        dot += a.vector[i] * b.vector[i];
        na += a.vector[i] * a.vector[i];
        nb += b.vector[i] * b.vector[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    const double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

/// Memoizing phrase-closeness helper used by search and KB consultation.
/// Not thread-safe; each search owns one.
class ClosenessCache {
public:
    explicit ClosenessCache(const EmbeddingTable& table) : table_(&table) {}

    const PhraseVector& vector(const std::string& phrase) {
        auto it = cache_.find(phrase);
        if (it == cache_.end()) it = cache_.emplace(phrase, embed_phrase(*table_, phrase)).first;
        return it->second;
    }

    double operator()(const std::string& a, const std::string& b) {
        const PhraseVector& va = vector(a);
        const PhraseVector& vb = vector(b);
        return closeness(va, vb);
    }

    const EmbeddingTable& table() const { return *table_; }

private:
    const EmbeddingTable* table_;
    std::unordered_map<std::string, PhraseVector> cache_;
};

} // namespace hopwise
