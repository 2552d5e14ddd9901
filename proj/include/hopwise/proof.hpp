#pragma once

// Proof chains, full proofs, search configuration and ranking.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hopwise/error.hpp"
#include "hopwise/knowledge_source.hpp"
#include "hopwise/templates.hpp"

namespace hopwise {

enum class SearchStrategy { Unidirectional, Bidirectional };

struct SearchConfig {
    SearchStrategy strategy = SearchStrategy::Bidirectional;
    int max_hops = 3;
    std::size_t search_beam = 5; // K
    std::size_t kb_beam = 10;    // b
    double tau = 0.8;

    void validate() const {
        if (max_hops < 1 || max_hops > 5) throw Error(ErrorCode::InvalidArgument, "hop budget must be in [1, 5]");
        if (search_beam < 1) throw Error(ErrorCode::InvalidArgument, "search beam K must be >= 1");
        if (kb_beam < 1) throw Error(ErrorCode::InvalidArgument, "KB beam b must be >= 1");
        if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must be in (0, 1]");
        if (strategy == SearchStrategy::Bidirectional && max_hops < 2) {
            throw Error(ErrorCode::InvalidArgument, "bidirectional search needs a hop budget >= 2");
        }
    }
};

struct Hop {
    std::string subject;
    std::string relation; // registry id
    std::string object;
    double generation_score = 0.0;

    friend bool operator==(const Hop&, const Hop&) = default;
};

/// Relation id recorded on hops that come from a learned knowledge-base rule.
inline constexpr std::string_view kRuleRelation = "LearnedRule";

struct ProofChain {
    /// Forward hops in query order, then (bidirectional) backward hops ordered
    /// from the junction toward the head. A backward hop's subject is the
    /// head-side text and its object the junction-side text.
    std::vector<Hop> hops;
    double junction_closeness = 1.0;
    double terminal_closeness = 1.0;
    double score = 1.0;
    /// Index of the first backward hop (bidirectional chains only).
    std::optional<std::size_t> meets_at;
    /// Sequence number of the knowledge-base rule backing this chain.
    std::optional<std::uint64_t> rule_sequence;

    std::size_t hop_count() const { return hops.size(); }
    std::size_t forward_hops() const { return meets_at.value_or(hops.size()); }

    friend bool operator==(const ProofChain&, const ProofChain&) = default;
};

inline std::string render(const ProofChain& chain) {
    if (chain.hops.empty()) return {};
    if (chain.rule_sequence) {
        return chain.hops[0].subject + " =[rule " + std::to_string(*chain.rule_sequence) + "]=> " +
               chain.hops[0].object;
    }
    const std::size_t f = chain.forward_hops();
    std::string out = chain.hops[0].subject;
    if (f == 0) out.clear();
    for (std::size_t i = 0; i < f; ++i) out += " -[" + chain.hops[i].relation + "]-> " + chain.hops[i].object;
    if (f < chain.hops.size()) {
        out += " ~ " + chain.hops[f].object;
        for (std::size_t i = f; i < chain.hops.size(); ++i) {
            out += " <-[" + chain.hops[i].relation + "]- " + chain.hops[i].subject;
        }
    }
    return out;
}

struct FullProof {
    TemplateColor color = TemplateColor::Blue;
    ProofChain first;
    ProofChain second;
    double combined_score = 0.0;

    std::size_t hop_count() const { return first.hop_count() + second.hop_count(); }
};

inline std::string render(const FullProof& proof) {
    return render(proof.first) + " & " + render(proof.second);
}

inline FullProof make_full_proof(TemplateColor color, ProofChain first, ProofChain second) {
    FullProof p{color, std::move(first), std::move(second), 0.0};
    p.combined_score = std::min(p.first.score, p.second.score);
    return p;
}

inline double rank_score(const ProofChain& c) { return c.score; }
inline double rank_score(const FullProof& p) { return p.combined_score; }

/// Score descending, fewer hops first, then rendered text.
template <typename T>
bool ranks_before(const T& a, const T& b) {
    if (rank_score(a) != rank_score(b)) return rank_score(a) > rank_score(b);
    if (a.hop_count() != b.hop_count()) return a.hop_count() < b.hop_count();
    return render(a) < render(b);
}

template <typename T>
void rank(std::vector<T>& items) {
    std::stable_sort(items.begin(), items.end(), [](const T& a, const T& b) { return ranks_before(a, b); });
}

template <typename T>
std::vector<T> rank_top_k(std::vector<T> items, std::size_t k = 5) {
    rank(items);
    if (items.size() > k) items.resize(k);
    return items;
}

} // namespace hopwise
