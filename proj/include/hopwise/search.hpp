#pragma once

// Multi-hop proof search over a knowledge source.
//
// Unidirectional: expand the body through post-effect relations level by
// level, keeping the K partial chains whose last object is closest to the
// head; emit chains whose last object is within tau of the head.
//
// Bidirectional: expand the body forward through post-effect relations and
// the head backward through pre-condition relations, alternating sides
// (forward first). A chain exists wherever a forward object and a backward
// object are within tau of each other.
//
// Both stop at the first hop count that yields a chain.

#include <algorithm>
#include <string>
#include <vector>

#include "hopwise/embeddings.hpp"
#include "hopwise/knowledge_source.hpp"
#include "hopwise/proof.hpp"

namespace hopwise {

namespace detail {

struct Partial {
    std::vector<Hop> hops; // in query order from the root
    std::string end;
};

inline std::vector<Partial> expand(const KnowledgeSource& source, const std::vector<const Relation*>& relations,
                                   const std::vector<Partial>& frontier, std::size_t beam) {
    std::vector<Partial> next;
    for (const auto& partial : frontier) {
        for (const Relation* relation : relations) {
            const BeamResult result = source.query(relation->id, partial.end, beam);
            for (const auto& object : result.objects) {
                Partial p{partial.hops, object.text};
                p.hops.push_back({partial.end, relation->id, object.text, object.score});
                next.push_back(std::move(p));
            }
        }
    }
    return next;
}

/// Keeps the `k` partials with the highest `key`; ties keep generation order.
template <typename Key>
std::vector<Partial> top_k(const std::vector<Partial>& partials, std::size_t k, Key&& key) {
    if (partials.size() <= k) return partials;
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(partials.size());
    for (std::size_t i = 0; i < partials.size(); ++i) order.emplace_back(key(partials[i]), i);
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Partial> kept;
    kept.reserve(k);
    for (std::size_t i = 0; i < k; ++i) kept.push_back(partials[order[i].second]);
    return kept;
}

inline void require_direction(const std::vector<const Relation*>& relations, Direction d) {
    if (relations.empty()) {
        throw Error(ErrorCode::InvalidArgument,
                    "relation registry has no " + std::string(to_string(d)) + " relation");
    }
}

} // namespace detail

inline std::vector<ProofChain> unidirectional_search(const KnowledgeSource& source, ClosenessCache& closeness,
                                                     const std::string& body, const std::string& head,
                                                     const SearchConfig& cfg) {
    cfg.validate();
    const auto forward = source.registry().with_direction(Direction::PostEffect);
    detail::require_direction(forward, Direction::PostEffect);

    std::vector<detail::Partial> frontier{{{}, body}};
    for (int level = 1; level <= cfg.max_hops; ++level) {
        if (level > 1) {
            frontier = detail::top_k(frontier, cfg.search_beam,
                                     [&](const detail::Partial& p) { return closeness(p.end, head); });
        }
        auto next = detail::expand(source, forward, frontier, cfg.kb_beam);
        std::vector<ProofChain> chains;
        for (const auto& p : next) {
            const double terminal = closeness(p.end, head);
            if (terminal < cfg.tau) continue;
            ProofChain chain;
            chain.hops = p.hops;
            chain.junction_closeness = 1.0;
            chain.terminal_closeness = terminal;
            chain.score = std::min(chain.junction_closeness, chain.terminal_closeness);
            chains.push_back(std::move(chain));
        }
        if (!chains.empty()) {
            rank(chains);
            return chains;
        }
        if (next.empty()) break;
        frontier = std::move(next);
    }
    return {};
}

inline std::vector<ProofChain> bidirectional_search(const KnowledgeSource& source, ClosenessCache& closeness,
                                                    const std::string& body, const std::string& head,
                                                    const SearchConfig& cfg) {
    cfg.validate();
    if (cfg.strategy != SearchStrategy::Bidirectional) {
        throw Error(ErrorCode::InvalidArgument, "bidirectional_search needs a bidirectional config");
    }
    const auto forward_relations = source.registry().with_direction(Direction::PostEffect);
    const auto backward_relations = source.registry().with_direction(Direction::PreCondition);
    detail::require_direction(forward_relations, Direction::PostEffect);
    detail::require_direction(backward_relations, Direction::PreCondition);

    // levels[d] holds partial chains with d hops; level 0 is the root.
    std::vector<std::vector<detail::Partial>> forward{{{{}, body}}};
    std::vector<std::vector<detail::Partial>> backward{{{{}, head}}};

    const auto best_against = [&](const std::string& text, const std::vector<std::vector<detail::Partial>>& other) {
        double best = -1.0;
        for (const auto& level : other) {
            for (const auto& p : level) best = std::max(best, closeness(text, p.end));
        }
        return best;
    };
    const auto grow = [&](std::vector<std::vector<detail::Partial>>& side,
                          const std::vector<std::vector<detail::Partial>>& other,
                          const std::vector<const Relation*>& relations) {
        auto frontier = side.back();
        if (side.size() > 1) {
            frontier = detail::top_k(frontier, cfg.search_beam,
                                     [&](const detail::Partial& p) { return best_against(p.end, other); });
        }
        side.push_back(detail::expand(source, relations, frontier, cfg.kb_beam));
    };

    for (int total = 2; total <= cfg.max_hops; ++total) {
        const auto depth = static_cast<std::size_t>(total - 1);
        while (forward.size() <= depth || backward.size() <= depth) {
            if (forward.size() <= depth) grow(forward, backward, forward_relations);
            if (backward.size() <= depth) grow(backward, forward, backward_relations);
        }

        std::vector<ProofChain> chains;
        for (std::size_t f = 1; f < static_cast<std::size_t>(total); ++f) {
            const std::size_t g = static_cast<std::size_t>(total) - f;
            for (const auto& fp : forward[f]) {
                for (const auto& bp : backward[g]) {
                    const double junction = closeness(fp.end, bp.end);
                    if (junction < cfg.tau) continue;
                    ProofChain chain;
                    chain.hops = fp.hops;
                    chain.hops.insert(chain.hops.end(), bp.hops.rbegin(), bp.hops.rend());
                    chain.meets_at = f;
                    chain.junction_closeness = junction;
                    chain.terminal_closeness = 1.0;
                    chain.score = std::min(chain.junction_closeness, chain.terminal_closeness);
                    chains.push_back(std::move(chain));
                }
            }
        }
        if (!chains.empty()) {
            rank(chains);
            return chains;
        }
    }
    return {};
}

inline std::vector<ProofChain> search(const KnowledgeSource& source, ClosenessCache& closeness,
                                      const std::string& body, const std::string& head, const SearchConfig& cfg) {
    return cfg.strategy == SearchStrategy::Unidirectional
               ? unidirectional_search(source, closeness, body, head, cfg)
               : bidirectional_search(source, closeness, body, head, cfg);
}

inline std::vector<ProofChain> search(const KnowledgeSource& source, const EmbeddingTable& embeddings,
                                      const std::string& body, const std::string& head, const SearchConfig& cfg) {
    ClosenessCache closeness(embeddings);
    return search(source, closeness, body, head, cfg);
}

} // namespace hopwise
