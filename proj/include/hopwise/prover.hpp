#pragma once

// Proves the two implications of a logic template for a parsed command.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hopwise/embeddings.hpp"
#include "hopwise/kbase.hpp"
#include "hopwise/knowledge_source.hpp"
#include "hopwise/parser.hpp"
#include "hopwise/proof.hpp"
#include "hopwise/search.hpp"
#include "hopwise/templates.hpp"

namespace hopwise {

/// Bindings for roles that are not fields of the command.
struct ResolutionContext {
    std::optional<std::string> negated_goal;
    std::optional<std::string> hidden_action;
};

inline bool resolvable(ClauseRole role, const ResolutionContext& ctx) {
    switch (role) {
    case ClauseRole::NegatedGoal: return ctx.negated_goal.has_value();
    case ClauseRole::HiddenAction: return ctx.hidden_action.has_value();
    default: return true;
    }
}

inline Clause resolve_clause(ClauseRole role, const Command& command, const ResolutionContext& ctx = {}) {
    switch (role) {
    case ClauseRole::State: return command.state;
    case ClauseRole::Action: return command.action;
    case ClauseRole::Goal: return command.goal;
    case ClauseRole::NegatedGoal:
        if (!ctx.negated_goal) throw Error(ErrorCode::UnresolvableRole, "negated goal has not been confirmed");
        return make_clause(*ctx.negated_goal);
    case ClauseRole::HiddenAction:
        if (!ctx.hidden_action) throw Error(ErrorCode::UnresolvableRole, "hidden action has not been elicited");
        return make_clause(*ctx.hidden_action);
    }
    throw Error(ErrorCode::UnresolvableRole, "unknown role");
}

/// Candidate negations of `goal` over every Negation relation, merged by
/// score (ties by text); a candidate produced by several relations keeps its best score.
inline std::vector<ScoredObject> negate_goal(const KnowledgeSource& source, std::string_view goal, std::size_t beam) {
    std::map<std::string, double> best;
    for (const Relation* relation : source.registry().with_direction(Direction::Negation)) {
        for (const auto& o : source.query(relation->id, goal, beam).objects) {
            const auto [it, inserted] = best.try_emplace(o.text, o.score);
            if (!inserted && o.score > it->second) it->second = o.score;
        }
    }
    std::vector<ScoredObject> merged;
    for (const auto& [text, score] : best) merged.push_back({text, score});
    sort_beam(merged);
    return merged;
}

/// Everything the prover needs besides the command. The knowledge base is optional.
struct ProverContext {
    const KnowledgeSource& source;
    const EmbeddingTable& embeddings;
    const KnowledgeBase* kb = nullptr;
    SearchConfig config{};
};

inline ProofChain chain_from_rule(const ConsultHit& hit) {
    ProofChain chain;
    chain.hops.push_back({hit.rule.condition.text, std::string(kRuleRelation), hit.rule.consequence.text, 1.0});
    chain.junction_closeness = hit.condition_closeness;
    chain.terminal_closeness = hit.consequence_closeness;
    chain.score = hit.closeness();
    chain.rule_sequence = hit.rule.sequence_number;
    return chain;
}

/// Consults the knowledge base first; only on a miss runs the configured search.
inline std::vector<ProofChain> prove_implication(const ProverContext& ctx, const ImplicationSpec& impl,
                                                 const Command& command, const ResolutionContext& bindings = {}) {
    const Clause body = resolve_clause(impl.body, command, bindings);
    const Clause head = resolve_clause(impl.head, command, bindings);
    ClosenessCache closeness(ctx.embeddings);
    if (ctx.kb != nullptr) {
        const auto hits = consult(*ctx.kb, body.text, head.text, ctx.config.tau, closeness);
        if (!hits.empty()) {
            std::vector<ProofChain> chains;
            for (const auto& hit : hits) chains.push_back(chain_from_rule(hit));
            rank(chains);
            return chains;
        }
    }
    auto chains = search(ctx.source, closeness, body.text, head.text, ctx.config);
    rank(chains);
    return chains;
}

struct ProveResult {
    std::vector<FullProof> proofs; // top 5
    std::vector<ProofChain> first_chains;
    std::vector<ProofChain> second_chains;
    bool half_proof_only = false;
    ResolutionContext bindings;
};

inline constexpr std::size_t kPresentedProofs = 5;

/// Proves both implications and pairs their chains. For Blue, an unbound
/// negated goal is provisionally taken from negate_goal's top candidate.
inline ProveResult prove_command(const ProverContext& ctx, const TemplateSpec& spec, const Command& command,
                                 ResolutionContext bindings = {}) {
    if (spec.color == TemplateColor::Blue && !bindings.negated_goal) {
        const auto candidates = negate_goal(ctx.source, command.goal.normalized_text, ctx.config.kb_beam);
        if (!candidates.empty()) bindings.negated_goal = candidates.front().text;
    }
    ProveResult result;
    result.first_chains = prove_implication(ctx, spec.implications[0], command, bindings);
    result.second_chains = prove_implication(ctx, spec.implications[1], command, bindings);
    result.bindings = bindings;
    result.half_proof_only = result.first_chains.empty() != result.second_chains.empty();

    std::vector<FullProof> all;
    for (const auto& a : result.first_chains) {
        for (const auto& b : result.second_chains) all.push_back(make_full_proof(spec.color, a, b));
    }
    result.proofs = rank_top_k(std::move(all), kPresentedProofs);
    return result;
}

} // namespace hopwise
