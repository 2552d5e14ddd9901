#pragma once

// Human-in-the-loop dialog: presents ranked proofs, confirms negated goals,
// elicits if-then explanations and grows the knowledge base.
//
// Phase machine:
//   NegationCheck --y--> Presentation | Explanation
//   NegationCheck --n--> Explanation
//   Presentation --choice i--> Closed(Proved)
//   Presentation --none--> Explanation (or straight to re-proof when the
//                          reply carries an explanation)
//   Explanation --parsed--> Closed(ProvedAfterContribution | Failed)
//   Explanation --unparsed--> ExplanationRetry --unparsed--> Closed(Failed)

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hopwise/kbase.hpp"
#include "hopwise/parser.hpp"
#include "hopwise/proof.hpp"
#include "hopwise/prover.hpp"
#include "hopwise/templates.hpp"
#include "hopwise/text.hpp"

namespace hopwise {

enum class PromptKind { YesNo, MultipleChoice, FreeText };

inline std::string_view to_string(PromptKind k) {
    switch (k) {
    case PromptKind::YesNo: return "YesNo";
    case PromptKind::MultipleChoice: return "MultipleChoice";
    case PromptKind::FreeText: return "FreeText";
    }
    return "?";
}

inline constexpr std::string_view kNoneOfTheAbove = "None of the above";

struct Prompt {
    std::string text;
    PromptKind kind = PromptKind::FreeText;
    /// MultipleChoice only: substantive options followed by "None of the above".
    std::vector<std::string> options;
    std::string hint;

    std::size_t none_index() const { return options.size(); } // 1-based

    friend bool operator==(const Prompt&, const Prompt&) = default;
};

struct UserReply {
    enum class Kind { Choice, YesNo, Text };

    Kind kind = Kind::Text;
    std::size_t choice = 0; // 1-based; the last index is "None of the above"
    bool yes = false;
    std::string text;
    std::optional<std::string> explanation;

    static UserReply pick(std::size_t index, std::optional<std::string> explanation = std::nullopt) {
        UserReply r;
        r.kind = Kind::Choice;
        r.choice = index;
        r.explanation = std::move(explanation);
        return r;
    }
    static UserReply yes_no(bool flag) {
        UserReply r;
        r.kind = Kind::YesNo;
        r.yes = flag;
        return r;
    }
    static UserReply free_text(std::string t) {
        UserReply r;
        r.kind = Kind::Text;
        r.text = std::move(t);
        return r;
    }

    friend bool operator==(const UserReply&, const UserReply&) = default;
};

enum class DialogPhase { NegationCheck, Presentation, Explanation, ExplanationRetry, Closed };

inline std::string_view to_string(DialogPhase p) {
    switch (p) {
    case DialogPhase::NegationCheck: return "NegationCheck";
    case DialogPhase::Presentation: return "Presentation";
    case DialogPhase::Explanation: return "Explanation";
    case DialogPhase::ExplanationRetry: return "ExplanationRetry";
    case DialogPhase::Closed: return "Closed";
    }
    return "?";
}

enum class FailureReason { MissingKnowledge, UnparseableExplanation };

inline std::string_view to_string(FailureReason r) {
    return r == FailureReason::MissingKnowledge ? "MissingKnowledge" : "UnparseableExplanation";
}

struct Outcome {
    enum class Kind { Proved, ProvedAfterContribution, Failed };

    Kind kind = Kind::Failed;
    std::optional<FullProof> proof;
    std::optional<std::size_t> validated_choice;
    std::vector<std::uint64_t> rules_added;
    std::optional<FailureReason> reason;

    bool proved() const { return kind != Kind::Failed; }
};

inline std::string_view to_string(Outcome::Kind k) {
    switch (k) {
    case Outcome::Kind::Proved: return "Proved";
    case Outcome::Kind::ProvedAfterContribution: return "ProvedAfterContribution";
    case Outcome::Kind::Failed: return "Failed";
    }
    return "?";
}

struct TranscriptEntry {
    Prompt prompt;
    UserReply reply;
};

/// Upper bound on prompts in one session.
inline constexpr std::size_t kMaxPrompts = 6;

struct DialogSession {
    std::string id;
    Command command;
    TemplateSpec spec;
    DialogPhase phase = DialogPhase::Closed;
    ResolutionContext bindings;
    std::optional<bool> negation_confirmed;
    std::vector<FullProof> candidates;
    std::optional<Prompt> pending;
    std::vector<TranscriptEntry> transcript;
    std::optional<Outcome> outcome;
    std::vector<std::uint64_t> rules_added;
    std::size_t prompts_issued = 0;
    /// Question form of the pending free-text request.
    std::string explanation_form;
};

using StepResult = std::variant<Prompt, Outcome>;

/// Short human-readable summary of a chain: its intermediate objects.
inline std::string summarize(const ProofChain& chain) {
    std::vector<std::string> parts;
    if (chain.rule_sequence) return chain.hops.front().subject + " -> " + chain.hops.front().object;
    for (std::size_t i = 0; i < chain.hops.size(); ++i) {
        const std::string& t = chain.hops[i].object;
        if (parts.empty() || parts.back() != t) parts.push_back(t);
    }
    return text::join(parts, " -> ");
}

inline std::string option_text(const FullProof& proof) {
    return summarize(proof.first) + "; " + summarize(proof.second);
}

inline std::map<std::string, std::string> question_slots(const Command& command, const ResolutionContext& bindings) {
    return {
        {"state", command.state.text},
        {"action", command.action.normalized_text},
        {"goal", command.goal.normalized_text},
        {"goal-clause", command.goal.text},
        {"not-goal", bindings.negated_goal.value_or("")},
    };
}

/// Builds the prompt for `phase_name`. Question phases become a multiple
/// choice when there are candidates and a free-text request otherwise.
inline Prompt generate_question(const TemplateSpec& spec, const Command& command, std::string_view phase_name,
                                const ResolutionContext& bindings, const std::vector<FullProof>& candidates = {}) {
    Prompt prompt;
    prompt.text = fill_slots(spec.form(phase_name), question_slots(command, bindings));
    if (phase_name == phase::NegationCheck) {
        prompt.kind = PromptKind::YesNo;
        return prompt;
    }
    if (!candidates.empty()) {
        prompt.kind = PromptKind::MultipleChoice;
        for (const auto& proof : candidates) prompt.options.push_back(option_text(proof));
        prompt.options.emplace_back(kNoneOfTheAbove);
        prompt.hint = spec.form(phase::ChoiceHint);
    } else {
        prompt.kind = PromptKind::FreeText;
        prompt.hint = spec.form(phase::ExplanationHint);
    }
    return prompt;
}

class DialogEngine {
public:
    DialogEngine(const KnowledgeSource& source, const EmbeddingTable& embeddings, KnowledgeBase& kb,
                 TemplateSet templates, SearchConfig config)
        : source_(source), embeddings_(embeddings), kb_(kb), templates_(std::move(templates)), config_(config) {
        config_.validate();
    }

    const TemplateSet& templates() const { return templates_; }
    const SearchConfig& config() const { return config_; }
    KnowledgeBase& kb() { return kb_; }

    std::pair<DialogSession, Prompt> start_session(std::string id, Command command, TemplateColor color) {
        DialogSession s;
        s.id = std::move(id);
        s.command = std::move(command);
        s.spec = templates_.get(color);

        if (color == TemplateColor::Blue) {
            const auto negations = negate_goal(source_, s.command.goal.normalized_text, config_.kb_beam);
            if (!negations.empty()) {
                s.bindings.negated_goal = negations.front().text;
                return {s, issue(s, DialogPhase::NegationCheck,
                                 generate_question(s.spec, s.command, phase::NegationCheck, s.bindings))};
            }
            s.negation_confirmed = false;
            return {s, ask_explanation(s, phase::RejectedNegation)};
        }

        s.candidates = present(s);
        if (s.candidates.empty()) return {s, ask_explanation(s, phase::Fallback)};
        return {s, issue(s, DialogPhase::Presentation,
                         generate_question(s.spec, s.command, phase::Presentation, s.bindings, s.candidates))};
    }

    StepResult step(DialogSession& s, const UserReply& reply) {
        if (s.phase == DialogPhase::Closed || !s.pending) {
            throw Error(ErrorCode::SessionAlreadyClosed, "session " + s.id + " is closed");
        }
        check_kind(*s.pending, reply);
        s.transcript.push_back({*s.pending, reply});

        switch (s.phase) {
        case DialogPhase::NegationCheck:
            s.negation_confirmed = reply.yes;
            if (!reply.yes) {
                s.bindings.negated_goal.reset();
                return ask_explanation(s, phase::RejectedNegation);
            }
            s.candidates = present(s);
            if (s.candidates.empty()) return ask_explanation(s, phase::ConfirmedNegation);
            return issue(s, DialogPhase::Presentation,
                         generate_question(s.spec, s.command, phase::ConfirmedNegation, s.bindings, s.candidates));

        case DialogPhase::Presentation:
            if (reply.choice < s.pending->none_index()) return validate(s, reply);
            if (reply.explanation && !text::trim(*reply.explanation).empty()) {
                return contribute(s, *reply.explanation, phase::Fallback);
            }
            return ask_explanation(s, phase::Fallback);

        case DialogPhase::Explanation:
        case DialogPhase::ExplanationRetry:
            return contribute(s, reply.text, s.explanation_form);

        case DialogPhase::Closed:
            break;
        }
        throw Error(ErrorCode::SessionAlreadyClosed, "session " + s.id + " is closed");
    }

private:
    ProverContext prover() const { return {source_, embeddings_, &kb_, config_}; }

    bool can_prove(const DialogSession& s) const {
        for (const auto& impl : s.spec.implications) {
            if (!resolvable(impl.head, s.bindings) || !resolvable(impl.body, s.bindings)) return false;
        }
        return true;
    }

    std::vector<FullProof> present(DialogSession& s) {
        if (!can_prove(s)) return {};
        return prove_command(prover(), s.spec, s.command, s.bindings).proofs;
    }

    Prompt issue(DialogSession& s, DialogPhase next, Prompt prompt) {
        s.phase = next;
        s.pending = prompt;
        ++s.prompts_issued;
        return prompt;
    }

    Prompt ask_explanation(DialogSession& s, std::string_view form) {
        s.candidates.clear();
        s.explanation_form = std::string(form);
        return issue(s, DialogPhase::Explanation, generate_question(s.spec, s.command, form, s.bindings));
    }

    Outcome close(DialogSession& s, Outcome outcome) {
        outcome.rules_added = s.rules_added;
        s.phase = DialogPhase::Closed;
        s.pending.reset();
        s.outcome = outcome;
        return outcome;
    }

    void remember(DialogSession& s, LearnedRule rule) {
        rule.session_id = s.id;
        s.rules_added.push_back(kb_.add_rule(std::move(rule)).sequence_number);
    }

    void persist_chain(DialogSession& s, const ProofChain& chain) {
        if (chain.rule_sequence) return;
        for (std::size_t i = 0; i < chain.hops.size(); ++i) {
            const Hop& hop = chain.hops[i];
            const bool backward = i >= chain.forward_hops();
            remember(s, backward ? make_rule(hop.object, hop.subject, Provenance::GeneratorConfirmed)
                                 : make_rule(hop.subject, hop.object, Provenance::GeneratorConfirmed));
        }
    }

    Outcome validate(DialogSession& s, const UserReply& reply) {
        const FullProof& proof = s.candidates.at(reply.choice - 1);
        persist_chain(s, proof.first);
        persist_chain(s, proof.second);
        if (reply.explanation) {
            try {
                const auto ex = parse_explanation(*reply.explanation);
                remember(s, make_rule(ex.condition.text, ex.consequence.text, Provenance::UserContributed));
            } catch (const Error&) {
                // Explanations accompanying a choice are optional.
            }
        }
        Outcome outcome;
        outcome.kind = Outcome::Kind::Proved;
        outcome.proof = proof;
        outcome.validated_choice = reply.choice;
        return close(s, std::move(outcome));
    }

    StepResult contribute(DialogSession& s, const std::string& explanation, std::string_view form_name) {
        const std::string form(form_name); // may alias s.explanation_form
        UserExplanation ex;
        try {
            ex = parse_explanation(explanation);
        } catch (const Error&) {
            if (s.phase == DialogPhase::ExplanationRetry) {
                Outcome failed;
                failed.reason = FailureReason::UnparseableExplanation;
                return close(s, std::move(failed));
            }
            s.explanation_form = form;
            Prompt retry = generate_question(s.spec, s.command, form, s.bindings);
            retry.hint = s.spec.form(phase::ReformatHint);
            return issue(s, DialogPhase::ExplanationRetry, std::move(retry));
        }

        remember(s, make_rule(ex.condition.text, ex.consequence.text, Provenance::UserContributed));
        if (s.spec.color == TemplateColor::Blue && !s.bindings.negated_goal) {
            s.bindings.negated_goal = ex.consequence.text;
        }
        if (!s.bindings.hidden_action) {
            const bool needs_hidden = std::any_of(s.spec.implications.begin(), s.spec.implications.end(), [](const auto& i) {
                return i.head == ClauseRole::HiddenAction || i.body == ClauseRole::HiddenAction;
            });
            if (needs_hidden) s.bindings.hidden_action = ex.condition.text;
        }

        Outcome outcome;
        outcome.reason = FailureReason::MissingKnowledge;
        if (can_prove(s)) {
            const ProveResult result = prove_command(prover(), s.spec, s.command, s.bindings);
            std::vector<FullProof> grounded;
            for (const auto& a : result.first_chains) {
                for (const auto& b : result.second_chains) {
                    if (uses_session_rule(s, a) || uses_session_rule(s, b)) {
                        grounded.push_back(make_full_proof(s.spec.color, a, b));
                    }
                }
            }
            if (!grounded.empty()) {
                outcome.kind = Outcome::Kind::ProvedAfterContribution;
                outcome.proof = rank_top_k(std::move(grounded), 1).front();
                outcome.reason.reset();
            }
        }
        return close(s, std::move(outcome));
    }

    static bool uses_session_rule(const DialogSession& s, const ProofChain& chain) {
        return chain.rule_sequence &&
               std::find(s.rules_added.begin(), s.rules_added.end(), *chain.rule_sequence) != s.rules_added.end();
    }

    static void check_kind(const Prompt& prompt, const UserReply& reply) {
        bool ok = false;
        switch (prompt.kind) {
        case PromptKind::YesNo: ok = reply.kind == UserReply::Kind::YesNo; break;
        case PromptKind::FreeText: ok = reply.kind == UserReply::Kind::Text; break;
        case PromptKind::MultipleChoice:
            ok = reply.kind == UserReply::Kind::Choice && reply.choice >= 1 && reply.choice <= prompt.none_index();
            break;
        }
        if (!ok) {
            throw Error(ErrorCode::ReplyKindMismatch,
                        "reply does not answer a " + std::string(to_string(prompt.kind)) + " prompt");
        }
    }

    const KnowledgeSource& source_;
    const EmbeddingTable& embeddings_;
    KnowledgeBase& kb_;
    TemplateSet templates_;
    SearchConfig config_;
};

} // namespace hopwise
