#pragma once

// JSON views of dialog objects, shared by the HTTP service, transcript
// export and the CLI.

#include <string>

#include <json.hpp>

#include "hopwise/dialog.hpp"

namespace hopwise {

using json = nlohmann::json;

inline json to_json(const Hop& h) {
    return {{"subject", h.subject}, {"relation", h.relation}, {"object", h.object}, {"score", h.generation_score}};
}

inline json to_json(const ProofChain& c) {
    json hops = json::array();
    for (std::size_t i = 0; i < c.hops.size(); ++i) {
        json hop = to_json(c.hops[i]);
        hop["direction"] = c.rule_sequence ? "rule" : (i < c.forward_hops() ? "forward" : "backward");
        hops.push_back(std::move(hop));
    }
    json j{{"hops", hops},
           {"junction_closeness", c.junction_closeness},
           {"terminal_closeness", c.terminal_closeness},
           {"score", c.score},
           {"text", render(c)}};
    if (c.rule_sequence) j["rule_sequence"] = *c.rule_sequence;
    return j;
}

inline json to_json(const FullProof& p) {
    return {{"color", to_string(p.color)},
            {"first", to_json(p.first)},
            {"second", to_json(p.second)},
            {"combined_score", p.combined_score}};
}

inline json to_json(const Prompt& p) {
    json j{{"text", p.text}, {"kind", to_string(p.kind)}};
    if (!p.options.empty()) j["options"] = p.options;
    if (!p.hint.empty()) j["hint"] = p.hint;
    return j;
}

inline json to_json(const UserReply& r) {
    json j;
    switch (r.kind) {
    case UserReply::Kind::Choice: j["choice"] = r.choice; break;
    case UserReply::Kind::YesNo: j["yesno"] = r.yes; break;
    case UserReply::Kind::Text: j["text"] = r.text; break;
    }
    if (r.explanation) j["explanation"] = *r.explanation;
    return j;
}

/// Exactly one of choice / yesno / text must be present.
inline UserReply reply_from_json(const json& j) {
    const int present = int(j.contains("choice")) + int(j.contains("yesno")) + int(j.contains("text"));
    if (!j.is_object() || present != 1) {
        throw Error(ErrorCode::ReplyKindMismatch, "reply needs exactly one of choice, yesno, text");
    }
    try {
        std::optional<std::string> explanation;
        if (j.contains("explanation") && !j.at("explanation").is_null()) {
            explanation = j.at("explanation").get<std::string>();
        }
        if (j.contains("choice")) {
            const auto& c = j.at("choice");
            if (!c.is_number_integer() || c.get<long long>() < 1) {
                throw Error(ErrorCode::ReplyKindMismatch, "choice must be a positive integer");
            }
            return UserReply::pick(c.get<std::size_t>(), explanation);
        }
        if (j.contains("yesno")) return UserReply::yes_no(j.at("yesno").get<bool>());
        return UserReply::free_text(j.at("text").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ReplyKindMismatch, e.what());
    }
}

inline json to_json(const Outcome& o) {
    json j{{"kind", to_string(o.kind)}, {"rules_added", o.rules_added}};
    if (o.proof) j["proof"] = to_json(*o.proof);
    if (o.validated_choice) j["validated_choice"] = *o.validated_choice;
    if (o.reason) j["reason"] = to_string(*o.reason);
    return j;
}

inline json to_json(const TranscriptEntry& e) {
    return {{"prompt", to_json(e.prompt)}, {"reply", to_json(e.reply)}};
}

inline json to_json(const DialogSession& s) {
    json transcript = json::array();
    for (const auto& e : s.transcript) transcript.push_back(to_json(e));
    json j{{"id", s.id},
           {"command", s.command.raw},
           {"template", to_string(s.spec.color)},
           {"phase", to_string(s.phase)},
           {"transcript", transcript}};
    if (s.pending) j["prompt"] = to_json(*s.pending);
    if (s.outcome) j["outcome"] = to_json(*s.outcome);
    if (s.bindings.negated_goal) j["negated_goal"] = *s.bindings.negated_goal;
    if (s.bindings.hidden_action) j["hidden_action"] = *s.bindings.hidden_action;
    return j;
}

/// One JSON object per line, one line per (prompt, reply) pair.
inline std::string export_transcript(const DialogSession& s) {
    std::string out;
    for (const auto& e : s.transcript) out += to_json(e).dump() + "\n";
    return out;
}

} // namespace hopwise
