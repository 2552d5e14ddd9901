#pragma once

// Deterministic decomposition of "if <state> then <action> because <goal>"
// commands and "if <condition> then <consequence>" explanations.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hopwise/error.hpp"
#include "hopwise/text.hpp"

namespace hopwise {

struct Clause {
    std::string text;
    std::vector<std::string> tokens;
    /// Person-normalized form, used only when composing questions.
    std::string normalized_text;

    friend bool operator==(const Clause&, const Clause&) = default;
};

struct Command {
    std::string raw;
    Clause state;
    Clause action;
    Clause goal;

    friend bool operator==(const Command&, const Command&) = default;
};

struct UserExplanation {
    Clause condition;
    Clause consequence;
    std::string raw;
};

enum class Normalization { None, Action, Goal };

namespace detail {

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'';
}

/// First case-insensitive whole-word occurrence of `word` at or after `from`.
inline std::optional<std::size_t> find_marker(std::string_view s, std::string_view word,
                                              std::size_t from = 0) {
    const std::string lowered = text::to_lower(s);
    std::size_t pos = from;
    while ((pos = lowered.find(word, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !is_word_char(lowered[pos - 1]);
        const std::size_t end = pos + word.size();
        const bool right_ok = end >= lowered.size() || !is_word_char(lowered[end]);
        if (left_ok && right_ok) return pos;
        pos = end;
    }
    return std::nullopt;
}

/// Trims whitespace plus trailing commas and terminal punctuation.
inline std::string clean_span(std::string_view s) {
    s = text::trim(s);
    while (!s.empty() && (s.back() == ',' || s.back() == '.' || s.back() == '!' ||
                          s.back() == '?' || s.back() == ';')) {
        s.remove_suffix(1);
        s = text::trim(s);
    }
    while (!s.empty() && s.front() == ',') {
        s.remove_prefix(1);
        s = text::trim(s);
    }
    return std::string(s);
}

inline std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::string current;
    for (char c : s) {
        if (text::is_space(c)) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

} // namespace detail

/// Normalization table: the action drops the object pronoun "me"
/// ("wake me up early" -> "wake up early"); a goal stated as a desire
/// ("I want to get to work on time") becomes the plain statement
/// ("I get to work on time").
inline std::string normalize_person(std::string_view clause, Normalization kind) {
    auto ws = detail::words(clause);
    switch (kind) {
    case Normalization::None:
        break;
    case Normalization::Action: {
        std::vector<std::string> kept;
        for (auto& w : ws) {
            if (text::normalize(w) != "me") kept.push_back(std::move(w));
        }
        ws = std::move(kept);
        break;
    }
    case Normalization::Goal:
        if (ws.size() > 3 && text::to_lower(ws[0]) == "i" &&
            (text::to_lower(ws[1]) == "want" || text::to_lower(ws[1]) == "need") &&
            text::to_lower(ws[2]) == "to") {
            ws.erase(ws.begin() + 1, ws.begin() + 3);
        }
        break;
    }
    return text::join(ws, " ");
}

inline Clause make_clause(std::string_view raw_text, Normalization kind = Normalization::None) {
    Clause c;
    c.text = detail::clean_span(raw_text);
    c.tokens = text::tokenize(c.text);
    c.normalized_text = normalize_person(c.text, kind);
    return c;
}

inline Command parse_command(std::string_view raw) {
    const std::string_view trimmed = text::trim(raw);
    const auto if_pos = detail::find_marker(trimmed, "if");
    const auto then_pos = detail::find_marker(trimmed, "then");
    const auto because_pos = detail::find_marker(trimmed, "because");
    if (!if_pos) throw Error(ErrorCode::MissingStateClause, "no 'if' marker in command");
    if (!then_pos) throw Error(ErrorCode::MissingActionClause, "no 'then' marker in command");
    if (!because_pos) throw Error(ErrorCode::MissingGoalClause, "no 'because' marker in command");
    if (!(*if_pos < *then_pos && *then_pos < *because_pos)) {
        throw Error(ErrorCode::MarkerOrderViolation, "markers must appear as if -> then -> because");
    }

    const auto span = [&](std::size_t begin, std::size_t end) {
        return trimmed.substr(begin, end - begin);
    };
    Command cmd;
    cmd.raw = std::string(trimmed);
    cmd.state = make_clause(span(*if_pos + 2, *then_pos));
    cmd.action = make_clause(span(*then_pos + 4, *because_pos), Normalization::Action);
    cmd.goal = make_clause(trimmed.substr(*because_pos + 7), Normalization::Goal);
    if (cmd.state.tokens.empty()) throw Error(ErrorCode::MissingStateClause, "empty state clause");
    if (cmd.action.tokens.empty()) throw Error(ErrorCode::MissingActionClause, "empty action clause");
    if (cmd.goal.tokens.empty()) throw Error(ErrorCode::MissingGoalClause, "empty goal clause");
    return cmd;
}

inline UserExplanation parse_explanation(std::string_view raw) {
    const std::string_view trimmed = text::trim(raw);
    const auto if_pos = detail::find_marker(trimmed, "if");
    if (!if_pos) throw Error(ErrorCode::NotIfThenFormat, "explanation has no 'if' marker");
    const auto then_pos = detail::find_marker(trimmed, "then", *if_pos + 2);
    if (!then_pos) throw Error(ErrorCode::NotIfThenFormat, "explanation has no 'then' marker");

    UserExplanation ex;
    ex.raw = std::string(trimmed);
    ex.condition = make_clause(trimmed.substr(*if_pos + 2, *then_pos - *if_pos - 2));
    ex.consequence = make_clause(trimmed.substr(*then_pos + 4));
    if (ex.condition.tokens.empty() || ex.consequence.tokens.empty()) {
        throw Error(ErrorCode::NotIfThenFormat, "explanation has an empty clause");
    }
    return ex;
}

} // namespace hopwise
