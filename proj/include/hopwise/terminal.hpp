#pragma once

// Line-oriented dialog driver used by the interactive CLI.
//
// Replies: a number (optionally followed by an if-then explanation) for
// multiple choice, y/n for yes-no, the raw line for free text.

#include <charconv>
#include <iostream>
#include <optional>
#include <string>

#include "hopwise/dialog.hpp"

namespace hopwise {

inline std::optional<UserReply> parse_terminal_reply(const Prompt& prompt, std::string_view line) {
    line = text::trim(line);
    switch (prompt.kind) {
    case PromptKind::YesNo: {
        const auto lowered = text::to_lower(line);
        if (lowered == "y" || lowered == "yes") return UserReply::yes_no(true);
        if (lowered == "n" || lowered == "no") return UserReply::yes_no(false);
        return std::nullopt;
    }
    case PromptKind::MultipleChoice: {
        std::size_t choice = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), choice);
        if (ec != std::errc() || choice < 1 || choice > prompt.none_index()) return std::nullopt;
        std::string_view rest(ptr, line.data() + line.size() - ptr);
        while (!rest.empty() && (rest.front() == ',' || rest.front() == ':' || rest.front() == '.' ||
                                 rest.front() == ' ' || rest.front() == '\t')) {
            rest.remove_prefix(1);
        }
        std::optional<std::string> explanation;
        if (!rest.empty()) explanation = std::string(rest);
        return UserReply::pick(choice, explanation);
    }
    case PromptKind::FreeText:
        if (line.empty()) return std::nullopt;
        return UserReply::free_text(std::string(line));
    }
    return std::nullopt;
}

inline void print_prompt(std::ostream& out, const Prompt& prompt) {
    out << prompt.text << '\n';
    for (std::size_t i = 0; i < prompt.options.size(); ++i) out << "  " << i + 1 << ". " << prompt.options[i] << '\n';
    if (!prompt.hint.empty()) out << prompt.hint << '\n';
    out << "> " << std::flush;
}

/// Drives `session` from `in` until it closes. Returns nullopt if input ends first.
inline std::optional<Outcome> run_terminal_dialog(DialogEngine& engine, DialogSession& session, Prompt prompt,
                                                  std::istream& in, std::ostream& out) {
    std::string line;
    while (true) {
        print_prompt(out, prompt);
        if (!std::getline(in, line)) {
            out << '\n';
            return std::nullopt;
        }
        const auto reply = parse_terminal_reply(prompt, line);
        if (!reply) {
            out << "(unrecognized reply)\n";
            continue;
        }
        const StepResult result = engine.step(session, *reply);
        if (const auto* outcome = std::get_if<Outcome>(&result)) return *outcome;
        prompt = std::get<Prompt>(result);
    }
}

} // namespace hopwise
