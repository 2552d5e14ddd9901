#pragma once

// Scripted-user evaluation: one dialog per dataset command, aggregated into
// a proved/tried table per template color.
//
// Dataset: "color<TAB>command" per line, '#' comments and blank lines ignored.
// Scripts: JSON object keyed by command text; each value is a list of replies
// ({"choice": n, "explanation": ...} | {"yesno": b} | {"text": s}).

#include <array>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopwise/dialog.hpp"
#include "hopwise/json_io.hpp"

namespace hopwise {

/// Text sent when a script runs out at a free-text prompt. Not an if-then,
/// so the session ends after the re-ask.
inline constexpr std::string_view kScriptFallbackText = "I do not know";

class ScriptedUser {
public:
    ScriptedUser() = default;
    explicit ScriptedUser(std::vector<UserReply> replies) : replies_(replies.begin(), replies.end()) {}

    UserReply answer(const Prompt& prompt) {
        if (!replies_.empty()) {
            UserReply r = replies_.front();
            replies_.pop_front();
            return r;
        }
        switch (prompt.kind) {
        case PromptKind::MultipleChoice: return UserReply::pick(prompt.none_index());
        case PromptKind::YesNo: return UserReply::yes_no(false);
        case PromptKind::FreeText: break;
        }
        return UserReply::free_text(std::string(kScriptFallbackText));
    }

    std::size_t remaining() const { return replies_.size(); }

private:
    std::deque<UserReply> replies_;
};

struct DatasetEntry {
    std::size_t line = 0;
    TemplateColor color = TemplateColor::Blue;
    std::string text;
    Command command;
};

inline std::vector<DatasetEntry> parse_dataset(std::istream& in, const std::string& name = "dataset") {
    std::vector<DatasetEntry> entries;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto where = name + ":" + std::to_string(number) + ": ";
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error(ErrorCode::ParseError, where + "expected color<TAB>command");
        const auto color = parse_color(line.substr(0, tab));
        if (!color) throw Error(ErrorCode::ParseError, where + "unknown template color '" + line.substr(0, tab) + "'");
        DatasetEntry e;
        e.line = number;
        e.color = *color;
        e.text = std::string(text::trim(line.substr(tab + 1)));
        try {
            e.command = parse_command(e.text);
        } catch (const Error& err) {
            throw Error(ErrorCode::ParseError, where + err.what());
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

inline std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open dataset " + path.string());
    return parse_dataset(in, path.string());
}

using Scripts = std::map<std::string, std::vector<UserReply>>;

inline Scripts scripts_from_json(std::string_view json_text) {
    Scripts scripts;
    try {
        const auto doc = json::parse(json_text);
        if (!doc.is_object()) throw Error(ErrorCode::ParseError, "scripts: expected an object keyed by command");
        for (const auto& [command, replies] : doc.items()) {
            auto& list = scripts[command];
            for (const auto& r : replies) {
                try {
                    list.push_back(reply_from_json(r));
                } catch (const Error& e) {
                    throw Error(ErrorCode::ParseError, "scripts: '" + command + "': " + e.what());
                }
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("scripts: ") + e.what());
    }
    return scripts;
}

inline Scripts load_scripts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open scripts " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return scripts_from_json(buffer.str());
}

struct SessionRecord {
    std::size_t line = 0;
    TemplateColor color = TemplateColor::Blue;
    std::string command;
    Outcome outcome;
    std::size_t prompts = 0;
};

struct ColorTally {
    std::size_t proved = 0;
    std::size_t tried = 0;

    double ratio() const { return tried == 0 ? 0.0 : static_cast<double>(proved) / static_cast<double>(tried); }
};

struct EvalReport {
    std::map<TemplateColor, ColorTally> per_color;
    ColorTally total;
    std::size_t rules_added = 0;
    std::vector<SessionRecord> sessions;

    std::string format() const {
        std::string out = "template\tproved\ttried\tproved/tried\n";
        const auto row = [&out](std::string_view name, const ColorTally& t) {
            char ratio[32];
            std::snprintf(ratio, sizeof ratio, "%.4f", t.ratio());
            out += std::string(name) + "\t" + std::to_string(t.proved) + "\t" + std::to_string(t.tried) + "\t" + ratio + "\n";
        };
        for (const auto color : {TemplateColor::Blue, TemplateColor::Orange, TemplateColor::Green}) {
            const auto it = per_color.find(color);
            row(to_string(color), it == per_color.end() ? ColorTally{} : it->second);
        }
        row("total", total);
        out += "rules added\t" + std::to_string(rules_added) + "\n";
        return out;
    }
};

/// Runs every dataset entry through a dialog session against `kb`, which
/// accumulates the knowledge added along the way.
inline EvalReport run_eval(const std::vector<DatasetEntry>& dataset, const Scripts& scripts,
                           const KnowledgeSource& source, const EmbeddingTable& embeddings, KnowledgeBase& kb,
                           const TemplateSet& templates, const SearchConfig& cfg) {
    DialogEngine engine(source, embeddings, kb, templates, cfg);
    EvalReport report;
    for (const auto color : {TemplateColor::Blue, TemplateColor::Orange, TemplateColor::Green}) report.per_color[color];

    std::size_t index = 0;
    for (const auto& entry : dataset) {
        const auto script = scripts.find(entry.text);
        if (script == scripts.end()) {
            throw Error(ErrorCode::ParseError,
                        "dataset:" + std::to_string(entry.line) + ": no script for '" + entry.text + "'");
        }
        ScriptedUser user(script->second);
        auto [session, prompt] = engine.start_session("eval-" + std::to_string(++index), entry.command, entry.color);
        StepResult result = prompt;
        while (std::holds_alternative<Prompt>(result)) {
            result = engine.step(session, user.answer(std::get<Prompt>(result)));
        }
        const Outcome& outcome = std::get<Outcome>(result);

        auto& tally = report.per_color[entry.color];
        ++tally.tried;
        ++report.total.tried;
        if (outcome.proved()) {
            ++tally.proved;
            ++report.total.proved;
        }
        report.rules_added += outcome.rules_added.size();
        report.sessions.push_back({entry.line, entry.color, entry.text, outcome, session.prompts_issued});
    }
    return report;
}

} // namespace hopwise
