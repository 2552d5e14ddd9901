#pragma once

// Logic templates: each color is the conjunction of two Head :- Body
// implications over clause roles, plus the question phrasings the dialog
// uses for it. Templates are configuration (see data/templates.json).

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hopwise/error.hpp"
#include "hopwise/text.hpp"

namespace hopwise {

enum class ClauseRole { State, Action, Goal, NegatedGoal, HiddenAction };
enum class TemplateColor { Blue, Orange, Green };

inline std::string_view to_string(ClauseRole r) {
    switch (r) {
    case ClauseRole::State: return "State";
    case ClauseRole::Action: return "Action";
    case ClauseRole::Goal: return "Goal";
    case ClauseRole::NegatedGoal: return "NegatedGoal";
    case ClauseRole::HiddenAction: return "HiddenAction";
    }
    return "?";
}

inline std::string_view to_string(TemplateColor c) {
    switch (c) {
    case TemplateColor::Blue: return "blue";
    case TemplateColor::Orange: return "orange";
    case TemplateColor::Green: return "green";
    }
    return "?";
}

inline std::optional<ClauseRole> parse_role(std::string_view s) {
    if (s == "State") return ClauseRole::State;
    if (s == "Action") return ClauseRole::Action;
    if (s == "Goal") return ClauseRole::Goal;
    if (s == "NegatedGoal") return ClauseRole::NegatedGoal;
    if (s == "HiddenAction") return ClauseRole::HiddenAction;
    return std::nullopt;
}

/// Accepts "blue"/"orange"/"green" in any case.
inline std::optional<TemplateColor> parse_color(std::string_view s) {
    const auto lowered = text::to_lower(text::trim(s));
    if (lowered == "blue") return TemplateColor::Blue;
    if (lowered == "orange") return TemplateColor::Orange;
    if (lowered == "green") return TemplateColor::Green;
    return std::nullopt;
}

struct ImplicationSpec {
    ClauseRole head = ClauseRole::Goal;
    ClauseRole body = ClauseRole::Action;
    /// Conditions the phrasing only; searches query the bare body clause.
    std::optional<ClauseRole> body_context;
};

/// Dialog phases that look up a question form.
namespace phase {
inline constexpr std::string_view NegationCheck = "negation_check";
inline constexpr std::string_view ConfirmedNegation = "confirmed_negation";
inline constexpr std::string_view RejectedNegation = "rejected_negation";
inline constexpr std::string_view Presentation = "presentation";
inline constexpr std::string_view Fallback = "fallback";
inline constexpr std::string_view ChoiceHint = "choice_hint";
inline constexpr std::string_view ExplanationHint = "explanation_hint";
inline constexpr std::string_view ReformatHint = "reformat_hint";
} // namespace phase

struct TemplateSpec {
    TemplateColor color = TemplateColor::Blue;
    std::array<ImplicationSpec, 2> implications;
    std::map<std::string, std::string, std::less<>> question_forms;

    const std::string& form(std::string_view phase_name) const {
        const auto it = question_forms.find(phase_name);
        if (it == question_forms.end()) {
            throw Error(ErrorCode::MissingQuestionForm,
                        std::string(to_string(color)) + " template has no '" + std::string(phase_name) + "' form");
        }
        return it->second;
    }

    bool has_form(std::string_view phase_name) const { return question_forms.count(phase_name) > 0; }
};

class TemplateSet {
public:
    void add(TemplateSpec spec) { specs_[spec.color] = std::move(spec); }

    const TemplateSpec& get(TemplateColor color) const {
        const auto it = specs_.find(color);
        if (it == specs_.end()) {
            throw Error(ErrorCode::UnsupportedTemplate, std::string(to_string(color)) + " is not configured");
        }
        return it->second;
    }

    bool contains(TemplateColor color) const { return specs_.count(color) > 0; }

private:
    std::map<TemplateColor, TemplateSpec> specs_;
};

namespace detail {

inline ClauseRole role_field(const nlohmann::json& j, const char* key) {
    const auto role = parse_role(j.at(key).get<std::string>());
    if (!role) throw Error(ErrorCode::ParseError, "unknown clause role in template: " + j.at(key).dump());
    return *role;
}

} // namespace detail

inline TemplateSet templates_from_json(std::string_view json_text) {
    TemplateSet set;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        std::map<std::string, std::string, std::less<>> common;
        if (doc.contains("common_forms")) {
            for (const auto& [k, v] : doc.at("common_forms").items()) common[k] = v.get<std::string>();
        }
        for (const auto& item : doc.at("templates")) {
            TemplateSpec spec;
            const auto color = parse_color(item.at("color").get<std::string>());
            if (!color) throw Error(ErrorCode::UnsupportedTemplate, item.at("color").dump());
            spec.color = *color;
            const auto& impls = item.at("implications");
            if (impls.size() != 2) throw Error(ErrorCode::ParseError, "a template needs exactly 2 implications");
            for (std::size_t i = 0; i < 2; ++i) {
                ImplicationSpec impl;
                impl.head = detail::role_field(impls[i], "head");
                impl.body = detail::role_field(impls[i], "body");
                if (impls[i].contains("body_context")) impl.body_context = detail::role_field(impls[i], "body_context");
                if (impl.head == impl.body) throw Error(ErrorCode::ParseError, "implication head equals body");
                spec.implications[i] = impl;
            }
            spec.question_forms = common;
            for (const auto& [k, v] : item.at("question_forms").items()) spec.question_forms[k] = v.get<std::string>();
            set.add(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("templates: ") + e.what());
    }
    return set;
}

inline TemplateSet load_templates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open templates " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return templates_from_json(buffer.str());
}

/// Shipped as data/templates.json as well; the two are kept identical.
/// Slots: <state> verbatim, <action> and <goal> person-normalized,
/// <goal-clause> verbatim goal, <not-goal> the resolved negated goal.
inline constexpr std::string_view kDefaultTemplatesJson = R"json({
  "common_forms": {
    "fallback": "what ensures \"<goal-clause>\"?",
    "choice_hint": "Please provide number and explanation.\nDue to NLP limitations, please format your explanation as if-then:",
    "explanation_hint": "Due to NLP limitations, please format your explanation as if-then:",
    "reformat_hint": "Sorry, I could not parse that. Please format your explanation as: if <condition> then <consequence>"
  },
  "templates": [
    {
      "color": "blue",
      "implications": [
        {"head": "NegatedGoal", "body": "State"},
        {"head": "Goal", "body": "Action", "body_context": "State"}
      ],
      "question_forms": {
        "negation_check": "is \"<not-goal>\" the opposite of \"<goal>\"?(y/n)",
        "confirmed_negation": "what does \"<state>\" cause that leads to \"<not-goal>\"?",
        "rejected_negation": "what does \"<state>\" cause that makes it difficult to achieve \"<goal>\"?"
      }
    },
    {
      "color": "orange",
      "implications": [
        {"head": "Action", "body": "State"},
        {"head": "Goal", "body": "Action"}
      ],
      "question_forms": {
        "presentation": "what does \"<state>\" cause that makes you want to \"<action>\"?"
      }
    },
    {
      "color": "green",
      "implications": [
        {"head": "Goal", "body": "HiddenAction"},
        {"head": "HiddenAction", "body": "Action", "body_context": "State"}
      ],
      "question_forms": {
        "presentation": "what does \"<action>\" let you do that ensures \"<goal-clause>\"?"
      }
    }
  ]
}
)json";

inline TemplateSet default_templates() {
    return templates_from_json(kDefaultTemplatesJson);
}

/// Replaces every "<slot>" occurrence with its value.
inline std::string fill_slots(std::string_view form, const std::map<std::string, std::string>& slots) {
    std::string out;
    std::size_t i = 0;
    while (i < form.size()) {
        if (form[i] == '<') {
            const auto close = form.find('>', i);
            if (close != std::string_view::npos) {
                const std::string name(form.substr(i + 1, close - i - 1));
                const auto it = slots.find(name);
                if (it != slots.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += form[i++];
    }
    return out;
}

} // namespace hopwise
