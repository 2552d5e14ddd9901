#pragma once

// Relation registry: which side of a knowledge tuple is the logical head.
// PostEffect: subject is the body, object the head. PreCondition: the
// reverse. Negation relations yield the opposite of their subject.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hopwise/error.hpp"

namespace hopwise {

enum class Direction { PreCondition, PostEffect, Negation };
enum class RelationSource { ATOMIC, ConceptNet, Custom };

inline std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::PreCondition: return "PreCondition";
    case Direction::PostEffect: return "PostEffect";
    case Direction::Negation: return "Negation";
    }
    return "?";
}

inline std::string_view to_string(RelationSource s) {
    switch (s) {
    case RelationSource::ATOMIC: return "ATOMIC";
    case RelationSource::ConceptNet: return "ConceptNet";
    case RelationSource::Custom: return "Custom";
    }
    return "?";
}

struct Relation {
    /// Unique registry key; what hops record.
    std::string id;
    /// Relation name understood by the tuple store / generator. Several ids
    /// may share one label to query the same relation from both sides.
    std::string label;
    std::string surface;
    Direction direction = Direction::PostEffect;
    RelationSource source = RelationSource::Custom;
};

class RelationRegistry {
public:
    RelationRegistry() = default;

    explicit RelationRegistry(std::vector<Relation> relations) {
        for (auto& r : relations) add(std::move(r));
    }

    void add(Relation r) {
        if (r.id.empty()) throw Error(ErrorCode::InvalidArgument, "relation id must not be empty");
        if (r.label.empty()) r.label = r.id;
        if (by_id_.count(r.id)) throw Error(ErrorCode::InvalidArgument, "duplicate relation id " + r.id);
        by_id_.emplace(r.id, relations_.size());
        relations_.push_back(std::move(r));
    }

    const std::vector<Relation>& relations() const { return relations_; }
    std::size_t size() const { return relations_.size(); }

    const Relation* find(std::string_view id) const {
        const auto it = by_id_.find(std::string(id));
        return it == by_id_.end() ? nullptr : &relations_[it->second];
    }

    const Relation& at(std::string_view id) const {
        if (const auto* r = find(id)) return *r;
        throw Error(ErrorCode::UnknownRelation, std::string(id));
    }

    bool has_label(std::string_view label) const {
        return std::any_of(relations_.begin(), relations_.end(),
                           [&](const Relation& r) { return r.label == label; });
    }

    /// First relation registered under `label`, for servers that receive labels.
    const Relation* find_label(std::string_view label) const {
        for (const auto& r : relations_) {
            if (r.label == label) return &r;
        }
        return nullptr;
    }

    std::vector<const Relation*> with_direction(Direction d) const {
        std::vector<const Relation*> out;
        for (const auto& r : relations_) {
            if (r.direction == d) out.push_back(&r);
        }
        return out;
    }

private:
    std::vector<Relation> relations_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

namespace detail {

inline Direction parse_direction(const std::string& s) {
    if (s == "PreCondition") return Direction::PreCondition;
    if (s == "PostEffect") return Direction::PostEffect;
    if (s == "Negation") return Direction::Negation;
    throw Error(ErrorCode::ParseError, "unknown relation direction '" + s + "'");
}

inline RelationSource parse_source(const std::string& s) {
    if (s == "ATOMIC") return RelationSource::ATOMIC;
    if (s == "ConceptNet") return RelationSource::ConceptNet;
    if (s == "Custom") return RelationSource::Custom;
    throw Error(ErrorCode::ParseError, "unknown relation source '" + s + "'");
}

} // namespace detail

inline RelationRegistry registry_from_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("relation registry: ") + e.what());
    }
    RelationRegistry registry;
    try {
        for (const auto& item : doc.at("relations")) {
            Relation r;
            r.id = item.at("id").get<std::string>();
            r.label = item.value("label", r.id);
            r.surface = item.at("surface").get<std::string>();
            r.direction = detail::parse_direction(item.at("direction").get<std::string>());
            r.source = detail::parse_source(item.value("source", std::string("Custom")));
            registry.add(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("relation registry: ") + e.what());
    }
    if (registry.size() == 0) throw Error(ErrorCode::ParseError, "relation registry is empty");
    return registry;
}

inline RelationRegistry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open relation registry " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return registry_from_json(buffer.str());
}

/// Shipped as data/relations.json as well; the two are kept identical.
inline constexpr std::string_view kDefaultRegistryJson = R"({
  "relations": [
    {"id": "Causes",          "surface": "causes",             "direction": "PostEffect",   "source": "ConceptNet"},
    {"id": "CausesDesire",    "surface": "makes you want",     "direction": "PostEffect",   "source": "ConceptNet"},
    {"id": "HasSubevent",     "surface": "has subevent",       "direction": "PostEffect",   "source": "ConceptNet"},
    {"id": "UsedFor",         "surface": "is used for",        "direction": "PostEffect",   "source": "ConceptNet"},
    {"id": "CreatedBy",       "surface": "is created by",      "direction": "PostEffect",   "source": "ConceptNet"},
    {"id": "ReceivesAction",  "surface": "receives action",    "direction": "PostEffect",   "source": "ConceptNet"},
    {"id": "xIntent",         "surface": "Because I wanted",   "direction": "PostEffect",   "source": "ATOMIC"},
    {"id": "xEffect",         "surface": "As a result, I",     "direction": "PostEffect",   "source": "ATOMIC"},
    {"id": "HasPrerequisite", "surface": "requires action",    "direction": "PreCondition", "source": "ConceptNet"},
    {"id": "MotivatedByGoal", "surface": "is motivated by",    "direction": "PreCondition", "source": "ConceptNet"},
    {"id": "Desires",         "surface": "desires",            "direction": "PreCondition", "source": "ConceptNet"},
    {"id": "CapableOf",       "surface": "is capable of",      "direction": "PreCondition", "source": "ConceptNet"},
    {"id": "xNeed",           "surface": "Before I needed",    "direction": "PreCondition", "source": "ATOMIC"},
    {"id": "NotCapableOf",    "surface": "is not capable of",  "direction": "Negation",     "source": "ConceptNet"},
    {"id": "NotIsA",          "surface": "is not a",           "direction": "Negation",     "source": "ConceptNet"}
  ]
}
)";

inline RelationRegistry default_registry() {
    return registry_from_json(kDefaultRegistryJson);
}

} // namespace hopwise
