#pragma once

// Query interface over generative commonsense knowledge, plus the static
// tuple store used to emulate a generator at desk scale.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopwise/error.hpp"
#include "hopwise/relations.hpp"
#include "hopwise/text.hpp"

namespace hopwise {

/// Beam width meaning "everything the backend has".
inline constexpr std::size_t kUnboundedBeam = std::numeric_limits<std::size_t>::max();

struct KnowledgeTuple {
    std::string subject;
    std::string relation; // relation label
    std::string object;
    double score = 0.0;
};

struct ScoredObject {
    std::string text;
    double score = 0.0;

    friend bool operator==(const ScoredObject&, const ScoredObject&) = default;
};

struct BeamResult {
    std::vector<ScoredObject> objects;
    std::size_t beam_size = 0;

    friend bool operator==(const BeamResult& a, const BeamResult& b) { return a.objects == b.objects; }
};

/// Score descending, object text ascending.
inline void sort_beam(std::vector<ScoredObject>& objects) {
    std::stable_sort(objects.begin(), objects.end(), [](const ScoredObject& a, const ScoredObject& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.text < b.text;
    });
}

class KnowledgeSource {
public:
    virtual ~KnowledgeSource() = default;

    virtual const RelationRegistry& registry() const = 0;

    /// COMET(r, s): ranked objects for relation id `relation` and `subject`.
    BeamResult query(std::string_view relation, std::string_view subject, std::size_t beam) const {
        const Relation& r = registry().at(relation);
        if (beam == 0) throw Error(ErrorCode::InvalidArgument, "beam size must be >= 1");
        if (text::trim(subject).empty()) throw Error(ErrorCode::InvalidArgument, "empty subject");
        BeamResult result = do_query(r, subject, beam);
        result.beam_size = beam;
        if (result.objects.size() > beam) result.objects.resize(beam);
        return result;
    }

private:
    virtual BeamResult do_query(const Relation& relation, std::string_view subject,
                                std::size_t beam) const = 0;
};

class StaticTupleStore final : public KnowledgeSource {
public:
    explicit StaticTupleStore(RelationRegistry registry) : registry_(std::move(registry)) {}

    const RelationRegistry& registry() const override { return registry_; }

    void add(KnowledgeTuple tuple) {
        if (!registry_.has_label(tuple.relation)) {
            throw Error(ErrorCode::UnknownRelation, tuple.relation);
        }
        if (text::trim(tuple.subject).empty() || text::trim(tuple.object).empty()) {
            throw Error(ErrorCode::InvalidArgument, "tuple subject and object must be non-empty");
        }
        if (!std::isfinite(tuple.score)) throw Error(ErrorCode::InvalidArgument, "tuple score must be finite");
        auto& bucket = index_[{tuple.relation, text::normalize(tuple.subject)}];
        bucket.push_back({tuple.object, tuple.score});
        sort_beam(bucket);
        tuples_.push_back(std::move(tuple));
    }

    const std::vector<KnowledgeTuple>& tuples() const { return tuples_; }

private:
    BeamResult do_query(const Relation& relation, std::string_view subject,
                        std::size_t beam) const override {
        BeamResult result;
        const auto it = index_.find({relation.label, text::normalize(subject)});
        if (it == index_.end()) return result;
        const std::size_t n = std::min(beam, it->second.size());
        result.objects.assign(it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(n));
        return result;
    }

    RelationRegistry registry_;
    std::vector<KnowledgeTuple> tuples_;
    std::map<std::pair<std::string, std::string>, std::vector<ScoredObject>> index_;
};

/// Reads "subject<TAB>relation<TAB>object<TAB>score" records; "#" starts a comment line.
inline std::unique_ptr<StaticTupleStore> load_static_kb(const std::filesystem::path& path,
                                                        RelationRegistry registry) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open tuple store " + path.string());
    auto store = std::make_unique<StaticTupleStore>(std::move(registry));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        const auto fields = text::split(line, '\t');
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (fields.size() != 4) {
            throw Error(ErrorCode::ParseError, where + ": expected 4 tab-separated fields");
        }
        double score = 0.0;
        const std::string_view s = text::trim(fields[3]);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(score)) {
            throw Error(ErrorCode::ParseError, where + ": bad score '" + fields[3] + "'");
        }
        const std::string relation(text::trim(fields[1]));
        if (!store->registry().has_label(relation)) {
            throw Error(ErrorCode::UnknownRelation, where + ": relation '" + relation + "'");
        }
        const std::string subject(text::trim(fields[0]));
        const std::string object(text::trim(fields[2]));
        if (subject.empty() || object.empty()) {
            throw Error(ErrorCode::ParseError, where + ": empty subject or object");
        }
        store->add({subject, relation, object, score});
    }
    return store;
}

/// Wraps a source and counts issued queries.
class CountingSource final : public KnowledgeSource {
public:
    explicit CountingSource(const KnowledgeSource& inner) : inner_(&inner) {}

    const RelationRegistry& registry() const override { return inner_->registry(); }
    std::size_t count() const { return count_.load(); }
    void reset() { count_ = 0; }

private:
    BeamResult do_query(const Relation& relation, std::string_view subject,
                        std::size_t beam) const override {
        ++count_;
        return inner_->query(relation.id, subject, beam);
    }

    const KnowledgeSource* inner_;
    mutable std::atomic<std::size_t> count_{0};
};

} // namespace hopwise
