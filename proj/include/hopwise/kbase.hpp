#pragma once

// The growing background knowledge base of clause-pair rules, persisted as
// an append-only journal:
//   sequence<TAB>provenance<TAB>session-id or "-"<TAB>condition<TAB>consequence

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "hopwise/embeddings.hpp"
#include "hopwise/error.hpp"
#include "hopwise/parser.hpp"
#include "hopwise/text.hpp"

namespace hopwise {

enum class Provenance { Seed, UserContributed, GeneratorConfirmed };

inline std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::Seed: return "Seed";
    case Provenance::UserContributed: return "UserContributed";
    case Provenance::GeneratorConfirmed: return "GeneratorConfirmed";
    }
    return "?";
}

inline std::optional<Provenance> parse_provenance(std::string_view s) {
    if (s == "Seed") return Provenance::Seed;
    if (s == "UserContributed") return Provenance::UserContributed;
    if (s == "GeneratorConfirmed") return Provenance::GeneratorConfirmed;
    return std::nullopt;
}

struct LearnedRule {
    Clause condition;
    Clause consequence;
    Provenance provenance = Provenance::Seed;
    std::optional<std::string> session_id;
    std::uint64_t sequence_number = 0;

    friend bool operator==(const LearnedRule&, const LearnedRule&) = default;
};

inline LearnedRule make_rule(std::string_view condition, std::string_view consequence,
                             Provenance provenance, std::optional<std::string> session_id = std::nullopt) {
    LearnedRule r;
    r.condition = make_clause(condition);
    r.consequence = make_clause(consequence);
    r.provenance = provenance;
    r.session_id = std::move(session_id);
    return r;
}

namespace detail {

inline std::string journal_field(std::string_view s) {
    std::string out(s);
    std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    return out;
}

inline std::string journal_line(const LearnedRule& r) {
    std::string line = std::to_string(r.sequence_number);
    line += '\t';
    line += to_string(r.provenance);
    line += '\t';
    line += r.session_id ? journal_field(*r.session_id) : "-";
    line += '\t';
    line += journal_field(r.condition.text);
    line += '\t';
    line += journal_field(r.consequence.text);
    line += '\n';
    return line;
}

inline std::optional<LearnedRule> parse_journal_line(std::string_view line) {
    const auto fields = text::split(line, '\t');
    if (fields.size() != 5) return std::nullopt;
    std::uint64_t seq = 0;
    const auto& f0 = fields[0];
    const auto [ptr, ec] = std::from_chars(f0.data(), f0.data() + f0.size(), seq);
    if (ec != std::errc() || ptr != f0.data() + f0.size() || f0.empty()) return std::nullopt;
    const auto provenance = parse_provenance(fields[1]);
    if (!provenance) return std::nullopt;
    LearnedRule r = make_rule(fields[3], fields[4], *provenance);
    if (r.condition.tokens.empty() || r.consequence.tokens.empty()) return std::nullopt;
    if (fields[2] != "-") r.session_id = fields[2];
    r.sequence_number = seq;
    return r;
}

} // namespace detail

class KnowledgeBase {
public:
    /// In-memory knowledge base with no journal.
    KnowledgeBase() = default;

    KnowledgeBase(KnowledgeBase&& other) noexcept
        : journal_path_(std::move(other.journal_path_)),
          rules_(std::move(other.rules_)),
          warnings_(std::move(other.warnings_)) {}

    KnowledgeBase& operator=(KnowledgeBase&& other) noexcept {
        journal_path_ = std::move(other.journal_path_);
        rules_ = std::move(other.rules_);
        warnings_ = std::move(other.warnings_);
        return *this;
    }

    const std::optional<std::filesystem::path>& journal_path() const { return journal_path_; }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return rules_.size();
    }

    /// Consistent copy of the current rule list.
    std::vector<LearnedRule> rules() const {
        std::shared_lock lock(mutex_);
        return rules_;
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Appends to the journal (fsync'd) and then to memory. Duplicates are kept.
    LearnedRule add_rule(LearnedRule rule) {
        if (rule.condition.tokens.empty() || rule.consequence.tokens.empty()) {
            throw Error(ErrorCode::InvalidArgument, "rule clauses must be non-empty");
        }
        rule.condition = make_clause(detail::journal_field(rule.condition.text));
        rule.consequence = make_clause(detail::journal_field(rule.consequence.text));

        std::unique_lock lock(mutex_);
        rule.sequence_number = rules_.empty() ? 1 : rules_.back().sequence_number + 1;
        if (journal_path_) append_durably(*journal_path_, detail::journal_line(rule));
        rules_.push_back(rule);
        return rule;
    }

    friend KnowledgeBase load_kb(const std::filesystem::path& path, bool attach_journal);

private:
    static void append_durably(const std::filesystem::path& path, const std::string& line) {
        const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
        if (fd < 0) throw Error(ErrorCode::StorageFailure, path.string() + ": " + std::strerror(errno));
        std::size_t written = 0;
        while (written < line.size()) {
            const auto n = ::write(fd, line.data() + written, line.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                const std::string reason = std::strerror(errno);
                ::close(fd);
                throw Error(ErrorCode::StorageFailure, path.string() + ": " + reason);
            }
            written += static_cast<std::size_t>(n);
        }
        if (::fsync(fd) != 0) {
            const std::string reason = std::strerror(errno);
            ::close(fd);
            throw Error(ErrorCode::StorageFailure, path.string() + ": fsync: " + reason);
        }
        ::close(fd);
    }

    std::optional<std::filesystem::path> journal_path_;
    std::vector<LearnedRule> rules_;
    std::vector<std::string> warnings_;
    mutable std::shared_mutex mutex_;
};

/// Replays the journal at `path`, creating it when absent. A damaged final
/// record is truncated away with a warning; damage elsewhere is a ParseError.
/// With `attach_journal` false the file is only read: later rules stay in
/// memory and a damaged final record is skipped rather than truncated.
inline KnowledgeBase load_kb(const std::filesystem::path& path, bool attach_journal = true) {
    KnowledgeBase kb;
    if (attach_journal) kb.journal_path_ = path;
    if (!std::filesystem::exists(path)) {
        if (!attach_journal) throw Error(ErrorCode::ParseError, "no rules file " + path.string());
        std::ofstream create(path);
        if (!create) throw Error(ErrorCode::StorageFailure, "cannot create journal " + path.string());
        return kb;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::StorageFailure, "cannot open journal " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();
    in.close();

    std::size_t offset = 0;
    std::size_t line_no = 0;
    std::size_t good_end = 0;
    while (offset < content.size()) {
        ++line_no;
        const auto nl = content.find('\n', offset);
        const bool complete = nl != std::string::npos;
        const std::size_t end = complete ? nl : content.size();
        std::string_view line(content.data() + offset, end - offset);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::size_t next = complete ? nl + 1 : content.size();
        const bool last = next >= content.size();

        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') { // blank or comment
            offset = next;
            if (complete) good_end = next;
            continue;
        }
        auto rule = complete ? detail::parse_journal_line(line) : std::nullopt;
        if (rule && !kb.rules_.empty() && rule->sequence_number <= kb.rules_.back().sequence_number) {
            rule.reset();
        }
        if (!rule) {
            if (!last) {
                throw Error(ErrorCode::ParseError,
                            path.string() + ":" + std::to_string(line_no) + ": corrupt journal record");
            }
            kb.warnings_.push_back(path.string() + ":" + std::to_string(line_no) +
                                   ": truncated damaged trailing record");
            std::cerr << "warning: " << kb.warnings_.back() << '\n';
            if (attach_journal) std::filesystem::resize_file(path, good_end);
            break;
        }
        kb.rules_.push_back(std::move(*rule));
        offset = next;
        good_end = next;
    }
    return kb;
}

struct ConsultHit {
    LearnedRule rule;
    double condition_closeness = 0.0;
    double consequence_closeness = 0.0;

    double closeness() const { return std::min(condition_closeness, consequence_closeness); }
};

/// Rules whose condition is close to `body` and consequence close to `head`,
/// best first (ties by journal order).
inline std::vector<ConsultHit> consult(const KnowledgeBase& kb, std::string_view body, std::string_view head,
                                       double tau, ClosenessCache& closeness) {
    std::vector<ConsultHit> hits;
    const std::string body_s(body), head_s(head);
    for (auto& rule : kb.rules()) {
        const double c1 = closeness(rule.condition.text, body_s);
        if (c1 < tau) continue;
        const double c2 = closeness(rule.consequence.text, head_s);
        if (c2 < tau) continue;
        hits.push_back({std::move(rule), c1, c2});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const ConsultHit& a, const ConsultHit& b) {
        if (a.closeness() != b.closeness()) return a.closeness() > b.closeness();
        return a.rule.sequence_number < b.rule.sequence_number;
    });
    return hits;
}

inline std::vector<ConsultHit> consult(const KnowledgeBase& kb, std::string_view body, std::string_view head,
                                       double tau, const EmbeddingTable& embeddings) {
    ClosenessCache cache(embeddings);
    return consult(kb, body, head, tau, cache);
}

} // namespace hopwise
