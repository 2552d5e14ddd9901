#pragma once

// HTTP client and server for the generation wire protocol:
//   POST /generate {"subject", "relation", "beam_size"}
//   -> 200 {"objects": [{"text", "score"}, ...]} sorted by score descending
//   -> 400 unknown relation; 5xx backend failure.

#include <chrono>
#include <string>
#include <thread>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "hopwise/knowledge_source.hpp"

namespace hopwise {

struct RemoteOptions {
    int max_retries = 2;
    std::chrono::milliseconds backoff{200};
    std::chrono::seconds timeout{10};
};

class RemoteGenerator final : public KnowledgeSource {
public:
    RemoteGenerator(std::string base_url, RelationRegistry registry, RemoteOptions options = {})
        : base_url_(std::move(base_url)), registry_(std::move(registry)), options_(options) {}

    const RelationRegistry& registry() const override { return registry_; }
    const std::string& base_url() const { return base_url_; }

private:
    BeamResult do_query(const Relation& relation, std::string_view subject,
                        std::size_t beam) const override {
        const nlohmann::json request = {
            {"subject", std::string(subject)},
            {"relation", relation.label},
            {"beam_size", beam},
        };
        const std::string body = request.dump();

        std::string last_failure;
        for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
            if (attempt > 0) std::this_thread::sleep_for(options_.backoff);
            // One client per request: each response belongs to the connection that asked.
            httplib::Client client(base_url_);
            client.set_connection_timeout(options_.timeout);
            client.set_read_timeout(options_.timeout);
            const auto res = client.Post("/generate", body, "application/json");
            if (!res) {
                last_failure = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status >= 500) {
                last_failure = "server status " + std::to_string(res->status);
                continue;
            }
            if (res->status == 400) throw Error(ErrorCode::UnknownRelation, relation.label);
            if (res->status != 200) {
                throw Error(ErrorCode::MalformedResponse, "unexpected status " + std::to_string(res->status));
            }
            return parse_response(res->body);
        }
        throw Error(ErrorCode::BackendUnavailable, base_url_ + ": " + last_failure);
    }

    static BeamResult parse_response(const std::string& body) {
        BeamResult result;
        try {
            const auto doc = nlohmann::json::parse(body);
            for (const auto& item : doc.at("objects")) {
                result.objects.push_back({item.at("text").get<std::string>(), item.at("score").get<double>()});
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedResponse, e.what());
        }
        return result;
    }

    std::string base_url_;
    RelationRegistry registry_;
    RemoteOptions options_;
};

/// Serves `source` over the generation protocol. The source must outlive the server.
inline void register_generator_routes(httplib::Server& server, const KnowledgeSource& source) {
    server.Post("/generate", [&source](const httplib::Request& req, httplib::Response& res) {
        nlohmann::json request;
        std::string subject;
        std::string label;
        std::size_t beam = 0;
        try {
            request = nlohmann::json::parse(req.body);
            subject = request.at("subject").get<std::string>();
            label = request.at("relation").get<std::string>();
            beam = request.at("beam_size").get<std::size_t>();
        } catch (const nlohmann::json::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
            return;
        }
        const Relation* relation = source.registry().find_label(label);
        if (relation == nullptr) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", "UnknownRelation"}, {"relation", label}}.dump(),
                            "application/json");
            return;
        }
        try {
            const BeamResult beam_result = source.query(relation->id, subject, beam);
            nlohmann::json objects = nlohmann::json::array();
            for (const auto& o : beam_result.objects) objects.push_back({{"text", o.text}, {"score", o.score}});
            res.set_content(nlohmann::json{{"objects", objects}}.dump(), "application/json");
        } catch (const Error& e) {
            res.status = e.code() == ErrorCode::BackendUnavailable ? 503 : 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"status\":\"ok\"}", "application/json");
    });
}

} // namespace hopwise
