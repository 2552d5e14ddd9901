#pragma once

// In-memory session store and its HTTP routes.
//
//   POST /sessions            {command, template}              -> 201 {id, prompt}
//   POST /sessions/{id}/reply {choice|yesno|text, explanation?} -> {prompt} | {outcome}
//   GET  /sessions/{id}                                         -> session view
//   GET  /health

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "hopwise/dialog.hpp"
#include "hopwise/json_io.hpp"

namespace hopwise {

class SessionService {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionService(DialogEngine& engine, std::chrono::minutes idle_expiry = std::chrono::minutes(30))
        : engine_(engine), idle_expiry_(idle_expiry) {}

    json create(const std::string& command_text, TemplateColor color) {
        Command command = parse_command(command_text);
        engine_.templates().get(color);
        auto entry = std::make_shared<Entry>();
        std::string id;
        {
            std::lock_guard lock(mutex_);
            id = "s" + std::to_string(++counter_);
        }
        std::lock_guard entry_lock(entry->mutex);
        auto [session, prompt] = engine_.start_session(id, std::move(command), color);
        entry->session = std::move(session);
        entry->touched = Clock::now();
        {
            std::lock_guard lock(mutex_);
            sweep(entry->touched);
            sessions_[id] = entry;
        }
        return {{"id", id}, {"prompt", to_json(prompt)}};
    }

    json reply(const std::string& id, const UserReply& reply) {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        entry->touched = Clock::now();
        const StepResult result = engine_.step(entry->session, reply);
        if (const auto* prompt = std::get_if<Prompt>(&result)) return {{"prompt", to_json(*prompt)}};
        return {{"outcome", to_json(std::get<Outcome>(result))}};
    }

    json view(const std::string& id) {
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        entry->touched = Clock::now();
        return to_json(entry->session);
    }

    bool contains(const std::string& id) {
        std::lock_guard lock(mutex_);
        return sessions_.count(id) > 0;
    }

    /// Drops sessions idle for longer than the expiry as of `now`.
    void sweep(Clock::time_point now) {
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            std::unique_lock entry_lock(it->second->mutex, std::try_to_lock);
            if (entry_lock.owns_lock() && now - it->second->touched > idle_expiry_) {
                entry_lock.unlock();
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }

    void expire_idle(Clock::time_point now) {
        std::lock_guard lock(mutex_);
        sweep(now);
    }

    struct NotFound : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

private:
    struct Entry {
        std::mutex mutex;
        DialogSession session;
        Clock::time_point touched;
    };

    std::shared_ptr<Entry> find(const std::string& id) {
        std::lock_guard lock(mutex_);
        sweep(Clock::now());
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) throw NotFound("no session " + id);
        return it->second;
    }

    DialogEngine& engine_;
    std::chrono::minutes idle_expiry_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::uint64_t counter_ = 0;
};

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
    send_json(res, status, {{"error", code}, {"message", message}});
}

inline int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::ReplyKindMismatch: return 422;
    case ErrorCode::SessionAlreadyClosed: return 409;
    case ErrorCode::BackendUnavailable: return 503;
    case ErrorCode::StorageFailure: return 500;
    default: return 400;
    }
}

inline void guarded(httplib::Response& res, const std::function<void()>& body) {
    try {
        body();
    } catch (const SessionService::NotFound& e) {
        send_error(res, 404, "NotFound", e.what());
    } catch (const Error& e) {
        send_error(res, status_for(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        send_error(res, 400, "ParseError", e.what());
    }
}

} // namespace detail

inline void register_session_routes(httplib::Server& server, SessionService& service) {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        detail::send_json(res, 200, {{"status", "ok"}});
    });

    server.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
        detail::guarded(res, [&] {
            const auto body = json::parse(req.body);
            const auto color = parse_color(body.at("template").get<std::string>());
            if (!color) {
                throw Error(ErrorCode::UnsupportedTemplate, "unknown template " + body.at("template").dump());
            }
            detail::send_json(res, 201, service.create(body.at("command").get<std::string>(), *color));
        });
    });

    server.Post(R"(/sessions/([^/]+)/reply)", [&service](const httplib::Request& req, httplib::Response& res) {
        detail::guarded(res, [&] {
            const std::string id = req.matches[1];
            if (!service.contains(id)) throw SessionService::NotFound("no session " + id);
            const json body = json::parse(req.body);
            detail::send_json(res, 200, service.reply(id, reply_from_json(body)));
        });
    });

    server.Get(R"(/sessions/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
        detail::guarded(res, [&] { detail::send_json(res, 200, service.view(req.matches[1])); });
    });
}

} // namespace hopwise
