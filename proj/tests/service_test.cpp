#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "hopwise/service.hpp"
#include "hopwise/terminal.hpp"
#include "server_thread.hpp"
#include "support.hpp"

using namespace hopwise;
using namespace hopwise::testing;

namespace {

const char* kSnow = "If it snows tonight then wake me up early because I want to get to work on time";
const char* kMeeting = "If I have an early morning meeting then wake me up early because I want to be on time.";

struct Service {
    std::unique_ptr<StaticTupleStore> store = desk_store();
    KnowledgeBase kb;
    DialogEngine engine{*store, desk_embeddings(), kb, default_templates(), SearchConfig{}};
    SessionService sessions{engine};
    httplib::Server server;
    std::unique_ptr<ServerThread> running;
    std::unique_ptr<httplib::Client> client;

    Service() {
        register_session_routes(server, sessions);
        running = std::make_unique<ServerThread>(server);
        client = std::make_unique<httplib::Client>(running->url());
    }

    httplib::Result post(const std::string& path, const json& body) {
        return client->Post(path, body.dump(), "application/json");
    }

    std::string create(const char* command, const char* color) {
        const auto res = post("/sessions", {{"command", command}, {"template", color}});
        EXPECT_EQ(res->status, 201);
        return json::parse(res->body).at("id");
    }
};

json body_of(const httplib::Result& res) { return json::parse(res->body); }

} // namespace

TEST(Http, Health) {
    Service s;
    const auto res = s.client->Get("/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
}

TEST(Http, CreateMeetingSession) {
    Service s;
    const auto res = s.post("/sessions", {{"command", kMeeting}, {"template", "orange"}});
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    const auto body = body_of(res);
    EXPECT_FALSE(body.at("id").get<std::string>().empty());
    EXPECT_EQ(body["prompt"]["text"], "what does \"I have an early morning meeting\" cause that makes you want to \"wake up early\"?");
    EXPECT_EQ(body["prompt"]["kind"], "MultipleChoice");
    EXPECT_EQ(body["prompt"]["options"].size(), 6u);
}

TEST(Http, ReplyErrors) {
    Service s;
    const auto id = s.create(kMeeting, "orange");
    const auto out_of_range = s.post("/sessions/" + id + "/reply", {{"choice", 7}});
    EXPECT_EQ(out_of_range->status, 422);
    EXPECT_EQ(body_of(out_of_range)["error"], "ReplyKindMismatch");
    EXPECT_EQ(s.post("/sessions/" + id + "/reply", {{"yesno", true}})->status, 422);
    EXPECT_EQ(s.post("/sessions/" + id + "/reply", {{"choice", 1}, {"text", "x"}})->status, 422);
    EXPECT_EQ(s.post("/sessions/" + id + "/reply", json::object())->status, 422);
    EXPECT_EQ(s.client->Post("/sessions/" + id + "/reply", "{", "application/json")->status, 400);
    EXPECT_EQ(s.post("/sessions/nope/reply", {{"choice", 1}})->status, 404);
    EXPECT_EQ(s.client->Get("/sessions/nope")->status, 404);
}

TEST(Http, CreateErrors) {
    Service s;
    EXPECT_EQ(s.post("/sessions", {{"command", kMeeting}, {"template", "red"}})->status, 400);
    const auto unparsable = s.post("/sessions", {{"command", "wake me up"}, {"template", "blue"}});
    EXPECT_EQ(unparsable->status, 400);
    EXPECT_EQ(body_of(unparsable)["error"], "MissingStateClause");
    EXPECT_EQ(s.post("/sessions", {{"template", "blue"}})->status, 400);
}

TEST(Http, ProvedSessionView) {
    Service s;
    const auto id = s.create(kMeeting, "orange");
    const auto reply = s.post("/sessions/" + id + "/reply", {{"choice", 1}});
    ASSERT_EQ(reply->status, 200);
    EXPECT_EQ(body_of(reply)["outcome"]["kind"], "Proved");

    const auto view = body_of(s.client->Get("/sessions/" + id));
    EXPECT_EQ(view["phase"], "Closed");
    EXPECT_EQ(view["outcome"]["kind"], "Proved");
    const auto& proof = view["outcome"]["proof"];
    EXPECT_EQ(proof["first"]["hops"][0]["subject"], "I have an early morning meeting");
    EXPECT_EQ(proof["first"]["hops"][0]["direction"], "forward");
    EXPECT_EQ(proof["second"]["hops"].back()["direction"], "backward");
    EXPECT_EQ(view["transcript"].size(), 1u);
    EXPECT_FALSE(view.contains("prompt"));

    const auto again = s.post("/sessions/" + id + "/reply", {{"choice", 1}});
    EXPECT_EQ(again->status, 409);
    EXPECT_EQ(body_of(again)["error"], "SessionAlreadyClosed");
}

TEST(Http, ConcurrentSessions) {
    Service s;
    std::vector<std::thread> threads;
    std::atomic<int> proved{0};
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([&s, &proved] {
            httplib::Client c(s.running->url());
            const auto created = c.Post("/sessions", json{{"command", kSnow}, {"template", "blue"}}.dump(), "application/json");
            const std::string id = json::parse(created->body)["id"];
            c.Post("/sessions/" + id + "/reply", R"({"yesno": true})", "application/json");
            const auto done = c.Post("/sessions/" + id + "/reply", R"({"choice": 1})", "application/json");
            if (json::parse(done->body)["outcome"]["kind"] == "Proved") ++proved;
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(proved.load(), 8);
}

TEST(Service, IdleExpiry) {
    const auto store = desk_store();
    KnowledgeBase kb;
    DialogEngine engine(*store, desk_embeddings(), kb, default_templates(), SearchConfig{});
    SessionService sessions(engine);
    const std::string id = sessions.create(kMeeting, TemplateColor::Orange)["id"];
    sessions.expire_idle(SessionService::Clock::now() + std::chrono::minutes(29));
    EXPECT_TRUE(sessions.contains(id));
    sessions.expire_idle(SessionService::Clock::now() + std::chrono::minutes(31));
    EXPECT_FALSE(sessions.contains(id));
}

// The same replies typed at the terminal and posted over HTTP give the same session.
TEST(Parity, TerminalAndHttp) {
    struct Case {
        const char* command;
        const char* color;
        std::vector<std::string> typed;
        std::vector<json> posted;
    };
    const std::vector<Case> cases = {
        {kSnow, "blue", {"y", "1"}, {{{"yesno", true}}, {{"choice", 1}}}},
        {kSnow, "blue", {"n", "if it snows tonight then I am late"},
         {{{"yesno", false}}, {{"text", "if it snows tonight then I am late"}}}},
        {kMeeting, "orange", {"6", "nothing", "if I wake up early then I am on time"},
         {{{"choice", 6}}, {{"text", "nothing"}}, {{"text", "if I wake up early then I am on time"}}}},
        {kMeeting, "orange", {"2 if I wake up early then I am on time"},
         {{{"choice", 2}, {"explanation", "if I wake up early then I am on time"}}}},
    };
    for (const auto& c : cases) {
        Service s;
        const auto id = s.create(c.command, c.color);
        json last;
        for (const auto& r : c.posted) last = body_of(s.post("/sessions/" + id + "/reply", r));
        const auto over_http = body_of(s.client->Get("/sessions/" + id));

        const auto store = desk_store();
        KnowledgeBase kb;
        DialogEngine engine(*store, desk_embeddings(), kb, default_templates(), SearchConfig{});
        auto [session, prompt] = engine.start_session(id, parse_command(c.command), *parse_color(c.color));
        std::string typed;
        for (const auto& line : c.typed) typed += line + "\n";
        std::istringstream in(typed);
        std::ostringstream out;
        const auto outcome = run_terminal_dialog(engine, session, prompt, in, out);
        ASSERT_TRUE(outcome) << c.command;

        EXPECT_EQ(to_json(session).dump(), over_http.dump()) << c.command;
        EXPECT_EQ(to_json(*outcome).dump(), last["outcome"].dump());
    }
}

TEST(Terminal, ReplyParsing) {
    Prompt yn;
    yn.kind = PromptKind::YesNo;
    EXPECT_TRUE(parse_terminal_reply(yn, " Yes ")->yes);
    EXPECT_FALSE(parse_terminal_reply(yn, "n")->yes);
    EXPECT_FALSE(parse_terminal_reply(yn, "maybe"));
    Prompt mc;
    mc.kind = PromptKind::MultipleChoice;
    mc.options = {"a", std::string(kNoneOfTheAbove)};
    EXPECT_EQ(parse_terminal_reply(mc, "2")->choice, 2u);
    EXPECT_FALSE(parse_terminal_reply(mc, "3"));
    EXPECT_FALSE(parse_terminal_reply(mc, "0"));
    EXPECT_EQ(parse_terminal_reply(mc, "1, if a then b")->explanation, std::optional<std::string>("if a then b"));
    Prompt free;
    free.kind = PromptKind::FreeText;
    EXPECT_FALSE(parse_terminal_reply(free, "  "));
    EXPECT_EQ(parse_terminal_reply(free, "if a then b")->text, "if a then b");
}
