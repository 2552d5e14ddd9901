#include <atomic>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "hopwise/remote_generator.hpp"
#include "server_thread.hpp"
#include "support.hpp"

using namespace hopwise;
using namespace hopwise::testing;

namespace {

RemoteOptions fast_retries() {
    RemoteOptions o;
    o.backoff = std::chrono::milliseconds(10);
    o.timeout = std::chrono::seconds(2);
    return o;
}

} // namespace

// Random store, then the same queries against the store and the store served over HTTP.
TEST(RemoteGenerator, EquivalentToStaticStore) {
    std::mt19937_64 rng(2024);
    const auto registry = default_registry();
    StaticTupleStore store(registry);
    std::vector<std::string> subjects, labels;
    for (int i = 0; i < 20; ++i) subjects.push_back("subject " + std::to_string(i));
    for (const auto& r : registry.relations()) labels.push_back(r.id);
    std::uniform_int_distribution<std::size_t> pick_s(0, subjects.size() - 1), pick_r(0, labels.size() - 1);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    for (int i = 0; i < 400; ++i) {
        // repeated scores exercise the tie-break
        const double s = i % 5 == 0 ? 0.5 : score(rng);
        store.add({subjects[pick_s(rng)], labels[pick_r(rng)], "object " + std::to_string(rng() % 50), s});
    }

    httplib::Server server;
    register_generator_routes(server, store);
    ServerThread running(server);
    RemoteGenerator remote(running.url(), registry, fast_retries());

    std::uniform_int_distribution<std::size_t> beam(1, 12);
    for (int q = 0; q < 500; ++q) {
        const auto& rel = labels[pick_r(rng)];
        const auto& subj = subjects[pick_s(rng)];
        const auto b = beam(rng);
        const auto local = store.query(rel, subj, b);
        const auto over_http = remote.query(rel, subj, b);
        ASSERT_EQ(local.objects, over_http.objects) << rel << " / " << subj << " / " << b;
    }
}

TEST(RemoteGenerator, UnknownRelationIs400) {
    StaticTupleStore store(default_registry());
    httplib::Server server;
    register_generator_routes(server, store);
    ServerThread running(server);

    RelationRegistry wider = default_registry();
    wider.add({"Foo", "Foo", "foo", Direction::PostEffect, RelationSource::Custom});
    RemoteGenerator remote(running.url(), wider, fast_retries());
    try {
        remote.query("Foo", "s", 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownRelation);
    }
}

TEST(RemoteGenerator, ServerErrorsRetryThenUnavailable) {
    std::atomic<int> calls{0};
    httplib::Server server;
    server.Post("/generate", [&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 503;
    });
    ServerThread running(server);
    RemoteGenerator remote(running.url(), default_registry(), fast_retries());
    try {
        remote.query("Causes", "s", 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
    }
    EXPECT_EQ(calls.load(), 3); // first try + 2 retries
}

TEST(RemoteGenerator, RecoversWithinRetryBudget) {
    std::atomic<int> calls{0};
    httplib::Server server;
    server.Post("/generate", [&](const httplib::Request&, httplib::Response& res) {
        if (++calls < 3) {
            res.status = 500;
            return;
        }
        res.set_content(R"({"objects":[{"text":"b","score":0.5},{"text":"a","score":0.9}]})", "application/json");
    });
    ServerThread running(server);
    RemoteGenerator remote(running.url(), default_registry(), fast_retries());
    const auto r = remote.query("Causes", "s", 1);
    ASSERT_EQ(r.objects.size(), 1u);
    EXPECT_EQ(r.objects[0].text, "b"); // beam returned verbatim, truncated
}

TEST(RemoteGenerator, MalformedBody) {
    httplib::Server server;
    server.Post("/generate", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"objects\": 3}", "application/json");
    });
    ServerThread running(server);
    RemoteGenerator remote(running.url(), default_registry(), fast_retries());
    try {
        remote.query("Causes", "s", 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedResponse);
    }
}

TEST(RemoteGenerator, NothingListening) {
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    RemoteGenerator remote("http://127.0.0.1:" + std::to_string(port), default_registry(), fast_retries());
    try {
        remote.query("Causes", "s", 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
    }
}

TEST(RemoteGenerator, ConcurrentRequestsGetTheirOwnBeams) {
    StaticTupleStore store(default_registry());
    for (int i = 0; i < 8; ++i) store.add({"s" + std::to_string(i), "Causes", "o" + std::to_string(i), 1.0});
    httplib::Server server;
    register_generator_routes(server, store);
    ServerThread running(server);
    RemoteGenerator remote(running.url(), default_registry(), fast_retries());

    std::atomic<int> wrong{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int k = 0; k < 10; ++k) {
                const auto r = remote.query("Causes", "s" + std::to_string(t), 5);
                if (r.objects.size() != 1 || r.objects[0].text != "o" + std::to_string(t)) ++wrong;
            }
        });
    }
    for (auto& th : threads) th.join();
    EXPECT_EQ(wrong.load(), 0);
}
