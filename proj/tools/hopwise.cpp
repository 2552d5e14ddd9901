// hopwise command-line entry points: prove, dialog, eval, serve, emulate.
//
// Exit codes: 0 success, 2 parse/config error, 3 backend unavailable.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <httplib.h>

#include "hopwise/eval.hpp"
#include "hopwise/json_io.hpp"
#include "hopwise/remote_generator.hpp"
#include "hopwise/service.hpp"
#include "hopwise/terminal.hpp"

using namespace hopwise;

namespace {

struct EngineFlags {
    std::string kb;
    std::string embeddings;
    std::string relations;
    std::string templates;
    std::string rules;
    std::string strategy = "bi";
    int hops = 3;
    std::size_t beam = 5;
    std::size_t kb_beam = 10;
    double tau = 0.8;
};

void add_engine_flags(CLI::App* app, EngineFlags& f) {
    app->add_option("--kb", f.kb, "static tuple file or http(s) URL of a generation server")->required();
    app->add_option("--embeddings", f.embeddings, "word vector file")->required();
    app->add_option("--relations", f.relations, "relation registry JSON (default: built-in)");
    app->add_option("--templates", f.templates, "logic template JSON (default: built-in)");
    app->add_option("--rules", f.rules, "knowledge-base journal");
    app->add_option("--strategy", f.strategy)->check(CLI::IsMember({"uni", "bi"}));
    app->add_option("--hops", f.hops, "hop budget N");
    app->add_option("--beam", f.beam, "search beam K");
    app->add_option("--kb-beam", f.kb_beam, "generation beam b");
    app->add_option("--tau", f.tau, "closeness threshold");
}

struct Engine {
    RelationRegistry registry;
    std::unique_ptr<KnowledgeSource> source;
    EmbeddingTable embeddings;
    TemplateSet templates;
    SearchConfig config;
};

Engine build_engine(const EngineFlags& f) {
    Engine e;
    e.registry = f.relations.empty() ? default_registry() : load_registry(f.relations);
    if (f.kb.rfind("http://", 0) == 0 || f.kb.rfind("https://", 0) == 0) {
        e.source = std::make_unique<RemoteGenerator>(f.kb, e.registry);
    } else {
        e.source = load_static_kb(f.kb, e.registry);
    }
    e.embeddings = load_embeddings(f.embeddings);
    e.templates = f.templates.empty() ? default_templates() : load_templates(f.templates);
    e.config.strategy = f.strategy == "uni" ? SearchStrategy::Unidirectional : SearchStrategy::Bidirectional;
    e.config.max_hops = f.hops;
    e.config.search_beam = f.beam;
    e.config.kb_beam = f.kb_beam;
    e.config.tau = f.tau;
    e.config.validate();
    return e;
}

TemplateColor color_arg(const std::string& s) {
    const auto c = parse_color(s);
    if (!c) throw Error(ErrorCode::UnsupportedTemplate, "unknown template " + s);
    return *c;
}

void print_chain(const char* label, const ProofChain& c) {
    std::printf("  %s (%.3f): %s\n", label, c.score, render(c).c_str());
}

int run_prove(const EngineFlags& f, const std::string& command_text, const std::string& color_name,
              const ResolutionContext& bindings, bool as_json) {
    const auto engine = build_engine(f);
    const auto command = parse_command(command_text);
    const auto& spec = engine.templates.get(color_arg(color_name));
    std::optional<KnowledgeBase> kb;
    if (!f.rules.empty()) kb = load_kb(f.rules, false);
    const ProverContext ctx{*engine.source, engine.embeddings, kb ? &*kb : nullptr, engine.config};
    const auto result = prove_command(ctx, spec, command, bindings);

    if (as_json) {
        json proofs = json::array();
        for (const auto& p : result.proofs) proofs.push_back(to_json(p));
        json out{{"proofs", proofs}, {"half_proof_only", result.half_proof_only}};
        if (result.bindings.negated_goal) out["negated_goal"] = *result.bindings.negated_goal;
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    if (result.bindings.negated_goal) std::cout << "negated goal: " << *result.bindings.negated_goal << '\n';
    if (result.proofs.empty()) {
        std::cout << (result.half_proof_only ? "half proof only\n" : "no proof\n");
        for (const auto& c : result.first_chains) print_chain("first", c);
        for (const auto& c : result.second_chains) print_chain("second", c);
        return 0;
    }
    for (std::size_t i = 0; i < result.proofs.size(); ++i) {
        const auto& p = result.proofs[i];
        std::printf("%zu. %.3f\n", i + 1, p.combined_score);
        print_chain("first", p.first);
        print_chain("second", p.second);
    }
    return 0;
}

KnowledgeBase open_rules(const std::string& path) { return path.empty() ? KnowledgeBase{} : load_kb(path); }

int run_dialog(const EngineFlags& f, const std::string& command_text, const std::string& color_name,
               const std::string& transcript_path) {
    const auto engine = build_engine(f);
    auto kb = open_rules(f.rules);
    DialogEngine dialog(*engine.source, engine.embeddings, kb, engine.templates, engine.config);
    auto [session, prompt] = dialog.start_session("cli", parse_command(command_text), color_arg(color_name));
    const auto outcome = run_terminal_dialog(dialog, session, prompt, std::cin, std::cout);
    if (!transcript_path.empty()) {
        std::ofstream out(transcript_path);
        out << export_transcript(session);
    }
    if (!outcome) {
        std::cout << "session abandoned\n";
        return 0;
    }
    std::cout << to_json(*outcome).dump(2) << '\n';
    return 0;
}

int run_eval_command(const EngineFlags& f, const std::string& dataset, const std::string& scripts, bool per_session) {
    const auto entries = load_dataset(dataset);
    const auto replies = load_scripts(scripts);
    const auto engine = build_engine(f);
    KnowledgeBase kb = f.rules.empty() ? KnowledgeBase{} : load_kb(f.rules, false);
    const auto report = run_eval(entries, replies, *engine.source, engine.embeddings, kb, engine.templates, engine.config);
    std::cout << report.format();
    if (per_session) {
        for (const auto& r : report.sessions) {
            std::cout << r.line << '\t' << to_string(r.color) << '\t' << to_string(r.outcome.kind);
            if (r.outcome.reason) std::cout << '\t' << to_string(*r.outcome.reason);
            std::cout << '\t' << r.command << '\n';
        }
    }
    return 0;
}

httplib::Server* running_server = nullptr;

void stop_server(int) {
    if (running_server != nullptr) running_server->stop();
}

int serve_until_stopped(httplib::Server& server, const std::string& host, int port) {
    running_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    if (!server.bind_to_port(host, port)) {
        std::cerr << "error: cannot bind " << host << ":" << port << '\n';
        return 2;
    }
    std::cerr << "listening on " << host << ":" << port << '\n';
    server.listen_after_bind();
    running_server = nullptr;
    return 0;
}

int run_serve(const EngineFlags& f, const std::string& host, int port) {
    const auto engine = build_engine(f);
    auto kb = open_rules(f.rules);
    DialogEngine dialog(*engine.source, engine.embeddings, kb, engine.templates, engine.config);
    SessionService service(dialog);
    httplib::Server server;
    register_session_routes(server, service);
    return serve_until_stopped(server, host, port);
}

int run_emulate(const std::string& store_path, const std::string& relations, const std::string& host, int port) {
    const auto registry = relations.empty() ? default_registry() : load_registry(relations);
    const auto store = load_static_kb(store_path, registry);
    httplib::Server server;
    register_generator_routes(server, *store);
    return serve_until_stopped(server, host, port);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hopwise: multi-hop commonsense reasoning over if-then-because commands"};
    app.require_subcommand(1);

    EngineFlags flags;
    std::string command, color = "blue", transcript, dataset, scripts, host = "127.0.0.1", store;
    ResolutionContext bindings;
    bool as_json = false;
    int port = 8080;

    auto* prove = app.add_subcommand("prove", "prove a command once and print the top proofs");
    add_engine_flags(prove, flags);
    prove->add_option("--command", command)->required();
    prove->add_option("--template", color);
    prove->add_option("--negated-goal", bindings.negated_goal, "bind the negated goal instead of generating it");
    prove->add_option("--hidden-action", bindings.hidden_action, "bind the hidden action");
    prove->add_flag("--json", as_json);

    auto* dialog = app.add_subcommand("dialog", "interactive session on the terminal");
    add_engine_flags(dialog, flags);
    dialog->add_option("--command", command)->required();
    dialog->add_option("--template", color);
    dialog->add_option("--transcript", transcript, "write the transcript as JSON lines");

    auto* eval = app.add_subcommand("eval", "scripted-user evaluation");
    add_engine_flags(eval, flags);
    eval->add_option("--dataset", dataset)->required();
    eval->add_option("--scripts", scripts)->required();
    bool per_session = false;
    eval->add_flag("--sessions", per_session, "also list each session's outcome");

    auto* serve = app.add_subcommand("serve", "HTTP session service");
    add_engine_flags(serve, flags);
    serve->add_option("--host", host);
    serve->add_option("--port", port);

    auto* emulate = app.add_subcommand("emulate", "serve a static tuple file over the generation protocol");
    emulate->add_option("--kb", store)->required();
    emulate->add_option("--relations", flags.relations);
    emulate->add_option("--host", host);
    emulate->add_option("--port", port);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*prove) return run_prove(flags, command, color, bindings, as_json);
        if (*dialog) return run_dialog(flags, command, color, transcript);
        if (*eval) return run_eval_command(flags, dataset, scripts, per_session);
        if (*serve) return run_serve(flags, host, port);
        if (*emulate) return run_emulate(store, flags.relations, host, port);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::BackendUnavailable) return 3;
        if (e.code() == ErrorCode::StorageFailure) return 1;
        return 2;
    }
    return 0;
}
