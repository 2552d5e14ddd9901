#include <sstream>

#include <gtest/gtest.h>

#include "hopwise/eval.hpp"
#include "support.hpp"

using namespace hopwise;
using namespace hopwise::testing;

namespace {

EvalReport desk_eval(const std::vector<DatasetEntry>& dataset, const Scripts& scripts) {
    const auto store = desk_store();
    auto kb = load_kb(data_path("seed_rules.tsv"), false);
    return run_eval(dataset, scripts, *store, desk_embeddings(), kb, default_templates(), SearchConfig{});
}

std::vector<DatasetEntry> dataset_of(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(ScriptedUser, ConsumesInOrderThenFallsBack) {
    ScriptedUser user({UserReply::yes_no(true), UserReply::pick(2)});
    Prompt mc;
    mc.kind = PromptKind::MultipleChoice;
    mc.options = {"a", "b", std::string(kNoneOfTheAbove)};
    Prompt free;
    free.kind = PromptKind::FreeText;
    EXPECT_TRUE(user.answer(mc).yes); // scripts are replayed verbatim
    EXPECT_EQ(user.answer(mc).choice, 2u);
    EXPECT_EQ(user.answer(mc).choice, 3u);
    EXPECT_EQ(user.answer(free).text, "I do not know");
    EXPECT_EQ(user.remaining(), 0u);
}

TEST(Dataset, ParsesColorsAndSkipsComments) {
    const auto d = dataset_of("# header\n\nOrange\tIf a then b because c\r\ngreen\tif x then y because z\n");
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].line, 3u);
    EXPECT_EQ(d[0].color, TemplateColor::Orange);
    EXPECT_EQ(d[0].command.goal.text, "c");
    EXPECT_EQ(d[1].line, 4u);
}

TEST(Dataset, ErrorsCarryLineNumbers) {
    for (const auto& [text, where] : std::vector<std::pair<std::string, std::string>>{
             {"blue\tif a then b because c\nno tab here\n", "dataset:2:"},
             {"purple\tif a then b because c\n", "dataset:1:"},
             {"\n\nblue\tthen a if b because c\n", "dataset:3:"}}) {
        try {
            dataset_of(text);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError);
            EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
        }
    }
}

TEST(Scripts, ParseAndReject) {
    const auto s = scripts_from_json(R"({"c": [{"yesno": true}, {"choice": 2, "explanation": "if a then b"}, {"text": "t"}]})");
    ASSERT_EQ(s.at("c").size(), 3u);
    EXPECT_EQ(s.at("c")[1].explanation, std::optional<std::string>("if a then b"));
    EXPECT_EQ(code_of([] { scripts_from_json("[1]"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { scripts_from_json(R"({"c": [{"choice": 1, "text": "x"}]})"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { scripts_from_json("{"); }), ErrorCode::ParseError);
}

TEST(RunEval, EmptyDataset) {
    const auto r = desk_eval({}, {});
    EXPECT_EQ(r.total.tried, 0u);
    EXPECT_EQ(r.format(), "template\tproved\ttried\tproved/tried\n"
                          "blue\t0\t0\t0.0000\n"
                          "orange\t0\t0\t0.0000\n"
                          "green\t0\t0\t0.0000\n"
                          "total\t0\t0\t0.0000\n"
                          "rules added\t0\n");
}

TEST(RunEval, MissingScript) {
    EXPECT_EQ(code_of([] { desk_eval(dataset_of("blue\tif a then b because c\n"), {}); }), ErrorCode::ParseError);
}

// Meeting and air conditioner have chains in the desk store and the script
// picks option 1: both Proved. The car command has nothing in the store, the
// script is empty, the user falls back to "I do not know" twice: Failed.
TEST(RunEval, ThreeCommandsTwoSeeded) {
    const auto dataset = dataset_of(
        "orange\tIf I have an early morning meeting then wake me up early because I want to be on time.\n"
        "orange\tif the air temperature is forecast to be warmer than 70 tonight then remind me to turn on the air "
        "conditioner because i want to stay cool\n"
        "orange\tIf my car is low on fuel then remind me to fill the tank because I want to drive to work\n");
    Scripts scripts;
    for (const auto& e : dataset) scripts[e.text] = {};
    scripts[dataset[0].text] = {UserReply::pick(1)};
    scripts[dataset[1].text] = {UserReply::pick(1)};
    const auto r = desk_eval(dataset, scripts);
    EXPECT_EQ(r.total.proved, 2u);
    EXPECT_EQ(r.total.tried, 3u);
    EXPECT_EQ(r.per_color.at(TemplateColor::Orange).proved, 2u);
    EXPECT_EQ(r.sessions[2].outcome.reason, std::optional<FailureReason>(FailureReason::UnparseableExplanation));
    EXPECT_EQ(r.sessions[2].prompts, 2u);
}

TEST(RunEval, DeskTable) {
    const auto dataset = load_dataset(data_path("desk/dataset.tsv"));
    const auto scripts = load_scripts(data_path("desk/scripts.json"));
    const auto first = desk_eval(dataset, scripts);
    const auto second = desk_eval(dataset, scripts);
    EXPECT_EQ(first.format(), second.format());
    ASSERT_EQ(first.total.tried, 12u);
    for (const auto& [color, t] : first.per_color) {
        EXPECT_LE(t.proved, t.tried);
        EXPECT_EQ(t.tried, 4u) << to_string(color);
    }
    const std::string table = first.format();
    EXPECT_EQ(table.substr(0, table.find("rules added")), "template\tproved\ttried\tproved/tried\n"
                                                          "blue\t3\t4\t0.7500\n"
                                                          "orange\t3\t4\t0.7500\n"
                                                          "green\t2\t4\t0.5000\n"
                                                          "total\t8\t12\t0.6667\n");
    std::map<Outcome::Kind, int> kinds;
    for (const auto& s : first.sessions) ++kinds[s.outcome.kind];
    EXPECT_EQ(kinds[Outcome::Kind::Proved], 4);
    EXPECT_EQ(kinds[Outcome::Kind::ProvedAfterContribution], 4);
    EXPECT_EQ(kinds[Outcome::Kind::Failed], 4);
}
