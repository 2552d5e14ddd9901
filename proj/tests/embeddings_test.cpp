#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hopwise/embeddings.hpp"
#include "support.hpp"

using namespace hopwise;
using hopwise::testing::TempDir;
using hopwise::testing::write_file;

TEST(LoadEmbeddings, MinimalTable) {
    TempDir dir;
    write_file(dir.file("e.txt"), "cat 1 0\ndog 0 1\n");
    const auto t = load_embeddings(dir.file("e.txt"));
    EXPECT_EQ(t.dimension(), 2u);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(t.lookup("dog")[1], 1.0);
}

TEST(LoadEmbeddings, RaggedLine) {
    TempDir dir;
    write_file(dir.file("e.txt"), "cat 1 0\ndog 0 1 2\n");
    try {
        load_embeddings(dir.file("e.txt"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(LoadEmbeddings, EmptyFile) {
    TempDir dir;
    write_file(dir.file("e.txt"), "\n\n");
    try {
        load_embeddings(dir.file("e.txt"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyFile);
    }
}

TEST(LoadEmbeddings, DuplicateKeepsFirst) {
    TempDir dir;
    write_file(dir.file("e.txt"), "cat 1 0\ncat 0 1\n");
    const auto t = load_embeddings(dir.file("e.txt"));
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t.lookup("cat")[0], 1.0);
}

TEST(LoadEmbeddings, FixtureDimensionFromFirstLine) {
    const auto& t = hopwise::testing::desk_embeddings();
    EXPECT_EQ(t.dimension(), 50u);
    EXPECT_GT(t.size(), 100u);
}

TEST(EmbedPhrase, MeanAndOov) {
    EmbeddingTable t(2);
    t.insert("cat", std::vector<double>{1, 0});
    t.insert("dog", std::vector<double>{0, 1});

    const auto one = embed_phrase(t, "cat");
    EXPECT_EQ(one.vector, (std::vector<double>{1, 0}));
    EXPECT_EQ(one.in_vocab_count, 1u);

    const auto both = embed_phrase(t, "Cat dog");
    EXPECT_EQ(both.vector, (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(both.in_vocab_count, 2u);

    const auto oov = embed_phrase(t, "zyxwv");
    EXPECT_TRUE(oov.is_zero());
    EXPECT_EQ(oov.vector, (std::vector<double>{0, 0}));
    EXPECT_EQ(closeness(oov, one), 0.0);
}

TEST(Closeness, IdenticalPhrase) {
    const auto& t = hopwise::testing::desk_embeddings();
    EXPECT_NEAR(closeness(embed_phrase(t, "wear jacket"), embed_phrase(t, "wear jacket")), 1.0, 1e-6);
}

// The fixture file was fitted to these values; the recorded achieved values
// must also agree with what this implementation computes.
TEST(Closeness, FixtureValues) {
    const auto& t = hopwise::testing::desk_embeddings();
    const auto rows = text::split(hopwise::testing::read_file(hopwise::testing::data_path("appendix/fixture_closeness.tsv")), '\n');
    int checked = 0;
    for (const auto& row : rows) {
        if (row.empty() || row[0] == '#') continue;
        const auto f = text::split(row, '\t');
        ASSERT_EQ(f.size(), 5u);
        const double got = closeness(embed_phrase(t, f[0]), embed_phrase(t, f[1]));
        EXPECT_NEAR(got, std::stod(f[4]), 1e-7) << row;
        if (f[2] == "exact") {
            EXPECT_NEAR(got, std::stod(f[3]), 0.02) << row;
        }
        ++checked;
    }
    EXPECT_GE(checked, 13);
    EXPECT_NEAR(closeness(embed_phrase(t, "work out"), embed_phrase(t, "work out regularly")), 0.9220791, 0.02);
}

class ClosenessProperties : public ::testing::Test {
protected:
    std::vector<std::string> random_phrases(std::size_t n, std::uint64_t seed) {
        std::vector<std::string> vocab;
        vocab.reserve(words_.size());
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, words_.size() - 1);
        std::uniform_int_distribution<int> len(1, 6);
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) {
            std::string p;
            for (int k = len(rng); k > 0; --k) p += (p.empty() ? "" : " ") + words_[pick(rng)];
            out.push_back(p);
        }
        return out;
    }

    void SetUp() override {
        const auto content = hopwise::testing::read_file(hopwise::testing::data_path("embeddings/desk.txt"));
        for (const auto& line : text::split(content, '\n')) {
            if (!line.empty()) words_.push_back(line.substr(0, line.find(' ')));
        }
    }

    std::vector<std::string> words_;
};

TEST_F(ClosenessProperties, ReflexiveSymmetricBounded) {
    const auto& t = hopwise::testing::desk_embeddings();
    const auto phrases = random_phrases(1000, 7);
    for (std::size_t i = 0; i < phrases.size(); ++i) {
        const auto a = embed_phrase(t, phrases[i]);
        const auto b = embed_phrase(t, phrases[(i * 7 + 3) % phrases.size()]);
        ASSERT_FALSE(a.is_zero());
        EXPECT_NEAR(closeness(a, a), 1.0, 1e-6) << phrases[i];
        EXPECT_EQ(closeness(a, b), closeness(b, a));
        EXPECT_GE(closeness(a, b), -1.0);
        EXPECT_LE(closeness(a, b), 1.0);
    }
}

TEST_F(ClosenessProperties, ScaleInvariant) {
    const auto& t = hopwise::testing::desk_embeddings();
    const auto phrases = random_phrases(1000, 11);
    for (double c : {0.001, 0.37, 2.5, 1000.0}) {
        EmbeddingTable scaled(t.dimension());
        for (const auto& w : words_) {
            std::vector<double> v(t.lookup(w).begin(), t.lookup(w).end());
            for (auto& x : v) x *= c;
            scaled.insert(w, v);
        }
        for (std::size_t i = 0; i + 1 < phrases.size(); i += 2) {
            const double before = closeness(embed_phrase(t, phrases[i]), embed_phrase(t, phrases[i + 1]));
            const double after = closeness(embed_phrase(scaled, phrases[i]), embed_phrase(scaled, phrases[i + 1]));
            EXPECT_NEAR(before, after, 1e-9);
        }
    }
}

TEST(ClosenessCache, MatchesDirectComputation) {
    const auto& t = hopwise::testing::desk_embeddings();
    ClosenessCache cache(t);
    EXPECT_EQ(cache("buy something", "buy them"), closeness(embed_phrase(t, "buy something"), embed_phrase(t, "buy them")));
    EXPECT_EQ(cache("buy something", "buy them"), cache("buy something", "buy them"));
}
