#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "hopwise/embeddings.hpp"
#include "hopwise/knowledge_source.hpp"
#include "hopwise/relations.hpp"
#include "hopwise/templates.hpp"
#include "hopwise/text.hpp"

namespace hopwise::testing {

inline std::filesystem::path data_path(const std::string& rel) {
    return std::filesystem::path(HOPWISE_DATA_DIR) / rel;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("hopwise-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline const EmbeddingTable& desk_embeddings() {
    static const EmbeddingTable table = load_embeddings(data_path("embeddings/desk.txt"));
    return table;
}

inline std::unique_ptr<StaticTupleStore> desk_store() {
    return load_static_kb(data_path("desk/store.tsv"), default_registry());
}

/// Table with one-hot-ish vectors: token i gets unit vector e_(i mod dim).
/// Closeness between phrases is then easy to reason about by hand.
inline EmbeddingTable basis_table(const std::vector<std::string>& tokens, std::size_t dim) {
    EmbeddingTable t(dim);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::vector<double> v(dim, 0.0);
        v[i % dim] = 1.0;
        t.insert(tokens[i], v);
    }
    return t;
}

using DatasetLine = std::pair<TemplateColor, std::string>;

/// The desk dataset as (color, command) pairs, read without the eval parser.
inline std::vector<DatasetLine> desk_dataset_lines() {
    std::vector<DatasetLine> out;
    std::ifstream in(data_path("desk/dataset.tsv"));
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (line.empty() || line[0] == '#' || tab == std::string::npos) continue;
        out.emplace_back(*parse_color(line.substr(0, tab)), line.substr(tab + 1));
    }
    return out;
}

} // namespace hopwise::testing
