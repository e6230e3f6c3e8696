#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "elastic/blobstore.hpp"

namespace elastic::testing {

inline std::filesystem::path fixture_dir() { return ELASTIC_FIXTURE_DIR; }

inline Bytes read_fixture(const std::string& name) {
    std::ifstream in(fixture_dir() / name, std::ios::binary);
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

/// image name -> label, as produced by tests/oracle/fnv_oracle.py.
inline std::vector<std::pair<std::string, std::string>> golden_labels() {
    std::ifstream in(fixture_dir() / "golden_labels.txt");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        auto sep = line.find(", ");
        if (sep == std::string::npos) continue;
        out.emplace_back(line.substr(0, sep), line.substr(sep + 2));
    }
    return out;
}

inline std::map<std::string, std::string> golden_label_map() {
    std::map<std::string, std::string> m;
    for (auto& [k, v] : golden_labels()) m[k] = v;
    return m;
}

}  // namespace elastic::testing
