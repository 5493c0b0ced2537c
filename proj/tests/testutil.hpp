#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testutil {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(TESTS_FIXTURE_DIR) / name;
}

// Fresh directory under the system temp root, removed on destruction.
class TempDir {
  public:
    TempDir() {
        std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("vulncluster_test_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        auto p = path_ / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }

  private:
    std::filesystem::path path_;
};

}  // namespace testutil
