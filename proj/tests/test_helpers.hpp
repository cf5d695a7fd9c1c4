#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "datasel/corpus.hpp"

namespace testutil {

/// Scratch directory removed at scope exit.
class TempDir {
  public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("datasel_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

/// Uniform(0,1) scores that are dyadic rationals (20-bit numerators), so
/// any summation order of up to a few thousand of them is exact in double.
inline double dyadic_uniform(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 44) / 1048576.0;  // / 2^20
}

inline datasel::Corpus toy_corpus(std::initializer_list<datasel::Example> examples) {
    return datasel::make_corpus(std::vector<datasel::Example>(examples));
}

}  // namespace testutil
