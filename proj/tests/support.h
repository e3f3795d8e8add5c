#ifndef MLQA_TESTS_SUPPORT_H_
#define MLQA_TESTS_SUPPORT_H_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "mlqa/random.h"

namespace mlqa::testing {

inline std::filesystem::path data_dir() { return MLQA_TEST_DATA; }

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("mlqa-" + name + "-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Word from a small alphabet so random instances collide often.
inline std::string random_word(Rng& rng, std::size_t alphabet) {
  return "w" + std::to_string(rng.below(alphabet));
}

}  // namespace mlqa::testing

#endif  // MLQA_TESTS_SUPPORT_H_
