#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "ucpoint/scenario_model.hpp"

namespace ucpoint::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(UCPOINT_FIXTURE_DIR) / name;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

// Fresh scratch directory under the system temp dir.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ucpoint-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Random valid project for property checks.
inline ProjectSpec random_spec(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  ProjectSpec s;
  s.name = "Random Project " + std::to_string(pick(0, 9999));
  s.complexity_level = pick(1, 5);
  s.productivity = {pick(1, 5), pick(1, 5), pick(1, 5), pick(1, 5), pick(1, 5)};
  s.legacy_adjustment = 0.7 + 0.05 * pick(0, 12);
  const int n_actors = pick(0, 4);
  for (int i = 0; i < n_actors; ++i)
    s.actors.push_back({"actor" + std::to_string(i), static_cast<ActorKind>(pick(0, 2))});
  const int n_uc = pick(0, 12);
  for (int i = 0; i < n_uc; ++i)
    s.use_cases.push_back({"uc" + std::to_string(i), static_cast<UseCaseKind>(pick(0, 2)),
                           static_cast<std::uint32_t>(pick(0, 25)), static_cast<std::uint32_t>(pick(0, 12))});
  return s;
}

}  // namespace ucpoint::test
