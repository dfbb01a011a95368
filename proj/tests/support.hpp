#pragma once

#include <atomic>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>

#include "xlap/providers.hpp"

namespace xlap::test {

inline std::filesystem::path fixtures_dir() { return XLAP_FIXTURES_DIR; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("xlap-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Replays queued responses and records every request.
class ScriptedTransport : public HttpTransport {
 public:
  void push(int status, std::string body) {
    std::lock_guard lock(mutex_);
    queue_.push_back(HttpResponse{status, std::move(body)});
  }
  HttpResponse send(const HttpRequest &request) override {
    std::lock_guard lock(mutex_);
    requests.push_back(request);
    if (queue_.empty()) return HttpResponse{500, "no scripted response"};
    HttpResponse r = queue_.front();
    queue_.pop_front();
    return r;
  }
  std::vector<HttpRequest> requests;

 private:
  std::mutex mutex_;
  std::deque<HttpResponse> queue_;
};

}  // namespace xlap::test
