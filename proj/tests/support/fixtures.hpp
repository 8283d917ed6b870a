#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "httplib.h"
#include "ikbqa/name_index.hpp"
#include "ikbqa/ntriples.hpp"
#include "ikbqa/similarity.hpp"
#include "ikbqa/toolbox.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return IKBQA_DATA_DIR; }
inline std::filesystem::path golden_dir() { return IKBQA_GOLDEN_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// KB + index + default ranker + toolbox, built once per fixture.
struct ToyKb {
  ikbqa::KnowledgeBase kb;
  ikbqa::NameIndex index;
  std::unique_ptr<ikbqa::TrigramTfidfRanker> ranker;
  std::unique_ptr<ikbqa::Toolbox> tools;

  ToyKb(const std::filesystem::path& nt, ikbqa::SchemaProfile profile, ikbqa::ToolConfig config = {})
      : kb(ikbqa::load_ntriples(nt, profile)), index(kb) {
    ranker = std::make_unique<ikbqa::TrigramTfidfRanker>(ikbqa::ranker_corpus(kb));
    tools = std::make_unique<ikbqa::Toolbox>(kb, index, *ranker, config);
  }
  ToyKb(const ToyKb&) = delete;
};

inline ToyKb& tom_hanks() {
  static ToyKb kb(data_dir() / "kb" / "tom_hanks.nt", ikbqa::SchemaProfile::FreebaseLike);
  return kb;
}

inline ToyKb& freebase_toy() {
  static ToyKb kb(data_dir() / "kb" / "freebase_toy.nt", ikbqa::SchemaProfile::FreebaseLike);
  return kb;
}

inline ToyKb& wikidata_toy() {
  static ToyKb kb(data_dir() / "kb" / "wikidata_toy.nt", ikbqa::SchemaProfile::WikidataLike);
  return kb;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("ikbqa-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// An httplib server on an ephemeral localhost port, served from a thread.
class LocalServer {
 public:
  httplib::Server server;

  void start() {
    port_ = server.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    if (thread_.joinable()) thread_.join();
  }
  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  int port_ = -1;
  std::thread thread_;
};

}  // namespace fixtures
