#include "topictrend/pipeline/manifest.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "topictrend/error.hpp"
#include "topictrend/pipeline/csv.hpp"

namespace topictrend::pipeline {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw numerical_error("HashError", "cannot initialize SHA-256");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, digest, &len);
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[digest[i] >> 4];
      out += digits[digest[i] & 15];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

void hash_file_into(Sha256& h, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("FileNotFound", "cannot read " + path.string());
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) h.update(buf, static_cast<std::size_t>(in.gcount()));
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  Sha256 h;
  if (std::filesystem::is_directory(path)) {
    // Relative names and contents of every regular file, in sorted order.
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto rel = std::filesystem::relative(f, path).generic_string();
      h.update(rel.data(), rel.size() + 1);
      hash_file_into(h, f);
    }
  } else {
    hash_file_into(h, path);
  }
  return h.hex();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void append_manifest(const std::filesystem::path& dir, const RunRecord& run) {
  const auto path = dir / "manifest.json";
  nlohmann::json manifest;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    try {
      manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw data_error("ParseError", path.string() + ": " + e.what());
    }
  } else {
    manifest = {{"format", "topictrend-manifest"}, {"version", 1}, {"runs", nlohmann::json::array()}};
  }
  nlohmann::json record;
  record["command"] = run.command;
  record["tool_version"] = kToolVersion;
  record["config"] = run.config;
  record["seed"] = run.seed;
  record["started_at"] = run.started_at;
  record["finished_at"] = utc_timestamp();
  auto inputs = nlohmann::json::array();
  for (const auto& p : run.inputs) {
    if (p.empty() || !std::filesystem::exists(p)) continue;
    inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  }
  record["inputs"] = inputs;
  auto outputs = nlohmann::json::array();
  for (const auto& p : run.outputs) {
    nlohmann::json o = {{"path", std::filesystem::relative(p, dir).generic_string()}};
    if (std::filesystem::is_regular_file(p)) o["sha256"] = sha256_file(p);
    outputs.push_back(std::move(o));
  }
  record["outputs"] = outputs;
  record["timings"] = run.timings;
  record["warnings"] = run.warnings;
  manifest["runs"].push_back(std::move(record));
  write_file_atomic(path, manifest.dump(2) + "\n");
}

OutputLock::OutputLock(const std::filesystem::path& dir) : path_(dir / ".topictrend.lock") {
  std::filesystem::create_directories(dir);
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw usage_error("OutputLocked", "another command is using " + dir.string() + " (remove " + path_.string() +
                                          " if no command is running)");
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

}  // namespace topictrend::pipeline
