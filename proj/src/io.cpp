#include "geodisc/io.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

#include "geodisc/error.hpp"

namespace geodisc {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw DomainError("read error on '" + path + "'");
  return ss.str();
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw DomainError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw DomainError("write error on '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DomainError("cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
  }
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw DomainError("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string file_sha256(const std::string& path) { return sha256_hex(read_text_file(path)); }

std::string json_digest(const json& j) { return sha256_hex(j.dump()); }

json space_to_json(const Space& space) {
  const SpaceKind& k = space.kind();
  json j;
  j["family"] = to_string(k.family);
  if (k.family == Family::Abstract) {
    j["d"] = k.abstract_d;
    j["d0"] = k.abstract_d0;
  } else {
    j["n"] = k.n;
  }
  return j;
}

SpaceKind space_from_json(const json& j) {
  if (j.is_string()) return parse_space(j.get<std::string>());
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw DomainError("space must be an object with a 'family' string");
  const Family fam = family_from_string(j["family"].get<std::string>());
  SpaceKind k;
  k.family = fam;
  if (fam == Family::Abstract) {
    if (!j.contains("d") || !j.contains("d0")) throw DomainError("abstract space needs 'd' and 'd0'");
    k = SpaceKind::abstract(j["d"].get<int>(), j["d0"].get<int>());
  } else if (fam == Family::ProjOctonion) {
    k = SpaceKind::octonion();
    if (j.contains("n") && j["n"].get<int>() != 2) throw DomainError("octonionic projective space exists only for n = 2");
  } else {
    if (!j.contains("n") || !j["n"].is_number_integer()) throw DomainError("space needs an integer 'n'");
    k.n = j["n"].get<int>();
  }
  space_params(k);
  return k;
}

json to_json(const DiscrepancyReport& rep) {
  json j;
  j["value"] = rep.value;
  j["M_used"] = rep.M_used;
  j["tail_bound"] = rep.tail_bound;
  j["completed"] = rep.completed;
  j["radii"] = rep.radii;
  j["volumes"] = rep.volumes;
  j["converged"] = rep.converged;
  j["method"] = rep.method;
  j["clamped"] = rep.clamped;
  if (!rep.per_m.empty()) j["per_m"] = rep.per_m;
  return j;
}

json to_json(const MonteCarloResult& mc) {
  return json{{"estimate", mc.estimate}, {"stderr", mc.std_error}, {"samples", mc.samples}};
}

RunRecord make_run_record(const std::vector<std::string>& argv, const json& config,
                          const std::vector<std::string>& input_files) {
  RunRecord r;
  r.command_line = argv;
  r.config_hash = json_digest(config);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  r.timestamp = os.str();
  for (const auto& f : input_files) r.input_digests[f] = file_sha256(f);
  return r;
}

json to_json(const RunRecord& r) {
  return json{{"command_line", r.command_line}, {"config_hash", r.config_hash}, {"version", r.version},
              {"timestamp", r.timestamp},       {"input_digests", r.input_digests}, {"outputs", r.outputs}};
}

void persist_results(RunRecord& record, const std::string& payload, const std::string& out_dir,
                     const std::string& name) {
  const std::string main = (fs::path(out_dir) / name).string();
  atomic_write_text(main, payload);
  record.outputs.push_back(main);
  const std::string side = main + ".run.json";
  record.outputs.push_back(side);
  atomic_write_text(side, to_json(record).dump(1) + "\n");
}

CellCache::CellCache(std::string out_dir, std::string config_digest, bool enabled,
                     std::function<void(const std::string&)> warn)
    : dir_((fs::path(out_dir) / "cells").string()),
      config_digest_(std::move(config_digest)),
      enabled_(enabled),
      warn_(std::move(warn)) {}

std::string CellCache::path_for(const std::string& key) const {
  return (fs::path(dir_) / (sha256_hex(key).substr(0, 32) + ".json")).string();
}

std::optional<json> CellCache::load(const std::string& key) {
  if (!enabled_) {
    ++misses_;
    return std::nullopt;
  }
  const std::string p = path_for(key);
  if (!fs::exists(p)) {
    ++misses_;
    return std::nullopt;
  }
  try {
    const json j = json::parse(read_text_file(p));
    if (j.at("key").get<std::string>() != key || j.at("config_digest").get<std::string>() != config_digest_)
      throw DomainError("cell belongs to another configuration");
    if (json_digest(j.at("payload")) != j.at("digest").get<std::string>()) throw DomainError("payload digest mismatch");
    ++hits_;
    return j.at("payload");
  } catch (const std::exception& e) {
    if (warn_) warn_("warning: ignoring cached cell " + p + " (" + e.what() + "); recomputing");
    ++misses_;
    return std::nullopt;
  }
}

void CellCache::store(const std::string& key, const json& payload) {
  json j{{"key", key}, {"config_digest", config_digest_}, {"payload", payload}, {"digest", json_digest(payload)}};
  atomic_write_text(path_for(key), j.dump() + "\n");
}

}  // namespace geodisc
