#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geodisc/discrepancy.hpp"
#include "geodisc/spaces.hpp"
#include "json.hpp"

namespace geodisc {

inline constexpr const char* kVersion = "0.1.0";

std::string read_text_file(const std::string& path);
// Writes to a temporary file in the same directory, then renames it over
// `path`. Creates missing parent directories.
void atomic_write_text(const std::string& path, const std::string& content);

std::string sha256_hex(const std::string& data);
std::string file_sha256(const std::string& path);
// SHA-256 of the canonical (sorted-key, compact) JSON dump.
std::string json_digest(const nlohmann::json& j);

nlohmann::json space_to_json(const Space& space);
SpaceKind space_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DiscrepancyReport& rep);
nlohmann::json to_json(const MonteCarloResult& mc);

struct RunRecord {
  std::vector<std::string> command_line;
  std::string config_hash;
  std::string version = kVersion;
  std::string timestamp;  // UTC, ISO 8601
  std::map<std::string, std::string> input_digests;
  std::vector<std::string> outputs;
};

RunRecord make_run_record(const std::vector<std::string>& argv, const nlohmann::json& config,
                          const std::vector<std::string>& input_files = {});
nlohmann::json to_json(const RunRecord& r);

// Atomically writes `payload` to out_dir/<name> and the run record to
// out_dir/<name>.run.json. Every path written is appended to record.outputs.
void persist_results(RunRecord& record, const std::string& payload, const std::string& out_dir,
                     const std::string& name);

// Per-cell result cache under out_dir/cells. A cell is keyed by a string and
// bound to the digest of the configuration that produced it; a stored cell
// whose payload digest or config digest does not match is ignored with a
// warning and recomputed.
class CellCache {
 public:
  CellCache(std::string out_dir, std::string config_digest, bool enabled,
            std::function<void(const std::string&)> warn = {});

  std::optional<nlohmann::json> load(const std::string& key);
  void store(const std::string& key, const nlohmann::json& payload);

  int hits() const { return hits_; }
  int misses() const { return misses_; }

 private:
  std::string path_for(const std::string& key) const;

  std::string dir_;
  std::string config_digest_;
  bool enabled_;
  std::function<void(const std::string&)> warn_;
  int hits_ = 0, misses_ = 0;
};

}  // namespace geodisc
