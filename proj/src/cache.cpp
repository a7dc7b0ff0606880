#include "gkp/cache.hpp"

#include "gkp/serialize.hpp"

namespace gkp {

SweepCache::SweepCache(std::string dir) : dir_(std::move(dir)) {
  ensure_directory(dir_);
}

std::string SweepCache::key_hash(const std::string& op,
                                 const nlohmann::json& params, long bits) {
  // nlohmann objects iterate in sorted key order, so dump() is canonical.
  nlohmann::json key = {{"op", op},
                        {"params", params},
                        {"bits", bits},
                        {"format_version", kFormatVersion}};
  return sha256_hex(key.dump());
}

std::string SweepCache::path_for(const std::string& hash) const {
  return dir_ + "/" + hash + ".json";
}

std::optional<nlohmann::json> SweepCache::get(const std::string& hash) const {
  std::string raw;
  if (!read_file(path_for(hash), raw)) return std::nullopt;
  nlohmann::json doc = nlohmann::json::parse(raw, nullptr, false);
  if (doc.is_discarded()) return std::nullopt;  // corrupt entry = miss
  if (!doc.contains("format_version") ||
      doc["format_version"].get<int>() != kFormatVersion)
    return std::nullopt;
  if (!doc.contains("value")) return std::nullopt;
  return doc["value"];
}

void SweepCache::put(const std::string& hash, const nlohmann::json& key_desc,
                     const nlohmann::json& value) const {
  nlohmann::json doc = {{"format_version", kFormatVersion},
                        {"key", key_desc},
                        {"value", value}};
  atomic_write_file(path_for(hash), doc.dump(2) + "\n");
}

}  // namespace gkp
