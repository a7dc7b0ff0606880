#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace gkp {

/// Content-addressed result store: one JSON file per key, written atomically,
/// so concurrent sweep workers can share a directory. Values must be fully
/// string-serialized records (decimal scalars), making hits byte-identical to
/// recomputation at the same key.
class SweepCache {
 public:
  static constexpr int kFormatVersion = 1;

  explicit SweepCache(std::string dir);

  /// Canonical key digest of (operation, parameters, mantissa bits).
  static std::string key_hash(const std::string& op,
                              const nlohmann::json& params, long bits);

  std::optional<nlohmann::json> get(const std::string& hash) const;
  void put(const std::string& hash, const nlohmann::json& key_desc,
           const nlohmann::json& value) const;

  const std::string& dir() const { return dir_; }

 private:
  std::string path_for(const std::string& hash) const;
  std::string dir_;
};

}  // namespace gkp
