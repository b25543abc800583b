#pragma once

#include "msploc/enumerate.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace msploc {

/// Content-addressed store of enumeration results, keyed by the SHA-256 of
/// the weights, discrete data and caps. Entries are re-validated on load.
class EnumerationCache {
public:
  explicit EnumerationCache(std::filesystem::path root);

  /// MSPLOC_CACHE_DIR, else $XDG_CACHE_HOME/msploc, else ~/.cache/msploc.
  static std::filesystem::path default_root();

  static nlohmann::json key_material(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps);
  static std::string key(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps);

  /// nullopt on a miss. A corrupt or stale entry is deleted and reported as a miss.
  std::optional<EnumerationResult> load(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps) const;
  void store(const WeightSystem& ws, const DiscreteData& dd, const EnumerationCaps& caps, const EnumerationResult& r) const;

  struct GcReport {
    int kept = 0;
    int removed = 0;
  };
  /// Drops unreadable entries and leftover temporaries; everything when `all`.
  GcReport gc(bool all) const;

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path entry_path(const std::string& key) const;

private:
  std::filesystem::path root_;
};

/// Writes through a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace msploc
