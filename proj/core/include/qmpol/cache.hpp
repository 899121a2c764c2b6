#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qmpol/cm_orders.hpp"

namespace qmpol {

enum class CacheKind { h_imag, h_real_wide, h_real_narrow, pell, h_quartic, pi0, pi_total };

std::string to_string(CacheKind kind);
std::optional<CacheKind> cache_kind_from_string(const std::string& s);

inline constexpr int kCacheFormatVersion = 1;

struct CacheRecord {
  CacheKind kind;
  std::vector<Int> key;
  std::vector<Int> value;
  int version = kCacheFormatVersion;
};

/// One JSON object per line: {"v":1,"kind":"h_imag","key":["-24"],"value":["2"]}.
std::string encode_record(const CacheRecord& r);
/// nullopt for malformed lines (torn writes included).
std::optional<CacheRecord> decode_record(const std::string& line);

/// Persistent memo of class numbers, Pell units and counts. Append-only;
/// concurrent computations are allowed, appends are serialized.
class ClassNumberCache : public ClassNumberSource {
 public:
  /// nullopt: memory only. An unwritable path also degrades to memory only.
  explicit ClassNumberCache(std::optional<std::filesystem::path> path = std::nullopt);

  /// $QMPOL_CACHE, else $XDG_CACHE_HOME/qmpol/cache.jsonl, else ~/.cache/qmpol/cache.jsonl.
  static std::optional<std::filesystem::path> default_path();

  std::vector<Int> get_or_compute(CacheKind kind, const std::vector<Int>& key,
                                  const std::function<std::vector<Int>()>& compute) const;

  Int h_imag(const Int& disc) const override;
  RealClassNumber h_real(const Int& disc) const override;
  PellUnit pell(const Int& disc) const override;
  Int h_quartic(const Int& m, const Rat& d0, const Rat& d1, const std::function<Int()>& compute) const override;

  bool memory_only() const { return !out_.is_open(); }
  const std::optional<std::filesystem::path>& path() const { return path_; }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t skipped_lines() const { return skipped_; }

 private:
  using Key = std::pair<CacheKind, std::vector<Int>>;
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const;
  };

  void load();

  std::optional<std::filesystem::path> path_;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::vector<Int>, KeyLess> entries_;
  mutable std::ofstream out_;
  mutable std::atomic<std::size_t> hits_{0}, misses_{0};
  std::size_t skipped_ = 0;
};

/// Warnings and progress go to stderr with a timestamp; data never carries one.
void log_line(const std::string& level, const std::string& message);

}  // namespace qmpol
