#include "qmpol/cache.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "qmpol/errors.hpp"

namespace qmpol {

namespace {

constexpr std::pair<CacheKind, const char*> kKindNames[] = {
    {CacheKind::h_imag, "h_imag"},       {CacheKind::h_real_wide, "h_real_wide"},
    {CacheKind::h_real_narrow, "h_real_narrow"}, {CacheKind::pell, "pell"},
    {CacheKind::h_quartic, "h_quartic"}, {CacheKind::pi0, "pi0"},
    {CacheKind::pi_total, "pi_total"},
};

std::vector<Int> read_ints(const nlohmann::json& j) {
  std::vector<Int> out;
  if (!j.is_array()) throw std::invalid_argument("expected array");
  for (const auto& e : j) {
    if (!e.is_string()) throw std::invalid_argument("expected string");
    out.emplace_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

std::string to_string(CacheKind kind) {
  for (const auto& [k, n] : kKindNames)
    if (k == kind) return n;
  return "?";
}

std::optional<CacheKind> cache_kind_from_string(const std::string& s) {
  for (const auto& [k, n] : kKindNames)
    if (s == n) return k;
  return std::nullopt;
}

std::string encode_record(const CacheRecord& r) {
  nlohmann::ordered_json j;
  j["v"] = r.version;
  j["kind"] = to_string(r.kind);
  j["key"] = nlohmann::json::array();
  for (const auto& k : r.key) j["key"].push_back(k.get_str());
  j["value"] = nlohmann::json::array();
  for (const auto& v : r.value) j["value"].push_back(v.get_str());
  return j.dump();
}

std::optional<CacheRecord> decode_record(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    CacheRecord r;
    r.version = j.at("v").get<int>();
    const auto kind = cache_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) return std::nullopt;
    r.kind = *kind;
    r.key = read_ints(j.at("key"));
    r.value = read_ints(j.at("value"));
    if (r.value.empty()) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void log_line(const std::string& level, const std::string& message) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::cerr << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << level << ": " << message << '\n';
}

bool ClassNumberCache::KeyLess::operator()(const Key& a, const Key& b) const {
  if (a.first != b.first) return a.first < b.first;
  if (a.second.size() != b.second.size()) return a.second.size() < b.second.size();
  for (std::size_t i = 0; i < a.second.size(); ++i)
    if (a.second[i] != b.second[i]) return a.second[i] < b.second[i];
  return false;
}

ClassNumberCache::ClassNumberCache(std::optional<std::filesystem::path> path) : path_(std::move(path)) {
  if (!path_) return;
  load();
  std::error_code ec;
  if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path(), ec);
  out_.open(*path_, std::ios::app);
  if (!out_) log_line("warning", "cache path " + path_->string() + " is not writable; using memory only");
}

std::optional<std::filesystem::path> ClassNumberCache::default_path() {
  if (const char* p = std::getenv("QMPOL_CACHE"); p && *p) return std::filesystem::path(p);
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "qmpol" / "cache.jsonl";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "qmpol" / "cache.jsonl";
  return std::nullopt;
}

void ClassNumberCache::load() {
  std::ifstream in(*path_);
  if (!in) return;
  std::vector<CacheRecord> current;
  std::size_t stale = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto r = decode_record(line);
    if (!r) {
      ++skipped_;
      log_line("warning", "cache " + path_->string() + ":" + std::to_string(lineno) + ": corrupt record skipped");
      continue;
    }
    if (r->version != kCacheFormatVersion) {
      ++stale;
      continue;
    }
    entries_[{r->kind, r->key}] = r->value;
    current.push_back(std::move(*r));
  }
  in.close();
  if (stale == 0) return;
  // Old-format records are dropped; the survivors are rewritten in place.
  log_line("warning", "cache " + path_->string() + ": " + std::to_string(stale) + " records from another format version dropped");
  std::ofstream rewrite(*path_, std::ios::trunc);
  for (const auto& r : current) rewrite << encode_record(r) << '\n';
}

std::vector<Int> ClassNumberCache::get_or_compute(CacheKind kind, const std::vector<Int>& key,
                                                  const std::function<std::vector<Int>()>& compute) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find({kind, key}); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  ++misses_;
  std::vector<Int> value = compute();
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.emplace(Key{kind, key}, value);
  if (!inserted) {
    if (it->second != value)
      throw_inconsistency("cache value differs from recomputation", to_string(kind));
    return it->second;
  }
  if (out_.is_open()) {
    out_ << encode_record({kind, key, value, kCacheFormatVersion}) << '\n';
    out_.flush();
  }
  return value;
}

Int ClassNumberCache::h_imag(const Int& disc) const {
  return get_or_compute(CacheKind::h_imag, {disc}, [&] { return std::vector<Int>{class_number_imag(disc)}; })[0];
}

RealClassNumber ClassNumberCache::h_real(const Int& disc) const {
  // Both numbers come out of one cycle computation; store them together under
  // the wide kind and mirror the narrow one.
  std::optional<RealClassNumber> computed;
  auto run = [&] {
    if (!computed) computed = class_number_real(disc);
    return *computed;
  };
  const Int wide = get_or_compute(CacheKind::h_real_wide, {disc}, [&] { return std::vector<Int>{run().h_wide}; })[0];
  const Int narrow = get_or_compute(CacheKind::h_real_narrow, {disc}, [&] { return std::vector<Int>{run().h_narrow}; })[0];
  return {wide, narrow};
}

PellUnit ClassNumberCache::pell(const Int& disc) const {
  const auto v = get_or_compute(CacheKind::pell, {disc}, [&] {
    const PellUnit u = pell_unit(disc);
    return std::vector<Int>{u.x, u.y, Int(u.norm_sign)};
  });
  if (v.size() != 3) throw_inconsistency("malformed Pell record", disc.get_str());
  return {disc, v[0], v[1], static_cast<int>(v[2].get_si())};
}

Int ClassNumberCache::h_quartic(const Int& m, const Rat& d0, const Rat& d1, const std::function<Int()>& compute) const {
  return get_or_compute(CacheKind::h_quartic, {m, d0.get_num(), d0.get_den(), d1.get_num(), d1.get_den()},
                        [&] { return std::vector<Int>{compute()}; })[0];
}

}  // namespace qmpol
