#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmpol/cache.hpp"
#include "qmpol/scan.hpp"

using namespace qmpol;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qmpol-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scan_csv(const ClassNumberCache* cache) {
  clear_extension_memo();
  const BaseField Q = BaseField::rational();
  std::vector<FieldElement> Ds;
  for (const auto& D : primorial_discriminants(3)) Ds.push_back({Rat(D), 0});
  Ds.push_back({15, 0});
  std::ostringstream os;
  write_csv(os, Q, scan(Q, Ds, cache), false);
  return os.str();
}

}  // namespace

TEST_CASE("record round trip") {
  const CacheRecord r{CacheKind::pell, {Int(24)}, {Int(10), Int(2), Int(1)}, kCacheFormatVersion};
  const std::string line = encode_record(r);
  CHECK(line == R"({"v":1,"kind":"pell","key":["24"],"value":["10","2","1"]})");
  const auto back = decode_record(line);
  REQUIRE(back);
  CHECK(back->kind == CacheKind::pell);
  CHECK(back->value == r.value);
  CHECK(!decode_record(R"({"v":1,"kind":"pell","key":["24"],"val)"));
  CHECK(!decode_record(R"({"v":1,"kind":"nope","key":[],"value":["1"]})"));
  CHECK(!decode_record("garbage"));
}

TEST_CASE("cold then warm cache") {
  TempDir dir;
  const fs::path file = dir.path / "c.jsonl";
  {
    ClassNumberCache cache(file);
    CHECK(!cache.memory_only());
    CHECK(cache.h_imag(Int(-24)) == 2);
    CHECK(cache.misses() == 1);
  }
  CHECK(read_file(file) == "{\"v\":1,\"kind\":\"h_imag\",\"key\":[\"-24\"],\"value\":[\"2\"]}\n");
  ClassNumberCache warm(file);
  CHECK(warm.h_imag(Int(-24)) == 2);
  CHECK(warm.hits() == 1);
  CHECK(warm.misses() == 0);
}

TEST_CASE("corrupt lines and torn writes are skipped") {
  TempDir dir;
  const fs::path file = dir.path / "c.jsonl";
  {
    std::ofstream out(file);
    out << R"({"v":1,"kind":"h_imag","key":["-23"],"value":["3"]})" << '\n';
    out << "not json\n";
    out << R"({"v":1,"kind":"h_imag","key":["-15"],"val)";
  }
  ClassNumberCache cache(file);
  CHECK(cache.skipped_lines() == 2);
  CHECK(cache.h_imag(Int(-23)) == 3);
  CHECK(cache.hits() == 1);
  CHECK(cache.h_imag(Int(-15)) == 2);
}

TEST_CASE("version mismatch recomputes and rewrites") {
  TempDir dir;
  const fs::path file = dir.path / "c.jsonl";
  {
    std::ofstream out(file);
    out << R"({"v":0,"kind":"h_imag","key":["-23"],"value":["99"]})" << '\n';
  }
  ClassNumberCache cache(file);
  CHECK(cache.h_imag(Int(-23)) == 3);
  CHECK(cache.misses() == 1);
  CHECK(read_file(file).find("\"v\":0") == std::string::npos);
}

TEST_CASE("unwritable path falls back to memory") {
  TempDir dir;
  const fs::path blocker = dir.path / "file";
  std::ofstream(blocker) << "x";
  ClassNumberCache cache(blocker / "sub" / "c.jsonl");
  CHECK(cache.memory_only());
  CHECK(cache.h_imag(Int(-56)) == 4);
  CHECK(cache.h_imag(Int(-56)) == 4);
  CHECK(cache.hits() == 1);
}

TEST_CASE("real class numbers and Pell units through the cache") {
  ClassNumberCache cache;
  const auto h = cache.h_real(Int(60));
  CHECK(h.h_wide == 2);
  CHECK(h.h_narrow == 4);
  const auto u = cache.pell(Int(24));
  CHECK(u.x == 10);
  CHECK(u.norm_sign == 1);
  CHECK(cache.h_real(Int(60)).h_narrow == 4);
  CHECK(cache.misses() == 3);
}

TEST_CASE("primorial discriminants") {
  const auto D = primorial_discriminants(4);
  CHECK(D == std::vector<Int>{6, 210, 30030, 9699690});
}

TEST_CASE("scan output") {
  const std::string csv = scan_csv(nullptr);
  CHECK(csv ==
        "D,pi0,norm_disc,ratio,seconds\n"
        "6,1,6,0.000000,\n"
        "210,4,210,0.518521,\n"
        "30030,64,30030,0.806771,\n"
        "15,2,15,0.511916,\n");
}

TEST_CASE("cold and warm scans are byte-identical") {
  TempDir dir;
  const fs::path file = dir.path / "c.jsonl";
  std::string cold, warm;
  {
    ClassNumberCache cache(file);
    cold = scan_csv(&cache);
  }
  {
    ClassNumberCache cache(file);
    warm = scan_csv(&cache);
    CHECK(cache.misses() == 0);
  }
  CHECK(cold == warm);
}

TEST_CASE("skipped rows keep the scan going") {
  const BaseField F = make_field("Q(sqrt3)");
  std::ostringstream os;
  const auto rows = scan(F, {{35, 0}}, nullptr);
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].pi0);
  write_csv(os, F, rows, false);
  CHECK(os.str() == "D,pi0,norm_disc,ratio,seconds\n35,skipped,14700,,\n");
}

TEST_CASE("threads keep row order") {
  const BaseField Q = BaseField::rational();
  std::vector<FieldElement> Ds;
  for (long D : {6L, 10L, 14L, 15L, 21L, 22L}) Ds.push_back({Rat(D), 0});
  const auto one = scan(Q, Ds, nullptr, {1, false});
  const auto four = scan(Q, Ds, nullptr, {4, false});
  for (std::size_t i = 0; i < Ds.size(); ++i) CHECK(one[i].pi0 == four[i].pi0);
}
