#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace caplab {

/// Check outcome accumulator with a stable line order, so equal runs render
/// byte-identically.
struct Report {
  enum class Status { Pass, Fail, Info };
  struct Entry {
    std::string key;
    Status status;
    std::string detail;
  };

  std::vector<Entry> entries;

  void pass(const std::string& key, const std::string& detail = "");
  void fail(const std::string& key, const std::string& detail = "");
  void info(const std::string& key, const std::string& detail = "");
  void merge(const Report& other);

  bool all_pass() const;
  size_t fail_count() const;

  // "[PASS] key: detail" lines
  void render_text(std::ostream& os) const;
  // "REC <status> <key> <detail>" lines, one record per entry
  void render_machine(std::ostream& os) const;
  std::string text() const;
};

}  // namespace caplab
