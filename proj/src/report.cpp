#include "caplab/report.hpp"

#include <ostream>
#include <sstream>

namespace caplab {

void Report::pass(const std::string& key, const std::string& detail) {
  entries.push_back({key, Status::Pass, detail});
}

void Report::fail(const std::string& key, const std::string& detail) {
  entries.push_back({key, Status::Fail, detail});
}

void Report::info(const std::string& key, const std::string& detail) {
  entries.push_back({key, Status::Info, detail});
}

void Report::merge(const Report& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

bool Report::all_pass() const { return fail_count() == 0; }

size_t Report::fail_count() const {
  size_t n = 0;
  for (const auto& e : entries)
    if (e.status == Status::Fail) ++n;
  return n;
}

static const char* tag(Report::Status s) {
  switch (s) {
    case Report::Status::Pass: return "PASS";
    case Report::Status::Fail: return "FAIL";
    case Report::Status::Info: return "INFO";
  }
  return "?";
}

void Report::render_text(std::ostream& os) const {
  for (const auto& e : entries) {
    os << '[' << tag(e.status) << "] " << e.key;
    if (!e.detail.empty()) os << ": " << e.detail;
    os << '\n';
  }
}

void Report::render_machine(std::ostream& os) const {
  for (const auto& e : entries)
    os << "REC " << tag(e.status) << ' ' << e.key << ' ' << e.detail << '\n';
}

std::string Report::text() const {
  std::ostringstream os;
  render_text(os);
  return os.str();
}

}  // namespace caplab
