#include "odegeom/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace odegeom {

namespace {

template <typename... Args>
std::string printf_string(const char* fmt, Args... args) {
  int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string s(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(s.data(), s.size(), fmt, args...);
  s.resize(static_cast<std::size_t>(n));
  return s;
}

}  // namespace

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::error: return "error";
  }
  return "error";
}

void CheckReport::add(std::string name, double max_residual, double tolerance, std::size_t samples,
                      std::uint64_t seed, std::string notes) {
  CheckRecord r{std::move(name), CheckStatus::fail, max_residual, tolerance, samples, seed, std::move(notes)};
  if (std::isnan(max_residual))
    r.status = CheckStatus::error;
  else if (max_residual <= tolerance)
    r.status = CheckStatus::pass;
  records_.push_back(std::move(r));
}

void CheckReport::add(std::string name, const EquivResult& r, const EquivOptions& opts, std::string notes) {
  if (!r.pass && !r.worst_point.empty()) {
    if (!notes.empty()) notes += "; ";
    notes += "worst at " + r.worst_point;
  }
  add(std::move(name), r.max_residual, opts.tol, r.samples, opts.seed, std::move(notes));
}

void CheckReport::add_error(std::string name, double tolerance, std::uint64_t seed, std::string notes) {
  records_.push_back(
      CheckRecord{std::move(name), CheckStatus::error, std::nan(""), tolerance, 0, seed, std::move(notes)});
}

void CheckReport::merge(const CheckReport& other) {
  records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

const CheckRecord* CheckReport::find(std::string_view name) const {
  for (const auto& r : records_)
    if (r.name == name) return &r;
  return nullptr;
}

bool CheckReport::all_pass() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.status != CheckStatus::pass; }));
}

std::vector<CheckRecord> CheckReport::sorted() const {
  std::vector<CheckRecord> out = records_;
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

std::string CheckReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : sorted()) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["status"] = status_name(r.status);
    if (std::isfinite(r.max_residual))
      j["max_residual"] = r.max_residual;
    else
      j["max_residual"] = nullptr;
    j["tolerance"] = r.tolerance;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["notes"] = r.notes;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string CheckReport::to_table() const {
  auto rows = sorted();
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  const int wi = static_cast<int>(w);
  std::string out = printf_string("%-*s  %-6s  %12s  %9s  %7s  %s\n", wi, "check", "status", "max_residual",
                                  "tolerance", "samples", "notes");
  for (const auto& r : rows) {
    std::string res = std::isfinite(r.max_residual) ? printf_string("%.3e", r.max_residual) : "-";
    out += printf_string("%-*s  %-6s  %12s  %9.1e  %7zu  %s\n", wi, r.name.c_str(),
                         std::string(status_name(r.status)).c_str(), res.c_str(), r.tolerance, r.samples,
                         r.notes.c_str());
  }
  out += printf_string("%zu checks, %zu failed\n", rows.size(), failures());
  return out;
}

}  // namespace odegeom
