#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "odegeom/equiv.hpp"

namespace odegeom {

enum class CheckStatus { pass, fail, error };

std::string_view status_name(CheckStatus s);

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::error;
  /// NaN when the check could not be evaluated.
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string notes;
};

/// Ordered collection of check outcomes. A record passes iff its residual is
/// at most its tolerance; the status is derived, never set by hand.
class CheckReport {
 public:
  void add(std::string name, double max_residual, double tolerance, std::size_t samples, std::uint64_t seed,
           std::string notes = {});
  void add(std::string name, const EquivResult& r, const EquivOptions& opts, std::string notes = {});
  void add_error(std::string name, double tolerance, std::uint64_t seed, std::string notes);
  void merge(const CheckReport& other);

  const std::vector<CheckRecord>& records() const { return records_; }
  const CheckRecord* find(std::string_view name) const;
  bool all_pass() const;
  std::size_t failures() const;

  /// Records sorted by name.
  std::vector<CheckRecord> sorted() const;
  /// JSON array of records (sorted by name), two-space indented.
  std::string to_json() const;
  /// Aligned plain-text table (sorted by name).
  std::string to_table() const;

 private:
  std::vector<CheckRecord> records_;
};

}  // namespace odegeom
