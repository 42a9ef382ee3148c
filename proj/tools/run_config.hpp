// Copyright 2026 The adsst Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace adsst::cli {

struct ConfigField {
  std::string key, default_value, doc;
};
// Every recognized key with its default, in file order.
const std::vector<ConfigField>& config_fields();

// Flat key = value settings. Unknown keys are rejected; unset keys read as
// their defaults.
class RunConfig {
 public:
  RunConfig();

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  std::optional<double> number_or_auto(const std::string& key) const;
  bool flag(const std::string& key) const;

  // Parse errors carry the line number and key.
  void load(std::istream& in);
  void save(std::ostream& out) const;
  // SHA-256 of the canonical serialization, hex encoded.
  std::string hash() const;

  bool operator==(const RunConfig& o) const { return values_ == o.values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace adsst::cli
