#pragma once

/// Minimal TOML-style settings: `key = value` lines, `#` comments and
/// `[section]` headers that prefix keys as `section.key`. Values may be
/// quoted. Lists are comma separated; point lists separate points by `;`.

#include "vv/core.hpp"

#include <map>
#include <string>
#include <vector>

namespace vv {

class KeyValue {
public:
  KeyValue() = default;
  explicit KeyValue(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  static KeyValue parse(const std::string& text);
  static KeyValue load(const std::string& path);

  bool has(const std::string& k) const { return kv_.count(k) > 0; }
  void set(const std::string& k, const std::string& v) { kv_[k] = v; }

  std::string getString(const std::string& k) const;
  std::string getString(const std::string& k, const std::string& dflt) const;
  double getDouble(const std::string& k) const;
  double getDouble(const std::string& k, double dflt) const;
  long getInt(const std::string& k) const;
  long getInt(const std::string& k, long dflt) const;
  bool getBool(const std::string& k, bool dflt) const;
  std::vector<double> getDoubles(const std::string& k) const;
  std::vector<double> getDoubles(const std::string& k, std::vector<double> dflt) const;
  Vec3 getVec(const std::string& k, const Vec3& dflt) const;
  std::vector<Vec3> getPoints(const std::string& k) const;

  /// Keys below `prefix.`, with the prefix stripped.
  std::map<std::string, std::string> section(const std::string& prefix) const;
  const std::map<std::string, std::string>& raw() const { return kv_; }
  std::string serialize() const;

private:
  std::map<std::string, std::string> kv_;
};

std::vector<std::string> splitTrim(const std::string& s, char sep);

}  // namespace vv
