#include "vv/keyvalue.hpp"

#include <fstream>
#include <sstream>

namespace vv {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double toNum(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(s.substr(used)) != "") throw Error("key '" + key + "': not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<std::string> splitTrim(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

KeyValue KeyValue::parse(const std::string& text) {
  KeyValue kv;
  std::istringstream in(text);
  std::string line, section;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error("line " + std::to_string(lineNo) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("line " + std::to_string(lineNo) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) throw Error("line " + std::to_string(lineNo) + ": empty key");
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
    if (val.size() >= 2 && val.front() == '[' && val.back() == ']') val = val.substr(1, val.size() - 2);
    kv.kv_[section.empty() ? key : section + "." + key] = val;
  }
  return kv;
}

KeyValue KeyValue::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string KeyValue::getString(const std::string& k) const {
  auto it = kv_.find(k);
  if (it == kv_.end()) throw Error("missing key '" + k + "'");
  return it->second;
}

std::string KeyValue::getString(const std::string& k, const std::string& dflt) const {
  return has(k) ? getString(k) : dflt;
}

double KeyValue::getDouble(const std::string& k) const { return toNum(k, getString(k)); }
double KeyValue::getDouble(const std::string& k, double dflt) const { return has(k) ? getDouble(k) : dflt; }

long KeyValue::getInt(const std::string& k) const {
  double v = getDouble(k);
  if (v != std::floor(v)) throw Error("key '" + k + "': expected an integer");
  return long(v);
}
long KeyValue::getInt(const std::string& k, long dflt) const { return has(k) ? getInt(k) : dflt; }

bool KeyValue::getBool(const std::string& k, bool dflt) const {
  if (!has(k)) return dflt;
  std::string v = getString(k);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("key '" + k + "': expected a boolean");
}

std::vector<double> KeyValue::getDoubles(const std::string& k) const {
  std::vector<double> out;
  for (auto& s : splitTrim(getString(k), ',')) out.push_back(toNum(k, s));
  return out;
}

std::vector<double> KeyValue::getDoubles(const std::string& k, std::vector<double> dflt) const {
  return has(k) ? getDoubles(k) : dflt;
}

Vec3 KeyValue::getVec(const std::string& k, const Vec3& dflt) const {
  if (!has(k)) return dflt;
  auto v = getDoubles(k);
  if (v.size() < 2 || v.size() > 3) throw Error("key '" + k + "': expected 2 or 3 components");
  return Vec3(v[0], v[1], v.size() == 3 ? v[2] : 0.0);
}

std::vector<Vec3> KeyValue::getPoints(const std::string& k) const {
  std::vector<Vec3> out;
  for (auto& p : splitTrim(getString(k), ';')) {
    KeyValue tmp;
    tmp.set("p", p);
    out.push_back(tmp.getVec("p", Vec3::Zero()));
  }
  if (out.empty()) throw Error("key '" + k + "': empty point list");
  return out;
}

std::map<std::string, std::string> KeyValue::section(const std::string& prefix) const {
  std::map<std::string, std::string> out;
  std::string p = prefix + ".";
  for (auto& [k, v] : kv_)
    if (k.compare(0, p.size(), p) == 0) out[k.substr(p.size())] = v;
  return out;
}

std::string KeyValue::serialize() const {
  std::string out;
  for (auto& [k, v] : kv_) out += k + " = \"" + v + "\"\n";
  return out;
}

}  // namespace vv
