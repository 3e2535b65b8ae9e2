#include "vband/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "vband/error.hpp"

namespace vband {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid " + key + ": '" + s + "' is not a number");
  }
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  int v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid " + key + ": '" + s + "' is not an integer");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw ConfigError("invalid " + key + ": '" + s + "' is not a boolean");
}

std::optional<Window> to_window(const std::string& key, const std::string& s) {
  if (s == "none" || s.empty()) return std::nullopt;
  const auto parts = split_list(s);
  if (parts.size() != 2) throw ConfigError("invalid " + key + ": expected 'begin,end' or 'none'");
  return Window{to_double(key, parts[0]), to_double(key, parts[1])};
}

std::string window_text(const std::optional<Window>& w) {
  if (!w) return "none";
  return format_double(w->begin) + "," + format_double(w->end);
}

struct KeyHandler {
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
KeyHandler double_key(T ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*member = to_double(k, v);
          },
          [member](const ScenarioConfig& c) { return format_double(c.*member); }};
}

KeyHandler int_key(int ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*member = to_int(k, v);
          },
          [member](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

KeyHandler bool_key(bool ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*member = to_bool(k, v);
          },
          [member](const ScenarioConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

KeyHandler window_key(std::optional<Window> ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*member = to_window(k, v);
          },
          [member](const ScenarioConfig& c) { return window_text(c.*member); }};
}

// Ordered table; "scenario" is resolved separately before anything else.
const std::vector<std::pair<std::string, KeyHandler>>& handlers() {
  static const std::vector<std::pair<std::string, KeyHandler>> table = [] {
    std::vector<std::pair<std::string, KeyHandler>> t;
    t.emplace_back("scenario",
                   KeyHandler{[](ScenarioConfig& c, const std::string&, const std::string& v) {
                                c.scenario = v;
                              },
                              [](const ScenarioConfig& c) { return c.scenario; }});
    t.emplace_back("x_min", double_key(&ScenarioConfig::x_min));
    t.emplace_back("x_max", double_key(&ScenarioConfig::x_max));
    t.emplace_back("v_min", double_key(&ScenarioConfig::v_min));
    t.emplace_back("v_max", double_key(&ScenarioConfig::v_max));
    t.emplace_back("n_elements", int_key(&ScenarioConfig::n_elements));
    t.emplace_back("n_bands", int_key(&ScenarioConfig::n_bands));
    t.emplace_back("order", int_key(&ScenarioConfig::order));
    t.emplace_back("cfl", double_key(&ScenarioConfig::cfl));
    t.emplace_back("t_final", double_key(&ScenarioConfig::t_final));
    t.emplace_back("alpha", double_key(&ScenarioConfig::alpha));
    t.emplace_back("wave_number", double_key(&ScenarioConfig::wave_number));
    t.emplace_back("theta0", double_key(&ScenarioConfig::theta0));
    t.emplace_back("rho0", double_key(&ScenarioConfig::rho0));
    t.emplace_back("forcing", bool_key(&ScenarioConfig::forcing));
    t.emplace_back(
        "boundary",
        KeyHandler{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                     if (v == "periodic") {
                       c.boundary = BoundaryKind::kPeriodic;
                     } else if (v == "open") {
                       c.boundary = BoundaryKind::kOpen;
                     } else {
                       throw ConfigError("invalid " + k + ": expected periodic or open");
                     }
                   },
                   [](const ScenarioConfig& c) {
                     return std::string(c.boundary == BoundaryKind::kPeriodic ? "periodic"
                                                                              : "open");
                   }});
    t.emplace_back(
        "gauge",
        KeyHandler{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                     if (v == "zero_mean") {
                       c.gauge = Gauge::kZeroMean;
                     } else if (v == "left_anchor") {
                       c.gauge = Gauge::kLeftAnchor;
                     } else {
                       throw ConfigError("invalid " + k + ": expected zero_mean or left_anchor");
                     }
                   },
                   [](const ScenarioConfig& c) {
                     return std::string(c.gauge == Gauge::kZeroMean ? "zero_mean"
                                                                    : "left_anchor");
                   }});
    t.emplace_back("gauge_anchor", double_key(&ScenarioConfig::gauge_anchor));
    t.emplace_back(
        "snapshot_times",
        KeyHandler{[](ScenarioConfig& c, const std::string& k, const std::string& v) {
                     c.snapshot_times.clear();
                     if (v == "none") return;
                     for (const std::string& s : split_list(v)) {
                       c.snapshot_times.push_back(to_double(k, s));
                     }
                   },
                   [](const ScenarioConfig& c) {
                     if (c.snapshot_times.empty()) return std::string("none");
                     std::string out;
                     for (double t : c.snapshot_times) {
                       if (!out.empty()) out += ",";
                       out += format_double(t);
                     }
                     return out;
                   }});
    t.emplace_back("series_cadence", int_key(&ScenarioConfig::series_cadence));
    t.emplace_back("kappa_guard", double_key(&ScenarioConfig::kappa_guard));
    t.emplace_back("workers", int_key(&ScenarioConfig::workers));
    t.emplace_back("adaptive_dt", bool_key(&ScenarioConfig::adaptive_dt));
    t.emplace_back("snapshot_x_samples", int_key(&ScenarioConfig::snapshot_x_samples));
    t.emplace_back("snapshot_v_samples", int_key(&ScenarioConfig::snapshot_v_samples));
    t.emplace_back("output_dir",
                   KeyHandler{[](ScenarioConfig& c, const std::string&, const std::string& v) {
                                c.output_dir = v;
                              },
                              [](const ScenarioConfig& c) { return c.output_dir; }});
    t.emplace_back("decay_window", window_key(&ScenarioConfig::decay_window));
    t.emplace_back("growth_window", window_key(&ScenarioConfig::growth_window));
    t.emplace_back("peak_separation", double_key(&ScenarioConfig::peak_separation));
    return t;
  }();
  return table;
}

const KeyHandler& handler_for(const std::string& key, std::string_view where) {
  for (const auto& [name, h] : handlers()) {
    if (name == key) return h;
  }
  std::string msg = std::string(where) + ": unknown key '" + key + "'";
  if (auto hint = closest_match(key, config_keys())) msg += "; did you mean '" + *hint + "'?";
  throw ConfigError(msg);
}

struct Entry {
  std::string key;
  std::string value;
  std::string where;
};

struct ParsedFile {
  std::vector<Entry> top;
  std::map<std::string, std::vector<Entry>> sections;
};

ParsedFile parse_lines(std::string_view text, std::string_view source) {
  ParsedFile out;
  std::vector<Entry>* current = &out.top;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      std::vector<std::string> names;
      for (const Scenario& s : scenario_registry()) names.push_back(s.name);
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string msg = where + ": unknown section [" + name + "]";
        if (auto hint = closest_match(name, names)) msg += "; did you mean [" + *hint + "]?";
        throw ConfigError(msg);
      }
      current = &out.sections[name];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where};
    if (e.key.empty()) throw ConfigError(where + ": missing key");
    handler_for(e.key, where);
    if (current != &out.top && e.key == "scenario") {
      throw ConfigError(where + ": 'scenario' is only allowed at top level");
    }
    current->push_back(std::move(e));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, h] : handlers()) k.push_back(name);
    return k;
  }();
  return keys;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

ScenarioConfig parse_config_text(std::string_view text, const Overrides& overrides,
                                 std::string_view source) {
  const ParsedFile parsed = parse_lines(text, source);
  for (const auto& [key, value] : overrides) handler_for(key, "command line");

  std::string name = "weak_landau";
  for (const Entry& e : parsed.top) {
    if (e.key == "scenario") name = e.value;
  }
  for (const auto& [key, value] : overrides) {
    if (key == "scenario") name = value;
  }
  ScenarioConfig config = find_scenario(name).defaults;

  auto apply = [&](const std::string& key, const std::string& value) {
    if (key == "scenario") return;
    handler_for(key, "").set(config, key, value);
  };
  for (const Entry& e : parsed.top) apply(e.key, e.value);
  if (auto it = parsed.sections.find(name); it != parsed.sections.end()) {
    for (const Entry& e : it->second) apply(e.key, e.value);
  }
  for (const auto& [key, value] : overrides) apply(key, value);
  validate(config);
  return config;
}

ScenarioConfig parse_config(const std::optional<std::filesystem::path>& file,
                            const Overrides& overrides) {
  if (!file) return parse_config_text("", overrides);
  std::ifstream in(*file);
  if (!in) throw ConfigError("cannot read config file " + file->string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides, file->string());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, h] : handlers()) out.emplace_back(name, h.get(config));
  return out;
}

}  // namespace vband
