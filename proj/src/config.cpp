#include "twinbeam/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "twinbeam/constants.hpp"
#include "twinbeam/errors.hpp"

namespace twinbeam {

namespace {

enum class Dim { none, length, time, angular_frequency, wavenumber, angle, gvd, um2, per_um2 };

struct Unit {
  std::string_view name;
  double scale;
  double divisor = 0.0;  // v * 1e-9 is not correctly rounded, v / 1e9 is

  double apply(double v) const { return divisor != 0.0 ? v / divisor : v * scale; }
};

// The first unit of each dimension is the one used when echoing.
const std::vector<Unit>& units_of(Dim d) {
  static const std::map<Dim, std::vector<Unit>> table{
      {Dim::none, {}},
      {Dim::length, {{"m", 1.0}, {"cm", 1e-2, 1e2}, {"mm", 1e-3, 1e3}, {"um", 1e-6, 1e6}, {"nm", 1e-9, 1e9}}},
      {Dim::time, {{"s", 1.0}, {"ps", 1e-12, 1e12}, {"fs", 1e-15, 1e15}}},
      {Dim::angular_frequency, {{"rad/s", 1.0}, {"rad/ps", 1e12}, {"rad/fs", 1e15}}},
      {Dim::wavenumber, {{"rad/m", 1.0}, {"rad/mm", 1e3}, {"rad/um", 1e6}}},
      {Dim::angle, {{"rad", 1.0}, {"mrad", 1e-3, 1e3}, {"deg", kPi / 180.0}}},
      {Dim::gvd, {{"s2/m", 1.0}, {"fs2/mm", 1e-27, 1e27}, {"fs2/m", 1e-30, 1e30}}},
      {Dim::um2, {{"um2", 1.0}}},
      {Dim::per_um2, {{"um-2", 1.0}}},
  };
  return table.at(d);
}

std::string unit_list(Dim d) {
  std::string out;
  for (const auto& u : units_of(d)) {
    if (!out.empty()) out += ", ";
    out += u.name;
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

struct Context {
  std::string section;
  std::string key;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("[" + section + "] " + key + ": " + what, line);
  }
};

// Numbers followed by an optional unit token, converted to SI.
std::vector<double> parse_quantities(const std::string& value, Dim dim, const Context& ctx) {
  auto toks = tokens(value);
  if (toks.empty()) ctx.fail("missing value");
  std::optional<Unit> scale;
  if (!to_number(toks.back())) {
    const std::string unit = toks.back();
    toks.pop_back();
    if (dim == Dim::none) ctx.fail("dimensionless field takes no unit (got '" + unit + "')");
    for (const auto& u : units_of(dim)) {
      if (u.name == unit) scale = u;
    }
    if (!scale) ctx.fail("unknown unit '" + unit + "' (expected one of " + unit_list(dim) + ")");
  } else if (dim != Dim::none) {
    ctx.fail("missing unit (expected one of " + unit_list(dim) + ")");
  }
  std::vector<double> out;
  for (const auto& t : toks) {
    const auto v = to_number(t);
    if (!v) ctx.fail("not a number: '" + t + "'");
    out.push_back(scale ? scale->apply(*v) : *v);
  }
  return out;
}

double parse_scalar(const std::string& value, Dim dim, const Context& ctx) {
  const auto v = parse_quantities(value, dim, ctx);
  if (v.size() != 1) ctx.fail("expected a single value");
  return v[0];
}

std::string echo_quantities(const std::vector<double>& v, Dim dim) {
  std::string out;
  for (double x : v) {
    if (!out.empty()) out += ' ';
    out += format_number(x);
  }
  if (dim != Dim::none) {
    if (!out.empty()) out += ' ';
    out += units_of(dim).front().name;
  }
  return out;
}

bool parse_bool(const std::string& value, const Context& ctx) {
  if (value == "true") return true;
  if (value == "false") return false;
  ctx.fail("expected true or false");
}

template <class E>
E parse_choice(const std::string& value, const std::vector<std::pair<std::string_view, E>>& opts,
               const Context& ctx) {
  std::string names;
  for (const auto& [name, e] : opts) {
    if (name == value) return e;
    names += names.empty() ? "" : ", ";
    names += name;
  }
  ctx.fail("unknown value '" + value + "' (expected one of " + names + ")");
}

template <class E>
std::string echo_choice(E e, const std::vector<std::pair<std::string_view, E>>& opts) {
  for (const auto& [name, v] : opts) {
    if (v == e) return std::string(name);
  }
  return "?";
}

const std::vector<std::pair<std::string_view, Scenario>> kScenarios{
    {"fig2", Scenario::fig2}, {"fig3", Scenario::fig3}, {"fig4", Scenario::fig4},
    {"sweep", Scenario::sweep}};
const std::vector<std::pair<std::string_view, SincArgument>> kSinc{
    {"half", SincArgument::half}, {"full", SincArgument::full}};
const std::vector<std::pair<std::string_view, DefocusModel>> kDefocus{
    {"literal", DefocusModel::literal}, {"chirp", DefocusModel::chirp}};
const std::vector<std::pair<std::string_view, Reduction>> kReduction{
    {"radial", Reduction::radial}, {"cartesian", Reduction::cartesian}};

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&, const Context&)> set;
  std::function<std::string(const RunConfig&)> get;
};

using Getter = std::function<double&(RunConfig&)>;

Field scalar(std::string section, std::string key, Dim dim,
             std::function<double&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [dim, ref](RunConfig& c, const std::string& v, const Context& ctx) {
            ref(c) = parse_scalar(v, dim, ctx);
          },
          [dim, ref](const RunConfig& c) {
            return echo_quantities({ref(const_cast<RunConfig&>(c))}, dim);
          }};
}

Field optional_scalar(std::string section, std::string key, Dim dim,
                      std::function<std::optional<double>&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [dim, ref](RunConfig& c, const std::string& v, const Context& ctx) {
            if (v == "none") {
              ref(c).reset();
            } else {
              ref(c) = parse_scalar(v, dim, ctx);
            }
          },
          [dim, ref](const RunConfig& c) -> std::string {
            const auto& o = ref(const_cast<RunConfig&>(c));
            return o ? echo_quantities({*o}, dim) : "none";
          }};
}

Field list(std::string section, std::string key, Dim dim, bool allow_empty,
           std::function<std::vector<double>&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [dim, ref, allow_empty](RunConfig& c, const std::string& v, const Context& ctx) {
            if (allow_empty && (v == "none" || (dim != Dim::none && trim(v) == units_of(dim).front().name))) {
              ref(c).clear();
              return;
            }
            ref(c) = parse_quantities(v, dim, ctx);
          },
          [dim, ref, allow_empty](const RunConfig& c) -> std::string {
            const auto& l = ref(const_cast<RunConfig&>(c));
            if (l.empty() && allow_empty) return "none";
            return echo_quantities(l, dim);
          }};
}

Field count(std::string section, std::string key, std::function<std::size_t&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [ref](RunConfig& c, const std::string& v, const Context& ctx) {
            std::size_t n = 0;
            const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
            if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
              ctx.fail("expected a non-negative integer");
            }
            ref(c) = n;
          },
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
}

Field boolean(std::string section, std::string key, std::function<bool&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [ref](RunConfig& c, const std::string& v, const Context& ctx) {
            ref(c) = parse_bool(v, ctx);
          },
          [ref](const RunConfig& c) -> std::string {
            return ref(const_cast<RunConfig&>(c)) ? "true" : "false";
          }};
}

template <class E>
Field choice(std::string section, std::string key,
             const std::vector<std::pair<std::string_view, E>>& opts,
             std::function<E&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [&opts, ref](RunConfig& c, const std::string& v, const Context& ctx) {
            ref(c) = parse_choice(v, opts, ctx);
          },
          [&opts, ref](const RunConfig& c) {
            return echo_choice(ref(const_cast<RunConfig&>(c)), opts);
          }};
}

void crystal_fields(std::vector<Field>& f, const std::string& sec,
                    CrystalSpec ScenarioConfig::*member) {
  f.push_back(scalar(sec, "length", Dim::length,
                     [member](RunConfig& c) -> double& { return (c.physics.*member).length; }));
  f.push_back(scalar(sec, "gain", Dim::none,
                     [member](RunConfig& c) -> double& { return (c.physics.*member).gain; }));
  f.push_back({sec, "pump_angle",
               [member](RunConfig& c, const std::string& v, const Context& ctx) {
                 auto& mode = (c.physics.*member).pump_mode;
                 if (v == "tuned") {
                   mode = TunedPump{};
                 } else {
                   mode = AngleTunedPump{parse_scalar(v, Dim::angle, ctx)};
                 }
               },
               [member](const RunConfig& c) -> std::string {
                 const auto& mode = (c.physics.*member).pump_mode;
                 if (std::holds_alternative<TunedPump>(mode)) return "tuned";
                 return echo_quantities({std::get<AngleTunedPump>(mode).theta}, Dim::angle);
               }});
  f.push_back(scalar(sec, "mismatch_offset", Dim::none, [member](RunConfig& c) -> double& {
    return (c.physics.*member).mismatch_offset;
  }));
}

void sellmeier_fields(std::vector<Field>& f, const std::string& prefix,
                      SellmeierTerms ScenarioConfig::*member) {
  const std::string sec = "dispersion";
  f.push_back(scalar(sec, prefix + "_a", Dim::none,
                     [member](RunConfig& c) -> double& { return (c.physics.*member).a; }));
  f.push_back(list(sec, prefix + "_b", Dim::none, true,
                   [member](RunConfig& c) -> std::vector<double>& {
                     return (c.physics.*member).b;
                   }));
  f.push_back(list(sec, prefix + "_c", Dim::um2, true,
                   [member](RunConfig& c) -> std::vector<double>& {
                     return (c.physics.*member).c;
                   }));
  f.push_back(scalar(sec, prefix + "_d", Dim::per_um2,
                     [member](RunConfig& c) -> double& { return (c.physics.*member).d; }));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(choice<Scenario>("run", "scenario", kScenarios,
                                 [](RunConfig& c) -> Scenario& { return c.scenario; }));
    f.push_back({"run", "output",
                 [](RunConfig& c, const std::string& v, const Context& ctx) {
                   if (v.empty()) ctx.fail("empty output path");
                   c.output_dir = v;
                 },
                 [](const RunConfig& c) { return c.output_dir; }});
    f.push_back({"run", "workers",
                 [](RunConfig& c, const std::string& v, const Context& ctx) {
                   unsigned n = 0;
                   const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
                   if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
                     ctx.fail("expected a non-negative integer");
                   }
                   c.physics.workers = n;
                 },
                 [](const RunConfig& c) { return std::to_string(c.physics.workers); }});

    sellmeier_fields(f, "ordinary", &ScenarioConfig::ordinary);
    sellmeier_fields(f, "extraordinary", &ScenarioConfig::extraordinary);
    f.push_back(scalar("dispersion", "lambda_min", Dim::length,
                       [](RunConfig& c) -> double& { return c.physics.lambda_min; }));
    f.push_back(scalar("dispersion", "lambda_max", Dim::length,
                       [](RunConfig& c) -> double& { return c.physics.lambda_max; }));
    f.push_back(optional_scalar("dispersion", "gvd_override", Dim::gvd,
                                [](RunConfig& c) -> std::optional<double>& {
                                  return c.physics.gvd_override;
                                }));

    f.push_back(scalar("pump", "wavelength", Dim::length,
                       [](RunConfig& c) -> double& { return c.physics.pump_wavelength; }));

    crystal_fields(f, "pdc_crystal", &ScenarioConfig::pdc);
    crystal_fields(f, "sfg_crystal", &ScenarioConfig::sfg);
    f.push_back(choice<SincArgument>("sfg_crystal", "sinc_argument", kSinc,
                                     [](RunConfig& c) -> SincArgument& {
                                       return c.physics.sfg_sinc;
                                     }));

    f.push_back({"transfer", "window",
                 [](RunConfig& c, const std::string& v, const Context& ctx) {
                   if (v == "none") {
                     c.physics.use_window = false;
                   } else {
                     c.physics.use_window = true;
                     c.physics.window.full_width = parse_scalar(v, Dim::angular_frequency, ctx);
                   }
                 },
                 [](const RunConfig& c) -> std::string {
                   return c.physics.use_window
                              ? echo_quantities({c.physics.window.full_width},
                                                Dim::angular_frequency)
                              : "none";
                 }});
    f.push_back(scalar("transfer", "window_edge", Dim::angular_frequency,
                       [](RunConfig& c) -> double& { return c.physics.window.edge_width; }));
    f.push_back(scalar("transfer", "gap_q_min", Dim::wavenumber,
                       [](RunConfig& c) -> double& { return c.physics.gap_q_min; }));
    f.push_back(scalar("transfer", "amplitude_transmission", Dim::none,
                       [](RunConfig& c) -> double& { return c.physics.amplitude_transmission; }));
    f.push_back(scalar("transfer", "defocus", Dim::length,
                       [](RunConfig& c) -> double& { return c.physics.defocus; }));
    f.push_back(list("transfer", "defocus_list", Dim::length, false,
                     [](RunConfig& c) -> std::vector<double>& {
                       return c.physics.defocus_list;
                     }));
    f.push_back(choice<DefocusModel>("transfer", "defocus_model", kDefocus,
                                     [](RunConfig& c) -> DefocusModel& {
                                       return c.physics.defocus_model;
                                     }));
    f.push_back(boolean("transfer", "use_pinhole",
                        [](RunConfig& c) -> bool& { return c.physics.sweep_uses_pinhole; }));

    f.push_back(scalar("pinhole", "diameter", Dim::length,
                       [](RunConfig& c) -> double& { return c.physics.pinhole_diameter; }));
    f.push_back(scalar("pinhole", "distance", Dim::length,
                       [](RunConfig& c) -> double& { return c.physics.pinhole_distance; }));
    f.push_back(optional_scalar("pinhole", "half_angle", Dim::angle,
                                [](RunConfig& c) -> std::optional<double>& {
                                  return c.physics.pinhole_half_angle;
                                }));

    f.push_back(scalar("sweep", "delay_start", Dim::time,
                       [](RunConfig& c) -> double& { return c.physics.delay_start; }));
    f.push_back(scalar("sweep", "delay_stop", Dim::time,
                       [](RunConfig& c) -> double& { return c.physics.delay_stop; }));
    f.push_back(scalar("sweep", "delay_step", Dim::time,
                       [](RunConfig& c) -> double& { return c.physics.delay_step; }));
    f.push_back(scalar("sweep", "baseline", Dim::none,
                       [](RunConfig& c) -> double& { return c.physics.baseline; }));

    f.push_back(scalar("grid", "q_max", Dim::wavenumber,
                       [](RunConfig& c) -> double& { return c.physics.grid.q_max; }));
    f.push_back(count("grid", "n_q", [](RunConfig& c) -> std::size_t& {
      return c.physics.grid.n_q;
    }));
    f.push_back(scalar("grid", "omega_max", Dim::angular_frequency,
                       [](RunConfig& c) -> double& { return c.physics.grid.omega_max; }));
    f.push_back(count("grid", "n_omega", [](RunConfig& c) -> std::size_t& {
      return c.physics.grid.n_omega;
    }));
    f.push_back(choice<Reduction>("grid", "reduction", kReduction,
                                  [](RunConfig& c) -> Reduction& {
                                    return c.physics.grid.reduction;
                                  }));
    return f;
  }();
  return table;
}

std::vector<std::string> section_names() {
  std::vector<std::string> out;
  for (const auto& f : fields()) {
    if (std::find(out.begin(), out.end(), f.section) == out.end()) out.push_back(f.section);
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string unknown_key_hint(const std::string& section, const std::string& key) {
  // 'pinhole_radius' -> the [pinhole] section.
  for (const auto& name : section_names()) {
    if (name != section && key.rfind(name + "_", 0) == 0) {
      std::string keys;
      for (const auto& f : fields()) {
        if (f.section == name) keys += (keys.empty() ? "" : ", ") + f.key;
      }
      return "; " + name + " settings belong in section [" + name + "] (keys: " + keys + ")";
    }
  }
  const Field* best = nullptr;
  std::size_t best_d = 4;
  for (const auto& f : fields()) {
    const std::size_t d = edit_distance(key, f.key);
    if (d < best_d) best_d = d, best = &f;
  }
  if (best) return "; did you mean '" + best->key + "' in section [" + best->section + "]?";
  return "";
}

void validate(const RunConfig& c) {
  try {
    const ScenarioConfig& p = c.physics;
    const auto medium = p.medium();
    p.grid.validate(*medium);
    Crystal(medium, p.pdc);
    Crystal(medium, p.sfg);
    medium->k_signal(0.0);
    p.base_transfer().validate();
    if (p.pinhole_half_angle || c.scenario == Scenario::fig3 || p.sweep_uses_pinhole) {
      TransferSpec t;
      t.pinhole_half_angle = p.pinhole_angle();
      t.validate();
    }
    if (!(p.baseline >= 0.0)) throw PreconditionError("baseline must be non-negative");
    if (p.delays().size() < 8) throw PreconditionError("delay sweep needs at least 8 points");
    if (p.defocus_list.empty()) throw PreconditionError("defocus_list must not be empty");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what(), 0);
  }
}

}  // namespace

std::string_view scenario_name(Scenario s) {
  for (const auto& [name, v] : kScenarios) {
    if (v == s) return name;
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  for (const auto& [n, v] : kScenarios) {
    if (n == name) return v;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "' (fig2, fig3, fig4, sweep)", 0);
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  const auto sections = section_names();
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string raw(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
        throw ConfigError("unknown section [" + section + "]", line_no);
      }
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) throw ConfigError("missing key before '='", line_no);
      if (section.empty()) {
        throw ConfigError("key '" + key + "' appears before any [section]", line_no);
      }
      const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) {
        return f.section == section && f.key == key;
      });
      if (it == fields().end()) {
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]" +
                              unknown_key_hint(section, key),
                          line_no);
      }
      if (!seen.insert({section, key}).second) {
        throw ConfigError("duplicate key '" + key + "' in section [" + section + "]", line_no);
      }
      it->set(cfg, value, Context{section, key, line_no});
    }
    if (end == text.size()) break;
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const RunConfig& config) {
  std::string out = "# effective configuration (SI units)\n";
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      section = f.section;
      out += "\n[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace twinbeam
