#include "dirac/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dirac/error.hpp"

namespace dirac::harness {

using nlohmann::json;

namespace {

std::string escape_token(std::string_view key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

/// Read access to one JSON object of the closed schema.
class Section {
 public:
  Section(const json& node, std::string pointer, std::set<std::string> allowed)
      : node_(node), pointer_(std::move(pointer)) {
    if (!node_.is_object()) {
      throw SchemaError(where(), "expected an object");
    }
    for (const auto& [key, value] : node_.items()) {
      if (!allowed.contains(key)) {
        throw SchemaError(child(key), "unknown key '" + key + "'");
      }
    }
  }

  std::string where() const { return pointer_.empty() ? "/" : pointer_; }
  std::string child(std::string_view key) const { return pointer_ + "/" + escape_token(key); }
  bool has(const std::string& key) const { return node_.contains(key); }
  const json& at(const std::string& key) const { return node_.at(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (!fallback) {
        throw SchemaError(child(key), "required number is missing");
      }
      return *fallback;
    }
    const json& v = at(key);
    if (!v.is_number()) {
      throw SchemaError(child(key), "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      throw SchemaError(child(key), "expected a finite number");
    }
    return d;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw SchemaError(child(key), "expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (!fallback) {
        throw SchemaError(child(key), "required string is missing");
      }
      return *fallback;
    }
    const json& v = at(key);
    if (!v.is_string()) {
      throw SchemaError(child(key), "expected a string");
    }
    return v.get<std::string>();
  }

 private:
  const json& node_;
  std::string pointer_;
};

expr::Expr parse_expression(const std::string& text, const std::string& pointer) {
  try {
    return expr::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(e.reason(), e.offset(), e.expected(), pointer + ": " + e.what());
  }
}

EnergyBranch parse_branch(const std::string& s, const std::string& pointer) {
  if (s == "positive") {
    return EnergyBranch::positive;
  }
  if (s == "negative") {
    return EnergyBranch::negative;
  }
  throw SchemaError(pointer, "expected \"positive\" or \"negative\"");
}

std::string_view branch_name(EnergyBranch b) {
  return b == EnergyBranch::positive ? "positive" : "negative";
}

GeneratorConfig read_generator(const json& node) {
  const Section s(node, "/generator", {"g", "m", "x0", "f"});
  GeneratorConfig g;
  g.g_text = s.text("g");
  g.g = parse_expression(g.g_text, s.child("g"));
  g.m = s.number("m", 1.0);
  if (!(g.m > 0.0)) {
    throw SchemaError(s.child("m"), "mass must be > 0");
  }
  if (s.has("x0")) {
    g.x0 = s.number("x0");
  }
  if (s.has("f")) {
    g.f_text = s.text("f");
    g.f = parse_expression(*g.f_text, s.child("f"));
  }
  return g;
}

FreeConfig read_free(const json& node) {
  const Section s(node, "/free", {"packet", "modes"});
  if (s.has("packet") == s.has("modes")) {
    throw SchemaError(s.where(), "exactly one of 'packet' or 'modes' is required");
  }
  FreeConfig f;
  if (s.has("packet")) {
    const Section p(s.at("packet"), "/free/packet",
                    {"p_center", "width", "n_modes", "p_span", "branch"});
    PacketConfig pc;
    pc.p_center = p.number("p_center", 0.0);
    pc.width = p.number("width", 1.0);
    pc.n_modes = p.count("n_modes", 64);
    pc.p_span = p.number("p_span", 6.0);
    pc.branch = parse_branch(p.text("branch", "positive"), p.child("branch"));
    if (!(pc.width > 0.0)) {
      throw SchemaError(p.child("width"), "must be > 0");
    }
    if (!(pc.p_span > 0.0)) {
      throw SchemaError(p.child("p_span"), "must be > 0");
    }
    if (pc.n_modes == 0 || (pc.n_modes > 1 && pc.n_modes < 8)) {
      throw SchemaError(p.child("n_modes"), "must be 1 or at least 8");
    }
    f.packet = pc;
    return f;
  }
  const json& modes = s.at("modes");
  if (!modes.is_array() || modes.empty()) {
    throw SchemaError("/free/modes", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string ptr = "/free/modes/" + std::to_string(i);
    const Section m(modes[i], ptr, {"p", "branch", "amplitude"});
    PlaneWaveMode mode;
    mode.p = m.number("p");
    mode.branch = parse_branch(m.text("branch", "positive"), m.child("branch"));
    if (m.has("amplitude")) {
      const json& a = m.at("amplitude");
      if (a.is_number()) {
        mode.amplitude = m.number("amplitude");
      } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
        mode.amplitude = {a[0].get<double>(), a[1].get<double>()};
        if (!std::isfinite(mode.amplitude.real()) || !std::isfinite(mode.amplitude.imag())) {
          throw SchemaError(m.child("amplitude"), "expected finite numbers");
        }
      } else {
        throw SchemaError(m.child("amplitude"), "expected a number or [re, im]");
      }
    }
    f.modes.push_back(mode);
  }
  return f;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string_view to_string(FieldFormat f) noexcept { return f == FieldFormat::csv ? "csv" : "jsonl"; }

ScenarioConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  const Section root(doc, "", {"generator", "free", "grid", "time", "method", "output"});
  ScenarioConfig c;
  if (!root.has("generator")) {
    throw SchemaError("/generator", "required section is missing");
  }
  if (!root.has("free")) {
    throw SchemaError("/free", "required section is missing");
  }
  c.generator = read_generator(root.at("generator"));
  c.free = read_free(root.at("free"));

  if (root.has("grid")) {
    const Section s(root.at("grid"), "/grid", {"x_min", "x_max", "n"});
    c.grid.x_min = s.number("x_min", c.grid.x_min);
    c.grid.x_max = s.number("x_max", c.grid.x_max);
    c.grid.n = s.count("n", c.grid.n);
  }
  if (!(c.grid.x_min < c.grid.x_max)) {
    throw SchemaError("/grid", "x_min must be < x_max");
  }
  if (c.grid.n < 8 || !is_power_of_two(c.grid.n)) {
    throw SchemaError("/grid/n", "must be a power of two >= 8");
  }

  if (root.has("time")) {
    const Section s(root.at("time"), "/time", {"t0", "t_end", "dt"});
    c.time.t0 = s.number("t0", c.time.t0);
    c.time.t_end = s.number("t_end", c.time.t_end);
    c.time.dt = s.number("dt", c.time.dt);
  }
  if (!(c.time.dt > 0.0)) {
    throw SchemaError("/time/dt", "must be > 0");
  }
  if (c.time.t_end < c.time.t0) {
    throw SchemaError("/time/t_end", "must be >= t0");
  }
  const double steps = (c.time.t_end - c.time.t0) / c.time.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9) {
    throw SchemaError("/time/dt", "(t_end - t0)/dt must be an integer");
  }

  if (root.has("method")) {
    if (!root.at("method").is_string()) {
      throw SchemaError("/method", "expected a string");
    }
    try {
      c.method = parse_method(root.at("method").get<std::string>());
    } catch (const ConfigError& e) {
      throw SchemaError("/method", e.what());
    }
  }

  if (root.has("output")) {
    const Section s(root.at("output"), "/output", {"dir", "format", "checkpoints"});
    c.output.dir = s.text("dir", c.output.dir.string());
    const std::string fmt = s.text("format", "csv");
    if (fmt == "csv") {
      c.output.format = FieldFormat::csv;
    } else if (fmt == "jsonl") {
      c.output.format = FieldFormat::jsonl;
    } else {
      throw SchemaError(s.child("format"), "expected \"csv\" or \"jsonl\"");
    }
    c.output.checkpoints = s.count("checkpoints", c.output.checkpoints);
  }
  const auto step_count = static_cast<std::size_t>(std::llround(steps));
  if (c.output.checkpoints == 0 || (step_count > 0 && c.output.checkpoints > step_count)) {
    throw SchemaError("/output/checkpoints", "must be between 1 and the number of time steps");
  }

  // Semantic validation of the generator and gauge on the declared domain.
  std::optional<GeneratorSpec> spec;
  try {
    spec.emplace(c.generator.g, c.generator.m, c.gauge_anchor(), make_domain(c), c.generator.f);
  } catch (const ValidationError& e) {
    throw SchemaError("/generator", e.what());
  }
  try {
    build_gauge_f(*spec);
  } catch (const ValidationError& e) {
    throw SchemaError("/generator/f", e.what());
  }
  try {
    make_free(c);
  } catch (const ConfigError& e) {
    throw SchemaError("/free", e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json config_to_json(const ScenarioConfig& c) {
  json gen{{"g", c.generator.g_text}, {"m", c.generator.m}, {"x0", c.gauge_anchor()}};
  if (c.generator.f_text) {
    gen["f"] = *c.generator.f_text;
  }
  json free;
  if (c.free.packet) {
    const PacketConfig& p = *c.free.packet;
    free["packet"] = {{"p_center", p.p_center},
                      {"width", p.width},
                      {"n_modes", p.n_modes},
                      {"p_span", p.p_span},
                      {"branch", branch_name(p.branch)}};
  } else {
    json modes = json::array();
    for (const auto& m : c.free.modes) {
      modes.push_back({{"p", m.p},
                       {"branch", branch_name(m.branch)},
                       {"amplitude", {m.amplitude.real(), m.amplitude.imag()}}});
    }
    free["modes"] = modes;
  }
  return {{"generator", gen},
          {"free", free},
          {"grid", {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"n", c.grid.n}}},
          {"time", {{"t0", c.time.t0}, {"t_end", c.time.t_end}, {"dt", c.time.dt}}},
          {"method", to_string(c.method)},
          {"output",
           {{"dir", c.output.dir.string()},
            {"format", to_string(c.output.format)},
            {"checkpoints", c.output.checkpoints}}}};
}

Grid1D make_grid(const ScenarioConfig& c) { return Grid1D(c.grid.x_min, c.grid.x_max, c.grid.n); }

Domain make_domain(const ScenarioConfig& c) {
  return {c.grid.x_min, c.grid.x_max, c.time.t0, c.time.t_end};
}

PotentialSource make_source(const ScenarioConfig& c) {
  GeneratorSpec spec(c.generator.g, c.generator.m, c.gauge_anchor(), make_domain(c), c.generator.f);
  GaugeField gauge = build_gauge_f(spec);
  return {std::move(spec), std::move(gauge)};
}

FreeSolutionSpec make_free(const ScenarioConfig& c) {
  if (c.free.packet) {
    const PacketConfig& p = *c.free.packet;
    return gaussian_packet(p.p_center, p.width, p.n_modes, p.p_span, c.generator.m, p.branch);
  }
  return FreeSolutionSpec(c.generator.m, c.free.modes);
}

ExactSolutionSpec make_exact(const ScenarioConfig& c) {
  PotentialSource src = make_source(c);
  return ExactSolutionSpec(std::move(src.spec), std::move(src.gauge), make_free(c));
}

SolverConfig make_solver_config(const ScenarioConfig& c) {
  SolverConfig s;
  s.dt = c.time.dt;
  s.method = c.method;
  s.m = c.generator.m;
  PotentialSource src = make_source(c);
  // A zero generator with zero gauge leaves only the free Hamiltonian.
  const bool free = expr::simplify(c.generator.g).is_constant(0.0) &&
                    (!c.generator.f || expr::simplify(*c.generator.f).is_constant(0.0));
  if (!free) {
    s.potential = std::move(src);
  }
  return s;
}

}  // namespace dirac::harness
