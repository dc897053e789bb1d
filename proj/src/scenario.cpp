#include "sublorentz/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sublorentz/errors.hpp"

namespace sublorentz {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& field,
                                  const std::string& value, std::size_t count) {
  std::stringstream ss(value);
  std::vector<double> out;
  double v;
  while (ss >> v) out.push_back(v);
  std::string extra;
  if (ss.clear(), ss >> extra)
    throw SpecError("field '" + field + "': trailing token '" + extra + "'");
  if (out.size() != count)
    throw SpecError("field '" + field + "': expected " + std::to_string(count) +
                    " numbers, got " + std::to_string(out.size()));
  for (double x : out)
    if (!std::isfinite(x))
      throw SpecError("field '" + field + "': non-finite value");
  return out;
}

class KeyTable {
 public:
  explicit KeyTable(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw SpecError("missing required field '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return it->second;
  }

  double number(const std::string& key) {
    return parse_numbers(key, get(key), 1)[0];
  }

  double number_or(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return number(key);
  }

  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) throw SpecError("unknown field '" + k + "'");
  }

  const std::map<std::string, std::string>& raw() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

PotentialField build_potential(KeyTable& kv) {
  const std::string kind = kv.get("potential.kind");
  if (kind == "zero") return zero_potential();
  if (kind == "constant-magnetic")
    return constant_magnetic_potential(kv.number("potential.phi"));
  if (kind == "constant-electric")
    return constant_electric_potential(kv.number("potential.E"));
  if (kind == "polynomial") {
    std::array<Polynomial4, 4> comp;
    for (int i = 0; i < 4; ++i) {
      const std::string key = "potential.A" + std::to_string(i);
      if (kv.has(key)) comp[i] = Polynomial4::parse(kv.get(key));
    }
    return polynomial_potential(comp);
  }
  throw SpecError("field 'potential.kind': unknown kind '" + kind + "'");
}

DistributionMetric build_metric(KeyTable& kv) {
  const std::string kind = kv.get_or("metric.kind", "minkowski");
  if (kind == "minkowski") return minkowski_metric();
  if (kind == "constant") {
    Mat4 g{};
    for (int i = 0; i < 4; ++i) {
      const std::string key = "metric.matrix.row" + std::to_string(i);
      const auto row = parse_numbers(key, kv.get(key), 4);
      for (int j = 0; j < 4; ++j) g[i][j] = row[j];
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (g[i][j] != g[j][i])
          throw SpecError("metric matrix not symmetric: entry (" +
                          std::to_string(i) + "," + std::to_string(j) +
                          ") = " + std::to_string(g[i][j]) + " but (" +
                          std::to_string(j) + "," + std::to_string(i) +
                          ") = " + std::to_string(g[j][i]));
    return constant_metric(g);
  }
  if (kind == "polynomial") {
    std::array<Polynomial4, 10> entries;
    int n = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        const std::string key =
            "metric.g" + std::to_string(i) + std::to_string(j);
        if (kv.has(key)) entries[n] = Polynomial4::parse(kv.get(key));
        ++n;
      }
    return polynomial_metric(entries);
  }
  throw SpecError("field 'metric.kind': unknown kind '" + kind + "'");
}

Scenario build(KeyTable& kv) {
  Scenario sc;
  sc.dist.potential = build_potential(kv);
  sc.dist.metric = build_metric(kv);

  sc.particle.mass = kv.number_or("particle.mass", 1.0);
  sc.particle.charge = kv.number_or("particle.charge", 0.0);
  if (!(sc.particle.mass > 0.0))
    throw SpecError("field 'particle.mass': must be positive");

  const auto pos = parse_numbers("initial.position",
                                 kv.get_or("initial.position", "0 0 0 0 0"), 5);
  sc.initial.position.base = {pos[0], pos[1], pos[2], pos[3]};
  sc.initial.position.fiber = pos[4];
  const auto vel =
      parse_numbers("initial.velocity", kv.get("initial.velocity"), 4);
  sc.initial.velocity = {vel[0], vel[1], vel[2], vel[3]};

  sc.integrator.step = kv.number_or("integrator.step", 1e-3);
  sc.integrator.t_end = kv.number_or("integrator.t_end", 1.0);
  const double rec = kv.number_or("integrator.record_every", 1.0);
  if (rec < 1.0 || rec != std::floor(rec))
    throw SpecError("field 'integrator.record_every': must be a positive integer");
  sc.integrator.record_every = static_cast<int>(rec);
  sc.integrator.validate();

  kv.reject_unknown();
  sc.raw = kv.raw();
  return sc;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text,
                             const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError("scenario line " + std::to_string(line_no) +
                      ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw SpecError("scenario line " + std::to_string(line_no) +
                      ": empty key");
    if (kv.count(key))
      throw SpecError("scenario line " + std::to_string(line_no) +
                      ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw SpecError("override '" + ov + "': expected key=value");
    kv[trim(ov.substr(0, eq))] = trim(ov.substr(eq + 1));
  }
  KeyTable table(std::move(kv));
  return build(table);
}

Scenario load_scenario_file(const std::string& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in)
    throw SpecError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), overrides);
}

}  // namespace sublorentz
