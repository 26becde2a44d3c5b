#include "prd/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "prd/errors.hpp"

namespace prd {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long x = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

// "x1:u1, x2:u2, ..." pairs.
std::vector<std::pair<double, double>> parse_nodes(const std::string& key,
                                                   const std::string& value) {
  std::vector<std::pair<double, double>> nodes;
  std::string token;
  std::istringstream in(value);
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw ConfigError(key + ": expected x:u pairs, got '" + token + "'");
    }
    nodes.emplace_back(parse_double(key, trim(token.substr(0, colon))),
                       parse_double(key, trim(token.substr(colon + 1))));
  }
  if (nodes.empty()) throw ConfigError(key + ": no nodes given");
  return nodes;
}

// "[a,b] [c,d]" interval list; blank means the empty set.
std::vector<Interval<double>> parse_intervals(const std::string& key,
                                              const std::string& value) {
  std::vector<Interval<double>> out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    while (pos < value.size() &&
           (std::isspace(static_cast<unsigned char>(value[pos])) ||
            value[pos] == ','))
      ++pos;
    if (pos >= value.size()) break;
    if (value[pos] != '[') {
      throw ConfigError(key + ": expected '[lo,hi]' near '" +
                        value.substr(pos) + "'");
    }
    const auto close = value.find(']', pos);
    if (close == std::string::npos) {
      throw ConfigError(key + ": unterminated interval");
    }
    const std::string body = value.substr(pos + 1, close - pos - 1);
    const auto comma = body.find(',');
    if (comma == std::string::npos) {
      throw ConfigError(key + ": expected '[lo,hi]', got '[" + body + "]'");
    }
    out.push_back({parse_double(key, trim(body.substr(0, comma))),
                   parse_double(key, trim(body.substr(comma + 1)))});
    pos = close + 1;
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw ConfigError(key + ": duplicate key");
    kv[key] = trim(line.substr(eq + 1));
  }

  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(key + ": missing required key");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_optional = [&](const std::string& key,
                           const std::string& fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  RunConfig c;
  c.params.x_lo = parse_double("model.x_lo", take("model.x_lo"));
  c.params.x_hi = parse_double("model.x_hi", take("model.x_hi"));
  c.params.diffusion =
      parse_double("model.diffusion", take_optional("model.diffusion", "1"));
  c.params.n_grid = parse_int("grid.n", take("grid.n"));
  c.params.dt = parse_double("time.dt", take("time.dt"));
  c.params.t_end = parse_double("time.t_end", take("time.t_end"));

  const std::string kind = take("init.u0.kind");
  if (kind == "constant") {
    c.u0.kind = U0Spec::Kind::constant;
    c.u0.value = parse_double("init.u0.value", take("init.u0.value"));
  } else if (kind == "table" || kind == "pwlinear") {
    c.u0.kind =
        kind == "table" ? U0Spec::Kind::table : U0Spec::Kind::pwlinear;
    c.u0.nodes = parse_nodes("init.u0.nodes", take("init.u0.nodes"));
  } else {
    throw ConfigError("init.u0.kind: expected constant|table|pwlinear, got '" +
                      kind + "'");
  }

  c.v0 = parse_double("init.v0", take("init.v0"));
  c.w0 = parse_double("init.w0", take("init.w0"));
  c.a0 = parse_intervals("init.A0", take("init.A0"));
  c.allow_nonphysical = parse_bool(
      "init.allow_nonphysical", take_optional("init.allow_nonphysical", "false"));

  c.out_dir = take_optional("output.dir", "out");
  c.stride = parse_int("output.stride", take_optional("output.stride", "1"));
  c.write_report =
      parse_bool("output.report", take_optional("output.report", "true"));
  c.strict_mode =
      parse_bool("strict_mode", take_optional("strict_mode", "false"));

  if (!kv.empty()) {
    throw ConfigError(kv.begin()->first + ": unknown key");
  }

  // Field-level validation with key-specific messages.
  if (!(c.params.x_lo > 0)) throw ConfigError("model.x_lo must be > 0");
  if (!(c.params.x_lo < c.params.x_hi)) {
    throw ConfigError("model.x_hi must be > model.x_lo");
  }
  if (!(c.params.diffusion >= 0)) {
    throw ConfigError("model.diffusion must be >= 0");
  }
  if (c.params.n_grid < 2) throw ConfigError("grid.n must be >= 2");
  if (!(c.params.dt > 0)) throw ConfigError("time.dt must be > 0");
  if (!(c.params.t_end >= 0)) throw ConfigError("time.t_end must be >= 0");
  if (c.stride < 1) throw ConfigError("output.stride must be >= 1");
  if (!c.allow_nonphysical) {
    if (c.v0 < 0) throw ConfigError("init.v0 must be >= 0");
    if (std::abs(c.w0) > 0.5) throw ConfigError("init.w0 must satisfy |w0| <= 1/2");
  }

  try {
    const IntervalSet<double> a0(c.params.x_lo, c.params.x_hi, c.a0);
    make_initial_state(a0, c.w0);
  } catch (const CompatibilityViolation& e) {
    throw ConfigError(std::string("init.A0: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("init.A0: ") + e.what());
  }

  if (c.u0.kind != U0Spec::Kind::constant) {
    for (std::size_t i = 1; i < c.u0.nodes.size(); ++i) {
      if (!(c.u0.nodes[i].first > c.u0.nodes[i - 1].first)) {
        throw ConfigError("init.u0.nodes: x values must be strictly increasing");
      }
    }
    if (c.u0.kind == U0Spec::Kind::pwlinear && c.u0.nodes.size() < 2) {
      throw ConfigError("init.u0.nodes: pwlinear needs at least two nodes");
    }
  }
  // Surfaces table/pwlinear grid mismatches now rather than at run time.
  const auto u0_probe = resolve_u0(c);
  if (!c.allow_nonphysical && u0_probe.min_value() < 0) {
    throw ConfigError("init.u0: density must be nonnegative");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "model.x_lo = " << fmt(c.params.x_lo) << "\n";
  out << "model.x_hi = " << fmt(c.params.x_hi) << "\n";
  out << "model.diffusion = " << fmt(c.params.diffusion) << "\n";
  out << "grid.n = " << c.params.n_grid << "\n";
  out << "time.dt = " << fmt(c.params.dt) << "\n";
  out << "time.t_end = " << fmt(c.params.t_end) << "\n";
  switch (c.u0.kind) {
    case U0Spec::Kind::constant:
      out << "init.u0.kind = constant\n";
      out << "init.u0.value = " << fmt(c.u0.value) << "\n";
      break;
    case U0Spec::Kind::table:
    case U0Spec::Kind::pwlinear: {
      out << "init.u0.kind = "
          << (c.u0.kind == U0Spec::Kind::table ? "table" : "pwlinear") << "\n";
      out << "init.u0.nodes = ";
      for (std::size_t i = 0; i < c.u0.nodes.size(); ++i) {
        if (i) out << ", ";
        out << fmt(c.u0.nodes[i].first) << ":" << fmt(c.u0.nodes[i].second);
      }
      out << "\n";
      break;
    }
  }
  out << "init.v0 = " << fmt(c.v0) << "\n";
  out << "init.w0 = " << fmt(c.w0) << "\n";
  out << "init.A0 =";
  for (const auto& p : c.a0) {
    out << " [" << fmt(p.lo) << "," << fmt(p.hi) << "]";
  }
  out << "\n";
  out << "init.allow_nonphysical = "
      << (c.allow_nonphysical ? "true" : "false") << "\n";
  out << "output.dir = " << c.out_dir << "\n";
  out << "output.stride = " << c.stride << "\n";
  out << "output.report = " << (c.write_report ? "true" : "false") << "\n";
  out << "strict_mode = " << (c.strict_mode ? "true" : "false") << "\n";
  return out.str();
}

DensityField<double> resolve_u0(const RunConfig& c) {
  using Field = DensityField<double>;
  const double x_lo = c.params.x_lo, x_hi = c.params.x_hi;
  const Eigen::Index n = c.params.n_grid;
  switch (c.u0.kind) {
    case U0Spec::Kind::constant:
      return Field::constant(x_lo, x_hi, n, c.u0.value);
    case U0Spec::Kind::table: {
      if (static_cast<Eigen::Index>(c.u0.nodes.size()) != n) {
        throw ConfigError("init.u0.nodes: table needs exactly grid.n entries");
      }
      Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(n, x_lo, x_hi);
      Eigen::VectorXd values(n);
      const double tol = 1e-9 * (x_hi - x_lo);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& [x, u] = c.u0.nodes[static_cast<std::size_t>(i)];
        if (std::abs(x - grid[i]) > tol) {
          throw ConfigError("init.u0.nodes: table x[" + std::to_string(i) +
                            "] does not sit on the grid");
        }
        values[i] = u;
      }
      return Field(x_lo, x_hi, values);
    }
    case U0Spec::Kind::pwlinear: {
      if (c.u0.nodes.front().first > x_lo || c.u0.nodes.back().first < x_hi) {
        throw ConfigError("init.u0.nodes: pwlinear nodes must span the domain");
      }
      Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(n, x_lo, x_hi);
      Eigen::VectorXd values(n);
      std::size_t seg = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = grid[i];
        while (seg + 2 < c.u0.nodes.size() && c.u0.nodes[seg + 1].first < x)
          ++seg;
        const auto& [x0, y0] = c.u0.nodes[seg];
        const auto& [x1, y1] = c.u0.nodes[seg + 1];
        values[i] = y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
      }
      return Field(x_lo, x_hi, values);
    }
  }
  throw ConfigError("init.u0.kind: unreachable");
}

InitialData<double> resolve_initial_data(const RunConfig& c) {
  InitialData<double> init{
      resolve_u0(c), c.v0, c.w0,
      IntervalSet<double>(c.params.x_lo, c.params.x_hi, c.a0),
      c.allow_nonphysical};
  init.validate();
  return init;
}

}  // namespace prd
