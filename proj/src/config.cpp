#include "swirl/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace swirl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& msg) {
  throw SolverError(ErrorKind::config, msg);
}

double to_double(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "" || !std::isfinite(v))
    config_error(where + ": expected a number, got '" + text + "'");
  return v;
}

long to_long(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "")
    config_error(where + ": expected an integer, got '" + text + "'");
  return v;
}

// Uniform-grid table: one "r value" pair per line, ',' or whitespace separated.
RadialProfile load_table(const std::filesystem::path& file, double r0, Parity parity) {
  std::ifstream in(file);
  if (!in) throw SolverError(ErrorKind::io, "cannot open profile table " + file.string());
  std::vector<double> rs, vs;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (auto& c : line)
      if (c == ',') c = ' ';
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    double r, v;
    if (!(ss >> r >> v))
      config_error(file.string() + ":" + std::to_string(ln) + ": expected 'r value'");
    rs.push_back(r);
    vs.push_back(v);
  }
  if (rs.size() < 4) config_error(file.string() + ": table needs at least 4 samples");
  const double h = r0 / static_cast<double>(rs.size() - 1);
  for (std::size_t k = 0; k < rs.size(); ++k)
    if (std::abs(rs[k] - static_cast<double>(k) * h) > 1e-9 * r0)
      config_error(file.string() + ": table must be sampled uniformly on [0, r0]");
  return RadialProfile(r0, std::move(vs), parity);
}

}  // namespace

RadialProfile ProfileSpec::sample(double r0, std::size_t n, Parity parity) const {
  std::vector<double> acc(n, 0.0);
  const double pi = std::numbers::pi;
  for (const auto& t : terms) {
    RadialProfile f;
    const double a = t.a;
    if (t.family == "zero") {
      continue;
    } else if (t.family == "constant") {
      f = RadialProfile::constant(r0, n, a);
    } else if (t.family == "sin_bump") {
      f = RadialProfile::from_function(r0, n, [=](double r) { return a * std::sin(pi * r / r0); });
    } else if (t.family == "cos_bump") {
      f = RadialProfile::from_function(r0, n, [=](double r) { return a * std::cos(pi * r / r0); });
    } else if (t.family == "poly_odd") {
      f = RadialProfile::from_function(r0, n, [=](double r) {
        const double u = r0 * r0 - r * r;
        return a * r * u * u / std::pow(r0, 5);
      });
    } else if (t.family == "table") {
      f = resample(load_table(t.table, r0, parity), n);
    }
    for (std::size_t j = 0; j < n; ++j) acc[j] += f[j];
  }
  return RadialProfile(r0, std::move(acc), parity);
}

ProfileSpec parse_profile(const std::string& text, const std::filesystem::path& base_dir) {
  ProfileSpec spec;
  spec.text = trim(text);
  std::istringstream all(spec.text);
  std::vector<std::vector<std::string>> groups(1);
  std::string tok;
  while (all >> tok) {
    if (tok == "+")
      groups.emplace_back();
    else
      groups.back().push_back(tok);
  }
  for (const auto& g : groups) {
    if (g.empty()) config_error("empty term in profile '" + spec.text + "'");
    if (g.size() > 2) config_error("unexpected '" + g[2] + "' in profile '" + spec.text + "'");
    ProfileTerm term;
    term.family = g[0];
    const std::string arg = g.size() > 1 ? g[1] : "";
    if (term.family == "zero") {
      if (!arg.empty()) config_error("profile 'zero' takes no argument");
    } else if (term.family == "constant" || term.family == "sin_bump" ||
               term.family == "cos_bump" || term.family == "poly_odd") {
      if (arg.empty()) config_error("profile '" + term.family + "' needs an amplitude");
      term.a = to_double(arg, "profile '" + spec.text + "'");
    } else if (term.family == "table") {
      if (arg.empty()) config_error("profile 'table' needs a file name");
      std::filesystem::path p(arg);
      term.table = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    } else {
      config_error("unknown profile family '" + term.family + "'");
    }
    spec.terms.push_back(term);
  }
  return spec;
}

IniData parse_ini(std::istream& in, const std::string& source) {
  IniData data;
  std::string line, section;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto c = line.find_first_of("#;");
    if (c != std::string::npos) line.resize(c);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(ln);
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) config_error(where + ": empty section name");
      data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(where + ": expected key = value");
    if (section.empty()) config_error(where + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) config_error(where + ": empty key");
    auto& sec = data[section];
    if (sec.count(key)) config_error(where + ": duplicate key '" + key + "'");
    sec[key] = {trim(line.substr(eq + 1)), ln};
  }
  return data;
}

namespace {

class Reader {
 public:
  Reader(const IniData& d, std::string source, std::filesystem::path base)
      : d_(d), source_(std::move(source)), base_(std::move(base)) {}

  bool has_section(const std::string& s) const { return d_.count(s) > 0; }

  const IniEntry* find(const std::string& s, const std::string& k) const {
    const auto it = d_.find(s);
    if (it == d_.end()) return nullptr;
    const auto jt = it->second.find(k);
    return jt == it->second.end() ? nullptr : &jt->second;
  }
  std::string where(const std::string& s, const std::string& k) const {
    const auto* e = find(s, k);
    return source_ + (e ? ":" + std::to_string(e->line) : "") + ": [" + s + "] " + k;
  }
  double num(const std::string& s, const std::string& k, double def) const {
    const auto* e = find(s, k);
    return e ? to_double(e->value, where(s, k)) : def;
  }
  long integer(const std::string& s, const std::string& k, long def) const {
    const auto* e = find(s, k);
    return e ? to_long(e->value, where(s, k)) : def;
  }
  std::string str(const std::string& s, const std::string& k, const std::string& def) const {
    const auto* e = find(s, k);
    return e ? e->value : def;
  }
  ProfileSpec profile(const std::string& s, const std::string& k, const std::string& def) const {
    const auto* e = find(s, k);
    if (!e) return parse_profile(def, base_);
    try {
      return parse_profile(e->value, base_);
    } catch (const SolverError& err) {
      throw SolverError(err.kind(), where(s, k) + ": " + err.what());
    }
  }
  void reject_unknown(const std::map<std::string, std::vector<std::string>>& known) const {
    for (const auto& [sec, keys] : d_) {
      const auto it = known.find(sec);
      if (it == known.end()) config_error(source_ + ": unknown section [" + sec + "]");
      for (const auto& [k, e] : keys) {
        bool ok = false;
        for (const auto& kk : it->second) ok = ok || kk == k;
        if (!ok)
          config_error(source_ + ":" + std::to_string(e.line) + ": unknown key '" + k +
                       "' in [" + sec + "]");
      }
    }
  }

 private:
  const IniData& d_;
  std::string source_;
  std::filesystem::path base_;
};

RunConfig from_ini(const IniData& d, const std::string& source,
                   const std::filesystem::path& base) {
  Reader rd(d, source, base);
  rd.reject_unknown({{"gas", {"gamma", "c_v", "A"}},
                     {"domain", {"L", "r0", "nz", "nr"}},
                     {"upstream", {"mode", "w", "q", "M0sq", "p0", "p", "s", "q0"}},
                     {"perturbation", {"sigma", "w_en", "q_en", "p_ex"}},
                     {"numerics",
                      {"cfl", "max_refine", "solvability_tol", "endpoint_tol", "locator_samples"}}});
  RunConfig c;
  const double gamma = rd.num("gas", "gamma", 1.4), cv = rd.num("gas", "c_v", 1.0),
               A = rd.num("gas", "A", 1.0);
  if (!(gamma > 1.0)) config_error(rd.where("gas", "gamma") + ": gamma must exceed 1");
  if (!(cv > 0.0)) config_error(rd.where("gas", "c_v") + ": c_v must be positive");
  if (!(A > 0.0)) config_error(rd.where("gas", "A") + ": A must be positive");
  c.gas = GasModel(gamma, cv, A);

  c.L = rd.num("domain", "L", 1.0);
  c.r0 = rd.num("domain", "r0", 1.0);
  const long nz = rd.integer("domain", "nz", 129), nr = rd.integer("domain", "nr", 129);
  if (!(c.L > 0.0)) config_error(rd.where("domain", "L") + ": L must be positive");
  if (!(c.r0 > 0.0)) config_error(rd.where("domain", "r0") + ": r0 must be positive");
  if (nz < 9) config_error(rd.where("domain", "nz") + ": nz must be at least 9");
  if (nr < 9) config_error(rd.where("domain", "nr") + ": nr must be at least 9");
  c.nz = static_cast<std::size_t>(nz);
  c.nr = static_cast<std::size_t>(nr);

  const std::string mode = rd.str("upstream", "mode", "wq");
  if (mode == "wq") {
    c.mode = UpstreamMode::wq;
    if (!rd.find("upstream", "w") || !rd.find("upstream", "q"))
      config_error(source + ": [upstream] mode = wq needs w and q");
    c.w = rd.profile("upstream", "w", "zero");
    c.q = rd.profile("upstream", "q", "zero");
    c.M0sq = rd.num("upstream", "M0sq", 4.0);
    c.p0 = rd.num("upstream", "p0", 1.0);
  } else if (mode == "ps") {
    c.mode = UpstreamMode::ps;
    if (!rd.find("upstream", "p") || !rd.find("upstream", "s"))
      config_error(source + ": [upstream] mode = ps needs p and s");
    c.p = rd.profile("upstream", "p", "zero");
    c.s = rd.profile("upstream", "s", "zero");
    c.q0 = rd.num("upstream", "q0", 2.0);
  } else {
    config_error(rd.where("upstream", "mode") + ": mode must be wq or ps");
  }

  c.has_perturbation = rd.has_section("perturbation");
  if (c.has_perturbation) {
    c.sigma = rd.num("perturbation", "sigma", 0.0);
    c.w_en = rd.profile("perturbation", "w_en", "zero");
    c.q_en = rd.profile("perturbation", "q_en", "zero");
    c.p_ex = rd.profile("perturbation", "p_ex", "zero");
  }

  c.cfl = rd.num("numerics", "cfl", c.cfl);
  c.max_refine = static_cast<int>(rd.integer("numerics", "max_refine", c.max_refine));
  c.solvability_tol = rd.num("numerics", "solvability_tol", c.solvability_tol);
  c.endpoint_tol = rd.num("numerics", "endpoint_tol", c.endpoint_tol);
  const long ns = rd.integer("numerics", "locator_samples", 257);
  if (!(c.cfl > 0.0 && c.cfl <= 1.0))
    config_error(rd.where("numerics", "cfl") + ": cfl must lie in (0, 1]");
  if (c.max_refine < 1) config_error(rd.where("numerics", "max_refine") + ": must be >= 1");
  if (!(c.solvability_tol > 0.0))
    config_error(rd.where("numerics", "solvability_tol") + ": must be positive");
  if (!(c.endpoint_tol > 0.0))
    config_error(rd.where("numerics", "endpoint_tol") + ": must be positive");
  if (ns < 3) config_error(rd.where("numerics", "locator_samples") + ": must be >= 3");
  c.locator_samples = static_cast<std::size_t>(ns);
  return c;
}

}  // namespace

UpstreamSpecWQ RunConfig::upstream_wq() const {
  UpstreamSpecWQ s;
  s.wbar = w.sample(r0, nr, Parity::odd);
  s.qbar = q.sample(r0, nr, Parity::even);
  s.M0sq = M0sq;
  s.p0 = p0;
  return s;
}

UpstreamSpecPS RunConfig::upstream_ps() const {
  UpstreamSpecPS s;
  s.pbar = p.sample(r0, nr, Parity::even);
  s.sbar = this->s.sample(r0, nr, Parity::even);
  s.q0 = q0;
  return s;
}

PerturbationInput RunConfig::perturbation() const {
  PerturbationInput in;
  in.sigma = sigma;
  in.w_en = w_en.sample(r0, nr, Parity::odd);
  in.q_en = q_en.sample(r0, nr, Parity::even);
  in.p_ex = p_ex.sample(r0, nr, Parity::even);
  return in;
}

MarchOptions RunConfig::march_options() const {
  MarchOptions o;
  o.cfl = cfl;
  o.max_refine = max_refine;
  return o;
}

void validate_config(const RunConfig& cfg) {
  const double tol = cfg.endpoint_tol;
  auto scaled = [&](const RadialProfile& f) { return tol * std::max(1.0, f.max_abs()); };
  auto need = [&](bool ok, const std::string& cond) {
    if (!ok) config_error("condition " + cond + " violated");
  };
  // raw samples: odd parity would zero the axis value and hide a violation
  const auto raw = [&](const ProfileSpec& p) { return p.sample(cfg.r0, cfg.nr, Parity::none); };
  if (cfg.mode == UpstreamMode::wq) {
    auto s = cfg.upstream_wq();
    s.wbar = raw(cfg.w);
    need(std::abs(s.wbar.front()) <= scaled(s.wbar), "wbar(0)=0");
    need(std::abs(s.wbar.back()) <= scaled(s.wbar), "wbar(r0)=0");
    need(s.qbar.min() > 0.0, "qbar > 0");
    need(s.M0sq > 1.0, "M0sq > 1");
    need(s.p0 > 0.0, "p0 > 0");
  } else {
    const auto s = cfg.upstream_ps();
    need(s.pbar.min() > 0.0, "pbar > 0");
    const auto dp = s.pbar.derivative();
    need(std::abs(dp.front()) <= scaled(dp), "pbar'(0)=0");
    need(cfg.q0 > 0.0, "q0 > 0");
  }
  if (cfg.has_perturbation) {
    auto p = cfg.perturbation();
    p.w_en = raw(cfg.w_en);
    validate_perturbation(p, false, tol);
  }
}

RunConfig parse_config_string(const std::string& text, const std::filesystem::path& base_dir) {
  std::istringstream in(text);
  auto cfg = from_ini(parse_ini(in, "<config>"), "<config>", base_dir);
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorKind::io, "cannot read config file " + path.string());
  const std::string src = path.string();
  auto cfg = from_ini(parse_ini(in, src), src, path.parent_path());
  validate_config(cfg);
  return cfg;
}

}  // namespace swirl
