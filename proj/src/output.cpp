#include "swirl/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>
#include <vector>

#include "json.hpp"

namespace swirl {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SolverError(ErrorKind::io, "cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw SolverError(ErrorKind::io, "write failed for " + path.string());
}

using Value = std::variant<std::monostate, double, bool, long, std::string>;
struct Item {
  std::string key;
  Value v;
};
struct Section {
  std::string name;  // empty = top level
  std::vector<Item> items;
};

template <class T>
Value opt(const std::optional<T>& x) {
  if (!x) return std::monostate{};
  return Value(*x);
}

std::vector<Section> report_items(const RunResult& res) {
  std::vector<Section> out;
  const auto* loc = res.location ? &*res.location : nullptr;
  const auto* bg = res.background ? &*res.background : nullptr;
  auto none = Value(std::monostate{});

  Section top{"", {}};
  top.items.push_back({"z_star", loc ? Value(loc->z_star) : none});
  top.items.push_back({"I1_at_root", loc ? Value(loc->I1_at_root) : none});
  top.items.push_back({"I2", opt(res.I2)});
  top.items.push_back({"I3", opt(res.I3)});
  top.items.push_back({"L_star", loc ? Value(loc->L_star) : none});
  out.push_back(top);

  Section st{"status", {}};
  st.items.push_back({"stage", std::string(to_string(res.requested))});
  st.items.push_back({"exit_code", static_cast<long>(res.exit_code)});
  st.items.push_back({"error_kind", res.error_kind ? Value(std::string(to_string(*res.error_kind)))
                                                   : none});
  st.items.push_back({"error_stage", res.error_kind ? Value(res.error_stage) : none});
  st.items.push_back({"message", res.error_kind ? Value(res.message) : none});
  out.push_back(st);

  Section r{"residuals", {}};
  r.items.push_back({"background_upstream_momentum",
                     bg ? Value(bg->diag.upstream_momentum_residual) : none});
  r.items.push_back({"background_downstream_momentum",
                     bg ? Value(bg->diag.downstream_momentum_residual) : none});
  r.items.push_back({"background_mach_ode", bg ? Value(bg->diag.mach_ode_residual) : none});
  r.items.push_back({"background_q_ode", bg ? Value(bg->diag.q_ode_residual) : none});
  const auto* sr = res.supersonic_residuals ? &*res.supersonic_residuals : nullptr;
  r.items.push_back({"supersonic_cde1", sr ? Value(sr->cde1) : none});
  r.items.push_back({"supersonic_cde2", sr ? Value(sr->cde2) : none});
  r.items.push_back({"supersonic_cde3", sr ? Value(sr->cde3) : none});
  r.items.push_back({"supersonic_cde4", sr ? Value(sr->cde4) : none});
  r.items.push_back({"supersonic_cde5", sr ? Value(sr->cde5) : none});
  r.items.push_back({"supersonic_recovery", sr ? Value(sr->recovery) : none});
  r.items.push_back({"root", loc ? Value(loc->root_residual) : none});
  const auto* tr = res.traces ? &*res.traces : nullptr;
  r.items.push_back({"trace_consistency", tr ? Value(tr->consistency) : none});
  r.items.push_back({"trace_path_mismatch", tr ? Value(tr->path_mismatch) : none});
  const auto* sub = res.subsonic ? &*res.subsonic : nullptr;
  r.items.push_back({"solvability", sub ? Value(sub->solvability_residual) : none});
  const auto* br = res.subsonic_residuals ? &*res.subsonic_residuals : nullptr;
  r.items.push_back({"subsonic_eq1", br ? Value(br->eq1) : none});
  r.items.push_back({"subsonic_eq2", br ? Value(br->eq2) : none});
  r.items.push_back({"subsonic_eq3", br ? Value(br->eq3) : none});
  r.items.push_back({"subsonic_eq4", br ? Value(br->eq4) : none});
  r.items.push_back({"subsonic_eq5", br ? Value(br->eq5) : none});
  out.push_back(r);

  Section f{"flags", {}};
  f.items.push_back({"t_monotone", bg ? Value(bg->diag.t_monotone) : none});
  f.items.push_back({"upstream_supersonic", bg ? Value(bg->diag.upstream_supersonic) : none});
  f.items.push_back({"downstream_subsonic", bg ? Value(bg->diag.downstream_subsonic) : none});
  f.items.push_back({"entropy_increases", bg ? Value(bg->diag.entropy_increases) : none});
  f.items.push_back({"background_assumptions",
                     res.assumptions ? Value(res.assumptions->all_first_order_pass()) : none});
  f.items.push_back({"window_ok", loc ? Value(loc->window_ok) : none});
  f.items.push_back({"monotone_ok", loc ? Value(loc->monotone_ok) : none});
  f.items.push_back({"zero_perturbation", res.zero_perturbation});
  f.items.push_back({"coercivity_ok", res.coercivity ? Value(res.coercivity->margin > 0.0) : none});
  out.push_back(f);

  Section c{"coercivity", {}};
  c.items.push_back({"margin", res.coercivity ? Value(res.coercivity->margin) : none});
  c.items.push_back({"r_star", res.coercivity ? Value(res.coercivity->r_star) : none});
  out.push_back(c);

  Section g{"grid", {}};
  g.items.push_back({"nz", static_cast<long>(res.nz)});
  g.items.push_back({"nr", static_cast<long>(res.nr)});
  g.items.push_back({"L", res.L});
  g.items.push_back({"r0", res.r0});
  const auto* sup = res.supersonic ? &*res.supersonic : nullptr;
  g.items.push_back({"supersonic_nz", sup ? Value(static_cast<long>(sup->psi.nz())) : none});
  g.items.push_back({"refine_factor", sup ? Value(static_cast<long>(sup->refine_factor)) : none});
  g.items.push_back({"subsonic_nz", sub ? Value(static_cast<long>(sub->dp.nz())) : none});
  g.items.push_back({"locator_samples",
                     loc ? Value(static_cast<long>(loc->I1_samples.size())) : none});
  out.push_back(g);
  return out;
}

std::string json_value(const Value& v) {
  struct V {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(double d) const {
      return std::isfinite(d) ? format_double(d) : "null";
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long n) const { return std::to_string(n); }
    std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
  };
  return std::visit(V{}, v);
}

std::string csv_value(const Value& v) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(bool b) const { return b ? "1" : "0"; }
    std::string operator()(long n) const { return std::to_string(n); }
    std::string operator()(const std::string& s) const {
      std::string t = s;
      for (auto& c : t)
        if (c == ',' || c == '\n') c = ';';
      return t;
    }
  };
  return std::visit(V{}, v);
}

}  // namespace

void write_background_csv(const BackgroundShockSolution& bg, const fs::path& path) {
  auto out = open_out(path);
  const auto& gas = bg.gas;
  const auto& u = bg.upstream;
  const auto& d = bg.downstream;
  const auto M2u = u.M2(gas), M2d = d.M2(gas);
  out << "r,p_minus,w_minus,q_minus,s_minus,rho_minus,M2_minus,"
         "p_plus,w_plus,q_plus,s_plus,rho_plus,M2_plus,t\n";
  for (std::size_t j = 0; j < bg.size(); ++j) {
    const double row[] = {bg.t.r(j), u.p[j], u.w[j], u.q[j], u.s[j], u.rho[j], M2u[j],
                          d.p[j],    d.w[j], d.q[j], d.s[j], d.rho[j], M2d[j], bg.t[j]};
    for (std::size_t k = 0; k < std::size(row); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << '\n';
  }
  close_out(out, path);
}

void write_field_csv(const LinearField2D& f, const fs::path& path) {
  auto out = open_out(path);
  out << "z";
  for (std::size_t i = 0; i < f.nz(); ++i) out << ',' << format_double(f.z(i));
  out << "\nr";
  for (std::size_t j = 0; j < f.nr(); ++j) out << ',' << format_double(f.r(j));
  out << '\n';
  for (std::size_t i = 0; i < f.nz(); ++i) {
    for (std::size_t j = 0; j < f.nr(); ++j) out << (j ? "," : "") << format_double(f(i, j));
    out << '\n';
  }
  close_out(out, path);
}

void write_report_json(const RunResult& res, const fs::path& path) {
  auto out = open_out(path);
  const auto sections = report_items(res);
  out << "{\n";
  bool first = true;
  auto sep = [&] {
    if (!first) out << ",\n";
    first = false;
  };
  for (const auto& s : sections) {
    if (s.name.empty()) {
      for (const auto& it : s.items) {
        sep();
        out << "  \"" << it.key << "\": " << json_value(it.v);
      }
      continue;
    }
    sep();
    out << "  \"" << s.name << "\": {\n";
    for (std::size_t k = 0; k < s.items.size(); ++k)
      out << "    \"" << s.items[k].key << "\": " << json_value(s.items[k].v)
          << (k + 1 < s.items.size() ? ",\n" : "\n");
    out << "  }";
  }
  out << "\n}\n";
  close_out(out, path);
}

void write_report_csv(const RunResult& res, const fs::path& path) {
  auto out = open_out(path);
  out << "key,value\n";
  for (const auto& s : report_items(res))
    for (const auto& it : s.items)
      out << (s.name.empty() ? "" : s.name + ".") << it.key << ',' << csv_value(it.v) << '\n';
  close_out(out, path);
}

void write_outputs(const RunResult& res, const fs::path& out_dir, ReportFormat format) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw SolverError(ErrorKind::io, "cannot create output directory " + out_dir.string());

  if (res.background) write_background_csv(*res.background, out_dir / "background.csv");
  if (res.supersonic) {
    const auto& s = *res.supersonic;
    const std::pair<const char*, const LinearField2D*> fields[] = {
        {"psi", &s.psi},         {"p_dot", &s.p_dot}, {"theta_dot", &s.theta_dot},
        {"w_dot", &s.w_dot},     {"q_dot", &s.q_dot}, {"s_dot", &s.s_dot},
        {"theta_integral", &s.theta_time_integral}};
    for (const auto& [name, f] : fields)
      write_field_csv(*f, out_dir / (std::string("supersonic_") + name + ".csv"));
  }
  if (res.location) {
    const auto path = out_dir / "locator_I1.csv";
    auto out = open_out(path);
    out << "z,I1\n";
    for (const auto& [z, v] : res.location->I1_samples)
      out << format_double(z) << ',' << format_double(v) << '\n';
    close_out(out, path);
  }
  if (res.subsonic) {
    const auto& s = *res.subsonic;
    const std::pair<const char*, const LinearField2D*> fields[] = {
        {"dp", &s.dp},       {"dtheta", &s.dtheta}, {"dw", &s.dw},   {"dq", &s.dq},
        {"ds", &s.ds},       {"dB", &s.dB},         {"phi", &s.phi}, {"psi", &s.psi},
        {"dp1", &s.dp1},     {"dtheta1", &s.dtheta1}, {"dp2", &s.dp2}, {"dtheta2", &s.dtheta2}};
    for (const auto& [name, f] : fields)
      write_field_csv(*f, out_dir / (std::string("subsonic_") + name + ".csv"));
  }
  if (res.traces && res.subsonic) {
    const auto path = out_dir / "shock_traces.csv";
    auto out = open_out(path);
    const auto& t = *res.traces;
    const auto& dphi = res.subsonic->dphi_prime;
    out << "r,g1,g2,g3,g4,dphi_prime\n";
    for (std::size_t j = 0; j < t.g1.size(); ++j)
      out << format_double(t.g1.r(j)) << ',' << format_double(t.g1[j]) << ','
          << format_double(t.g2[j]) << ',' << format_double(t.g3[j]) << ','
          << format_double(t.g4[j]) << ',' << format_double(j < dphi.size() ? dphi[j] : 0.0)
          << '\n';
    close_out(out, path);
  }
  if (format == ReportFormat::json)
    write_report_json(res, out_dir / "report.json");
  else
    write_report_csv(res, out_dir / "report.csv");
}

}  // namespace swirl
