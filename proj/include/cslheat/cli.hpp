#pragma once

// Batch front end: one function per subcommand, each turning a spec file and
// flags into a payload string plus an exit code. tools/cslheat_cli.cpp only
// parses argv and calls run_command().
//
// Exit codes: 0 success, 2 spec or usage error, 3 compute error (quadrature
// not converged, lattice too large, ...), 4 infeasible design set.

#include <array>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "cslheat/analysis.hpp"
#include "cslheat/core.hpp"
#include "cslheat/heating.hpp"
#include "cslheat/lattice_check.hpp"
#include "cslheat/parallel.hpp"
#include "cslheat/spec_io.hpp"

namespace cslheat::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_spec = 2;
inline constexpr int exit_compute = 3;
inline constexpr int exit_infeasible = 4;

struct CommandOptions
{
  std::string command;
  std::optional<std::string> spec_path;
  bool csv = false;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;  // 0: CSL_MASSMODEL_THREADS, then hardware
  bool table = false;    // heat: human-readable table on stderr
  bool monte_carlo = false;  // heat: add the Monte-Carlo estimate
  // mu: k-grid flags, each overriding task.k_grid
  std::optional<Vec3> k_direction;
  std::optional<double> k_min;
  std::optional<double> k_max;
  std::optional<std::size_t> k_points;
};

struct CommandResult
{
  int exit_code = exit_ok;
  std::string payload;      // stdout (or --out)
  std::string diagnostics;  // stderr
};

inline const std::array<const char*, 7>& command_names()
{
  static const std::array<const char*, 7> names = {"mu",           "heat",  "scan",         "optimize",
                                                   "discriminate", "bound", "lattice-check"};
  return names;
}

// ---------------------------------------------------------------------------
// Formatting helpers

/// CSV cells carry 17 significant digits and never depend on the locale.
inline std::string format_double(double x)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

/// JSON has no infinities; they are written as the strings "inf" / "-inf".
inline nlohmann::json number(double x)
{
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

class CsvWriter
{
 public:
  explicit CsvWriter(std::initializer_list<const char*> header)
  {
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  CsvWriter& cell(double x) { return raw(format_double(x)); }
  CsvWriter& cell(std::uint64_t x) { return raw(std::to_string(x)); }
  CsvWriter& cell(bool x) { return raw(x ? "true" : "false"); }
  CsvWriter& raw(const std::string& s)
  {
    out_ << (first_in_row_ ? "" : ",") << s;
    first_in_row_ = false;
    return *this;
  }
  void end_row()
  {
    out_ << '\n';
    first_in_row_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_in_row_ = true;
};

inline std::string sha256_hex(const std::string& data)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

/// Canonical form of a spec document: parsed and re-serialised compactly with
/// object keys sorted, so whitespace and key order do not change the hash.
inline std::string canonical_spec_text(const std::string& text)
{
  try {
    return nlohmann::json::parse(text).dump();
  } catch (const nlohmann::json::parse_error&) {
    parse_spec(text);  // rethrows with line and column
    throw;
  }
}

inline std::string spec_hash(const std::string& text) { return sha256_hex(canonical_spec_text(text)); }

// ---------------------------------------------------------------------------
// Commands

struct Context
{
  ExperimentSpec spec;
  std::string hash;
  unsigned threads = 1;
  const CommandOptions* opt = nullptr;
};

inline nlohmann::json envelope(const Context& ctx, nlohmann::json result)
{
  nlohmann::json j;
  j["command"] = ctx.opt->command;
  j["spec_hash"] = ctx.hash;
  j["constants_version"] = PhysicalConstants::version;
  j["constants"] = {{"hbar", PhysicalConstants::hbar},
                    {"m_nucleon", PhysicalConstants::m_nucleon},
                    {"k_boltzmann", PhysicalConstants::k_boltzmann}};
  j["quadrature"] = to_json(ctx.spec.quadrature);
  j["csl"] = {{"lambda", ctx.spec.csl.lambda_rate}, {"r_c", ctx.spec.csl.r_c}};
  j["result"] = std::move(result);
  return j;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline nlohmann::json design_json(const LayerDesign& d)
{
  return {{"n_periods", d.n_periods},
          {"material_a", to_json(d.material_a)},
          {"material_b", to_json(d.material_b)},
          {"thickness_a", d.layer_thicknesses.at(0)},
          {"thickness_b", d.layer_thicknesses.at(1)},
          {"mean_layer_thickness", d.mean_layer_thickness()},
          {"height", d.height()},
          {"lx", d.lx},
          {"ly", d.ly},
          {"total_mass", d.total_mass},
          {"mass_a", d.mass_a()},
          {"mass_b", d.mass_b()}};
}

inline KGrid resolve_k_grid(const Context& ctx)
{
  const CommandOptions& o = *ctx.opt;
  KGrid g = ctx.spec.task.k_grid.value_or(KGrid{});
  const bool have = ctx.spec.task.k_grid.has_value() || o.k_max.has_value();
  if (!have) throw ValidationError("task.k_grid", "mu needs a k-grid (task.k_grid or --k-max/--points)");
  if (o.k_direction) g.direction = *o.k_direction;
  if (o.k_min) g.k_min = *o.k_min;
  if (o.k_max) g.k_max = *o.k_max;
  if (o.k_points) g.points = *o.k_points;
  if (!(g.direction.norm2() > 0.0)) throw ValidationError("task.k_grid.direction", "must be non-zero");
  if (g.points == 0) throw ValidationError("task.k_grid.points", "must be at least 1");
  if (!std::isfinite(g.k_min) || !std::isfinite(g.k_max)) throw ValidationError("task.k_grid", "must be finite");
  return g;
}

inline CommandResult cmd_mu(const Context& ctx)
{
  const KGrid grid = resolve_k_grid(ctx);
  const MassModel& m = ctx.spec.mass_model;
  const auto ks = grid.wavevectors();
  std::vector<Complex> values(ks.size());
  parallel_for(ks.size(), ctx.threads, [&](std::size_t i) { values[i] = normalized_form_factor(m, ks[i]); });

  if (ctx.opt->csv) {
    CsvWriter w{"kx", "ky", "kz", "re", "im", "abs_norm"};
    for (std::size_t i = 0; i < ks.size(); ++i) {
      w.cell(ks[i].x).cell(ks[i].y).cell(ks[i].z).cell(values[i].real()).cell(values[i].imag());
      w.cell(std::abs(values[i])).end_row();
    }
    return {exit_ok, w.str(), {}};
  }
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < ks.size(); ++i)
    rows.push_back({ks[i].x, ks[i].y, ks[i].z, values[i].real(), values[i].imag(), std::abs(values[i])});
  nlohmann::json r = {{"total_mass", total_mass(m)},
                      {"k_grid",
                       {{"direction", to_json(grid.direction)},
                        {"k_min", grid.k_min},
                        {"k_max", grid.k_max},
                        {"points", grid.points}}},
                      {"columns", {"kx", "ky", "kz", "re", "im", "abs_norm"}},
                      {"rows", rows}};
  return {exit_ok, dump(envelope(ctx, r)), {}};
}

inline std::string heat_table(const HeatingReport& r)
{
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "  gamma_total       %.6e W\n"
                "  gamma_cm          %.6e W\n"
                "  gamma_int         %.6e W%s\n"
                "  reduction_factor  %.6e\n"
                "  quadrature error  %.1e (relative)\n",
                r.gamma_total, r.gamma_cm, r.gamma_int, r.internal_clamped ? "  (clamped)" : "",
                r.reduction_factor, r.quadrature_estimate_error);
  return buf;
}

inline CommandResult cmd_heat(const Context& ctx)
{
  const ExperimentSpec& s = ctx.spec;
  const HeatingReport r = heating_report(s.mass_model, s.csl, s.quadrature);
  std::optional<McEstimate> mc;
  if (ctx.opt->monte_carlo) mc = gamma_cm_mc(s.mass_model, s.csl, s.quadrature, ctx.threads);
  CommandResult out;
  if (ctx.opt->table) out.diagnostics = heat_table(r);

  if (ctx.opt->csv) {
    CsvWriter w{"gamma_total", "gamma_cm",        "gamma_int",          "reduction_factor",
                "quadrature_estimate_error",      "internal_clamped",   "gamma_cm_mc",
                "gamma_cm_mc_std_error"};
    w.cell(r.gamma_total).cell(r.gamma_cm).cell(r.gamma_int).cell(r.reduction_factor);
    w.cell(r.quadrature_estimate_error).cell(r.internal_clamped);
    if (mc)
      w.cell(mc->value).cell(mc->std_error);
    else
      w.raw("").raw("");
    w.end_row();
    out.payload = w.str();
    return out;
  }
  nlohmann::json j = {{"total_mass", total_mass(s.mass_model)},
                      {"gamma_total", r.gamma_total},
                      {"gamma_cm", r.gamma_cm},
                      {"gamma_int", r.gamma_int},
                      {"reduction_factor", r.reduction_factor},
                      {"quadrature_estimate_error", r.quadrature_estimate_error},
                      {"internal_clamped", r.internal_clamped}};
  if (mc)
    j["monte_carlo"] = {{"gamma_cm", mc->value},
                        {"std_error", mc->std_error},
                        {"reduction_factor", mc->reduction},
                        {"reduction_std_error", mc->reduction_std_error},
                        {"samples", mc->samples}};
  out.payload = dump(envelope(ctx, j));
  return out;
}

inline CommandResult cmd_scan(const Context& ctx)
{
  const ExperimentSpec& s = ctx.spec;
  if (s.task.rc_grid.empty()) throw ValidationError("task.rc_grid", "scan needs an r_c grid");
  const ScanTable t = scan_rc(s.mass_model, s.task.rc_grid, s.quadrature, s.task.observed_power, ctx.threads);
  CommandResult out;
  for (const auto& row : t.rows)
    if (row.failed) {
      out.exit_code = exit_compute;
      out.diagnostics += "r_c = " + format_double(row.value) + ": " + row.error + "\n";
    }
  if (ctx.opt->csv) {
    CsvWriter w{"r_c", "gamma_cm_per_lambda", "reduction_factor", "lambda_bound", "failed"};
    for (const auto& row : t.rows) {
      w.cell(row.value).cell(row.gamma_cm_per_lambda).cell(row.reduction_factor);
      if (row.lambda_bound)
        w.cell(*row.lambda_bound);
      else
        w.raw("");
      w.cell(row.failed).end_row();
    }
    out.payload = w.str();
    return out;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = {{"r_c", row.value},
                        {"gamma_cm_per_lambda", row.gamma_cm_per_lambda},
                        {"reduction_factor", row.reduction_factor},
                        {"failed", row.failed}};
    if (row.lambda_bound) r["lambda_bound"] = number(*row.lambda_bound);
    if (row.failed) r["error"] = row.error;
    rows.push_back(r);
  }
  nlohmann::json j = {{"axis", t.axis}, {"rows", rows}};
  if (s.task.observed_power) j["observed_power"] = *s.task.observed_power;
  out.payload = dump(envelope(ctx, j));
  return out;
}

inline const LayeringSetup& require_layering(const ExperimentSpec& s)
{
  if (!s.task.layering) throw ValidationError("task.layering", "this command needs a layering block");
  return *s.task.layering;
}

inline CommandResult cmd_optimize(const Context& ctx)
{
  const ExperimentSpec& s = ctx.spec;
  const LayeringSetup& setup = require_layering(s);
  const OptimizationResult r =
      optimize_layers(setup, s.task.n_layers_min, s.task.n_layers_max, s.csl, s.quadrature, 1e-9, ctx.threads);
  if (ctx.opt->csv) {
    CsvWriter w{"n_periods", "thickness_a", "thickness_b", "mean_layer_thickness", "gamma_cm", "best"};
    for (const auto& c : r.candidates) {
      const LayerDesign d = make_design(setup, c.n_periods);
      w.cell(static_cast<std::uint64_t>(c.n_periods)).cell(d.layer_thicknesses[0]).cell(d.layer_thicknesses[1]);
      w.cell(c.mean_layer_thickness).cell(c.gamma_cm).cell(c.n_periods == r.best.n_periods).end_row();
    }
    return {exit_ok, w.str(), {}};
  }
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : r.candidates)
    cands.push_back(
        {{"n_periods", c.n_periods}, {"gamma_cm", c.gamma_cm}, {"mean_layer_thickness", c.mean_layer_thickness}});
  nlohmann::json j = {{"best", design_json(r.best)}, {"gamma_cm", r.gamma_cm}, {"candidates", cands}};
  return {exit_ok, dump(envelope(ctx, j)), {}};
}

inline CommandResult cmd_discriminate(const Context& ctx)
{
  const ExperimentSpec& s = ctx.spec;
  const LayeringSetup& setup = require_layering(s);
  if (!s.thermal) throw ValidationError("thermal", "discriminate needs a thermal block");
  if (s.task.designs.size() < 2) throw ValidationError("task.designs", "list at least two period counts");
  std::vector<LayerDesign> designs;
  for (std::size_t n : s.task.designs) designs.push_back(make_design(setup, n));
  const DiscriminabilityReport r = discriminability_report(designs, s.csl, *s.thermal, s.quadrature,
                                                           s.task.discriminability_threshold, ctx.threads);
  if (ctx.opt->csv) {
    CsvWriter w{"n_periods", "mean_layer_thickness", "gamma_cm", "gamma_th", "saturation_power"};
    for (std::size_t i = 0; i < r.designs.size(); ++i) {
      w.cell(static_cast<std::uint64_t>(r.designs[i].n_periods)).cell(designs[i].mean_layer_thickness());
      w.cell(r.designs[i].gamma_cm).cell(r.gamma_th).cell(r.designs[i].saturation_power).end_row();
    }
    return {exit_ok, w.str(), {}};
  }
  nlohmann::json ds = nlohmann::json::array();
  for (std::size_t i = 0; i < r.designs.size(); ++i) {
    nlohmann::json d = design_json(designs[i]);
    d["gamma_cm"] = r.designs[i].gamma_cm;
    d["saturation_power"] = r.designs[i].saturation_power;
    ds.push_back(d);
  }
  nlohmann::json j = {{"designs", ds},
                      {"gamma_th", r.gamma_th},
                      {"spread", r.spread},
                      {"threshold", r.threshold},
                      {"discriminating", r.discriminating}};
  return {exit_ok, dump(envelope(ctx, j)), {}};
}

inline CommandResult cmd_bound(const Context& ctx)
{
  const ExperimentSpec& s = ctx.spec;
  if (!s.task.observed_power) throw ValidationError("task.observed_power", "bound needs an observed power");
  const double p = *s.task.observed_power;
  const double per_lambda = gamma_cm(s.mass_model, CslParams{1.0, s.csl.r_c}, s.quadrature).value;
  const double lambda_max = lambda_bound_from_rate(p, per_lambda);
  if (ctx.opt->csv) {
    CsvWriter w{"observed_power", "r_c", "gamma_cm_per_lambda", "lambda_max"};
    w.cell(p).cell(s.csl.r_c).cell(per_lambda).cell(lambda_max).end_row();
    return {exit_ok, w.str(), {}};
  }
  nlohmann::json j = {{"observed_power", p},
                      {"r_c", s.csl.r_c},
                      {"gamma_cm_per_lambda", per_lambda},
                      {"lambda_max", number(lambda_max)}};
  return {exit_ok, dump(envelope(ctx, j)), {}};
}

inline CommandResult cmd_lattice_check(const Context& ctx)
{
  LatticeCheckOptions o;
  o.seed = ctx.spec.quadrature.rng_seed;
  o.r_c = ctx.spec.csl.r_c;
  const LatticeCheckReport r = run_lattice_check(o);
  CommandResult out;
  if (!r.all_passed) {
    out.exit_code = exit_compute;
    out.diagnostics = "lattice-check: at least one check failed\n";
  }
  if (ctx.opt->csv) {
    CsvWriter w{"check", "passed"};
    for (const auto& c : r.checks) w.raw(c.name).cell(c.passed).end_row();
    out.payload = w.str();
    return out;
  }
  out.payload = dump(envelope(ctx, to_json(r)));
  return out;
}

/// Runs one subcommand and maps every failure to its exit code; never throws.
inline CommandResult run_command(const CommandOptions& opt)
{
  Context ctx;
  ctx.opt = &opt;
  ctx.threads = opt.threads > 0 ? opt.threads : default_thread_count();
  try {
    if (opt.spec_path) {
      const std::string text = read_file(*opt.spec_path);
      ctx.spec = parse_spec(text);
      ctx.hash = spec_hash(text);
    } else if (opt.command == "lattice-check") {
      ctx.hash = sha256_hex(nlohmann::json::object().dump());
    } else {
      return {exit_spec, {}, "error: --spec is required for '" + opt.command + "'\n"};
    }
    if (opt.seed) ctx.spec.quadrature.rng_seed = *opt.seed;
  } catch (const ParseError& e) {
    return {exit_spec, {}, std::string("spec error: ") + e.what() + "\n"};
  } catch (const ValidationError& e) {
    return {exit_spec, {}, std::string("spec error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {exit_spec, {}, std::string("spec error: ") + e.what() + "\n"};
  }

  try {
    if (opt.command == "mu") return cmd_mu(ctx);
    if (opt.command == "heat") return cmd_heat(ctx);
    if (opt.command == "scan") return cmd_scan(ctx);
    if (opt.command == "optimize") return cmd_optimize(ctx);
    if (opt.command == "discriminate") return cmd_discriminate(ctx);
    if (opt.command == "bound") return cmd_bound(ctx);
    if (opt.command == "lattice-check") return cmd_lattice_check(ctx);
    return {exit_spec, {}, "error: unknown command '" + opt.command + "'\n"};
  } catch (const ValidationError& e) {
    return {exit_spec, {}, std::string("spec error: ") + e.what() + "\n"};
  } catch (const InfeasibleDesign& e) {
    return {exit_infeasible, {}, std::string("infeasible: ") + e.what() + "\n"};
  } catch (const ConstraintViolation& e) {
    return {exit_infeasible, {}, std::string("infeasible: ") + e.what() + "\n"};
  } catch (const QuadratureNotConverged& e) {
    return {exit_compute, {}, std::string("compute error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {exit_compute, {}, std::string("compute error: ") + e.what() + "\n"};
  }
}

}  // namespace cslheat::cli
