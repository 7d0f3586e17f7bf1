#pragma once

// Experiment specification files (JSON, SI units).
//
//   {
//     "version": 1,
//     "csl": {"lambda": 1e-16, "r_c": 1e-7},
//     "mass_model": {"type": "cuboid", "lx": 1e-3, "ly": 1e-3, "lz": 1e-3,
//                    "material": "silicon", "offset": [0, 0, 0],
//                    "materials": {"silicon": 2329}},
//     "thermal": {"gamma_th": 1e-3, "temperature": 0.1},
//     "quadrature": {"rel_tol": 1e-9, "u_max": 8, "mc_samples": 200000, "rng_seed": 1},
//     "task": {...}
//   }
//
// See README.md for the full schema. A material reference is either a name,
// resolved against mass_model.materials and then the built-in table, or an
// inline {"name": ..., "density": ...} object.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslheat/analysis.hpp"
#include "cslheat/core.hpp"
#include "cslheat/geometry.hpp"

namespace cslheat {

inline constexpr int spec_schema_version = 1;

/// Built-in densities in kg/m^3.
inline const std::map<std::string, double>& builtin_materials()
{
  static const std::map<std::string, double> table = {
      {"aluminium", 2700.0}, {"gold", 19320.0},    {"osmium", 22590.0}, {"platinum", 21450.0},
      {"silica", 2203.0},    {"silicon", 2329.0},  {"tungsten", 19250.0},
  };
  return table;
}

struct KGrid
{
  Vec3 direction{1.0, 0.0, 0.0};
  double k_min = 0.0;  // 1/m
  double k_max = 0.0;
  std::size_t points = 0;

  bool operator==(const KGrid&) const = default;

  std::vector<Wavevector> wavevectors() const
  {
    const double norm = std::sqrt(direction.norm2());
    const Vec3 unit = (1.0 / norm) * direction;
    std::vector<Wavevector> out;
    out.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double t = points == 1 ? k_min
                                   : k_min + (k_max - k_min) * static_cast<double>(i) /
                                                 static_cast<double>(points - 1);
      out.push_back(t * unit);
    }
    return out;
  }
};

struct TaskParams
{
  std::optional<KGrid> k_grid;
  std::vector<double> rc_grid;
  std::optional<double> observed_power;
  std::optional<LayeringSetup> layering;
  std::size_t n_layers_min = 1;
  std::size_t n_layers_max = 64;
  std::vector<std::size_t> designs;
  double discriminability_threshold = 0.1;
  std::optional<double> lattice_spacing;

  bool operator==(const TaskParams& o) const
  {
    auto same_layering = [](const std::optional<LayeringSetup>& a, const std::optional<LayeringSetup>& b) {
      if (a.has_value() != b.has_value()) return false;
      if (!a) return true;
      return a->material_a == b->material_a && a->material_b == b->material_b &&
             a->mass_ratio == b->mass_ratio && a->total_mass == b->total_mass && a->lx == b->lx &&
             a->ly == b->ly && a->min_layer_thickness == b->min_layer_thickness &&
             a->max_height == b->max_height;
    };
    return k_grid == o.k_grid && rc_grid == o.rc_grid && observed_power == o.observed_power &&
           same_layering(layering, o.layering) && n_layers_min == o.n_layers_min &&
           n_layers_max == o.n_layers_max && designs == o.designs &&
           discriminability_threshold == o.discriminability_threshold && lattice_spacing == o.lattice_spacing;
  }
};

struct ExperimentSpec
{
  int version = spec_schema_version;
  CslParams csl;
  MassModel mass_model;
  std::optional<ThermalModel> thermal;
  QuadratureSpec quadrature;
  TaskParams task;

  bool operator==(const ExperimentSpec&) const = default;
};

struct Violation
{
  std::string field;
  std::string message;
};

namespace detail {

inline void require(std::vector<Violation>& out, bool ok, std::string field, std::string message)
{
  if (!ok) out.push_back({std::move(field), std::move(message)});
}

inline void check_material(std::vector<Violation>& out, const Material& m, const std::string& field)
{
  require(out, m.density > 0.0 && std::isfinite(m.density), field + ".density", "must be positive");
}

inline void check_length(std::vector<Violation>& out, double v, const std::string& field)
{
  require(out, v > 0.0 && std::isfinite(v), field, "length must be positive");
}

}  // namespace detail

/// Every invariant violation in `spec`, each with a field path. Empty iff the
/// spec is valid.
inline std::vector<Violation> validate_spec(const ExperimentSpec& spec)
{
  using detail::check_length;
  using detail::check_material;
  using detail::require;
  std::vector<Violation> v;
  require(v, spec.version == spec_schema_version, "version", "unsupported schema version");
  require(v, spec.csl.lambda_rate >= 0.0 && std::isfinite(spec.csl.lambda_rate), "csl.lambda_rate",
          "must be non-negative");
  require(v, spec.csl.r_c > 0.0 && std::isfinite(spec.csl.r_c), "csl.r_c", "must be positive");

  const MassModel& mm = spec.mass_model;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          require(v, s.mass > 0.0 && std::isfinite(s.mass), "mass_model.mass", "must be positive");
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          check_length(v, s.lx, "mass_model.lx");
          check_length(v, s.ly, "mass_model.ly");
          check_length(v, s.lz, "mass_model.lz");
          check_material(v, s.material, "mass_model.material");
        } else if constexpr (std::is_same_v<T, Sphere>) {
          check_length(v, s.radius, "mass_model.radius");
          check_material(v, s.material, "mass_model.material");
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          check_length(v, s.radius, "mass_model.radius");
          check_length(v, s.height, "mass_model.height");
          check_material(v, s.material, "mass_model.material");
        } else {
          check_length(v, s.lx, "mass_model.lx");
          check_length(v, s.ly, "mass_model.ly");
          require(v, !s.layers.empty(), "mass_model.layers", "needs at least one layer");
          for (std::size_t i = 0; i < s.layers.size(); ++i) {
            const std::string f = "mass_model.layers[" + std::to_string(i) + "]";
            check_length(v, s.layers[i].thickness, f + ".thickness");
            check_material(v, s.layers[i].material, f + ".material");
          }
        }
      },
      mm.shape);

  if (spec.thermal) {
    require(v, spec.thermal->gamma_th >= 0.0, "thermal.gamma_th", "must be non-negative");
    require(v, spec.thermal->temperature >= 0.0, "thermal.temperature", "must be non-negative");
  }

  const QuadratureSpec& q = spec.quadrature;
  require(v, q.rel_tol > 0.0 && q.rel_tol < 1e-2, "quadrature.rel_tol", "must lie in (0, 1e-2)");
  require(v, q.u_max >= 6.0 && std::isfinite(q.u_max), "quadrature.u_max", "must be at least 6");
  require(v, q.mc_samples >= 1000, "quadrature.mc_samples", "must be at least 1000");

  const TaskParams& t = spec.task;
  if (t.k_grid) {
    require(v, t.k_grid->direction.norm2() > 0.0, "task.k_grid.direction", "must be non-zero");
    require(v, t.k_grid->points >= 1, "task.k_grid.points", "must be at least 1");
    require(v, std::isfinite(t.k_grid->k_min) && std::isfinite(t.k_grid->k_max), "task.k_grid",
            "bounds must be finite");
  }
  for (std::size_t i = 0; i < t.rc_grid.size(); ++i) {
    const std::string f = "task.rc_grid[" + std::to_string(i) + "]";
    require(v, t.rc_grid[i] > 0.0, f, "must be positive");
    if (i > 0) require(v, t.rc_grid[i] > t.rc_grid[i - 1], f, "grid must be strictly increasing");
  }
  if (t.observed_power) require(v, *t.observed_power >= 0.0, "task.observed_power", "must be non-negative");
  if (t.layering) {
    const LayeringSetup& l = *t.layering;
    check_material(v, l.material_a, "task.layering.material_a");
    check_material(v, l.material_b, "task.layering.material_b");
    require(v, l.mass_ratio > 0.0, "task.layering.mass_ratio", "must be positive");
    require(v, l.total_mass > 0.0, "task.layering.total_mass", "must be positive");
    check_length(v, l.lx, "task.layering.lx");
    check_length(v, l.ly, "task.layering.ly");
    require(v, l.min_layer_thickness >= 0.0, "task.layering.min_layer_thickness", "must be non-negative");
    require(v, l.max_height > 0.0, "task.layering.max_height", "must be positive");
  }
  require(v, t.n_layers_min >= 1, "task.n_layers_min", "must be at least 1");
  require(v, t.n_layers_max >= t.n_layers_min, "task.n_layers_max", "must not be below n_layers_min");
  for (std::size_t i = 0; i < t.designs.size(); ++i)
    require(v, t.designs[i] >= 1, "task.designs[" + std::to_string(i) + "]", "must be at least 1");
  require(v, t.discriminability_threshold >= 0.0, "task.discriminability_threshold", "must be non-negative");
  if (t.lattice_spacing) check_length(v, *t.lattice_spacing, "task.lattice_spacing");
  return v;
}

namespace detail {

using nlohmann::json;

class Reader
{
 public:
  explicit Reader(const json& materials_table) : materials_(materials_table) {}

  static const json* find(const json& obj, const char* key)
  {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  static double number(const json& obj, const char* key, const std::string& path)
  {
    const json* j = find(obj, key);
    if (!j) throw ValidationError(path, "required field is missing");
    if (!j->is_number()) throw ValidationError(path, "must be a number");
    return j->get<double>();
  }

  static double number_or(const json& obj, const char* key, const std::string& path, double fallback)
  {
    return find(obj, key) ? number(obj, key, path) : fallback;
  }

  static std::uint64_t count_or(const json& obj, const char* key, const std::string& path, std::uint64_t fallback)
  {
    const json* j = find(obj, key);
    if (!j) return fallback;
    if (j->is_number_unsigned()) return j->get<std::uint64_t>();
    if (j->is_number_float()) {
      const double d = j->get<double>();
      if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw ValidationError(path, "must be a non-negative integer");
  }

  static Vec3 vec3(const json& j, const std::string& path)
  {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
      throw ValidationError(path, "must be an array of three numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  }

  Material material(const json& j, const std::string& path) const
  {
    if (j.is_string()) {
      const std::string name = j.get<std::string>();
      if (materials_.is_object()) {
        if (const json* d = find(materials_, name.c_str())) {
          if (!d->is_number()) throw ValidationError(path, "density of material '" + name + "' must be a number");
          return {name, d->get<double>()};
        }
      }
      const auto& builtin = builtin_materials();
      const auto it = builtin.find(name);
      if (it == builtin.end()) throw ValidationError(path, "unknown material '" + name + "'");
      return {name, it->second};
    }
    if (j.is_object()) {
      const json* n = find(j, "name");
      return {n && n->is_string() ? n->get<std::string>() : std::string{}, number(j, "density", path + ".density")};
    }
    throw ValidationError(path, "must be a material name or {name, density}");
  }

  MassModel mass_model(const json& j) const
  {
    const std::string p = "mass_model";
    if (!j.is_object()) throw ValidationError(p, "must be an object");
    const json* type = find(j, "type");
    if (!type || !type->is_string()) throw ValidationError(p + ".type", "required string field");
    const std::string t = type->get<std::string>();
    MassModel m;
    if (const json* off = find(j, "offset")) m.offset = vec3(*off, p + ".offset");
    auto mat = [&]() {
      const json* mj = find(j, "material");
      if (!mj) throw ValidationError(p + ".material", "required field is missing");
      return material(*mj, p + ".material");
    };
    if (t == "point_mass") {
      PointMass s;
      s.mass = number(j, "mass", p + ".mass");
      if (const json* pos = find(j, "position")) s.position = vec3(*pos, p + ".position");
      m.shape = s;
    } else if (t == "cuboid") {
      m.shape = Cuboid{number(j, "lx", p + ".lx"), number(j, "ly", p + ".ly"), number(j, "lz", p + ".lz"), mat()};
    } else if (t == "sphere") {
      m.shape = Sphere{number(j, "radius", p + ".radius"), mat()};
    } else if (t == "cylinder") {
      m.shape = Cylinder{number(j, "radius", p + ".radius"), number(j, "height", p + ".height"), mat()};
    } else if (t == "layered_stack") {
      LayeredStack s;
      s.lx = number(j, "lx", p + ".lx");
      s.ly = number(j, "ly", p + ".ly");
      const json* layers = find(j, "layers");
      if (!layers || !layers->is_array()) throw ValidationError(p + ".layers", "required array");
      for (std::size_t i = 0; i < layers->size(); ++i) {
        const std::string lp = p + ".layers[" + std::to_string(i) + "]";
        const json& lj = (*layers)[i];
        if (!lj.is_object()) throw ValidationError(lp, "must be an object");
        const json* mj = find(lj, "material");
        if (!mj) throw ValidationError(lp + ".material", "required field is missing");
        s.layers.push_back({material(*mj, lp + ".material"), number(lj, "thickness", lp + ".thickness")});
      }
      m.shape = std::move(s);
    } else {
      throw ValidationError(p + ".type", "unknown mass model type '" + t + "'");
    }
    return m;
  }

  TaskParams task(const json& j) const
  {
    TaskParams t;
    if (!j.is_object()) throw ValidationError("task", "must be an object");
    if (const json* k = find(j, "k_grid")) {
      KGrid g;
      if (const json* d = find(*k, "direction")) g.direction = vec3(*d, "task.k_grid.direction");
      g.k_min = number_or(*k, "k_min", "task.k_grid.k_min", 0.0);
      g.k_max = number(*k, "k_max", "task.k_grid.k_max");
      g.points = count_or(*k, "points", "task.k_grid.points", 0);
      t.k_grid = g;
    }
    if (const json* rc = find(j, "rc_grid")) {
      if (rc->is_array()) {
        for (std::size_t i = 0; i < rc->size(); ++i) {
          if (!(*rc)[i].is_number())
            throw ValidationError("task.rc_grid[" + std::to_string(i) + "]", "must be a number");
          t.rc_grid.push_back((*rc)[i].get<double>());
        }
      } else if (rc->is_object()) {
        const double lo = number(*rc, "min", "task.rc_grid.min");
        const double hi = number(*rc, "max", "task.rc_grid.max");
        const std::uint64_t n = count_or(*rc, "points", "task.rc_grid.points", 0);
        std::string spacing = "log";
        if (const json* s = find(*rc, "spacing"); s && s->is_string()) spacing = s->get<std::string>();
        if (spacing != "log" && spacing != "linear")
          throw ValidationError("task.rc_grid.spacing", "must be 'log' or 'linear'");
        if (n == 0) throw ValidationError("task.rc_grid.points", "must be at least 1");
        if (spacing == "log" && !(lo > 0.0)) throw ValidationError("task.rc_grid.min", "must be positive");
        for (std::uint64_t i = 0; i < n; ++i) {
          const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
          t.rc_grid.push_back(spacing == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
        }
      } else {
        throw ValidationError("task.rc_grid", "must be an array or {min, max, points, spacing}");
      }
    }
    if (find(j, "observed_power")) t.observed_power = number(j, "observed_power", "task.observed_power");
    if (const json* l = find(j, "layering")) {
      const std::string p = "task.layering";
      if (!l->is_object()) throw ValidationError(p, "must be an object");
      LayeringSetup s;
      const json* a = find(*l, "material_a");
      const json* b = find(*l, "material_b");
      if (!a) throw ValidationError(p + ".material_a", "required field is missing");
      if (!b) throw ValidationError(p + ".material_b", "required field is missing");
      s.material_a = material(*a, p + ".material_a");
      s.material_b = material(*b, p + ".material_b");
      s.mass_ratio = number(*l, "mass_ratio", p + ".mass_ratio");
      s.total_mass = number(*l, "total_mass", p + ".total_mass");
      s.lx = number(*l, "lx", p + ".lx");
      s.ly = number(*l, "ly", p + ".ly");
      s.min_layer_thickness = number_or(*l, "min_layer_thickness", p + ".min_layer_thickness", 0.0);
      s.max_height = number_or(*l, "max_height", p + ".max_height", std::numeric_limits<double>::infinity());
      t.layering = s;
    }
    t.n_layers_min = count_or(j, "n_layers_min", "task.n_layers_min", 1);
    t.n_layers_max = count_or(j, "n_layers_max", "task.n_layers_max", 64);
    if (const json* d = find(j, "designs")) {
      if (!d->is_array()) throw ValidationError("task.designs", "must be an array of period counts");
      for (std::size_t i = 0; i < d->size(); ++i) {
        if (!(*d)[i].is_number_unsigned())
          throw ValidationError("task.designs[" + std::to_string(i) + "]", "must be a positive integer");
        t.designs.push_back((*d)[i].get<std::size_t>());
      }
    }
    t.discriminability_threshold =
        number_or(j, "discriminability_threshold", "task.discriminability_threshold", 0.1);
    if (find(j, "lattice_spacing")) t.lattice_spacing = number(j, "lattice_spacing", "task.lattice_spacing");
    return t;
  }

 private:
  const json& materials_;
};

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Parses and validates a spec document. Defaults (rel_tol 1e-9, u_max 8,
/// mc_samples 2e5, rng_seed 1, version 1) are filled in.
inline ExperimentSpec parse_spec(const std::string& text)
{
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    throw ParseError("malformed spec at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }
  if (!doc.is_object()) throw ValidationError("$", "spec document must be a JSON object");

  using R = detail::Reader;
  ExperimentSpec spec;
  if (const json* v = R::find(doc, "version")) {
    if (!v->is_number_integer()) throw ValidationError("version", "must be an integer");
    spec.version = v->get<int>();
  }

  const json* csl = R::find(doc, "csl");
  if (!csl || !csl->is_object()) throw ValidationError("csl", "required object is missing");
  if (R::find(*csl, "lambda"))
    spec.csl.lambda_rate = R::number(*csl, "lambda", "csl.lambda_rate");
  else
    spec.csl.lambda_rate = R::number(*csl, "lambda_rate", "csl.lambda_rate");
  spec.csl.r_c = R::number(*csl, "r_c", "csl.r_c");

  const json* mm = R::find(doc, "mass_model");
  if (!mm) throw ValidationError("mass_model", "required object is missing");
  static const json no_materials = json::object();
  const json* table = mm->is_object() ? R::find(*mm, "materials") : nullptr;
  if (table && !table->is_object()) throw ValidationError("mass_model.materials", "must map names to densities");
  const R reader(table ? *table : no_materials);
  spec.mass_model = reader.mass_model(*mm);

  if (const json* th = R::find(doc, "thermal"); th && !th->is_null()) {
    if (!th->is_object()) throw ValidationError("thermal", "must be an object");
    spec.thermal = ThermalModel{R::number(*th, "gamma_th", "thermal.gamma_th"),
                                R::number(*th, "temperature", "thermal.temperature")};
  }
  if (const json* q = R::find(doc, "quadrature")) {
    if (!q->is_object()) throw ValidationError("quadrature", "must be an object");
    spec.quadrature.rel_tol = R::number_or(*q, "rel_tol", "quadrature.rel_tol", spec.quadrature.rel_tol);
    spec.quadrature.u_max = R::number_or(*q, "u_max", "quadrature.u_max", spec.quadrature.u_max);
    spec.quadrature.mc_samples = R::count_or(*q, "mc_samples", "quadrature.mc_samples", spec.quadrature.mc_samples);
    spec.quadrature.rng_seed = R::count_or(*q, "rng_seed", "quadrature.rng_seed", spec.quadrature.rng_seed);
  }
  if (const json* t = R::find(doc, "task")) spec.task = reader.task(*t);

  const auto violations = validate_spec(spec);
  if (!violations.empty()) throw ValidationError(violations.front().field, violations.front().message);
  return spec;
}

inline std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ExperimentSpec load_spec(const std::string& path) { return parse_spec(read_file(path)); }

// ---------------------------------------------------------------------------
// Serialisation

inline nlohmann::json to_json(const Material& m) { return {{"name", m.name}, {"density", m.density}}; }

inline nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

inline nlohmann::json to_json(const MassModel& model)
{
  nlohmann::json j = std::visit(
      [](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return {{"type", "point_mass"}, {"mass", s.mass}, {"position", to_json(s.position)}};
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          return {{"type", "cuboid"}, {"lx", s.lx}, {"ly", s.ly}, {"lz", s.lz}, {"material", to_json(s.material)}};
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return {{"type", "sphere"}, {"radius", s.radius}, {"material", to_json(s.material)}};
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return {{"type", "cylinder"},
                  {"radius", s.radius},
                  {"height", s.height},
                  {"material", to_json(s.material)}};
        } else {
          nlohmann::json layers = nlohmann::json::array();
          for (const auto& l : s.layers)
            layers.push_back({{"material", to_json(l.material)}, {"thickness", l.thickness}});
          return {{"type", "layered_stack"}, {"lx", s.lx}, {"ly", s.ly}, {"layers", layers}};
        }
      },
      model.shape);
  j["offset"] = to_json(model.offset);
  return j;
}

inline nlohmann::json to_json(const QuadratureSpec& q)
{
  return {{"rel_tol", q.rel_tol}, {"u_max", q.u_max}, {"mc_samples", q.mc_samples}, {"rng_seed", q.rng_seed}};
}

inline nlohmann::json to_json(const TaskParams& t)
{
  nlohmann::json j = nlohmann::json::object();
  if (t.k_grid)
    j["k_grid"] = {{"direction", to_json(t.k_grid->direction)},
                   {"k_min", t.k_grid->k_min},
                   {"k_max", t.k_grid->k_max},
                   {"points", t.k_grid->points}};
  if (!t.rc_grid.empty()) j["rc_grid"] = t.rc_grid;
  if (t.observed_power) j["observed_power"] = *t.observed_power;
  if (t.layering) {
    const auto& l = *t.layering;
    nlohmann::json lj = {{"material_a", to_json(l.material_a)},
                         {"material_b", to_json(l.material_b)},
                         {"mass_ratio", l.mass_ratio},
                         {"total_mass", l.total_mass},
                         {"lx", l.lx},
                         {"ly", l.ly},
                         {"min_layer_thickness", l.min_layer_thickness}};
    if (std::isfinite(l.max_height)) lj["max_height"] = l.max_height;
    j["layering"] = lj;
  }
  j["n_layers_min"] = t.n_layers_min;
  j["n_layers_max"] = t.n_layers_max;
  if (!t.designs.empty()) j["designs"] = t.designs;
  j["discriminability_threshold"] = t.discriminability_threshold;
  if (t.lattice_spacing) j["lattice_spacing"] = *t.lattice_spacing;
  return j;
}

inline nlohmann::json to_json(const ExperimentSpec& spec)
{
  nlohmann::json j;
  j["version"] = spec.version;
  j["csl"] = {{"lambda", spec.csl.lambda_rate}, {"r_c", spec.csl.r_c}};
  j["mass_model"] = to_json(spec.mass_model);
  if (spec.thermal)
    j["thermal"] = {{"gamma_th", spec.thermal->gamma_th}, {"temperature", spec.thermal->temperature}};
  j["quadrature"] = to_json(spec.quadrature);
  j["task"] = to_json(spec.task);
  return j;
}

inline std::string serialize_spec(const ExperimentSpec& spec) { return to_json(spec).dump(2); }

}  // namespace cslheat
