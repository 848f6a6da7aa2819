#include "circlelab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "circlelab/errors.hpp"
#include "circlelab/hash.hpp"

namespace circlelab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("artifact is missing \"") + key + "\"");
  return j.at(key);
}

double num(const Json& j, const char* key) { return parse_double(member(j, key)); }

template <class T>
T integer(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer()) throw DomainError(std::string("\"") + key + "\" must be an integer");
  return v.get<T>();
}

bool boolean(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_boolean()) throw DomainError(std::string("\"") + key + "\" must be a boolean");
  return v.get<bool>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_string()) throw DomainError(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

const Json& array(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_array()) throw DomainError(std::string("\"") + key + "\" must be an array");
  return v;
}

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(format_double(x));
  return a;
}

std::vector<double> doubles_from(const Json& a) {
  if (!a.is_array()) throw DomainError("expected an array of numbers");
  std::vector<double> v;
  for (const Json& x : a) v.push_back(parse_double(x));
  return v;
}

Json complexes(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (Complex z : v) a.push_back(to_json(z));
  return a;
}

std::vector<Complex> complexes_from(const Json& a) {
  if (!a.is_array()) throw DomainError("expected an array of complex numbers");
  std::vector<Complex> v;
  for (const Json& x : a) v.push_back(complex_from_json(x));
  return v;
}

Json continua(const std::vector<PeripheralContinuum>& v) {
  Json a = Json::array();
  for (const auto& k : v) a.push_back(to_json(k));
  return a;
}

std::vector<PeripheralContinuum> continua_from(const Json& a) {
  if (!a.is_array()) throw DomainError("expected an array of continua");
  std::vector<PeripheralContinuum> v;
  for (const Json& x : a) v.push_back(continuum_from_json(x));
  return v;
}

const char* exec_string(Exec e) { return exec_name(e); }

Exec exec_from(const Json& j) {
  const std::string s = j.get<std::string>();
  if (s == "serial") return Exec::serial;
  if (s == "parallel") return Exec::parallel;
  throw DomainError("unknown execution policy " + s);
}

Json to_json(const FatnessConfig& c) {
  return {{"boundary_samples", c.boundary_samples},
          {"interior_samples", c.interior_samples},
          {"radii_per_octave", c.radii_per_octave},
          {"octaves", c.octaves}};
}

FatnessConfig fatness_config_from(const Json& j) {
  FatnessConfig c;
  c.boundary_samples = integer<int>(j, "boundary_samples");
  c.interior_samples = integer<int>(j, "interior_samples");
  c.radii_per_octave = integer<int>(j, "radii_per_octave");
  c.octaves = integer<int>(j, "octaves");
  return c;
}

Json to_json(const DomainQuadratureConfig& c) {
  return {{"base_u", c.base_u},
          {"base_phi", c.base_phi},
          {"max_depth", c.max_depth},
          {"tolerance", format_double(c.tolerance)}};
}

DomainQuadratureConfig quadrature_config_from(const Json& j) {
  DomainQuadratureConfig c;
  c.base_u = integer<int>(j, "base_u");
  c.base_phi = integer<int>(j, "base_phi");
  c.max_depth = integer<int>(j, "max_depth");
  c.tolerance = num(j, "tolerance");
  return c;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw DomainError("expected a number");
  const std::string& s = j.get_ref<const std::string&>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw DomainError("malformed number \"" + s + "\"");
  return v;
}

Json to_json(Complex z) { return Json::array({format_double(z.real()), format_double(z.imag())}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw DomainError("complex numbers are [re, im] pairs");
  return {parse_double(j[0]), parse_double(j[1])};
}

Json to_json(const SpherePoint& p) { return p.is_infinity() ? Json("infinity") : to_json(p.value()); }

SpherePoint sphere_point_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "infinity") return SpherePoint::infinity();
  return SpherePoint(complex_from_json(j));
}

Json to_json(const Cap& c) { return {{"center", to_json(c.center)}, {"radius", format_double(c.radius)}}; }

Cap cap_from_json(const Json& j) { return {sphere_point_from_json(member(j, "center")), num(j, "radius")}; }

Json to_json(const PeripheralContinuum& k) {
  Json j{{"id", k.id()}};
  if (k.is_point()) {
    j["kind"] = "point";
    j["location"] = to_json(k.point_location());
  } else if (k.is_disk()) {
    j["kind"] = "disk";
    j["cap"] = to_json(k.disk_cap());
  } else {
    j["kind"] = "polygon";
    j["vertices"] = complexes(k.polygon_vertices());
  }
  return j;
}

PeripheralContinuum continuum_from_json(const Json& j) {
  const int id = integer<int>(j, "id");
  const std::string kind = text(j, "kind");
  if (kind == "point") return PeripheralContinuum::point(id, sphere_point_from_json(member(j, "location")));
  if (kind == "disk") return PeripheralContinuum::disk(id, cap_from_json(member(j, "cap")));
  if (kind == "polygon") return PeripheralContinuum::polygon(id, complexes_from(member(j, "vertices")));
  throw DomainError("unknown continuum kind " + kind);
}

Json to_json(const Packing& p) { return {{"label", p.label}, {"continua", continua(p.continua)}}; }

Packing packing_from_json(const Json& j) {
  Packing p;
  p.label = text(j, "label");
  p.continua = continua_from(array(j, "continua"));
  return p;
}

Json to_json(const MobiusTransform& t) {
  return {{"a", to_json(t.a())}, {"b", to_json(t.b())}, {"c", to_json(t.c())}, {"d", to_json(t.d())}};
}

MobiusTransform mobius_from_json(const Json& j) {
  return MobiusTransform::from_normalized(complex_from_json(member(j, "a")), complex_from_json(member(j, "b")),
                                          complex_from_json(member(j, "c")), complex_from_json(member(j, "d")));
}

Json to_json(const StageMap& s) {
  return std::visit(Overloaded{[](const MobiusTransform& t) {
                                 Json j{{"type", "mobius"}};
                                 j.update(to_json(t));
                                 return j;
                               },
                               [](const ExteriorMap& e) {
                                 return Json{{"type", "exterior"},
                                             {"center", to_json(e.center())},
                                             {"scale", format_double(e.scale())},
                                             {"capacity", format_double(e.capacity())},
                                             {"log_coefficients", complexes(e.log_coefficients())},
                                             {"fit_residual", format_double(e.fit_residual)},
                                             {"condition", format_double(e.condition)}};
                               },
                               [](const ZipperMap& z) {
                                 return Json{{"type", "zipper"}, {"samples", complexes(z.samples())}};
                               }},
                    s);
}

StageMap stage_map_from_json(const Json& j) {
  const std::string type = text(j, "type");
  if (type == "mobius") return mobius_from_json(j);
  if (type == "exterior") {
    ExteriorMap e(complex_from_json(member(j, "center")), num(j, "scale"), complexes_from(member(j, "log_coefficients")),
                  num(j, "capacity"));
    e.fit_residual = num(j, "fit_residual");
    e.condition = num(j, "condition");
    return e;
  }
  if (type == "zipper") {
    const auto samples = complexes_from(member(j, "samples"));
    return ZipperMap(samples);
  }
  throw DomainError("unknown stage type " + type);
}

Json to_json(const KoebeConfig& c) {
  return {{"degree", c.degree},
          {"samples", c.samples},
          {"grading", format_double(c.grading)},
          {"tolerance", format_double(c.tolerance)},
          {"max_sweeps", c.max_sweeps},
          {"component_cap", c.component_cap},
          {"zipper_for_polygons", c.zipper_for_polygons},
          {"exec", exec_string(c.exec)}};
}

KoebeConfig koebe_config_from_json(const Json& j) {
  KoebeConfig c;
  c.degree = integer<int>(j, "degree");
  c.samples = integer<int>(j, "samples");
  c.grading = num(j, "grading");
  c.tolerance = num(j, "tolerance");
  c.max_sweeps = integer<int>(j, "max_sweeps");
  c.component_cap = integer<std::size_t>(j, "component_cap");
  c.zipper_for_polygons = boolean(j, "zipper_for_polygons");
  c.exec = exec_from(member(j, "exec"));
  return c;
}

Json to_json(const KoebeIterationReport& r) {
  return {{"residuals", doubles(r.residuals)},
          {"sweeps", r.sweeps},
          {"converged", r.converged},
          {"tolerance", format_double(r.tolerance)}};
}

KoebeIterationReport koebe_report_from_json(const Json& j) {
  KoebeIterationReport r;
  r.residuals = doubles_from(array(j, "residuals"));
  r.sweeps = integer<int>(j, "sweeps");
  r.converged = boolean(j, "converged");
  r.tolerance = num(j, "tolerance");
  return r;
}

Json to_json(const CircleDomainMap& m) {
  Json norm = Json::array();
  for (const auto& p : m.normalization()) norm.push_back(to_json(p));
  Json stages = Json::array();
  for (const Stage& s : m.stages()) {
    Json j{{"component", s.component}};
    j.update(to_json(s.map));
    stages.push_back(j);
  }
  return {{"input", to_json(m.input())},
          {"normalization", norm},
          {"stages", stages},
          {"outputs", continua(m.outputs())},
          {"report", to_json(m.report())}};
}

CircleDomainMap map_from_json(const Json& j) {
  const Json& norm = array(j, "normalization");
  if (norm.size() != 3) throw DomainError("a map needs three normalization points");
  std::vector<Stage> stages;
  for (const Json& s : array(j, "stages")) stages.push_back(Stage{integer<int>(s, "component"), stage_map_from_json(s)});
  return CircleDomainMap(packing_from_json(member(j, "input")),
                         {sphere_point_from_json(norm[0]), sphere_point_from_json(norm[1]), sphere_point_from_json(norm[2])},
                         std::move(stages), continua_from(array(j, "outputs")),
                         koebe_report_from_json(member(j, "report")));
}

Json to_json(const Window& w) {
  return {{"x0", format_double(w.x0)}, {"y0", format_double(w.y0)}, {"x1", format_double(w.x1)}, {"y1", format_double(w.y1)}};
}

Window window_from_json(const Json& j) { return {num(j, "x0"), num(j, "y0"), num(j, "x1"), num(j, "y1")}; }

Json to_json(const ModulusInstance& m) {
  return {{"window", to_json(m.window)},
          {"packing", to_json(m.packing)},
          {"e", continua(m.e)},
          {"f", continua(m.f)},
          {"forbidden", m.forbidden},
          {"mode", mode_name(m.mode)}};
}

ModulusInstance modulus_instance_from_json(const Json& j) {
  ModulusInstance m;
  m.window = window_from_json(member(j, "window"));
  m.packing = packing_from_json(member(j, "packing"));
  m.e = continua_from(array(j, "e"));
  m.f = continua_from(array(j, "f"));
  for (const Json& k : array(j, "forbidden")) m.forbidden.push_back(k.get<std::size_t>());
  const std::string mode = text(j, "mode");
  if (mode == mode_name(ModulusMode::plain))
    m.mode = ModulusMode::plain;
  else if (mode == mode_name(ModulusMode::transboundary))
    m.mode = ModulusMode::transboundary;
  else
    throw DomainError("unknown modulus mode " + mode);
  return m;
}

Json to_json(const ModulusConfig& c) {
  return {{"tolerance", format_double(c.tolerance)},
          {"max_rounds", c.max_rounds},
          {"paths_per_round", c.paths_per_round},
          {"max_sweeps", c.max_sweeps},
          {"relaxation", format_double(c.relaxation)},
          {"prune_after", c.prune_after}};
}

ModulusConfig modulus_config_from_json(const Json& j) {
  ModulusConfig c;
  c.tolerance = num(j, "tolerance");
  c.max_rounds = integer<int>(j, "max_rounds");
  c.paths_per_round = integer<int>(j, "paths_per_round");
  c.max_sweeps = integer<int>(j, "max_sweeps");
  c.relaxation = num(j, "relaxation");
  c.prune_after = integer<int>(j, "prune_after");
  return c;
}

Json to_json(const ModulusResult& r) {
  return {{"status", status_name(r.status)},
          {"value", format_double(r.value)},
          {"lower_bound", format_double(r.lower_bound)},
          {"upper_bound", format_double(r.upper_bound)},
          {"gap", format_double(r.gap)},
          {"cell_density", doubles(r.cell_density)},
          {"super_density", doubles(r.super_density)},
          {"active_paths", r.active_paths},
          {"iterations", r.iterations},
          {"constraints", r.constraints}};
}

ModulusResult modulus_result_from_json(const Json& j) {
  ModulusResult r;
  const std::string status = text(j, "status");
  bool known = false;
  for (ModulusStatus s : {ModulusStatus::converged, ModulusStatus::disconnected, ModulusStatus::unbounded})
    if (status == status_name(s)) {
      r.status = s;
      known = true;
    }
  if (!known) throw DomainError("unknown modulus status " + status);
  r.value = num(j, "value");
  r.lower_bound = num(j, "lower_bound");
  r.upper_bound = num(j, "upper_bound");
  r.gap = num(j, "gap");
  r.cell_density = doubles_from(array(j, "cell_density"));
  r.super_density = doubles_from(array(j, "super_density"));
  r.active_paths = array(j, "active_paths").get<std::vector<std::vector<long>>>();
  r.iterations = integer<int>(j, "iterations");
  r.constraints = integer<std::size_t>(j, "constraints");
  return r;
}

Json to_json(const SequenceConfig& c) {
  Json norm = Json::array();
  for (const auto& p : c.normalization) norm.push_back(to_json(p));
  return {{"ns", c.ns},
          {"normalization", norm},
          {"koebe", to_json(c.koebe)},
          {"fatness", to_json(c.fatness)},
          {"quadrature", to_json(c.quadrature)},
          {"seed", c.seed},
          {"curves", c.curves},
          {"curve_tolerance", format_double(c.curve_tolerance)},
          {"deltas", doubles(c.deltas)},
          {"exec", exec_string(c.exec)}};
}

SequenceConfig sequence_config_from_json(const Json& j) {
  SequenceConfig c;
  c.ns = array(j, "ns").get<std::vector<std::size_t>>();
  const Json& norm = array(j, "normalization");
  if (norm.size() != 3) throw DomainError("a sequence needs three normalization points");
  for (std::size_t k = 0; k < 3; ++k) c.normalization[k] = sphere_point_from_json(norm[k]);
  c.koebe = koebe_config_from_json(member(j, "koebe"));
  c.fatness = fatness_config_from(member(j, "fatness"));
  c.quadrature = quadrature_config_from(member(j, "quadrature"));
  c.seed = integer<std::uint64_t>(j, "seed");
  c.curves = integer<int>(j, "curves");
  c.curve_tolerance = num(j, "curve_tolerance");
  c.deltas = doubles_from(array(j, "deltas"));
  c.exec = exec_from(member(j, "exec"));
  return c;
}

Json to_json(const SequenceStage& s) {
  Json checks = Json::array();
  for (const auto& c : s.checks)
    checks.push_back({{"lhs", format_double(c.lhs)},
                      {"length", format_double(c.length)},
                      {"jumps", format_double(c.jumps)},
                      {"rhs", format_double(c.rhs)},
                      {"touched", c.touched},
                      {"pass", c.pass},
                      {"skipped", c.skipped},
                      {"note", c.note}});
  Json eq = Json::array();
  for (const auto& e : s.equicontinuity)
    eq.push_back({{"delta", format_double(e.delta)}, {"epsilon", format_double(e.epsilon)}, {"sets", e.sets}});
  return {{"n", s.n},
          {"converged", s.converged},
          {"error", s.error},
          {"sweeps", s.sweeps},
          {"residual", format_double(s.residual)},
          {"outputs", continua(s.outputs)},
          {"min_distance", format_double(s.min_distance)},
          {"min_distance_fixed", format_double(s.min_distance_fixed)},
          {"fatness", doubles(s.fatness)},
          {"fatness_baseline", doubles(s.fatness_baseline)},
          {"points_match", s.points_match},
          {"l2_diameters", format_double(s.l2_diameters)},
          {"derivative_l2", format_double(s.derivative_l2)},
          {"domain_area", format_double(s.domain_area)},
          {"upper_gradient_checks", checks},
          {"equicontinuity", eq}};
}

SequenceStage sequence_stage_from_json(const Json& j) {
  SequenceStage s;
  s.n = integer<std::size_t>(j, "n");
  s.converged = boolean(j, "converged");
  s.error = text(j, "error");
  s.sweeps = integer<int>(j, "sweeps");
  s.residual = num(j, "residual");
  s.outputs = continua_from(array(j, "outputs"));
  s.min_distance = num(j, "min_distance");
  s.min_distance_fixed = num(j, "min_distance_fixed");
  s.fatness = doubles_from(array(j, "fatness"));
  s.fatness_baseline = doubles_from(array(j, "fatness_baseline"));
  s.points_match = boolean(j, "points_match");
  s.l2_diameters = num(j, "l2_diameters");
  s.derivative_l2 = num(j, "derivative_l2");
  s.domain_area = num(j, "domain_area");
  for (const Json& c : array(j, "upper_gradient_checks")) {
    UpperGradientCheck u;
    u.lhs = num(c, "lhs");
    u.length = num(c, "length");
    u.jumps = num(c, "jumps");
    u.rhs = num(c, "rhs");
    u.touched = array(c, "touched").get<std::vector<int>>();
    u.pass = boolean(c, "pass");
    u.skipped = boolean(c, "skipped");
    u.note = text(c, "note");
    s.checks.push_back(std::move(u));
  }
  for (const Json& e : array(j, "equicontinuity"))
    s.equicontinuity.push_back({num(e, "delta"), num(e, "epsilon"), integer<int>(e, "sets")});
  return s;
}

Json to_json(const SequenceReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  Json maps = Json::array();
  for (const auto& m : r.maps) maps.push_back(m ? to_json(*m) : Json());
  Json hausdorff = Json::array();
  for (const auto& mat : r.hausdorff) {
    Json rows = Json::array();
    for (const auto& row : mat) rows.push_back(doubles(row));
    hausdorff.push_back(rows);
  }
  Json deviation = Json::array();
  for (const auto& row : r.deviation) deviation.push_back(doubles(row));
  return {{"input", to_json(r.input)},
          {"sequence_config", to_json(r.config)},
          {"stages", stages},
          {"maps", maps},
          {"hausdorff", hausdorff},
          {"deviation", deviation},
          {"fixed_count", r.fixed_count},
          {"caveat", r.caveat}};
}

SequenceReport sequence_report_from_json(const Json& j) {
  SequenceReport r;
  r.input = packing_from_json(member(j, "input"));
  r.config = sequence_config_from_json(member(j, "sequence_config"));
  for (const Json& s : array(j, "stages")) r.stages.push_back(sequence_stage_from_json(s));
  for (const Json& m : array(j, "maps")) r.maps.push_back(m.is_null() ? std::nullopt : std::optional(map_from_json(m)));
  for (const Json& mat : array(j, "hausdorff")) {
    std::vector<std::vector<double>> rows;
    for (const Json& row : mat) rows.push_back(doubles_from(row));
    r.hausdorff.push_back(std::move(rows));
  }
  for (const Json& row : array(j, "deviation")) r.deviation.push_back(doubles_from(row));
  r.fixed_count = integer<std::size_t>(j, "fixed_count");
  r.caveat = text(j, "caveat");
  return r;
}

std::string config_hash(const Json& config) {
  Fnv1a h;
  h.add(std::string_view(config.dump()));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

Json make_artifact(std::string_view kind, const Json& config, std::uint64_t seed, const Json& body) {
  Json j{{"schema", kSchemaVersion},
         {"kind", std::string(kind)},
         {"library_version", kLibraryVersion},
         {"config", config},
         {"config_hash", config_hash(config)},
         {"seed", seed}};
  for (const auto& [key, value] : body.items()) j[key] = value;
  return j;
}

std::string artifact_kind(const Json& j) { return text(j, "kind"); }

void check_artifact(const Json& j, std::string_view kind) {
  if (text(j, "schema") != kSchemaVersion) throw DomainError("unsupported artifact schema");
  const std::string k = artifact_kind(j);
  if (k != kind) throw DomainError("expected a " + std::string(kind) + " artifact, got " + k);
  text(j, "library_version");
  integer<std::uint64_t>(j, "seed");
  if (text(j, "config_hash") != config_hash(member(j, "config"))) throw DomainError("artifact config hash mismatch");
}

std::string dump_artifact(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json read_json(const std::string& path) {
  const std::string t = read_text(path);
  try {
    return Json::parse(t);
  } catch (const Json::parse_error& e) {
    throw DomainError("malformed JSON in " + path + ": " + e.what());
  }
}

std::string output_path(const std::string& path) {
  const char* dir = std::getenv(kOutputDirEnv);
  if (dir == nullptr || *dir == '\0') return path;
  return (std::filesystem::path(dir) / std::filesystem::path(path).filename()).string();
}

}  // namespace circlelab
