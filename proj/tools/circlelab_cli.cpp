#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/generate.hpp"
#include "circlelab/modulus.hpp"
#include "circlelab/render.hpp"
#include "circlelab/sequence.hpp"
#include "circlelab/serialize.hpp"
#include "circlelab/verify.hpp"

using namespace circlelab;

namespace {

SpherePoint parse_point(const std::string& s) {
  if (s == "inf" || s == "infinity") return SpherePoint::infinity();
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return SpherePoint(Complex(std::stod(s), 0.0));
    return SpherePoint(Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))));
  } catch (const std::exception&) {
    throw DomainError("cannot parse point \"" + s + "\"; use x,y or inf");
  }
}

void emit(const std::string& path, const Json& artifact) {
  const std::string out = output_path(path);
  write_text(out, dump_artifact(artifact));
  std::cout << out << "\n";
}

struct GenerateArgs {
  std::string kind;
  int level = 2;
  int punctures = 0;
  std::uint64_t seed = 1;
  double exponent = 1.0;
  int count = 20;
  std::string out = "packing.json";
};

int run_generate(const GenerateArgs& a) {
  Json config{{"command", "generate"}, {"kind", a.kind}};
  Packing p;
  if (a.kind == "carpet" || a.kind == "square-instance") {
    config["level"] = a.level;
    config["punctures"] = a.punctures;
    p = carpet(a.level, a.punctures);
  } else if (a.kind == "random_l2") {
    config["exponent"] = format_double(a.exponent);
    config["count"] = a.count;
    p = random_l2(a.seed, a.exponent, a.count);
  } else if (a.kind == "round") {
    config["count"] = a.count;
    p = round_packing(a.seed, a.count);
  } else {
    throw DomainError("unknown generator " + a.kind);
  }
  const std::uint64_t seed = (a.kind == "random_l2" || a.kind == "round") ? a.seed : 0;
  if (a.kind == "square-instance") {
    // Curves in the unit square between its vertical sides.
    ModulusInstance inst;
    inst.window = {-0.25, 0.0, 1.25, 1.0};
    inst.packing = p;
    inst.e.push_back(PeripheralContinuum::polygon(-1, {{-1, -1}, {0, -1}, {0, 2}, {-1, 2}}));
    inst.f.push_back(PeripheralContinuum::polygon(-2, {{1, -1}, {2, -1}, {2, 2}, {1, 2}}));
    emit(a.out, make_artifact("modulus-instance", config, seed, {{"instance", to_json(inst)}}));
  } else {
    emit(a.out, make_artifact("packing", config, seed, {{"packing", to_json(p)}}));
  }
  return 0;
}

struct UniformizeArgs {
  std::string input;
  std::size_t n = 1;
  double tol = 1e-6;
  int degree = 32;
  int samples = 256;
  int max_sweeps = 80;
  std::string zeta_inf = "inf", zeta_0 = "0,0", zeta_1 = "1,0";
  std::string out = "map.json";
};

int run_uniformize(const UniformizeArgs& a) {
  const Json in = read_json(a.input);
  check_artifact(in, "packing");
  const Packing p = packing_from_json(in.at("packing"));
  KoebeConfig k;
  k.tolerance = a.tol;
  k.degree = a.degree;
  k.samples = a.samples;
  k.max_sweeps = a.max_sweeps;
  const Json config{{"command", "uniformize"}, {"input_config_hash", in.at("config_hash")},
                    {"n", a.n},                {"zeta", {a.zeta_inf, a.zeta_0, a.zeta_1}},
                    {"koebe", to_json(k)}};
  const CircleDomainMap m = koebe_iterate(p, a.n, parse_point(a.zeta_inf), parse_point(a.zeta_0), parse_point(a.zeta_1), k);
  emit(a.out, make_artifact("map", config, in.at("seed").get<std::uint64_t>(), {{"map", to_json(m)}}));
  return 0;
}

struct ModulusArgs {
  std::string input;
  double h = 1.0 / 32.0;
  int stencil = 3;
  std::string mode;
  ModulusConfig modulus;
  std::string out = "modulus.json";
};

int run_modulus(const ModulusArgs& a) {
  const Json in = read_json(a.input);
  check_artifact(in, "modulus-instance");
  ModulusInstance inst = modulus_instance_from_json(in.at("instance"));
  if (a.mode == "plain")
    inst.mode = ModulusMode::plain;
  else if (a.mode == "transboundary")
    inst.mode = ModulusMode::transboundary;
  else if (!a.mode.empty())
    throw DomainError("unknown modulus mode " + a.mode);
  const ModulusProblem problem = discretize(inst, a.h, {.stencil = a.stencil});
  const ModulusResult r = compute_modulus(problem, a.modulus);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(problem.hash()));
  const Json config{{"command", "modulus"}, {"input_config_hash", in.at("config_hash")},
                    {"h", format_double(a.h)},  {"stencil", a.stencil},
                    {"mode", mode_name(inst.mode)}, {"modulus", to_json(a.modulus)}};
  const Json grid{{"nx", problem.nx}, {"ny", problem.ny}, {"super_nodes", problem.super_node_count()}, {"hash", hash}};
  emit(a.out, make_artifact("modulus", config, in.at("seed").get<std::uint64_t>(),
                            {{"instance", to_json(inst)}, {"grid", grid}, {"result", to_json(r)}}));
  std::cout << "md = " << format_double(r.value) << " (" << status_name(r.status) << ")\n";
  return 0;
}

struct SequenceArgs {
  std::string input;
  std::vector<std::size_t> ns{1, 5, 10, 20, 40};
  std::uint64_t seed = 1;
  int curves = 50;
  double tol = 1e-6;
  std::string out = "sequence.json";
};

int run_sequence_cmd(const SequenceArgs& a) {
  const Json in = read_json(a.input);
  check_artifact(in, "packing");
  SequenceConfig c;
  c.ns = a.ns;
  c.seed = a.seed;
  c.curves = a.curves;
  c.koebe.tolerance = a.tol;
  const SequenceReport r = run_sequence(packing_from_json(in.at("packing")), c);
  const Json config{{"command", "sequence"}, {"input_config_hash", in.at("config_hash")}, {"sequence", to_json(c)}};
  emit(a.out, make_artifact("sequence", config, a.seed, {{"sequence", to_json(r)}}));
  for (const auto& s : r.stages)
    std::cout << "n = " << s.n << (s.converged ? " converged" : " failed: " + s.error) << "\n";
  return 0;
}

int run_verify(const std::string& input, const std::string& suite, const std::string& out) {
  const Json in = read_json(input);
  const VerifyReport r = verify_artifact(in, suite);
  const Json config{{"command", "verify"}, {"input_config_hash", in.at("config_hash")}, {"suite", suite}};
  emit(out, make_artifact("verify-report", config, in.at("seed").get<std::uint64_t>(), {{"report", to_json(r)}}));
  for (const auto& c : r.checks)
    std::cout << (c.informational ? "info " : c.pass ? "pass " : "FAIL ") << c.name << " = " << format_double(c.value)
              << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  std::cout << suite << ": " << (r.pass ? "pass" : "FAIL") << "\n";
  return 0;
}

int run_render(const std::string& input, const std::string& out_arg) {
  const Json in = read_json(input);
  const std::string kind = artifact_kind(in);
  check_artifact(in, kind);
  const std::string out = output_path(out_arg);
  if (kind == "packing") {
    const Packing p = packing_from_json(in.at("packing"));
    write_text(out, render_svg(p.continua, view_of({&p.continua})));
  } else if (kind == "map") {
    write_text(out, render_map_svg(map_from_json(in.at("map"))));
  } else if (kind == "modulus-instance" || kind == "modulus") {
    const ModulusInstance inst = modulus_instance_from_json(in.at("instance"));
    std::vector<PeripheralContinuum> all = inst.packing.continua;
    all.insert(all.end(), inst.e.begin(), inst.e.end());
    all.insert(all.end(), inst.f.begin(), inst.f.end());
    write_text(out, render_svg(all, inst.window));
  } else if (kind == "sequence") {
    std::string stem = out;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".svg") stem.resize(stem.size() - 4);
    for (const auto& f : render_sequence(sequence_report_from_json(in.at("sequence")), stem)) std::cout << f << "\n";
    return 0;
  } else {
    throw DomainError("cannot render a " + kind + " artifact");
  }
  std::cout << out << "\n";
  return 0;
}

int fail(const char* kind, int code, const std::string& message) {
  const Json e{{"error", {{"kind", kind}, {"exit_code", code}, {"message", message}}}};
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle domains, Koebe iteration and transboundary modulus"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a packing (or modulus instance) artifact");
  g->add_option("kind", gen.kind, "carpet | random_l2 | round | square-instance")->required();
  g->add_option("--level", gen.level, "Carpet level");
  g->add_option("--punctures", gen.punctures, "Point continua appended to a carpet");
  g->add_option("--seed", gen.seed, "Seed of random packings");
  g->add_option("--exponent", gen.exponent, "Diameter decay exponent of random_l2");
  g->add_option("--count", gen.count, "Continua of random packings");
  g->add_option("-o,--output", gen.out, "Output path");

  UniformizeArgs uni;
  auto* u = app.add_subcommand("uniformize", "Koebe iteration on the first n continua");
  u->add_option("input", uni.input, "Packing artifact")->required();
  u->add_option("-n", uni.n, "Number of continua")->required();
  u->add_option("--tol", uni.tol, "Circularity tolerance");
  u->add_option("--degree", uni.degree, "Starting Laurent degree");
  u->add_option("--samples", uni.samples, "Boundary samples");
  u->add_option("--max-sweeps", uni.max_sweeps, "Sweep limit");
  u->add_option("--zeta-inf", uni.zeta_inf, "Point sent to infinity (x,y or inf)");
  u->add_option("--zeta-0", uni.zeta_0, "Point sent to 0");
  u->add_option("--zeta-1", uni.zeta_1, "Point sent to 1");
  u->add_option("-o,--output", uni.out, "Output path");

  ModulusArgs mod;
  auto* m = app.add_subcommand("modulus", "Discrete transboundary modulus of an instance");
  m->add_option("input", mod.input, "Modulus instance artifact")->required();
  m->add_option("--spacing", mod.h, "Grid spacing h");
  m->add_option("--stencil", mod.stencil, "Move stencil radius");
  m->add_option("--mode", mod.mode, "plain | transboundary (default: from the instance)");
  m->add_option("--tol", mod.modulus.tolerance, "Relative duality gap");
  m->add_option("--max-rounds", mod.modulus.max_rounds, "Cutting-plane rounds");
  m->add_option("-o,--output", mod.out, "Output path");

  SequenceArgs seq;
  auto* s = app.add_subcommand("sequence", "Koebe runs for increasing n with diagnostics");
  s->add_option("input", seq.input, "Packing artifact")->required();
  s->add_option("--ns", seq.ns, "Increasing n values")->delimiter(',');
  s->add_option("--seed", seq.seed, "Seed of the upper-gradient curves");
  s->add_option("--curves", seq.curves, "Upper-gradient curves per stage");
  s->add_option("--tol", seq.tol, "Circularity tolerance");
  s->add_option("-o,--output", seq.out, "Output path");

  std::string verify_input, suite, verify_out = "verify.json";
  auto* v = app.add_subcommand("verify", "Run a property suite on an artifact");
  v->add_option("input", verify_input, "Artifact")->required();
  v->add_option("--suite", suite, "disjointness | fatness | normalization")->required();
  v->add_option("-o,--output", verify_out, "Output path");

  std::string render_input, render_out = "figure.svg";
  auto* r = app.add_subcommand("render", "SVG figure of an artifact");
  r->add_option("input", render_input, "Artifact")->required();
  r->add_option("-o,--output", render_out, "Output path; sequences write <stem>_nNNN.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", 1, e.what());
  }

  try {
    if (*g) return run_generate(gen);
    if (*u) return run_uniformize(uni);
    if (*m) return run_modulus(mod);
    if (*s) return run_sequence_cmd(seq);
    if (*v) return run_verify(verify_input, suite, verify_out);
    if (*r) return run_render(render_input, render_out);
  } catch (const Error& e) {
    return fail(e.kind(), e.exit_code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail("domain", 1, std::string("malformed artifact: ") + e.what());
  } catch (const std::exception& e) {
    return fail("internal", 2, e.what());
  }
  return 0;
}
