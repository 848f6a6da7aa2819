#include "circlelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circlelab/errors.hpp"
#include "circlelab/sequence.hpp"

namespace circlelab {

namespace {

void finish(VerifyReport& r) {
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const VerifyCheck& c) { return c.informational || c.pass; });
}

const SequenceStage* last_converged(const SequenceReport& s) {
  for (auto it = s.stages.rbegin(); it != s.stages.rend(); ++it)
    if (it->converged) return &*it;
  return nullptr;
}

}  // namespace

VerifyReport verify_disjointness(const std::vector<PeripheralContinuum>& continua) {
  VerifyReport r;
  r.suite = "disjointness";
  double best = std::numeric_limits<double>::infinity();
  int ia = -1, ib = -1;
  for (std::size_t i = 0; i < continua.size(); ++i)
    for (std::size_t j = i + 1; j < continua.size(); ++j) {
      const double d = intersects(continua[i], continua[j]) ? 0.0 : set_distance(continua[i], continua[j]);
      if (d < best) {
        best = d;
        ia = continua[i].id();
        ib = continua[j].id();
      }
    }
  VerifyCheck dist{"min_pairwise_distance", best > 0.0, false, best, 0.0, ""};
  if (ia >= 0) dist.note = "ids " + std::to_string(ia) + " and " + std::to_string(ib);
  r.checks.push_back(dist);
  auto probes = probe_grid(90);
  const auto v = vertex_probes(continua);
  probes.insert(probes.end(), v.begin(), v.end());
  const int count = clustering_count(continua, probes);
  r.checks.push_back({"max_cover_count", count <= 1, false, static_cast<double>(count), 1.0, ""});
  finish(r);
  return r;
}

VerifyReport verify_fatness(const std::vector<PeripheralContinuum>& continua, const FatnessConfig& config, double low) {
  VerifyReport r;
  r.suite = "fatness";
  const double baseline = estimate_fatness(PeripheralContinuum::chart_disk(0, {0.0, 0.0}, 0.1), config).tau_hat;
  for (const auto& k : continua) {
    if (k.is_point()) continue;
    const FatnessEstimate e = estimate_fatness(k, config);
    VerifyCheck c{"tau_hat id " + std::to_string(k.id()), e.tau_hat > 0.0, false, e.tau_hat, low * baseline, ""};
    if (e.tau_hat < low * baseline) {
      c.informational = true;
      c.note = "low fatness";
    }
    r.checks.push_back(c);
  }
  finish(r);
  return r;
}

VerifyReport verify_normalization(const CircleDomainMap& m, double tolerance) {
  VerifyReport r;
  r.suite = "normalization";
  const std::array<SpherePoint, 3> targets{SpherePoint::infinity(), SpherePoint(Complex(0.0, 0.0)),
                                           SpherePoint(Complex(1.0, 0.0))};
  const char* names[3] = {"zeta_inf", "zeta_0", "zeta_1"};
  for (int k = 0; k < 3; ++k) {
    const double d = spherical_distance(m(m.normalization()[static_cast<std::size_t>(k)]), targets[static_cast<std::size_t>(k)]);
    r.checks.push_back({names[k], d <= tolerance, false, d, tolerance, ""});
  }
  finish(r);
  return r;
}

VerifyReport verify_artifact(const Json& artifact, const std::string& suite) {
  const std::string kind = artifact_kind(artifact);
  check_artifact(artifact, kind);
  if (suite != "disjointness" && suite != "fatness" && suite != "normalization")
    throw DomainError("unknown verify suite " + suite);
  if (kind == "packing") {
    const Packing p = packing_from_json(artifact.at("packing"));
    if (suite == "disjointness") return verify_disjointness(p.continua);
    if (suite == "fatness") return verify_fatness(p.continua);
  } else if (kind == "map") {
    const CircleDomainMap m = map_from_json(artifact.at("map"));
    if (suite == "disjointness") return verify_disjointness(m.outputs());
    if (suite == "fatness") return verify_fatness(m.outputs());
    return verify_normalization(m);
  } else if (kind == "sequence") {
    const SequenceReport s = sequence_report_from_json(artifact.at("sequence"));
    const SequenceStage* last = last_converged(s);
    if (last == nullptr) throw DomainError("sequence has no converged stage");
    if (suite == "disjointness") return verify_disjointness(last->outputs);
    if (suite == "fatness") return verify_fatness(last->outputs);
    VerifyReport r;
    r.suite = suite;
    for (std::size_t a = 0; a < s.maps.size(); ++a) {
      if (!s.maps[a]) continue;
      for (auto c : verify_normalization(*s.maps[a]).checks) {
        c.name += " n " + std::to_string(s.stages[a].n);
        r.checks.push_back(c);
      }
    }
    finish(r);
    return r;
  }
  throw DomainError("suite " + suite + " does not apply to a " + kind + " artifact");
}

Json to_json(const VerifyReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"informational", c.informational},
                      {"value", format_double(c.value)},
                      {"threshold", format_double(c.threshold)},
                      {"note", c.note}});
  return {{"suite", r.suite}, {"pass", r.pass}, {"checks", checks}};
}

VerifyReport verify_report_from_json(const Json& j) {
  VerifyReport r;
  r.suite = j.at("suite").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  for (const Json& c : j.at("checks"))
    r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.at("informational").get<bool>(),
                        parse_double(c.at("value")), parse_double(c.at("threshold")), c.at("note").get<std::string>()});
  return r;
}

}  // namespace circlelab
