#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circlelab/circle_domain.hpp"
#include "circlelab/fatness.hpp"
#include "circlelab/serialize.hpp"

namespace circlelab {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  // Reported for inspection only; never fails the suite.
  bool informational = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  bool pass = false;
};

// Suites: "disjointness" on maps, sequences and packings; "fatness" on
// packings, maps and sequences; "normalization" on maps and sequences.
// Throws DomainError for an unknown suite or a suite/artifact mismatch.
VerifyReport verify_artifact(const Json& artifact, const std::string& suite);

// Continua of a packing artifact, the outputs of a map or the final
// converged stage of a sequence.
VerifyReport verify_disjointness(const std::vector<PeripheralContinuum>& continua);
// Fatness below `low` times the disk baseline is flagged, not failed.
VerifyReport verify_fatness(const std::vector<PeripheralContinuum>& continua, const FatnessConfig& config = {},
                            double low = 0.5);
VerifyReport verify_normalization(const CircleDomainMap& m, double tolerance = 1e-8);

Json to_json(const VerifyReport& r);
VerifyReport verify_report_from_json(const Json& j);

}  // namespace circlelab
