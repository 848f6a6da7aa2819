#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "circlelab/circle_domain.hpp"
#include "circlelab/modulus.hpp"
#include "circlelab/sequence.hpp"
#include "json.hpp"

namespace circlelab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "v1";
inline constexpr const char* kLibraryVersion = "0.1.0";
// Overrides the output directory of the CLI.
inline constexpr const char* kOutputDirEnv = "CIRCLELAB_OUTPUT_DIR";

// Shortest round-trip decimal; "inf", "-inf" and "nan" for the rest.
std::string format_double(double v);
// Accepts the strings of format_double and plain JSON numbers. Throws
// DomainError otherwise.
double parse_double(const Json& j);

Json to_json(Complex z);
Json to_json(const SpherePoint& p);
Json to_json(const Cap& c);
Json to_json(const PeripheralContinuum& k);
Json to_json(const Packing& p);
Json to_json(const MobiusTransform& t);
Json to_json(const StageMap& s);
Json to_json(const KoebeConfig& c);
Json to_json(const KoebeIterationReport& r);
Json to_json(const CircleDomainMap& m);
Json to_json(const Window& w);
Json to_json(const ModulusInstance& m);
Json to_json(const ModulusConfig& c);
Json to_json(const ModulusResult& r);
Json to_json(const SequenceConfig& c);
Json to_json(const SequenceStage& s);
Json to_json(const SequenceReport& r);

Complex complex_from_json(const Json& j);
SpherePoint sphere_point_from_json(const Json& j);
Cap cap_from_json(const Json& j);
PeripheralContinuum continuum_from_json(const Json& j);
Packing packing_from_json(const Json& j);
MobiusTransform mobius_from_json(const Json& j);
StageMap stage_map_from_json(const Json& j);
KoebeConfig koebe_config_from_json(const Json& j);
KoebeIterationReport koebe_report_from_json(const Json& j);
CircleDomainMap map_from_json(const Json& j);
Window window_from_json(const Json& j);
ModulusInstance modulus_instance_from_json(const Json& j);
ModulusConfig modulus_config_from_json(const Json& j);
ModulusResult modulus_result_from_json(const Json& j);
SequenceConfig sequence_config_from_json(const Json& j);
SequenceStage sequence_stage_from_json(const Json& j);
SequenceReport sequence_report_from_json(const Json& j);

// FNV-1a of the compact dump of the config, as 16 hex digits.
std::string config_hash(const Json& config);

// {schema, kind, library_version, config, config_hash, seed} followed by
// the members of body.
Json make_artifact(std::string_view kind, const Json& config, std::uint64_t seed, const Json& body);
// Throws DomainError unless j is a v1 artifact of the kind with a matching
// config hash.
void check_artifact(const Json& j, std::string_view kind);
std::string artifact_kind(const Json& j);

// Two-space indented dump with a final newline.
std::string dump_artifact(const Json& j);
// Throw IoError.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
Json read_json(const std::string& path);

// The file name of `path` inside the override directory when the variable
// is set, otherwise `path` unchanged.
std::string output_path(const std::string& path);

}  // namespace circlelab
