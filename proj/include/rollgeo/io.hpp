#pragma once

#include <iosfwd>
#include <json.hpp>

#include "rollgeo/controllability.hpp"
#include "rollgeo/transport.hpp"

namespace rollgeo {

// All emitted documents carry this schema version.
inline constexpr int kSchemaVersion = 1;

// Declarative manifold config: {"name": ..., "params": [...]} with the
// catalog constructor parameters; round-trips through catalog::byName.
nlohmann::json manifoldToJson(const ChartManifold& M);
ChartManifold manifoldFromJson(const nlohmann::json& j);

// Pair spec "sphere(2,1):euclidean(2)" -> (M, Mhat).
std::pair<ChartManifold, ChartManifold> parsePair(const std::string& spec);

nlohmann::json configurationToJson(const Configuration& q);
Configuration configurationFromJson(const nlohmann::json& j);

nlohmann::json filtrationToJson(const Filtration& f);
nlohmann::json testResultToJson(const TestResult& t);
nlohmann::json reportToJson(const ControllabilityReport& rep,
                            const ChartManifold& M,
                            const ChartManifold& Mhat);

// Rolling trajectory CSV: header then rows t, x..., xhat..., Q row-major.
void writeRollingCsv(std::ostream& os, const RollingCurve& rc);

// Base curve CSV: header row, then rows t, x...; t strictly increasing.
// Returns a cubic-interpolated curve over the sampled nodes.
BaseCurve readBaseCurveCsv(std::istream& is, int dim);

// Numbers in CSV output are printed with round-trip precision so that
// identical inputs give byte-identical files.
std::string csvNumber(double v);

}  // namespace rollgeo
