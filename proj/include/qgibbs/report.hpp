#pragma once

#include <json.hpp>

#include "qgibbs/embedding.hpp"
#include "qgibbs/sampler.hpp"
#include "qgibbs/walk.hpp"

namespace qgibbs {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ComplexVector& values);
nlohmann::json to_json(const RealVector& values);
nlohmann::json to_json(const SpectralData& spectral);
nlohmann::json to_json(const PEParams& params);
nlohmann::json to_json(const WalkSpectrumReport& report);
nlohmann::json to_json(const ReflectionError& error);
nlohmann::json to_json(const EigenbasisOverlapReport& report);
/// Wall-clock time is included only when present in the report.
nlohmann::json to_json(const SamplingReport& report);
nlohmann::json to_json(const CompareRow& row);

}  // namespace qgibbs
