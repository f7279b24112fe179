#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "metades/des_core.hpp"

namespace metades {

/// Value of the "version" field written to and required from model files.
inline constexpr const char* kModelFormatVersion = "1";

nlohmann::json to_json(const BaseClassifier& c);
BaseClassifier classifier_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainedSystem& sys);
/// Rebuilds the DSEL decision matrix and validates the result.
/// Throws SchemaError on a missing/mistyped field or wrong version.
TrainedSystem system_from_json(const nlohmann::json& j);

/// Pretty-printed JSON; identical systems produce identical bytes.
std::string serialize_system(const TrainedSystem& sys);

void save_system(const TrainedSystem& sys, const std::filesystem::path& path);
TrainedSystem load_system(const std::filesystem::path& path);

/// One trace record: neighbourhoods, meta-vectors split into f1..f5,
/// competences, selection and the META-DES.H decision for a query.
nlohmann::json trace_query(const TrainedSystem& sys, const Sample& query, std::size_t query_id);

}  // namespace metades
