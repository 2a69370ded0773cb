#pragma once

#include <filesystem>

#include <json.hpp>

#include "mvop/recurrence.hpp"

namespace mvop {

inline constexpr int kRecurrenceFormatVersion = 1;

/// {format_version, d, N, ordering, lambda_order, A, B[, Lambda]} with
/// A[n-1][i] and B[n-1][i] as row-major nested arrays. Throws DomainError on
/// non-finite entries.
nlohmann::json recurrence_to_json(const RecurrenceData& rec);

/// Inverse of recurrence_to_json. Throws SchemaError on any structural mismatch.
RecurrenceData recurrence_from_json(const nlohmann::json& doc);

void serialize_recurrence(const RecurrenceData& rec, const std::filesystem::path& path);
RecurrenceData deserialize_recurrence(const std::filesystem::path& path);

}  // namespace mvop
