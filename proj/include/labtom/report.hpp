// CSV / JSON-lines output of score tables.

#pragma once

#include <ostream>
#include <string>

#include "labtom/pipeline.hpp"

namespace labtom {

enum class Format : std::uint8_t { kCsv, kJsonLines };
/// "csv" or "jsonl" (also "json-lines"); throws InputError.
Format parse_format(const std::string& text);

/// `%.9g`.
std::string format_number(double v);

/// Provenance echo: beta, particles, variant, prior mode and thresholds as
/// one JSON object.
std::string config_json(const RunConfig& cfg);

/// Columns scenario, statement, judgment_point, t, posterior,
/// normalized_likelihood, variant. With a non-empty `config`, CSV output
/// starts with `# config <json>` and JSON-lines output with {"config": ...}.
void emit(std::ostream& out, const ScoreTable& table, Format format, const std::string& config = "");
std::string emit(const ScoreTable& table, Format format, const std::string& config = "");

/// Columns scenario, statement, in_context, out_of_context, difference,
/// accurate, followed by `# accuracy` (CSV) or {"accuracy": ...} (JSON lines).
void emit(std::ostream& out, const ContextSummary& summary, Format format, const std::string& config = "");

}  // namespace labtom
