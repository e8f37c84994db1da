#include "labtom/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "labtom/errors.hpp"

namespace labtom {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::kCsv;
  if (text == "jsonl" || text == "json-lines") return Format::kJsonLines;
  throw InputError("unknown format '" + text + "' (expected csv or jsonl)");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string config_json(const RunConfig& cfg) {
  std::ostringstream os;
  os << "{\"beta\":" << format_number(cfg.params.beta) << ",\"particles\":" << cfg.particles
     << ",\"variant\":" << json_string(to_string(cfg.params.variant))
     << ",\"prior\":" << json_string(to_string(cfg.prior)) << ",\"thresholds\":{";
  for (std::size_t i = 0; i < ThresholdTable::kCount; ++i)
    os << (i ? "," : "") << json_string(std::string(ThresholdTable::kNames[i])) << ":"
       << format_number(cfg.thresholds.at(i));
  os << ",\"alpha_most\":" << format_number(cfg.thresholds.alpha_most()) << "}";
  os << ",\"mixture\":" << (cfg.mixture ? "true" : "false") << "}";
  return os.str();
}

void emit(std::ostream& out, const ScoreTable& table, Format format, const std::string& config) {
  if (format == Format::kCsv) {
    if (!config.empty()) out << "# config " << config << "\n";
    out << "scenario,statement,judgment_point,t,posterior,normalized_likelihood,variant\n";
    for (const ScoreRow& r : table)
      out << csv_field(r.scenario) << ',' << csv_field(r.statement) << ',' << csv_field(r.judgment_point) << ','
          << r.t << ',' << format_number(r.posterior) << ',' << format_number(r.normalized_likelihood) << ','
          << csv_field(r.variant) << "\n";
    return;
  }
  if (!config.empty()) out << "{\"config\":" << config << "}\n";
  for (const ScoreRow& r : table)
    out << "{\"scenario\":" << json_string(r.scenario) << ",\"statement\":" << json_string(r.statement)
        << ",\"judgment_point\":" << json_string(r.judgment_point) << ",\"t\":" << r.t
        << ",\"posterior\":" << format_number(r.posterior)
        << ",\"normalized_likelihood\":" << format_number(r.normalized_likelihood)
        << ",\"variant\":" << json_string(r.variant) << "}\n";
}

std::string emit(const ScoreTable& table, Format format, const std::string& config) {
  std::ostringstream os;
  emit(os, table, format, config);
  return os.str();
}

void emit(std::ostream& out, const ContextSummary& summary, Format format, const std::string& config) {
  if (format == Format::kCsv) {
    if (!config.empty()) out << "# config " << config << "\n";
    out << "scenario,statement,in_context,out_of_context,difference,accurate\n";
    for (const ContextRow& r : summary.rows)
      out << csv_field(r.scenario) << ',' << csv_field(r.statement) << ',' << format_number(r.in_context) << ','
          << format_number(r.out_of_context) << ',' << format_number(r.difference) << ',' << (r.accurate ? 1 : 0)
          << "\n";
    out << "# accuracy " << format_number(summary.accuracy) << "\n";
    return;
  }
  if (!config.empty()) out << "{\"config\":" << config << "}\n";
  for (const ContextRow& r : summary.rows)
    out << "{\"scenario\":" << json_string(r.scenario) << ",\"statement\":" << json_string(r.statement)
        << ",\"in_context\":" << format_number(r.in_context) << ",\"out_of_context\":" << format_number(r.out_of_context)
        << ",\"difference\":" << format_number(r.difference) << ",\"accurate\":" << (r.accurate ? "true" : "false")
        << "}\n";
  out << "{\"accuracy\":" << format_number(summary.accuracy) << "}\n";
}

}  // namespace labtom
