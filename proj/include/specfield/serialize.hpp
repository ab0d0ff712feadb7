#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specfield/blocking.hpp"
#include "specfield/field.hpp"
#include "specfield/frequencies.hpp"
#include "specfield/mixing.hpp"
#include "specfield/spectral.hpp"
#include "specfield/stats.hpp"

namespace specfield::io {

using json = nlohmann::json;

/// Parses JSON text; syntax errors become ValidationError with line and column.
json parse_json(const std::string& text, const std::string& origin = "<input>");
json read_json_file(const std::filesystem::path& path);

LinearFieldSpec spec_from_json(const json& j);
json to_json(const LinearFieldSpec& spec);

blocking::MixingProfile profile_from_json(const json& j);
json to_json(const blocking::MixingProfile& profile);

SchemeParams scheme_from_json(const json& j);
json to_json(const SchemeParams& params);

BoxDims dims_from_json(const json& j);
json to_json(const BoxDims& dims);
json to_json(const Frequency& f);

json to_json(const stats::CltReport& report);
/// Reads back the JSON fields of a report (samples are not part of the JSON form).
stats::CltReport clt_report_from_json(const json& j);
/// Per replication: rep, then S_re, S_im, I for each frequency.
void write_clt_csv(std::ostream& out, const stats::CltReport& report);

json to_json(const std::vector<stats::MillerRow>& rows);
json to_json(const std::vector<blocking::NegligibilityRow>& rows);
json to_json(const blocking::BlockingPlan& plan, const blocking::BlockSets& sets);
json to_json(const mixing::MixingEstimate& est);
json to_json(const spectral::ExpectationReport& report);

/// Experiment configuration shared by clt-experiment, miller and negligibility.
struct ExperimentConfig {
  explicit ExperimentConfig(LinearFieldSpec s) : spec(std::move(s)) {}

  LinearFieldSpec spec;
  std::optional<BoxDims> dims;
  std::vector<BoxDims> dims_sequence;
  SchemeParams scheme;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  double q = 0.2;
  std::optional<stats::WeightVector> weights;
  std::optional<blocking::MixingProfile> profile;
  std::optional<std::string> out;
  std::optional<std::string> csv;
};

/// Validates every numeric bound at load time.
ExperimentConfig config_from_json(const json& j);

/// Comma-separated integer list, e.g. "32,32".
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace specfield::io
