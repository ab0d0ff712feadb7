#include "specfield/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "specfield/error.hpp"

namespace specfield::io {

namespace {

template <typename T>
T get_field(const json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string(context) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string(context) + ": field '" + key + "' has the wrong type");
  }
}

InnovationKind kind_from_string(const std::string& s) {
  if (s == "real-gaussian") return InnovationKind::RealGaussian;
  if (s == "circular-complex-gaussian") return InnovationKind::CircularComplexGaussian;
  throw ValidationError("innovation_kind must be real-gaussian or circular-complex-gaussian, got '" + s + "'");
}

const char* kind_to_string(InnovationKind k) {
  return k == InnovationKind::RealGaussian ? "real-gaussian" : "circular-complex-gaussian";
}

json ks_json(const stats::KsResult& ks) { return {{"statistic", ks.statistic}, {"p_value", ks.p_value}}; }

}  // namespace

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ValidationError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": malformed JSON");
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path.string());
}

LinearFieldSpec spec_from_json(const json& j) {
  const auto dim = get_field<std::size_t>(j, "dim", "spec");
  const auto& taps_json = j.contains("taps") ? j.at("taps") : json();
  if (!taps_json.is_array()) throw ValidationError("spec: 'taps' must be an array");
  std::vector<Tap> taps;
  for (const auto& t : taps_json) {
    Tap tap{get_field<std::vector<std::int64_t>>(t, "lag", "tap"),
            {get_field<double>(t, "re", "tap"), t.value("im", 0.0)}};
    taps.push_back(std::move(tap));
  }
  return LinearFieldSpec(dim, std::move(taps), kind_from_string(get_field<std::string>(j, "innovation_kind", "spec")),
                         get_field<double>(j, "innovation_std", "spec"));
}

json to_json(const LinearFieldSpec& spec) {
  json taps = json::array();
  for (const auto& t : spec.taps()) taps.push_back({{"lag", t.lag}, {"re", t.coef.real()}, {"im", t.coef.imag()}});
  return {{"dim", spec.dim()},
          {"taps", taps},
          {"innovation_kind", kind_to_string(spec.innovation_kind())},
          {"innovation_std", spec.innovation_std()}};
}

blocking::MixingProfile profile_from_json(const json& j) {
  blocking::MixingProfile profile;
  if (!j.is_object() || !j.contains("values") || !j.at("values").is_object()) {
    throw ValidationError("profile: 'values' must be an object mapping lag to rho'");
  }
  for (const auto& [key, value] : j.at("values").items()) {
    std::int64_t lag = 0;
    try {
      lag = std::stoll(key);
    } catch (const std::exception&) {
      throw ValidationError("profile: lag key '" + key + "' is not an integer");
    }
    if (!value.is_number()) throw ValidationError("profile: value at lag " + key + " is not a number");
    profile.values[lag] = value.get<double>();
  }
  if (j.contains("dependence_range") && !j.at("dependence_range").is_null()) {
    profile.dependence_range = j.at("dependence_range").get<std::int64_t>();
  }
  profile.validate();
  return profile;
}

json to_json(const blocking::MixingProfile& profile) {
  json values = json::object();
  for (const auto& [n, rho] : profile.values) values[std::to_string(n)] = rho;
  return {{"values", values},
          {"dependence_range", profile.dependence_range ? json(*profile.dependence_range) : json(nullptr)}};
}

SchemeParams scheme_from_json(const json& j) {
  SchemeParams p{Frequency(get_field<std::vector<double>>(j, "base", "scheme")),
                 get_field<std::size_t>(j, "m", "scheme"), get_field<double>(j, "delta", "scheme"),
                 j.value("axis", std::size_t{0})};
  if (!(p.delta > 0.0 && p.delta < 0.5)) {
    throw ValidationError("scheme: delta = " + std::to_string(p.delta) + " violates 0 < delta < 1/2");
  }
  if (p.m < 1) throw ValidationError("scheme: m must be >= 1");
  if (p.axis >= p.base.dim()) throw ValidationError("scheme: axis out of range");
  if (!is_admissible(p.base)) throw ValidationError("scheme: base frequency is not admissible");
  return p;
}

json to_json(const SchemeParams& p) {
  return {{"base", p.base.coords()}, {"m", p.m}, {"delta", p.delta}, {"axis", p.axis}};
}

BoxDims dims_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("dims must be an array of positive integers");
  return BoxDims(j.get<std::vector<std::int64_t>>());
}

json to_json(const BoxDims& dims) { return dims.sides(); }
json to_json(const Frequency& f) { return f.coords(); }

json to_json(const stats::CltReport& r) {
  json freqs = json::array();
  for (const auto& f : r.frequencies) freqs.push_back(f.coords());
  json coord_ks = json::array(), per_ks = json::array();
  for (const auto& ks : r.coordinate_ks) coord_ks.push_back(ks_json(ks));
  for (const auto& ks : r.periodogram_ks) per_ks.push_back(ks_json(ks));
  return {{"frequencies", freqs},
          {"dims", r.dims.sides()},
          {"f_lambda", r.f_lambda},
          {"target_diagonal", r.target_diagonal},
          {"covariance", r.covariance},
          {"max_cov_error", r.max_cov_error},
          {"coordinate_ks", coord_ks},
          {"periodogram_ks", per_ks},
          {"periodogram_means", r.periodogram_means},
          {"max_cross_correlation", r.max_cross_correlation ? json(*r.max_cross_correlation) : json(nullptr)},
          {"replications", r.replications},
          {"seed", r.seed}};
}

stats::CltReport clt_report_from_json(const json& j) {
  const char* ctx = "clt report";
  stats::CltReport r;
  for (const auto& f : get_field<std::vector<std::vector<double>>>(j, "frequencies", ctx)) r.frequencies.emplace_back(f);
  r.dims = BoxDims(get_field<std::vector<std::int64_t>>(j, "dims", ctx));
  r.f_lambda = get_field<double>(j, "f_lambda", ctx);
  r.target_diagonal = get_field<double>(j, "target_diagonal", ctx);
  r.covariance = get_field<std::vector<std::vector<double>>>(j, "covariance", ctx);
  r.max_cov_error = get_field<double>(j, "max_cov_error", ctx);
  for (const auto* key : {"coordinate_ks", "periodogram_ks"}) {
    auto& dest = std::string(key) == "coordinate_ks" ? r.coordinate_ks : r.periodogram_ks;
    for (const auto& ks : get_field<json>(j, key, ctx)) {
      dest.push_back({get_field<double>(ks, "statistic", key), get_field<double>(ks, "p_value", key)});
    }
  }
  r.periodogram_means = get_field<std::vector<double>>(j, "periodogram_means", ctx);
  const auto cross = get_field<json>(j, "max_cross_correlation", ctx);
  if (!cross.is_null()) r.max_cross_correlation = cross.get<double>();
  r.replications = get_field<std::size_t>(j, "replications", ctx);
  r.seed = get_field<std::uint64_t>(j, "seed", ctx);
  const std::size_t m = r.frequencies.size();
  if (r.covariance.size() != 2 * m || r.coordinate_ks.size() != 2 * m || r.periodogram_ks.size() != m ||
      r.periodogram_means.size() != m) {
    throw ValidationError("clt report: array sizes inconsistent with m = " + std::to_string(m));
  }
  for (const auto& row : r.covariance)
    if (row.size() != 2 * m) throw ValidationError("clt report: covariance is not 2m x 2m");
  return r;
}

void write_clt_csv(std::ostream& out, const stats::CltReport& r) {
  out << "rep";
  for (std::size_t j = 1; j <= r.frequencies.size(); ++j) out << ",S" << j << "_re,S" << j << "_im,I" << j;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    out << i;
    for (const auto& e : r.samples[i]) out << ',' << e.sum.real() << ',' << e.sum.imag() << ',' << e.value;
    out << '\n';
  }
}

json to_json(const std::vector<stats::MillerRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"v", r.dims.sides()},
                   {"target", r.target},
                   {"mc_mean", r.mc_mean},
                   {"mc_se", r.mc_se},
                   {"discrepancy", r.discrepancy},
                   {"exact", r.exact},
                   {"exact_discrepancy", r.exact_discrepancy}});
  }
  return out;
}

json to_json(const std::vector<blocking::NegligibilityRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"v", r.dims.sides()},
                   {"s", r.plan.s},
                   {"p", r.plan.p},
                   {"r", r.plan.r},
                   {"leftover_cardinality", r.leftover_cardinality},
                   {"leftover_mean", r.leftover_mean},
                   {"leftover_se", r.leftover_se},
                   {"tail_mean", r.tail_mean},
                   {"tail_se", r.tail_se},
                   {"leftover_exact", r.leftover_exact ? json(*r.leftover_exact) : json(nullptr)},
                   {"tail_exact", r.tail_exact ? json(*r.tail_exact) : json(nullptr)}});
  }
  return out;
}

json to_json(const blocking::BlockingPlan& plan, const blocking::BlockSets& sets) {
  json blocks = json::array(), leftover = json::array();
  for (std::size_t l = 0; l < sets.blocks.size(); ++l) {
    blocks.push_back({{"first", sets.blocks[l].first},
                      {"last", sets.blocks[l].last},
                      {"cardinality", sets.block_cardinality(l)}});
  }
  for (const auto& slab : sets.leftover) leftover.push_back({{"first", slab.first}, {"last", slab.last}});
  return {{"v1", plan.v1},       {"s", plan.s},
          {"p", plan.p},         {"r", plan.r},
          {"q", plan.q},         {"dims", sets.dims.sides()},
          {"blocks", blocks},    {"leftover", leftover},
          {"leftover_cardinality", sets.leftover_cardinality()}};
}

json to_json(const mixing::MixingEstimate& est) {
  json out = to_json(est.profile);
  json witnesses = json::array();
  for (const auto& w : est.witnesses) {
    if (!w) {
      witnesses.push_back(nullptr);
      continue;
    }
    witnesses.push_back({{"S", w->s}, {"T", w->t}, {"axis", w->axis}, {"rho", w->rho}});
  }
  out["lower_bound"] = true;
  out["witnesses"] = witnesses;
  out["window_points"] = est.window_points;
  out["candidate_sets"] = est.candidate_sets;
  out["pairs_evaluated"] = est.pairs_evaluated;
  out["regularized"] = est.any_regularized;
  return out;
}

json to_json(const spectral::ExpectationReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back({{"n", r.n}, {"v", r.dims.sides()}, {"sup_err", r.sup_err}});
  return {{"grid_size", report.grid_size}, {"rows", rows}};
}

ExperimentConfig config_from_json(const json& j) {
  const char* ctx = "config";
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ExperimentConfig cfg(spec_from_json(get_field<json>(j, "spec", ctx)));
  if (j.contains("dims")) cfg.dims = dims_from_json(j.at("dims"));
  if (j.contains("dims_sequence")) {
    for (const auto& d : j.at("dims_sequence")) cfg.dims_sequence.push_back(dims_from_json(d));
    validate_dims_sequence(cfg.dims_sequence);
  }
  if (!cfg.dims && cfg.dims_sequence.empty()) throw ValidationError("config needs 'dims' or 'dims_sequence'");
  cfg.scheme = scheme_from_json(get_field<json>(j, "scheme", ctx));
  if (cfg.scheme.base.dim() != cfg.spec.dim()) throw ValidationError("scheme base dimension does not match the spec");
  for (const auto& d : cfg.dims_sequence)
    if (d.dim() != cfg.spec.dim()) throw ValidationError("dims dimension does not match the spec");
  if (cfg.dims && cfg.dims->dim() != cfg.spec.dim()) throw ValidationError("dims dimension does not match the spec");

  const auto r = get_field<std::int64_t>(j, "R", ctx);
  if (r < 2) throw ValidationError("config: R must be >= 2");
  cfg.replications = static_cast<std::size_t>(r);
  cfg.seed = get_field<std::uint64_t>(j, "seed", ctx);
  if (j.contains("q")) {
    cfg.q = j.at("q").get<double>();
    if (!(cfg.q > 0.0 && cfg.q < 0.25)) throw ValidationError("config: q must satisfy 0 < q < 1/4");
  }
  if (j.contains("weights")) {
    cfg.weights = stats::WeightVector(j.at("weights").get<std::vector<double>>());
    if (cfg.weights->m() != cfg.scheme.m) throw ValidationError("config: weights must have length 2m");
  }
  if (j.contains("profile")) cfg.profile = profile_from_json(j.at("profile"));
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  if (j.contains("csv")) cfg.csv = j.at("csv").get<std::string>();
  return cfg;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(token, &used));
    } catch (const std::exception&) {
      throw ValidationError("'" + text + "' is not a comma-separated integer list");
    }
    if (used != token.size()) throw ValidationError("'" + text + "' is not a comma-separated integer list");
  }
  if (out.empty()) throw ValidationError("empty integer list");
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(token, &used));
    } catch (const std::exception&) {
      throw ValidationError("'" + text + "' is not a comma-separated real list");
    }
    if (used != token.size()) throw ValidationError("'" + text + "' is not a comma-separated real list");
  }
  if (out.empty()) throw ValidationError("empty real list");
  return out;
}

}  // namespace specfield::io
