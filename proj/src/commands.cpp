// Copyright 2026 The betaenc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <thread>

#include "betaenc/battery.hpp"
#include "betaenc/converter.hpp"
#include "betaenc/encoder.hpp"
#include "betaenc/entropy.hpp"
#include "betaenc/errors.hpp"
#include "betaenc/extract.hpp"
#include "betaenc/io.hpp"
#include "betaenc/lochs.hpp"

namespace betaenc::commands {
namespace {

using nlohmann::json;

template <typename T>
T get(const json& req, const char* key, T fallback) {
  const auto it = req.find(key);
  if (it == req.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("request field '") + key + "' has the wrong type");
  }
}

std::string require_string(const json& req, const char* key) {
  const auto value = get<std::string>(req, key, "");
  if (value.empty()) throw ConfigError(std::string("missing required field '") + key + "'");
  return value;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json strings(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// Flat key/value CSV for report-like outputs.
std::string kv_csv(const json& obj) {
  std::string out = "key,value\n";
  for (const auto& [key, value] : obj.items()) {
    out += csv_field(key) + "," + csv_field(value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

bool want_csv(const json& req) {
  const auto format = get<std::string>(req, "format", "json");
  if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
  return format == "csv";
}

std::string emit_json(const json& j) { return j.dump(2) + "\n"; }

unsigned workers_of(const json& req) {
  const auto w = get<unsigned>(req, "workers", 0);
  if (w > 0) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------

std::string run_encode(const json& req) {
  const auto seed = get<std::uint64_t>(req, "seed", 0);
  const auto betas = parse_beta_process(get<std::string>(req, "beta", "3/2"), seed);
  const auto thresholds =
      parse_threshold_process(get<std::string>(req, "u", "1"), betas.beta_max(), seed);
  const auto stream_bits = get<std::uint64_t>(req, "stream_bits", 0);

  if (stream_bits > 0) {
    const auto segment = get<std::uint64_t>(req, "segment_bits", 4096);
    const auto path = require_string(req, "bits_out");
    const auto bits = generate_stream(betas, thresholds, stream_bits, segment, seed);
    write_bit_file(path, bits);
    std::size_t ones = 0;
    for (auto b : bits) ones += b;
    json out = {{"beta", betas.describe()},
                {"u", thresholds.describe()},
                {"seed", seed},
                {"prng", std::string(Prng::kAlgorithm)},
                {"stream_bits", bits.size()},
                {"segment_bits", segment},
                {"ones_fraction", static_cast<double>(ones) / static_cast<double>(bits.size())},
                {"bits_out", path}};
    return want_csv(req) ? kv_csv(out) : emit_json(out);
  }

  const auto precision = PrecisionPolicy::parse(get<std::string>(req, "precision", "exact"));
  const auto x_text = require_string(req, "x");
  const Rational x0 = precision.is_exact() ? Rational::parse(x_text) : Rational::parse_decimal(x_text);
  const auto steps = get<std::uint64_t>(req, "steps", 16);
  const auto trace = encode(x0, betas, thresholds, steps, precision, seed);

  if (want_csv(req)) {
    std::string out = "n,bit,beta,u,state\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      out += std::to_string(i + 1) + "," + std::to_string(trace.bits[i]) + "," +
             trace.betas[i].str() + "," + trace.thresholds[i].str() + "," + trace.states[i].str() + "\n";
    }
    return out;
  }
  json out = {{"x0", trace.x0.str()},
              {"beta", betas.describe()},
              {"u", thresholds.describe()},
              {"precision", precision.str()},
              {"seed", seed},
              {"prng", trace.prng},
              {"steps", trace.size()},
              {"bits", trace.bit_string()},
              {"states", strings(trace.states)},
              {"betas", strings(trace.betas)},
              {"thresholds", strings(trace.thresholds)},
              {"guard_violations", trace.guard_violations}};
  if (precision.is_exact()) {
    const Rational partial = reconstruct_partial(trace, trace.size());
    out["reconstruction"] = {
        {"partial", partial.str()},
        {"error", (trace.x0 - partial).str()},
        {"error_bound", reconstruction_error_bound(betas.beta_min(), betas.beta_max(), trace.size()).str()}};
  }
  return emit_json(out);
}

std::string run_convert(const json& req) {
  const auto seed = get<std::uint64_t>(req, "seed", 0);
  const Rational beta = Rational::parse(get<std::string>(req, "beta", "3/2"));
  require_beta(beta);

  if (req.contains("x") && !req["x"].is_null()) {
    const Rational x = Rational::parse(req["x"].get<std::string>());
    const auto thresholds = parse_threshold_process(get<std::string>(req, "u", "1"), beta, seed);
    const auto ms = parse_unsigned_list(get<std::string>(req, "m_list", "8,16,32"));
    const auto ks = k_of_m_all(x, ms, beta, thresholds, seed);
    unsigned max_m = 0;
    for (auto m : ms) max_m = std::max(max_m, m);
    const auto oracle = binary_digits(x, max_m);
    json rows = json::array();
    std::string csv = "m,k,exceeded,above_lower_bound,digits\n";
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string digits = bit_string({oracle.begin(), oracle.begin() + ms[i]});
      const bool above = exceeds_binary_rate(ks[i].k, ms[i], beta);
      rows.push_back({{"m", ms[i]},
                      {"k", ks[i].k},
                      {"exceeded", ks[i].exceeded},
                      {"above_lower_bound", above},
                      {"digits", digits}});
      csv += std::to_string(ms[i]) + "," + std::to_string(ks[i].k) + "," +
             (ks[i].exceeded ? "true" : "false") + "," + (above ? "true" : "false") + "," + digits + "\n";
    }
    if (want_csv(req)) return csv;
    return emit_json({{"x", x.str()},
                      {"beta", beta.str()},
                      {"u", thresholds.describe()},
                      {"seed", seed},
                      {"rows", rows}});
  }

  std::vector<std::uint8_t> bits;
  if (req.contains("bits") && !req["bits"].is_null()) {
    bits = parse_bit_string(req["bits"].get<std::string>());
  } else {
    bits = read_bit_file(require_string(req, "input"));
  }
  DigitTracker tracker(beta);
  std::vector<std::size_t> confirmed_at;
  for (auto b : bits) {
    const auto fresh = tracker.push(b);
    for (std::size_t i = 0; i < fresh; ++i) confirmed_at.push_back(tracker.k());
  }
  if (want_csv(req)) {
    std::string out = "j,digit,k\n";
    for (std::size_t j = 0; j < confirmed_at.size(); ++j) {
      out += std::to_string(j + 1) + "," + std::to_string(tracker.digits()[j]) + "," +
             std::to_string(confirmed_at[j]) + "\n";
    }
    return out;
  }
  json out = {{"beta", beta.str()},
              {"k", tracker.k()},
              {"digits", bit_string(tracker.digits())},
              {"confirmed_at", confirmed_at}};
  if (bits.size() <= 4096) {
    const auto cyl = beta_cylinder(bits, beta);
    out["cylinder"] = {{"lo", cyl.lo().str()}, {"hi", cyl.hi().str()}};
  }
  return emit_json(out);
}

std::string run_lochs(const json& req) {
  LochsExperiment exp;
  exp.rng_seed = get<std::uint64_t>(req, "seed", 0);
  exp.beta = Rational::parse(get<std::string>(req, "beta", "3/2"));
  require_beta(exp.beta);
  exp.thresholds = parse_threshold_process(get<std::string>(req, "u", "1"), exp.beta, exp.rng_seed);
  exp.m_values = parse_unsigned_list(get<std::string>(req, "m_list", "10,20,40"));
  exp.n_samples = get<std::uint64_t>(req, "samples", 1000);
  const auto scaling = get<std::string>(req, "scaling", "linear");
  if (scaling == "sqrt") {
    exp.scaling = Scaling::Sqrt;
  } else if (scaling == "linear") {
    exp.scaling = Scaling::Linear;
  } else {
    throw ConfigError("scaling must be sqrt or linear");
  }
  exp.eps = parse_rational_list(get<std::string>(req, "eps", "1/2,1/10,1/100"));
  if (const auto bits = get<std::uint64_t>(req, "precision_bits", 0); bits > 0) exp.precision_bits = bits;
  exp.workers = workers_of(req);
  const auto report = run_lochs(exp);

  if (want_csv(req)) {
    std::string out = "m,target,mean_k,mean_k_over_m,relative_error,min_excess,max_excess,q50,q90,q99,"
                      "lower_bound_violations,cap_exceeded,scale,scaled_variance";
    for (const auto& e : exp.eps) out += ",above_c_eps[" + e.str() + "]";
    out += "\n";
    for (const auto& row : report.rows) {
      out += std::to_string(row.m) + "," + num(row.target) + "," + num(row.mean_k) + "," +
             num(row.mean_k_over_m) + "," + num(row.mean_k_over_m / row.target - 1.0) + "," +
             num(row.min_excess) + "," + num(row.max_excess);
      for (const auto& q : row.excess_quantiles) out += "," + num(q.second);
      out += "," + std::to_string(row.lower_bound_violations) + "," + std::to_string(row.cap_exceeded) +
             "," + num(row.scale) + "," + num(row.scaled_variance);
      for (const auto& e : row.by_eps) out += "," + num(e.fraction_above_c_eps);
      out += "\n";
    }
    return out;
  }
  json rows = json::array();
  for (const auto& row : report.rows) {
    json quantiles = json::array();
    for (const auto& [level, value] : row.excess_quantiles) quantiles.push_back({{"level", level}, {"value", value}});
    json by_eps = json::array();
    for (const auto& e : row.by_eps) {
      by_eps.push_back({{"eps", e.eps.str()},
                        {"c_eps", e.c_eps},
                        {"above_c_eps", e.above_c_eps},
                        {"fraction_above_c_eps", e.fraction_above_c_eps},
                        {"deviation_tail", e.deviation_tail},
                        {"deviation_tail_fraction", e.deviation_tail_fraction}});
    }
    rows.push_back({{"m", row.m},
                    {"target", row.target},
                    {"mean_k", row.mean_k},
                    {"mean_k_over_m", row.mean_k_over_m},
                    {"relative_error", row.mean_k_over_m / row.target - 1.0},
                    {"min_excess", row.min_excess},
                    {"max_excess", row.max_excess},
                    {"excess_quantiles", quantiles},
                    {"lower_bound_violations", row.lower_bound_violations},
                    {"cap_exceeded", row.cap_exceeded},
                    {"scale", row.scale},
                    {"scaled_variance", row.scaled_variance},
                    {"by_eps", by_eps}});
  }
  return emit_json({{"beta", report.beta.str()},
                    {"u", report.thresholds},
                    {"scaling", report.scaling},
                    {"samples", report.n_samples},
                    {"seed", report.rng_seed},
                    {"precision_bits", report.precision_bits},
                    {"log2_boundary_event_bound", report.log2_boundary_event_bound},
                    {"prng", report.prng},
                    {"rows", rows}});
}

std::string run_entropy(const json& req) {
  const auto seed = get<std::uint64_t>(req, "seed", 0);
  const auto betas = parse_beta_process(get<std::string>(req, "beta", "3/2"), seed);
  const auto thresholds =
      parse_threshold_process(get<std::string>(req, "u", "1"), betas.beta_max(), seed);
  EntropyOptions options;
  options.allow_general_thresholds = get<bool>(req, "allow_general_thresholds", false);
  options.budget = get<std::uint64_t>(req, "budget", options.budget);
  const auto m = get<unsigned>(req, "m", 8);
  const auto dist = word_distribution(betas, thresholds, m, options);
  const auto check = min_entropy_bound_check(dist, betas.beta_min(), betas.kappa());

  if (want_csv(req)) {
    std::string out = "word,probability,value\n";
    for (const auto& [word, p] : dist.entries()) {
      out += dist.word_string(word) + "," + p.str() + "," + num(p.to_double()) + "\n";
    }
    return out;
  }
  json words = json::array();
  for (const auto& [word, p] : dist.entries()) {
    words.push_back({{"word", dist.word_string(word)}, {"probability", p.str()}, {"value", p.to_double()}});
  }
  return emit_json({{"beta", betas.describe()},
                    {"u", thresholds.describe()},
                    {"m", m},
                    {"support", dist.entries().size()},
                    {"total", dist.total().str()},
                    {"max_probability", dist.max_probability().str()},
                    {"min_entropy", dist.min_entropy_decimal(50)},
                    {"bound", {{"kappa_over_beta_min_pow_m", check.bound.str()},
                               {"slack", check.slack.str()},
                               {"holds", check.holds}}},
                    {"mk_source", is_mk_source(dist, betas.beta_min(), betas.kappa())},
                    {"words", words}});
}

std::string run_extract(const json& req) {
  PipelineConfig config;
  const auto mode = get<std::string>(req, "mode", "seeded");
  if (mode == "seeded") {
    config.mode = ExtractMode::Seeded;
  } else if (mode == "two-source") {
    config.mode = ExtractMode::TwoSource;
  } else {
    throw ConfigError("mode must be seeded or two-source");
  }
  config.block_bits = get<unsigned>(req, "block_bits", config.block_bits);
  config.gap_bits = get<unsigned>(req, "gap_bits", config.gap_bits);
  config.output_bits = get<unsigned>(req, "output_bits", config.mode == ExtractMode::TwoSource ? 1 : 8);
  config.beta_min = Rational::parse(get<std::string>(req, "beta_min", "3/2"));
  config.beta_max = Rational::parse(get<std::string>(req, "beta_max", config.beta_min.str()));
  config.eps = Rational::parse(get<std::string>(req, "eps", "1/100"));
  const auto seed_mode = get<std::string>(req, "seed_mode", "prng");
  const auto seed = get<std::uint64_t>(req, "seed", 0);
  if (config.mode == ExtractMode::Seeded) {
    const std::size_t d = config.block_bits + config.output_bits - 1;
    if (seed_mode == "prng") {
      Prng rng(seed, 5);
      std::vector<std::uint8_t> z(d);
      for (auto& b : z) b = static_cast<std::uint8_t>(rng.next() >> 63);
      config.seed = z;
    } else if (seed_mode == "explicit") {
      config.seed = parse_bit_string(require_string(req, "seed_bits"));
    } else if (seed_mode != "stream") {
      throw ConfigError("seed_mode must be prng, explicit or stream");
    }
  }
  const auto stream = read_bit_file(require_string(req, "input"));
  const auto result = pipeline_extract(stream, config);
  const auto out_path = get<std::string>(req, "bits_out", "");
  if (!out_path.empty()) write_bit_file(out_path, result.bits);

  const auto& r = result.report;
  json out = {{"mode", r.mode},
              {"block_bits", r.block_bits},
              {"gap_bits", r.gap_bits},
              {"output_bits", r.output_bits},
              {"beta_min", config.beta_min.str()},
              {"beta_max", config.beta_max.str()},
              {"seed_source", r.seed_source},
              {"entropy_budget", r.entropy_budget},
              {"eps_bound", r.eps_bound},
              {"rate_overhead", r.rate_overhead},
              {"input_bits", stream.size()},
              {"blocks_used", r.blocks_used},
              {"bits_out", r.bits_out},
              {"warnings", r.warnings}};
  if (!out_path.empty()) out["output"] = out_path;
  return want_csv(req) ? kv_csv(out) : emit_json(out);
}

json results_json(const std::vector<TestResult>& results) {
  json arr = json::array();
  for (const auto& r : results) {
    arr.push_back({{"test", r.name}, {"statistic", r.statistic}, {"p_value", r.p_value}, {"pass", r.pass}});
  }
  return arr;
}

std::string run_battery(const json& req) {
  const auto alpha = get<double>(req, "alpha", 0.01);
  if (get<bool>(req, "calibrate", false)) {
    const auto cal = calibrate_battery(get<std::uint64_t>(req, "seed", 0), get<std::uint64_t>(req, "runs", 1000),
                                       get<std::uint64_t>(req, "length", 10000), alpha);
    if (want_csv(req)) {
      std::string out = "test,rejections,rate,within_tolerance\n";
      for (const auto& row : cal.rows) {
        out += row.name + "," + std::to_string(row.rejections) + "," + num(row.rate) + "," +
               (row.within_tolerance ? "true" : "false") + "\n";
      }
      return out;
    }
    json rows = json::array();
    for (const auto& row : cal.rows) {
      rows.push_back({{"test", row.name},
                      {"rejections", row.rejections},
                      {"rate", row.rate},
                      {"within_tolerance", row.within_tolerance}});
    }
    return emit_json({{"prng", cal.prng},
                      {"seed", cal.seed},
                      {"runs", cal.runs},
                      {"length", cal.length},
                      {"alpha", cal.significance},
                      {"tolerance", cal.tolerance},
                      {"passed", cal.passed()},
                      {"rows", rows}});
  }
  const auto bits = read_bit_file(require_string(req, "input"));
  const auto results = betaenc::run_battery(bits, alpha);
  if (want_csv(req)) {
    std::string out = "test,statistic,p_value,pass\n";
    for (const auto& r : results) {
      out += r.name + "," + num(r.statistic) + "," + num(r.p_value) + "," + (r.pass ? "true" : "false") + "\n";
    }
    return out;
  }
  return emit_json({{"input_bits", bits.size()}, {"alpha", alpha}, {"all_pass", all_pass(results)},
                    {"results", results_json(results)}});
}

}  // namespace

std::string run(const std::string& command, const json& request) {
  if (!request.is_object()) throw ConfigError("request must be a JSON object");
  if (command == "encode") return run_encode(request);
  if (command == "convert") return run_convert(request);
  if (command == "lochs") return run_lochs(request);
  if (command == "entropy") return run_entropy(request);
  if (command == "extract") return run_extract(request);
  if (command == "battery") return run_battery(request);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace betaenc::commands
