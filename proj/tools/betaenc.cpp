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

// betaenc command-line tool. Each subcommand becomes a JSON request for the
// C API; the result goes to --output (default stdout) and a manifest with the
// full request sits next to it so the run can be replayed.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "betaenc/betaenc.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

const char* kGrammar = R"(
Rationals are written p/q (or an integer). Decimals are rejected wherever
exactness matters (beta, u, x in exact mode).

Beta processes (--beta):
  3/2                      fixed
  seq:3/2,8/5,...          explicit sequence
  iid:3/2,8/5;1/2,1/2      i.i.d. finite support: values ; probabilities
  seeded:3/2,9/5           seeded realization in [lo,hi] keyed by --seed

Threshold processes (--u):
  1                        constant
  seq:1,6/5,...            explicit sequence
  iid                      fresh i.i.d. uniform on [1, 1/(beta_max-1)] per run
  iid:1,3/2                fresh i.i.d. uniform on [lo,hi]
  seeded:1,3/2             seeded realization keyed by --seed

Bit files: 8-byte little-endian bit count, then packed bytes, MSB first.

Environment: BETAENC_OUTPUT_DIR resolves relative output paths and holds the
manifest when results go to stdout; BETAENC_WORKERS sets the default worker
count. Exit codes: 0 ok, 2 configuration or usage error, 3 resource budget
exceeded.
)";

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::string resolve(const std::string& path) {
  if (path.empty() || path == "-") return path;
  const fs::path p(path);
  if (p.is_absolute()) return path;
  const auto dir = env_or("BETAENC_OUTPUT_DIR", "");
  return dir.empty() ? path : (fs::path(dir) / p).string();
}

int exit_code(be_status status) {
  switch (status) {
    case BE_OK: return kExitOk;
    case BE_ERR_RESOURCE: return kExitResource;
    case BE_ERR_INTERNAL: return kExitInternal;
    default: return kExitConfig;
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int execute(const std::string& command, const json& request, const std::string& output) {
  be_string* response = nullptr;
  const auto status = be_run(command.c_str(), request.dump().c_str(), &response);
  if (status != BE_OK) {
    std::cerr << "betaenc " << command << ": " << be_status_name(status) << " error: " << be_last_error()
              << "\n";
    return exit_code(status);
  }
  const std::string text(be_string_data(response), be_string_length(response));
  be_string_free(response);

  const json manifest = {{"artifact", "betaenc"},
                         {"version", be_version()},
                         {"prng", be_prng_id()},
                         {"command", command},
                         {"request", request}};
  std::string manifest_path;
  if (output.empty() || output == "-") {
    std::cout << text;
    std::cout.flush();
    manifest_path = (fs::path(env_or("BETAENC_OUTPUT_DIR", ".")) / (command + ".manifest.json")).string();
  } else {
    write_text(output, text);
    manifest_path = output + ".manifest.json";
  }
  write_text(manifest_path, manifest.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"betaenc: beta-encoder analysis toolkit"};
  app.footer(kGrammar);
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string(be_version()));

  std::uint64_t seed = 0;
  std::string precision = "exact";
  std::string output = "-";
  std::string format = "json";
  unsigned workers = 0;
  std::string from_manifest;
  app.add_option("--seed", seed, "Run seed")->capture_default_str();
  app.add_option("--precision", precision, "exact or float:<bits> (encode only)")->capture_default_str();
  app.add_option("--output,-o", output, "Result path, - for stdout")->capture_default_str();
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--workers", workers, "Worker threads (0: BETAENC_WORKERS or all cores)");
  app.add_option("--from-manifest", from_manifest, "Replay the request stored in a manifest");

  json req;

  // encode
  auto* encode = app.add_subcommand("encode", "Run the beta-encoder on an input x");
  std::string x, beta = "3/2", u = "1", bits_out;
  std::uint64_t steps = 16, stream_bits = 0, segment_bits = 4096;
  encode->add_option("--x", x, "Input x in [0,1]");
  encode->add_option("--beta", beta, "Beta process")->capture_default_str();
  encode->add_option("--u", u, "Threshold process")->capture_default_str();
  encode->add_option("--steps", steps, "Number of encoder steps")->capture_default_str();
  encode->add_option("--stream-bits", stream_bits, "Emit a bit stream of this length to --bits-out instead");
  encode->add_option("--segment-bits", segment_bits, "Bits per independent segment in stream mode")
      ->capture_default_str();
  encode->add_option("--bits-out", bits_out, "Bit file for stream mode");

  // convert
  auto* convert = app.add_subcommand("convert", "Beta-to-binary conversion and k(m,u,x)");
  std::string conv_beta = "3/2", conv_bits, conv_input, conv_x, conv_u = "1", conv_m = "8,16,32";
  convert->add_option("--beta", conv_beta, "Fixed beta")->capture_default_str();
  auto* conv_bits_opt = convert->add_option("--bits", conv_bits, "Encoder bits as a 0/1 string");
  auto* conv_input_opt = convert->add_option("--input", conv_input, "Encoder bits as a bit file");
  auto* conv_x_opt = convert->add_option("--x", conv_x, "Compute k(m,u,x) for this x instead");
  convert->add_option("--u", conv_u, "Threshold process (with --x)")->capture_default_str();
  convert->add_option("--m-list", conv_m, "Binary depths m (with --x)")->capture_default_str();
  conv_bits_opt->excludes(conv_input_opt)->excludes(conv_x_opt);
  conv_input_opt->excludes(conv_x_opt);

  // lochs
  auto* lochs = app.add_subcommand("lochs", "Monte Carlo study of k(m)/m against log 2/log beta");
  std::string lochs_beta = "3/2", lochs_u = "1", lochs_m = "10,20,40", scaling = "linear",
              eps = "1/2,1/10,1/100";
  std::uint64_t samples = 1000, precision_bits = 0;
  lochs->add_option("--beta", lochs_beta, "Fixed beta")->capture_default_str();
  lochs->add_option("--u", lochs_u, "Threshold process")->capture_default_str();
  lochs->add_option("--m-list", lochs_m, "Binary depths m")->capture_default_str();
  lochs->add_option("--samples", samples, "Number of uniform inputs")->capture_default_str();
  lochs->add_option("--scaling", scaling, "Deviation scaling n_m: sqrt or linear")
      ->check(CLI::IsMember({"sqrt", "linear"}))
      ->capture_default_str();
  lochs->add_option("--eps", eps, "Epsilons for C(eps) and deviation tails")->capture_default_str();
  lochs->add_option("--precision-bits", precision_bits, "Bits of the dyadic inputs (0: automatic)");

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Exact distribution and min-entropy of the first m bits");
  std::string ent_beta = "3/2", ent_u = "1";
  unsigned ent_m = 8;
  bool allow_general = false;
  std::uint64_t budget = std::uint64_t{1} << 24;
  entropy->add_option("--beta", ent_beta, "Beta process (finite support)")->capture_default_str();
  entropy->add_option("--u", ent_u, "Threshold process (constant or explicit)")->capture_default_str();
  entropy->add_option("--m", ent_m, "Word length")->capture_default_str();
  entropy->add_flag("--allow-general-thresholds", allow_general, "Accept thresholds other than 1");
  entropy->add_option("--budget", budget, "Enumeration budget")->capture_default_str();

  // extract
  auto* extract = app.add_subcommand("extract", "Extract near-uniform bits from an encoder bit stream");
  std::string ext_input, mode = "seeded", beta_min = "3/2", beta_max, seed_mode = "prng", seed_bits,
              ext_eps = "1/100", ext_out;
  unsigned block_bits = 64, gap_bits = 0;
  std::optional<unsigned> output_bits;
  extract->add_option("--input", ext_input, "Encoder bit file")->required();
  extract->add_option("--mode", mode, "seeded or two-source")
      ->check(CLI::IsMember({"seeded", "two-source"}))
      ->capture_default_str();
  extract->add_option("--block-bits", block_bits, "Block length m")->capture_default_str();
  extract->add_option("--gap-bits", gap_bits, "Bits skipped between blocks")->capture_default_str();
  extract->add_option("--output-bits", output_bits, "Output bits n per block (two-source: 1)");
  extract->add_option("--beta-min", beta_min, "Lower end of the beta range")->capture_default_str();
  extract->add_option("--beta-max", beta_max, "Upper end of the beta range (default beta-min)");
  extract->add_option("--seed-mode", seed_mode, "prng, explicit or stream (weak seed)")
      ->check(CLI::IsMember({"prng", "explicit", "stream"}))
      ->capture_default_str();
  extract->add_option("--seed-bits", seed_bits, "Explicit seed as a 0/1 string");
  extract->add_option("--eps", ext_eps, "Two-source closeness target")->capture_default_str();
  extract->add_option("--bits-out", ext_out, "Bit file for the extracted bits");

  // battery
  auto* battery = app.add_subcommand("battery", "Statistical test battery on a bit file");
  std::string bat_input;
  double alpha = 0.01;
  bool calibrate = false;
  std::uint64_t runs = 1000, length = 10000;
  battery->add_option("--input", bat_input, "Bit file");
  battery->add_option("--alpha", alpha, "Significance level")->capture_default_str();
  battery->add_flag("--calibrate", calibrate, "Run the PRNG self-calibration instead");
  battery->add_option("--runs", runs, "Calibration runs")->capture_default_str();
  battery->add_option("--length", length, "Calibration stream length")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (workers == 0) {
    const auto env = env_or("BETAENC_WORKERS", "");
    if (!env.empty()) {
      try {
        workers = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception&) {
        std::cerr << "betaenc: BETAENC_WORKERS must be a nonnegative integer\n";
        return kExitConfig;
      }
    }
  }
  const std::string out_path = resolve(output);

  try {
    if (!from_manifest.empty()) {
      if (!app.get_subcommands().empty()) {
        std::cerr << "betaenc: --from-manifest does not take a subcommand\n";
        return kExitConfig;
      }
      std::ifstream in(from_manifest);
      if (!in) {
        std::cerr << "betaenc: cannot open " << from_manifest << "\n";
        return kExitConfig;
      }
      const json manifest = json::parse(in);
      return execute(manifest.at("command").get<std::string>(), manifest.at("request"), out_path);
    }
    if (app.get_subcommands().empty()) {
      std::cout << app.help();
      return kExitConfig;
    }

    std::string command;
    if (encode->parsed()) {
      command = "encode";
      req = {{"beta", beta}, {"u", u}, {"seed", seed}};
      if (stream_bits > 0) {
        if (bits_out.empty()) {
          std::cerr << "betaenc encode: --stream-bits needs --bits-out\n";
          return kExitConfig;
        }
        req["stream_bits"] = stream_bits;
        req["segment_bits"] = segment_bits;
        req["bits_out"] = resolve(bits_out);
      } else {
        if (x.empty()) {
          std::cerr << "betaenc encode: --x is required\n";
          return kExitConfig;
        }
        req["x"] = x;
        req["steps"] = steps;
        req["precision"] = precision;
      }
    } else if (convert->parsed()) {
      command = "convert";
      req = {{"beta", conv_beta}, {"seed", seed}};
      if (*conv_x_opt) {
        req["x"] = conv_x;
        req["u"] = conv_u;
        req["m_list"] = conv_m;
      } else if (*conv_bits_opt) {
        req["bits"] = conv_bits;
      } else if (*conv_input_opt) {
        req["input"] = conv_input;
      } else {
        std::cerr << "betaenc convert: one of --bits, --input or --x is required\n";
        return kExitConfig;
      }
    } else if (lochs->parsed()) {
      command = "lochs";
      req = {{"beta", lochs_beta}, {"u", lochs_u},         {"m_list", lochs_m},
             {"samples", samples}, {"scaling", scaling},   {"eps", eps},
             {"seed", seed},       {"precision_bits", precision_bits}, {"workers", workers}};
    } else if (entropy->parsed()) {
      command = "entropy";
      req = {{"beta", ent_beta}, {"u", ent_u}, {"m", ent_m}, {"allow_general_thresholds", allow_general},
             {"budget", budget}, {"seed", seed}};
    } else if (extract->parsed()) {
      command = "extract";
      req = {{"input", ext_input},  {"mode", mode},           {"block_bits", block_bits},
             {"gap_bits", gap_bits}, {"beta_min", beta_min},   {"beta_max", beta_max.empty() ? beta_min : beta_max},
             {"seed_mode", seed_mode}, {"eps", ext_eps},       {"seed", seed}};
      req["output_bits"] = output_bits.value_or(mode == "two-source" ? 1u : 8u);
      if (!seed_bits.empty()) req["seed_bits"] = seed_bits;
      if (!ext_out.empty()) req["bits_out"] = resolve(ext_out);
    } else if (battery->parsed()) {
      command = "battery";
      req = {{"alpha", alpha}};
      if (calibrate) {
        req["calibrate"] = true;
        req["runs"] = runs;
        req["length"] = length;
        req["seed"] = seed;
      } else if (bat_input.empty()) {
        std::cerr << "betaenc battery: --input is required (or --calibrate)\n";
        return kExitConfig;
      } else {
        req["input"] = bat_input;
      }
    }
    req["format"] = format;
    return execute(command, req, out_path);
  } catch (const json::exception& e) {
    std::cerr << "betaenc: malformed manifest: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "betaenc: " << e.what() << "\n";
    return kExitInternal;
  }
}
