// Copyright 2026 The qpca-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner. Every subcommand validates all inputs before writing any
// file, emits machine-readable CSV/JSON artifacts at 17 significant digits,
// and records a manifest with content hashes so runs can be reproduced
// bit-for-bit from the same config and seed.
//
// Exit codes: 0 success, 2 validation error, 3 resource limit, 4 internal.

#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qpca/choi.hpp"
#include "qpca/discrim.hpp"
#include "qpca/dmexp.hpp"
#include "qpca/gram.hpp"
#include "qpca/io.hpp"
#include "qpca/phase_estimation.hpp"
#include "qpca/sha256.hpp"
#include "qpca/version.hpp"

namespace fs = std::filesystem;
using namespace qpca;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

// ---------------------------------------------------------------------------
// config handling: values come from CLI flags first, then the --config JSON
// block for the subcommand, then defaults.

struct ConfigSource {
  json root = json::object();
  json block = json::object();

  void load(const std::string& path, const std::string& subcommand) {
    if (path.empty()) return;
    root = parse_json(read_file(path), path);
    if (!root.is_object()) {
      throw FormatError(path + ": config must be a JSON object");
    }
    if (root.contains(subcommand)) {
      block = root[subcommand];
      if (!block.is_object()) {
        throw FormatError(path + ": config block '" + subcommand +
                          "' must be an object");
      }
    }
  }

  template <typename T>
  std::optional<T> block_value(const char* key) const {
    if (block.contains(key)) return block[key].get<T>();
    return std::nullopt;
  }

  template <typename T>
  std::optional<T> root_value(const char* key) const {
    if (root.contains(key)) return root[key].get<T>();
    return std::nullopt;
  }
};

template <typename T>
T pick(const CLI::Option* opt, const T& cli_value, std::optional<T> config_value,
       std::optional<T> fallback, const char* name) {
  if (opt != nullptr && opt->count() > 0) return cli_value;
  if (config_value) return *config_value;
  if (fallback) return *fallback;
  throw ValidationError(std::string("missing required parameter: ") + name);
}

void apply_dimension_cap(const CLI::Option* opt, long cli_value,
                         const ConfigSource& config) {
  std::optional<long> value;
  if (opt != nullptr && opt->count() > 0) {
    value = cli_value;
  } else if (const char* env = std::getenv("QPCA_DIM_CAP")) {
    try {
      value = std::stol(env);
    } catch (const std::exception&) {
      throw ValidationError("QPCA_DIM_CAP is not an integer");
    }
  } else if (auto from_config = config.root_value<long>("dimension_cap")) {
    value = *from_config;
  }
  if (value) set_dimension_cap(*value);
}

// ---------------------------------------------------------------------------
// manifest

struct RunTimer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void write_manifest(const fs::path& manifest_path, const std::string& command,
                    const json& config_snapshot,
                    const std::vector<fs::path>& artifacts, double seconds) {
  json entries = json::array();
  for (const auto& artifact : artifacts) {
    entries.push_back({{"path", artifact.string()},
                       {"sha256", sha256_hex(read_file(artifact))}});
  }
  json manifest{{"tool_version", kVersion},
                {"command", command},
                {"config", config_snapshot},
                {"artifacts", std::move(entries)},
                {"timings", {{"wall_seconds", seconds}}}};
  write_file(manifest_path, manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// exponentiate

struct ExponentiateOpts {
  std::string config_path, rho_path, sigma_path, out_path;
  double t = 0.0, epsilon = 0.0;
  long steps = 0, dim_cap = kMaxDimension;
  CLI::Option *t_opt = nullptr, *steps_opt = nullptr, *eps_opt = nullptr,
              *rho_opt = nullptr, *sigma_opt = nullptr, *out_opt = nullptr,
              *cap_opt = nullptr;
};

int run_exponentiate(const ExponentiateOpts& opts) {
  RunTimer timer;
  ConfigSource config;
  config.load(opts.config_path, "exponentiate");
  apply_dimension_cap(opts.cap_opt, opts.dim_cap, config);

  const std::string rho_path =
      pick<std::string>(opts.rho_opt, opts.rho_path,
                        config.block_value<std::string>("rho"), {}, "rho");
  const std::string sigma_path =
      pick<std::string>(opts.sigma_opt, opts.sigma_path,
                        config.block_value<std::string>("sigma"), {}, "sigma");
  const std::string out_path =
      pick<std::string>(opts.out_opt, opts.out_path,
                        config.block_value<std::string>("out"), {}, "out");
  const double t = pick<double>(opts.t_opt, opts.t,
                                config.block_value<double>("t"), {}, "t");
  const long steps = pick<long>(opts.steps_opt, opts.steps,
                                config.block_value<long>("steps"), 0L, "steps");
  const double epsilon =
      pick<double>(opts.eps_opt, opts.epsilon,
                   config.block_value<double>("epsilon"), 0.0, "epsilon");

  const DensityMatrix rho = load_density(rho_path);
  const DensityMatrix sigma = load_density(sigma_path);
  SwapSchedule schedule = steps > 0 ? SwapSchedule::from_steps(t, steps)
                                    : SwapSchedule::for_accuracy(t, epsilon);

  const DensityMatrix result = evolve_swap_channel(rho, sigma, schedule);
  const double distance =
      trace_distance(result, exact_conjugation(rho, sigma, t));

  json summary{{"t", t},
               {"steps", schedule.steps},
               {"step_size", schedule.step_size},
               {"trace_distance_to_exact", distance}};
  if (steps <= 0) summary["epsilon"] = epsilon;
  json config_snapshot{{"rho", rho_path},   {"sigma", sigma_path},
                       {"t", t},            {"steps", schedule.steps},
                       {"out", out_path},   {"dimension_cap", dimension_cap()}};

  const fs::path out(out_path);
  save_density(out, result);
  const fs::path summary_path = out_path + ".summary.json";
  write_file(summary_path, summary.dump(2) + "\n");
  write_manifest(out_path + ".manifest.json", "exponentiate", config_snapshot,
                 {out, summary_path}, timer.seconds());

  std::cout << "n=" << schedule.steps
            << " trace distance to exact conjugation: "
            << format_double(distance) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// error-curve

struct ErrorCurveOpts {
  std::string config_path, rho_path, sigma_path, out_path;
  double t = 0.0;
  std::vector<long> steps;
  long dim_cap = kMaxDimension;
  CLI::Option *t_opt = nullptr, *steps_opt = nullptr, *rho_opt = nullptr,
              *sigma_opt = nullptr, *out_opt = nullptr, *cap_opt = nullptr;
};

int run_error_curve(const ErrorCurveOpts& opts) {
  RunTimer timer;
  ConfigSource config;
  config.load(opts.config_path, "error_curve");
  apply_dimension_cap(opts.cap_opt, opts.dim_cap, config);

  const std::string rho_path =
      pick<std::string>(opts.rho_opt, opts.rho_path,
                        config.block_value<std::string>("rho"), {}, "rho");
  const std::string sigma_path =
      pick<std::string>(opts.sigma_opt, opts.sigma_path,
                        config.block_value<std::string>("sigma"), {}, "sigma");
  const std::string out_path =
      pick<std::string>(opts.out_opt, opts.out_path,
                        config.block_value<std::string>("out"), {}, "out");
  const double t = pick<double>(opts.t_opt, opts.t,
                                config.block_value<double>("t"), {}, "t");
  const std::vector<long> steps = pick<std::vector<long>>(
      opts.steps_opt, opts.steps, config.block_value<std::vector<long>>("steps"),
      {}, "steps");

  const DensityMatrix rho = load_density(rho_path);
  const DensityMatrix sigma = load_density(sigma_path);
  const ErrorCurve curve = measure_error_scaling(rho, sigma, t, steps);

  CsvWriter csv({"n", "trace_distance", "wall_seconds"});
  for (const auto& row : curve.rows) {
    csv.row({double(row.steps), row.trace_distance, row.wall_seconds});
  }
  json config_snapshot{{"rho", rho_path}, {"sigma", sigma_path}, {"t", t},
                       {"steps", steps},  {"out", out_path},
                       {"dimension_cap", dimension_cap()}};

  write_file(out_path, csv.str());
  write_manifest(out_path + ".manifest.json", "error-curve", config_snapshot,
                 {fs::path(out_path)}, timer.seconds());
  std::cout << "wrote " << curve.rows.size() << " rows to " << out_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// qpca

struct QpcaOpts {
  std::string config_path, rho_path, dataset_path, backend = "exact",
              out_dir = "qpca_out";
  int ancilla_bits = 4;
  double t0 = kPi;
  long top_k = 2, m = 10000, steps_per_unit_time = 512,
       dim_cap = kMaxDimension;
  std::uint64_t seed = 0;
  CLI::Option *rho_opt = nullptr, *dataset_opt = nullptr, *backend_opt = nullptr,
              *bits_opt = nullptr, *t0_opt = nullptr, *topk_opt = nullptr,
              *m_opt = nullptr, *steps_opt = nullptr, *seed_opt = nullptr,
              *out_opt = nullptr, *cap_opt = nullptr;
};

QpeConfig qpe_config_from(const std::string& backend, int bits, double t0,
                          long steps_per_unit_time) {
  QpeConfig cfg;
  cfg.ancilla_bits = bits;
  cfg.base_time = t0;
  if (backend == "exact") {
    cfg.backend = QpeBackend::exact;
  } else if (backend == "swap" || backend == "swap_channel") {
    cfg.backend = QpeBackend::swap_channel;
  } else {
    throw ValidationError("unknown backend '" + backend +
                          "' (expected exact|swap)");
  }
  cfg.swap_steps_per_unit_time = steps_per_unit_time;
  cfg.validate();
  return cfg;
}

int run_qpca(const QpcaOpts& opts) {
  RunTimer timer;
  ConfigSource config;
  config.load(opts.config_path, "qpca");
  apply_dimension_cap(opts.cap_opt, opts.dim_cap, config);

  const std::string rho_path = pick<std::string>(
      opts.rho_opt, opts.rho_path, config.block_value<std::string>("rho"),
      std::string(), "rho");
  const std::string dataset_path = pick<std::string>(
      opts.dataset_opt, opts.dataset_path,
      config.block_value<std::string>("dataset"), std::string(), "dataset");
  if (rho_path.empty() == dataset_path.empty()) {
    throw ValidationError("qpca: exactly one of --rho / --dataset is required");
  }
  const std::string backend = pick<std::string>(
      opts.backend_opt, opts.backend, config.block_value<std::string>("backend"),
      std::string("exact"), "backend");
  const int bits =
      pick<int>(opts.bits_opt, opts.ancilla_bits,
                config.block_value<int>("ancilla_bits"), 4, "ancilla_bits");
  const double t0 = pick<double>(opts.t0_opt, opts.t0,
                                 config.block_value<double>("t0"), kPi, "t0");
  const long top_k = pick<long>(opts.topk_opt, opts.top_k,
                                config.block_value<long>("top_k"), 2L, "top_k");
  const long m =
      pick<long>(opts.m_opt, opts.m, config.block_value<long>("m"), 10000L, "m");
  const long spt = pick<long>(opts.steps_opt, opts.steps_per_unit_time,
                              config.block_value<long>("steps_per_unit_time"),
                              512L, "steps_per_unit_time");
  const std::uint64_t seed =
      pick<std::uint64_t>(opts.seed_opt, opts.seed,
                          config.root_value<std::uint64_t>("seed"), 0ULL, "seed");
  const std::string out_dir = pick<std::string>(
      opts.out_opt, opts.out_dir, config.root_value<std::string>("output_dir"),
      std::string("qpca_out"), "out-dir");

  const QpeConfig cfg = qpe_config_from(backend, bits, t0, spt);

  std::optional<GramEncoding> encoding;
  std::optional<DensityMatrix> rho;
  if (!rho_path.empty()) {
    rho = load_density(rho_path);
  } else {
    encoding = build_encoding(load_dataset(dataset_path));
    rho = encoding->covariance_density;
  }

  const SpectralEstimate estimate = qpe_decompose(*rho, *rho, cfg);
  const PrincipalComponents principal = principal_components(*rho, cfg, top_k);
  const SampleRecord record = sample_decomposition(*rho, cfg, m, seed);
  const SpectralDecomposition oracle = hermitian_eig(rho->matrix());

  // Histogram rows over every outcome observed in the estimate or the samples.
  std::map<long, std::pair<double, double>> rows;  // k -> (mass, frequency)
  for (const auto& bin : estimate.bins) rows[bin.k].first = bin.mass;
  for (const auto& [k, count] : record.counts) {
    rows[k].second = double(count) / double(m);
  }
  CsvWriter csv({"r_estimate", "mass", "frequency"});
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    csv.row({cfg.r_estimate_of(it->first), it->second.first,
             it->second.second});
  }

  json components = json::array();
  std::vector<json> component_files;
  for (const auto& comp : principal.components) {
    // Eigenspace-projector fidelity against the classical oracle: cluster the
    // oracle eigenvalues lying within half a bin width of the estimate.
    ComplexMatrix projector = ComplexMatrix::Zero(rho->dim(), rho->dim());
    long matched = 0;
    long nearest = 0;
    for (long i = 0; i < oracle.eigenvalues.size(); ++i) {
      if (std::abs(oracle.eigenvalues(i) - comp.r_estimate) <=
          0.5 * cfg.bin_width()) {
        projector += oracle.eigenvectors[size_t(i)].projector();
        ++matched;
      }
      if (std::abs(oracle.eigenvalues(i) - comp.r_estimate) <
          std::abs(oracle.eigenvalues(nearest) - comp.r_estimate)) {
        nearest = i;
      }
    }
    if (matched == 0) {
      projector = oracle.eigenvectors[size_t(nearest)].projector();
    }
    const cxd fid = comp.eigenvector.amplitudes().adjoint() * projector *
                    comp.eigenvector.amplitudes();
    components.push_back({{"r_estimate", comp.r_estimate},
                          {"mass", comp.mass},
                          {"oracle_eigenvalue", oracle.eigenvalues(nearest)},
                          {"eigenspace_fidelity", fid.real()},
                          {"degenerate", comp.degenerate}});
    component_files.push_back(state_to_json(comp.eigenvector));
  }

  json summary{{"backend", backend},
               {"ancilla_bits", bits},
               {"t0", t0},
               {"top_k", top_k},
               {"m", m},
               {"seed", seed},
               {"components", std::move(components)},
               {"warnings", principal.warnings}};
  if (cfg.backend == QpeBackend::swap_channel) {
    summary["swap_steps"] = estimate.swap_steps;
  }
  if (encoding) {
    summary["norm_scale"] = encoding->norm_scale;
    summary["vectors_kept"] = encoding->vectors_kept;
    for (const auto& warning : encoding->warnings) {
      summary["warnings"].push_back(warning);
    }
  }
  json config_snapshot{
      {"rho", rho_path},       {"dataset", dataset_path}, {"backend", backend},
      {"ancilla_bits", bits},  {"t0", t0},                {"top_k", top_k},
      {"m", m},                {"seed", seed},
      {"steps_per_unit_time", spt},
      {"dimension_cap", dimension_cap()}};

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::vector<fs::path> artifacts;
  write_file(dir / "spectrum.csv", csv.str());
  artifacts.push_back(dir / "spectrum.csv");
  for (size_t i = 0; i < component_files.size(); ++i) {
    const fs::path path = dir / ("component_" + std::to_string(i) + ".json");
    write_file(path, component_files[i].dump(2) + "\n");
    artifacts.push_back(path);
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  artifacts.push_back(dir / "summary.json");
  write_manifest(dir / "manifest.json", "qpca", config_snapshot, artifacts,
                 timer.seconds());

  std::cout << "wrote " << principal.components.size() << " components to "
            << out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// discriminate

struct DiscriminateOpts {
  std::string config_path, dataset_path, chi_path, mode = "exact",
              qpe_backend = "exact", out_path;
  int ancilla_bits = 6;
  double t0 = kPi;
  long trials = 10000, steps_per_unit_time = 512, jobs = 1,
       dim_cap = kMaxDimension;
  std::uint64_t seed = 0;
  CLI::Option *dataset_opt = nullptr, *chi_opt = nullptr, *mode_opt = nullptr,
              *backend_opt = nullptr, *bits_opt = nullptr, *t0_opt = nullptr,
              *trials_opt = nullptr, *steps_opt = nullptr, *jobs_opt = nullptr,
              *seed_opt = nullptr, *out_opt = nullptr, *cap_opt = nullptr;
};

int run_discriminate(const DiscriminateOpts& opts) {
  RunTimer timer;
  ConfigSource config;
  config.load(opts.config_path, "discriminate");
  apply_dimension_cap(opts.cap_opt, opts.dim_cap, config);

  const std::string dataset_path = pick<std::string>(
      opts.dataset_opt, opts.dataset_path,
      config.block_value<std::string>("dataset"), {}, "dataset");
  const std::string chi_path =
      pick<std::string>(opts.chi_opt, opts.chi_path,
                        config.block_value<std::string>("chi"), {}, "chi");
  const std::string mode = pick<std::string>(
      opts.mode_opt, opts.mode, config.block_value<std::string>("mode"),
      std::string("exact"), "mode");
  const std::string out_path =
      pick<std::string>(opts.out_opt, opts.out_path,
                        config.block_value<std::string>("out"), {}, "out");
  const long trials =
      pick<long>(opts.trials_opt, opts.trials,
                 config.block_value<long>("trials"), 10000L, "trials");
  const long jobs = pick<long>(opts.jobs_opt, opts.jobs,
                               config.block_value<long>("jobs"), 1L, "jobs");
  const std::uint64_t seed =
      pick<std::uint64_t>(opts.seed_opt, opts.seed,
                          config.root_value<std::uint64_t>("seed"), 0ULL, "seed");
  if (trials < 1) throw ValidationError("discriminate: trials must be >= 1");
  if (jobs < 1) throw ValidationError("discriminate: jobs must be >= 1");
  if (mode != "exact" && mode != "qpe") {
    throw ValidationError("discriminate: mode must be exact or qpe");
  }

  const Dataset dataset = load_dataset(dataset_path);
  if (dataset.labels.empty()) {
    throw ValidationError("discriminate: dataset must carry labels");
  }
  // First label seen defines the first set.
  const std::string label_a = dataset.labels.front();
  std::string label_b;
  std::vector<PureState> set_a, set_b;
  for (long i = 0; i < dataset.size(); ++i) {
    const std::string& label = dataset.labels[size_t(i)];
    PureState state = PureState::normalized(dataset.vectors[size_t(i)]);
    if (label == label_a) {
      set_a.push_back(std::move(state));
    } else {
      if (label_b.empty()) label_b = label;
      if (label != label_b) {
        throw ValidationError("discriminate: dataset has more than two labels");
      }
      set_b.push_back(std::move(state));
    }
  }
  if (set_b.empty()) {
    throw ValidationError("discriminate: dataset must contain exactly two "
                          "label groups");
  }
  const PureState chi = load_state(chi_path);
  const ClusterPair clusters = build_clusters(set_a, set_b);

  QpeConfig cfg;
  if (mode == "qpe") {
    const int bits =
        pick<int>(opts.bits_opt, opts.ancilla_bits,
                  config.block_value<int>("ancilla_bits"), 6, "ancilla_bits");
    const double t0 = pick<double>(opts.t0_opt, opts.t0,
                                   config.block_value<double>("t0"), kPi, "t0");
    const std::string backend = pick<std::string>(
        opts.backend_opt, opts.qpe_backend,
        config.block_value<std::string>("qpe_backend"), std::string("exact"),
        "qpe_backend");
    const long spt = pick<long>(opts.steps_opt, opts.steps_per_unit_time,
                                config.block_value<long>("steps_per_unit_time"),
                                512L, "steps_per_unit_time");
    cfg = qpe_config_from(backend, bits, t0, spt);
  }

  auto assign_once = [&](std::uint64_t trial_seed) {
    return mode == "exact" ? assign(chi, clusters, trial_seed)
                           : assign_via_qpe(chi, clusters, cfg, trial_seed);
  };

  const Assignment first_draw = assign_once(derive_seed(seed, 0));

  // Trial loop: counts merge by addition, so chunked workers give the same
  // totals as a serial pass.
  std::vector<std::array<long, 3>> tallies(
      size_t(jobs), std::array<long, 3>{0, 0, 0});
  auto worker = [&](long job) {
    const long lo = trials * job / jobs;
    const long hi = trials * (job + 1) / jobs;
    for (long t = lo; t < hi; ++t) {
      const Assignment a = assign_once(derive_seed(seed, std::uint64_t(t)));
      tallies[size_t(job)][size_t(a.label)]++;
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (long j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
    for (auto& thread : pool) thread.join();
  }
  std::array<long, 3> counts{0, 0, 0};
  for (const auto& tally : tallies) {
    for (size_t i = 0; i < 3; ++i) counts[i] += tally[i];
  }

  json distribution = json::array();
  for (const auto& [x, p] : first_draw.outcome_distribution) {
    distribution.push_back({x, p});
  }
  json result{
      {"mode", mode},
      {"labels", {label_a, label_b}},
      {"assignment",
       {{"label", to_string(first_draw.label)},
        {"eigenvalue", first_draw.eigenvalue},
        {"confidence", first_draw.confidence}}},
      {"outcome_distribution", std::move(distribution)},
      {"trials", trials},
      {"empirical",
       {{"first", double(counts[0]) / double(trials)},
        {"second", double(counts[1]) / double(trials)},
        {"abstain", double(counts[2]) / double(trials)}}},
      {"helstrom_error_bound", helstrom_error_bound(clusters)},
      {"seed", seed}};
  json config_snapshot{{"dataset", dataset_path}, {"chi", chi_path},
                       {"mode", mode},           {"trials", trials},
                       {"seed", seed},           {"jobs", jobs},
                       {"dimension_cap", dimension_cap()}};

  write_file(out_path, result.dump(2) + "\n");
  write_manifest(out_path + ".manifest.json", "discriminate", config_snapshot,
                 {fs::path(out_path)}, timer.seconds());

  std::cout << "assignment: " << to_string(first_draw.label)
            << " (confidence " << format_double(first_draw.confidence)
            << "), empirical first/second/abstain: "
            << format_double(double(counts[0]) / double(trials)) << "/"
            << format_double(double(counts[1]) / double(trials)) << "/"
            << format_double(double(counts[2]) / double(trials)) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// choi

struct ChoiOpts {
  std::string config_path, channel_path, out_dir = "choi_out";
  int ancilla_bits = 4;
  double t0 = kPi;
  long top_k = 2, dim_cap = kMaxDimension;
  CLI::Option *channel_opt = nullptr, *bits_opt = nullptr, *t0_opt = nullptr,
              *topk_opt = nullptr, *out_opt = nullptr, *cap_opt = nullptr;
};

int run_choi(const ChoiOpts& opts) {
  RunTimer timer;
  ConfigSource config;
  config.load(opts.config_path, "choi");
  apply_dimension_cap(opts.cap_opt, opts.dim_cap, config);

  const std::string channel_path = pick<std::string>(
      opts.channel_opt, opts.channel_path,
      config.block_value<std::string>("channel"), {}, "channel");
  const int bits =
      pick<int>(opts.bits_opt, opts.ancilla_bits,
                config.block_value<int>("ancilla_bits"), 4, "ancilla_bits");
  const double t0 = pick<double>(opts.t0_opt, opts.t0,
                                 config.block_value<double>("t0"), kPi, "t0");
  const long top_k = pick<long>(opts.topk_opt, opts.top_k,
                                config.block_value<long>("top_k"), 2L, "top_k");
  const std::string out_dir = pick<std::string>(
      opts.out_opt, opts.out_dir, config.root_value<std::string>("output_dir"),
      std::string("choi_out"), "out-dir");

  const QuantumChannel channel = load_channel(channel_path);
  QpeConfig cfg;
  cfg.ancilla_bits = bits;
  cfg.base_time = t0;
  cfg.validate();

  const DensityMatrix choi = choi_state(channel);
  const SpectralEstimate estimate = qpe_decompose(choi, choi, cfg);
  const PrincipalComponents principal =
      channel_principal_components(channel, cfg, top_k);
  const SpectralDecomposition oracle = hermitian_eig(choi.matrix());

  CsvWriter csv({"r_estimate", "mass"});
  for (auto it = estimate.bins.rbegin(); it != estimate.bins.rend(); ++it) {
    csv.row({it->r_estimate, it->mass});
  }
  json components = json::array();
  std::vector<json> component_files;
  for (const auto& comp : principal.components) {
    components.push_back({{"r_estimate", comp.r_estimate},
                          {"mass", comp.mass},
                          {"degenerate", comp.degenerate}});
    component_files.push_back(state_to_json(comp.eigenvector));
  }
  json oracle_eigs = json::array();
  for (long i = 0; i < oracle.eigenvalues.size(); ++i) {
    oracle_eigs.push_back(oracle.eigenvalues(i));
  }
  json summary{{"channel", channel_path},
               {"ancilla_bits", bits},
               {"t0", t0},
               {"top_k", top_k},
               {"choi_dim", choi.dim()},
               {"components", std::move(components)},
               {"oracle_eigenvalues", std::move(oracle_eigs)},
               {"warnings", principal.warnings}};
  json config_snapshot{{"channel", channel_path},
                       {"ancilla_bits", bits},
                       {"t0", t0},
                       {"top_k", top_k},
                       {"dimension_cap", dimension_cap()}};

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::vector<fs::path> artifacts;
  write_file(dir / "spectrum.csv", csv.str());
  artifacts.push_back(dir / "spectrum.csv");
  for (size_t i = 0; i < component_files.size(); ++i) {
    const fs::path path = dir / ("component_" + std::to_string(i) + ".json");
    write_file(path, component_files[i].dump(2) + "\n");
    artifacts.push_back(path);
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  artifacts.push_back(dir / "summary.json");
  write_manifest(dir / "manifest.json", "choi", config_snapshot, artifacts,
                 timer.seconds());

  std::cout << "wrote " << principal.components.size()
            << " Choi components to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum principal component analysis simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ExponentiateOpts exp_opts;
  auto* exp_cmd = app.add_subcommand(
      "exponentiate", "evolve sigma by the repeated-swap channel with copies "
                      "of rho and report the distance to the exact conjugation");
  exp_cmd->add_option("--config", exp_opts.config_path, "JSON config file");
  exp_opts.rho_opt = exp_cmd->add_option("--rho", exp_opts.rho_path,
                                         "density matrix JSON (the generator)");
  exp_opts.sigma_opt = exp_cmd->add_option("--sigma", exp_opts.sigma_path,
                                           "density matrix JSON (the target)");
  exp_opts.t_opt = exp_cmd->add_option("--t", exp_opts.t, "total time");
  exp_opts.steps_opt =
      exp_cmd->add_option("--steps", exp_opts.steps, "step count n");
  exp_opts.eps_opt = exp_cmd->add_option(
      "--epsilon", exp_opts.epsilon,
      "target accuracy; picks n = ceil(2 t^2 / epsilon) when --steps is absent");
  exp_opts.out_opt =
      exp_cmd->add_option("--out", exp_opts.out_path, "output density JSON");
  exp_opts.cap_opt =
      exp_cmd->add_option("--dim-cap", exp_opts.dim_cap, "dimension cap");

  ErrorCurveOpts curve_opts;
  auto* curve_cmd = app.add_subcommand(
      "error-curve", "trace distance to the exact conjugation for a list of "
                     "step counts, as plot-ready CSV");
  curve_cmd->add_option("--config", curve_opts.config_path, "JSON config file");
  curve_opts.rho_opt =
      curve_cmd->add_option("--rho", curve_opts.rho_path, "density matrix JSON");
  curve_opts.sigma_opt = curve_cmd->add_option("--sigma", curve_opts.sigma_path,
                                               "density matrix JSON");
  curve_opts.t_opt = curve_cmd->add_option("--t", curve_opts.t, "total time");
  curve_opts.steps_opt =
      curve_cmd
          ->add_option("--steps", curve_opts.steps,
                       "step counts (comma separated or repeated)")
          ->delimiter(',');
  curve_opts.out_opt =
      curve_cmd->add_option("--out", curve_opts.out_path, "output CSV path");
  curve_opts.cap_opt =
      curve_cmd->add_option("--dim-cap", curve_opts.dim_cap, "dimension cap");

  QpcaOpts qpca_opts;
  auto* qpca_cmd = app.add_subcommand(
      "qpca", "phase-estimation self-tomography of a state or a dataset's "
              "covariance register");
  qpca_cmd->add_option("--config", qpca_opts.config_path, "JSON config file");
  qpca_opts.rho_opt =
      qpca_cmd->add_option("--rho", qpca_opts.rho_path, "density matrix JSON");
  qpca_opts.dataset_opt = qpca_cmd->add_option(
      "--dataset", qpca_opts.dataset_path, "dataset JSON/CSV (Gram encoding)");
  qpca_opts.backend_opt = qpca_cmd->add_option(
      "--backend", qpca_opts.backend, "controlled-evolution backend: exact|swap");
  qpca_opts.bits_opt = qpca_cmd->add_option("--ancilla-bits,-b",
                                            qpca_opts.ancilla_bits,
                                            "ancilla register width");
  qpca_opts.t0_opt =
      qpca_cmd->add_option("--t0", qpca_opts.t0, "base evolution time");
  qpca_opts.topk_opt =
      qpca_cmd->add_option("--top-k", qpca_opts.top_k, "components to extract");
  qpca_opts.m_opt =
      qpca_cmd->add_option("--m", qpca_opts.m, "sampling trials for frequencies");
  qpca_opts.steps_opt =
      qpca_cmd->add_option("--steps-per-unit-time",
                           qpca_opts.steps_per_unit_time,
                           "swap backend: partial-swap steps per unit time");
  qpca_opts.seed_opt = qpca_cmd->add_option("--seed", qpca_opts.seed, "RNG seed");
  qpca_opts.out_opt =
      qpca_cmd->add_option("--out-dir", qpca_opts.out_dir, "output directory");
  qpca_opts.cap_opt =
      qpca_cmd->add_option("--dim-cap", qpca_opts.dim_cap, "dimension cap");

  DiscriminateOpts disc_opts;
  auto* disc_cmd = app.add_subcommand(
      "discriminate", "assign a state to one of two labeled sample sets by "
                      "the eigenvalue sign of rho - sigma");
  disc_cmd->add_option("--config", disc_opts.config_path, "JSON config file");
  disc_opts.dataset_opt = disc_cmd->add_option(
      "--dataset", disc_opts.dataset_path, "dataset with exactly two labels");
  disc_opts.chi_opt =
      disc_cmd->add_option("--chi", disc_opts.chi_path, "state JSON to assign");
  disc_opts.mode_opt =
      disc_cmd->add_option("--mode", disc_opts.mode, "exact|qpe");
  disc_opts.backend_opt = disc_cmd->add_option(
      "--qpe-backend", disc_opts.qpe_backend,
      "qpe mode: controlled-evolution backend exact|swap");
  disc_opts.bits_opt = disc_cmd->add_option(
      "--ancilla-bits,-b", disc_opts.ancilla_bits, "qpe mode: ancilla width");
  disc_opts.t0_opt =
      disc_cmd->add_option("--t0", disc_opts.t0, "qpe mode: base time");
  disc_opts.steps_opt = disc_cmd->add_option(
      "--steps-per-unit-time", disc_opts.steps_per_unit_time,
      "qpe swap backend: steps per unit time");
  disc_opts.trials_opt =
      disc_cmd->add_option("--trials", disc_opts.trials, "sampling trials");
  disc_opts.jobs_opt =
      disc_cmd->add_option("--jobs", disc_opts.jobs, "worker threads");
  disc_opts.seed_opt = disc_cmd->add_option("--seed", disc_opts.seed, "RNG seed");
  disc_opts.out_opt =
      disc_cmd->add_option("--out", disc_opts.out_path, "output JSON path");
  disc_opts.cap_opt =
      disc_cmd->add_option("--dim-cap", disc_opts.dim_cap, "dimension cap");

  ChoiOpts choi_opts;
  auto* choi_cmd = app.add_subcommand(
      "choi", "Choi-state spectrum and dominant components of a channel");
  choi_cmd->add_option("--config", choi_opts.config_path, "JSON config file");
  choi_opts.channel_opt = choi_cmd->add_option(
      "--channel", choi_opts.channel_path, "channel JSON (Kraus list)");
  choi_opts.bits_opt = choi_cmd->add_option(
      "--ancilla-bits,-b", choi_opts.ancilla_bits, "ancilla register width");
  choi_opts.t0_opt =
      choi_cmd->add_option("--t0", choi_opts.t0, "base evolution time");
  choi_opts.topk_opt =
      choi_cmd->add_option("--top-k", choi_opts.top_k, "components to extract");
  choi_opts.out_opt =
      choi_cmd->add_option("--out-dir", choi_opts.out_dir, "output directory");
  choi_opts.cap_opt =
      choi_cmd->add_option("--dim-cap", choi_opts.dim_cap, "dimension cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (exp_cmd->parsed()) return run_exponentiate(exp_opts);
    if (curve_cmd->parsed()) return run_error_curve(curve_opts);
    if (qpca_cmd->parsed()) return run_qpca(qpca_opts);
    if (disc_cmd->parsed()) return run_discriminate(disc_opts);
    if (choi_cmd->parsed()) return run_choi(choi_opts);
    std::cerr << "error: no subcommand\n";
    return kExitValidation;
  } catch (const DimensionLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InternalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
