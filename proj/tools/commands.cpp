#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "photonstats/errors.hpp"
#include "photonstats/haar_mc.hpp"
#include "photonstats/io.hpp"
#include "photonstats/matfunc.hpp"
#include "photonstats/moments.hpp"
#include "photonstats/parallel.hpp"
#include "photonstats/version.hpp"

namespace photonstats::cli {

namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string join(const std::vector<int>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class RunRecorder {
 public:
  RunRecorder(std::string command, std::string canonical_config, std::optional<std::uint64_t> seed)
      : command_(std::move(command)),
        config_(std::move(canonical_config)),
        seed_(seed),
        started_(Clock::now()),
        started_utc_(utc_now()) {}

  void add_output(const std::filesystem::path& p) { outputs_.push_back(p.string()); }

  /// Writes <dir>/<stem>.manifest.json atomically.
  std::filesystem::path write(const std::filesystem::path& dir, const std::string& stem) const {
    Json doc;
    doc["command"] = command_;
    doc["config"] = Json::parse(config_);
    doc["config_digest"] = io::hex64(io::fnv1a64(config_));
    doc["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    doc["library_version"] = kVersion;
    doc["threads"] = parallel::max_threads();
    doc["started_utc"] = started_utc_;
    doc["wall_clock_seconds"] =
        std::chrono::duration<double>(Clock::now() - started_).count();
    doc["outputs"] = outputs_;
    const auto path = dir / (stem + ".manifest.json");
    io::write_file_atomic(path, doc.dump(2) + "\n");
    return path;
  }

 private:
  std::string command_;
  std::string config_;
  std::optional<std::uint64_t> seed_;
  Clock::time_point started_;
  std::string started_utc_;
  std::vector<std::string> outputs_;
};

std::filesystem::path prepare_out_dir(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

CMatrix bench_matrix(int ell, std::uint64_t seed) {
  Rng rng(derive_stream_seed(seed, static_cast<std::uint64_t>(ell)));
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 2 * ell;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Complex(re, im) * scale;
      a(j, i) = a(i, j);
    }
  }
  return a;
}

template <class F>
double median_seconds(F&& f, int reps, double min_batch) {
  std::vector<double> per_call;
  for (int r = 0; r < reps; ++r) {
    long calls = 0;
    const auto start = Clock::now();
    double elapsed = 0.0;
    do {
      f();
      ++calls;
      elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    } while (elapsed < min_batch);
    per_call.push_back(elapsed / static_cast<double>(calls));
  }
  std::sort(per_call.begin(), per_call.end());
  const std::size_t m = per_call.size();
  return m % 2 ? per_call[m / 2] : 0.5 * (per_call[m / 2 - 1] + per_call[m / 2]);
}

}  // namespace

int cmd_moment(const GlobalOptions& global, const MomentArgs& args, std::ostream& out) {
  if (args.method != "hafnian" && args.method != "fd") {
    throw DomainError("moment: method must be 'hafnian' or 'fd'");
  }
  const io::StateDocument doc = io::read_state_file(args.state);
  const ModePattern pattern(args.pattern);
  const double value = args.method == "fd" ? moment_via_fd(doc.state, pattern)
                                           : photon_moment(doc.state, pattern);
  out << io::format_value(value) << "\n";

  if (global.out_dir) {
    Json cfg{{"state", args.state.string()}, {"pattern", args.pattern}, {"method", args.method}};
    RunRecorder rec("moment", cfg.dump(), std::nullopt);
    const auto dir = prepare_out_dir(*global.out_dir);
    io::CsvTable table{{"state", "pattern", "method", "value"},
                       {{args.state.string(), join(args.pattern, ' '), args.method,
                         io::format_exact(value)}}};
    const auto csv = dir / "moment.csv";
    io::write_file_atomic(csv, io::format_csv(table));
    rec.add_output(csv);
    rec.write(dir, "moment");
  }
  return kExitOk;
}

int cmd_cumulant(const GlobalOptions& global, const CumulantArgs& args, std::ostream& out) {
  const bool run_mtl = args.method == "montrealer" || args.method == "both";
  const bool run_part = args.method == "partitions" || args.method == "both";
  if (!run_mtl && !run_part) {
    throw DomainError("cumulant: method must be 'montrealer', 'partitions' or 'both'");
  }
  if (args.modes.empty()) throw DomainError("cumulant: at least one mode is required");
  const io::StateDocument doc = io::read_state_file(args.state);

  io::CsvTable table{{"state", "modes", "method", "value"}, {}};
  const std::string modes = join(args.modes, ' ');
  int code = kExitOk;
  double mtl = 0.0;
  double part = 0.0;
  if (run_mtl) {
    mtl = cumulant_via_montrealer(doc.state, args.modes);
    table.rows.push_back({args.state.string(), modes, "montrealer", io::format_exact(mtl)});
  }
  if (run_part) {
    part = cumulant_via_partitions(doc.state, args.modes);
    table.rows.push_back({args.state.string(), modes, "partitions", io::format_exact(part)});
  }
  if (run_mtl && run_part) {
    const double diff = relative_difference(mtl, part);
    out << "montrealer " << io::format_value(mtl) << "\n"
        << "partitions " << io::format_value(part) << "\n"
        << "relative_difference " << io::format_value(diff) << "\n";
    if (diff > kCumulantAgreement) code = kExitMismatch;
  } else {
    out << io::format_value(run_mtl ? mtl : part) << "\n";
  }

  if (global.out_dir) {
    Json cfg{{"state", args.state.string()}, {"modes", args.modes}, {"method", args.method}};
    RunRecorder rec("cumulant", cfg.dump(), std::nullopt);
    const auto dir = prepare_out_dir(*global.out_dir);
    const auto csv = dir / "cumulant.csv";
    io::write_file_atomic(csv, io::format_csv(table));
    rec.add_output(csv);
    rec.write(dir, "cumulant");
  }
  return code;
}

int cmd_montecarlo(const GlobalOptions& global, const MonteCarloArgs& args, std::ostream& out) {
  io::ExperimentConfig config = io::read_experiment_file(args.config);
  if (global.seed) config.base.seed = *global.seed;
  const std::string canonical = io::canonical_experiment(config);
  RunRecorder rec("montecarlo", canonical, config.base.seed);

  const std::vector<FamilyStats> sweep = family_sweep(config.base, config.families);

  io::CsvTable table{{"family", "ell", "K", "order", "mean", "std", "trials", "seed"}, {}};
  for (const auto& fam : sweep) {
    for (const auto& row : fam.stats.rows) {
      table.rows.push_back({fam.family.label(), std::to_string(config.base.ell),
                            std::to_string(row.k), std::to_string(row.order),
                            io::format_exact(row.mean), io::format_exact(row.stddev),
                            std::to_string(row.count), std::to_string(config.base.seed)});
    }
  }

  const auto dir = prepare_out_dir(global.out_dir.value_or("."));
  const std::string stem = args.config.stem().string();
  const auto csv = dir / (stem + ".csv");
  io::write_file_atomic(csv, io::format_csv(table));
  rec.add_output(csv);
  const auto manifest = rec.write(dir, stem);
  out << "wrote " << csv.string() << "\n"
      << "wrote " << manifest.string() << "\n";
  return kExitOk;
}

int cmd_bench(const GlobalOptions& global, const BenchArgs& args, std::ostream& out) {
  if (args.ell_min < 1 || args.ell_max < args.ell_min) {
    throw DomainError("bench: need 1 <= ell-min <= ell-max");
  }
  if (args.ell_max > kMaxMontrealerFastModes) {
    throw ResourceError("bench: ell-max exceeds the mtl_fast guard of " +
                        std::to_string(kMaxMontrealerFastModes));
  }
  if (args.reps < 1) throw DomainError("bench: reps must be >= 1");
  const std::uint64_t seed = global.seed.value_or(0);

  Json cfg{{"ell_min", args.ell_min}, {"ell_max", args.ell_max}, {"reps", args.reps}};
  RunRecorder rec("bench", cfg.dump(), seed);

  io::CsvTable table{{"algorithm", "ell", "reps", "median_seconds"}, {}};
  int code = kExitOk;
  auto record = [&](const char* algorithm, int ell, double seconds) {
    table.rows.push_back({algorithm, std::to_string(ell), std::to_string(args.reps),
                          io::format_exact(seconds)});
  };
  for (int ell = args.ell_min; ell <= args.ell_max; ++ell) {
    const BlockAdjacency a(bench_matrix(ell, seed));
    const Complex fast = montrealer_fast(a);
    if (ell <= kMaxMontrealerRefModes) {
      const Complex ref = montrealer_ref(a);
      const double diff = std::abs(fast - ref) / std::max(1.0, std::abs(ref));
      if (diff > kBenchAgreement) {
        out << "mismatch at ell=" << ell << ": mtl_ref and mtl_fast differ by "
            << io::format_value(diff) << "\n";
        code = kExitMismatch;
      }
      record("mtl_ref", ell, median_seconds([&] { (void)montrealer_ref(a); }, args.reps,
                                            args.min_batch_seconds));
    }
    record("mtl_fast", ell, median_seconds([&] { (void)montrealer_fast(a); }, args.reps,
                                           args.min_batch_seconds));
    if (2 * ell <= kMaxLoopHafnianDim) {
      record("lhaf_ref", ell, median_seconds([&] { (void)loop_hafnian(a.matrix()); }, args.reps,
                                             args.min_batch_seconds));
    }
  }

  const auto dir = prepare_out_dir(global.out_dir.value_or("."));
  const auto csv = dir / "bench.csv";
  io::write_file_atomic(csv, io::format_csv(table));
  rec.add_output(csv);
  const auto manifest = rec.write(dir, "bench");
  out << "wrote " << csv.string() << "\n"
      << "wrote " << manifest.string() << "\n";
  return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-number moments, cumulants and Monte-Carlo statistics of Gaussian states",
               "photonstats"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("--seed", seed, "Override the experiment seed");
  app.add_option("--threads", global.threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--out-dir", out_dir, "Directory for CSV and manifest outputs");

  MomentArgs moment;
  auto* moment_cmd = app.add_subcommand("moment", "Photon-number moment <n_1^p_1 ... n_l^p_l>");
  moment_cmd->add_option("--state", moment.state, "State file (JSON)")->required();
  moment_cmd->add_option("--pattern", moment.pattern, "Exponents p_1,...,p_l")
      ->required()
      ->delimiter(',');
  moment_cmd->add_option("--method", moment.method, "hafnian | fd")
      ->check(CLI::IsMember({"hafnian", "fd"}));

  CumulantArgs cumulant;
  auto* cumulant_cmd = app.add_subcommand("cumulant", "Joint cumulant of photon numbers");
  cumulant_cmd->add_option("--state", cumulant.state, "State file (JSON)")->required();
  cumulant_cmd->add_option("--modes", cumulant.modes, "0-based modes, e.g. 0,1,2")
      ->required()
      ->delimiter(',');
  cumulant_cmd->add_option("--method", cumulant.method, "montrealer | partitions | both")
      ->check(CLI::IsMember({"montrealer", "partitions", "both"}));

  MonteCarloArgs mc;
  auto* mc_cmd = app.add_subcommand("montecarlo", "Haar-averaged cumulant statistics");
  mc_cmd->add_option("--config", mc.config, "Experiment config (JSON)")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time Montrealer and loop-hafnian routines");
  bench_cmd->add_option("--ell-min", bench.ell_min, "Smallest mode count");
  bench_cmd->add_option("--ell-max", bench.ell_max, "Largest mode count");
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions per point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (app.count("--seed") > 0) global.seed = seed;
  if (app.count("--out-dir") > 0) global.out_dir = out_dir;
  parallel::set_max_threads(global.threads);

  try {
    if (*moment_cmd) return cmd_moment(global, moment, out);
    if (*cumulant_cmd) return cmd_cumulant(global, cumulant, out);
    if (*mc_cmd) return cmd_montecarlo(global, mc, out);
    return cmd_bench(global, bench, out);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: invalid state: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("photonstats");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace photonstats::cli
