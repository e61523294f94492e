#include "cli/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdnn/sdnn.hpp"

#ifndef SDNN_VERSION
#define SDNN_VERSION "unknown"
#endif

namespace sdnn::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Failure : std::runtime_error {
  int code;
  Failure(int c, const std::string& message) : std::runtime_error(message), code(c) {}
};

[[noreturn]] void usage(const std::string& message) { throw Failure(kUsage, message); }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parameter:
    case ErrorKind::capacity:
      return kUsage;
    case ErrorKind::shape:
      return kDimension;
    default:
      return kIoOrFormat;
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = item.find_last_not_of(" \t");
    items.push_back(item.substr(first, last - first + 1));
  }
  return items;
}

template <class T>
std::vector<T> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<T> values;
  for (const auto& item : split_list(text)) {
    T v{};
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      usage(flag + ": '" + item + "' is not a non-negative integer");
    }
    values.push_back(v);
  }
  return values;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  return fs::path(p.string() + suffix);
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

ReportFormat report_format(const std::string& flag, const fs::path& path) {
  if (flag == "json") return ReportFormat::json;
  if (flag == "tsv") return ReportFormat::tsv;
  if (!flag.empty()) usage("--format must be tsv or json");
  return path.extension() == ".json" ? ReportFormat::json : ReportFormat::tsv;
}

// Run manifests. Only timestamps vary between identical runs, so they are
// opt-in.
struct Manifest {
  json doc;
  bool timestamps = false;
  std::string started = utc_now();

  Manifest(const char* command, bool stamp) : timestamps(stamp) {
    doc["tool"] = "sdnn";
    doc["version"] = SDNN_VERSION;
    doc["command"] = command;
  }

  void write(const fs::path& path) {
    if (timestamps) doc["timestamps"] = {{"started", started}, {"finished", utc_now()}};
    ensure_parent(path);
    write_file(path, doc.dump(2) + "\n");
  }
};

struct EngineArgs {
  std::string mode = "serial";
  std::size_t workers = 1;
  double ymax = 32.0;
  std::size_t batch_tile = 512;
  std::size_t pipeline_stages = 0;

  ExecutionMode parsed_mode(const std::string& text) const {
    const auto m = parse_mode(text);
    if (!m) usage("unknown mode '" + text + "'; use serial, data_parallel or pipeline");
    return *m;
  }

  InferenceConfig config() const {
    InferenceConfig cfg;
    cfg.mode = parsed_mode(mode);
    cfg.workers = workers;
    cfg.ymax = ymax;
    cfg.batch_tile = batch_tile;
    cfg.pipeline_stages = pipeline_stages;
    cfg.validate();
    return cfg;
  }

  json echo(const InferenceConfig& cfg) const {
    return {{"mode", to_string(cfg.mode)},
            {"workers", cfg.workers},
            {"ymax", cfg.ymax},
            {"batch_tile", cfg.batch_tile},
            {"pipeline_stages", cfg.pipeline_stages}};
  }
};

void add_engine_options(CLI::App* app, EngineArgs& a, bool with_ymax = true) {
  app->add_option("--mode", a.mode, "serial, data_parallel or pipeline")
      ->envname("SDNN_MODE")
      ->capture_default_str();
  app->add_option("--workers", a.workers, "engine threads")
      ->envname("SDNN_WORKERS")
      ->capture_default_str();
  if (with_ymax) {
    app->add_option("--ymax", a.ymax, "activation ceiling")
        ->envname("SDNN_YMAX")
        ->capture_default_str();
  }
  app->add_option("--batch-tile", a.batch_tile, "input rows per work unit")
      ->envname("SDNN_BATCH_TILE")
      ->capture_default_str();
  app->add_option("--pipeline-stages", a.pipeline_stages, "pipeline threads (0: --workers)")
      ->envname("SDNN_PIPELINE_STAGES")
      ->capture_default_str();
}

// Model directory plus input matrix, as used by infer and truth.
struct WorkloadArgs {
  fs::path model;
  fs::path input;
  std::size_t layers = 0;
  double bias = 0.0;
  CLI::Option* bias_opt = nullptr;
  std::size_t images = 0;
};

void add_workload_options(CLI::App* app, WorkloadArgs& a) {
  app->add_option("--model", a.model, "directory of n<N>-l<layer>.tsv|.bin files")->required();
  app->add_option("--input", a.input, "input feature matrix (.tsv or .bin)")->required();
  app->add_option("--layers", a.layers, "use the first L layers (default: all)");
  a.bias_opt = app->add_option("--bias-override", a.bias, "bias for every layer");
  app->add_option("--images", a.images, "input row count (default: from the file)");
}

struct Workload {
  ModelListing listing;
  NetworkModel model;
  FeatureBatch input;
  double bias;
  std::string bias_source;
  std::optional<std::uint64_t> seed;
};

FeatureBatch load_input(const fs::path& path, std::size_t neurons, std::size_t images) {
  std::optional<std::size_t> rows;
  if (images != 0) rows = images;
  auto m = load_matrix(path, rows);
  const bool exact = format_for_path(path) == MatrixFormat::binary;
  if (exact ? m.n_cols() != neurons : m.n_cols() > neurons) {
    fail(ErrorKind::shape, path.string() + ": input has " + std::to_string(m.n_cols()) +
                               " columns, model has " + std::to_string(neurons) + " neurons");
  }
  auto parts = std::move(m).release();
  parts.n_cols = neurons;
  return FeatureBatch(SparseMatrix::adopt_trusted(std::move(parts)));
}

Workload load_workload(const WorkloadArgs& a, std::size_t workers) {
  auto listing = list_model(a.model);
  const auto n = listing.neurons;

  json model_manifest;
  const auto manifest_path = a.model / "manifest.json";
  if (fs::exists(manifest_path)) {
    model_manifest = json::parse(read_file(manifest_path), nullptr, false);
    if (model_manifest.is_discarded()) model_manifest = json();
  }

  double bias = 0.0;
  std::string source;
  if (a.bias_opt->count() > 0) {
    bias = a.bias;
    source = "override";
  } else if (auto b = table_bias(n)) {
    bias = *b;
    source = "table";
  } else if (model_manifest.is_object() && model_manifest.contains("bias") &&
             model_manifest["bias"].is_number()) {
    bias = model_manifest["bias"].get<double>();
    source = "model manifest";
  } else {
    usage("no standard bias for " + std::to_string(n) + " neurons; pass --bias-override");
  }

  std::optional<std::uint64_t> seed;
  if (model_manifest.is_object() && model_manifest.contains("seed") &&
      model_manifest["seed"].is_number_unsigned()) {
    seed = model_manifest["seed"].get<std::uint64_t>();
  }

  auto model = load_model(listing, a.layers, bias, workers);
  auto input = load_input(a.input, n, a.images);
  return {std::move(listing), std::move(model), std::move(input), bias, source, seed};
}

json workload_echo(const WorkloadArgs& a, const Workload& w) {
  return {{"model", a.model.string()},
          {"input", a.input.string()},
          {"neurons", w.model.neurons()},
          {"layers", w.model.depth()},
          {"inputs", w.input.images()},
          {"connections", w.model.connections()},
          {"bias", w.bias},
          {"bias_source", w.bias_source},
          {"seed", w.seed ? json(*w.seed) : json(nullptr)}};
}

std::string plural(std::size_t n, const std::string& word, const std::string& words) {
  return std::to_string(n) + " " + (n == 1 ? word : words);
}

void print_verify(const VerifyReport& r, std::size_t matched, std::ostream& out) {
  if (r.match) {
    out << "match: " << plural(matched, "category", "categories") << "\n";
    return;
  }
  out << "mismatch: " << plural(r.false_positives.size(), "false positive", "false positives")
      << ", " << plural(r.false_negatives.size(), "false negative", "false negatives") << "\n";
  constexpr std::size_t shown = 10;
  auto list = [&](const CategorySet& s, const char* label) {
    for (std::size_t i = 0; i < std::min(shown, s.size()); ++i) {
      out << "  " << label << " " << s.rows()[i] << "\n";
    }
    if (s.size() > shown) out << "  ... " << s.size() - shown << " more\n";
  };
  list(r.false_positives, "false positive");
  list(r.false_negatives, "false negative");
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::size_t neurons = 0;
  std::size_t layers = 0;
  std::uint64_t seed = 0;
  double weight = 0.0625;
  std::string radix;
  std::uint32_t kron = 0;
  double bias = 0.0;
  CLI::Option* bias_opt = nullptr;
  fs::path out;
  std::string format = "tsv";
  std::size_t workers = 1;
  bool force = false;
  bool timestamps = false;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  Manifest manifest("generate", a.timestamps);

  GeneratorConfig cfg;
  if (!a.radix.empty()) {
    cfg.radix.radices = parse_numbers<std::uint32_t>(a.radix, "--radix");
    cfg.kron.factors.assign(cfg.radix.radices.size() + 1, a.kron == 0 ? 1 : a.kron);
    cfg.target_layers = a.layers;
    cfg.seed = a.seed;
    if (a.neurons != 0 && a.neurons != cfg.neurons()) {
      usage("--neurons " + std::to_string(a.neurons) + " disagrees with radix x kron = " +
            std::to_string(cfg.neurons()));
    }
  } else {
    if (a.neurons == 0) usage("generate needs --neurons or --radix");
    if (a.kron != 0) usage("--kron is only used together with --radix");
    cfg = challenge_config(a.neurons, a.layers, a.seed);
  }
  cfg.weight_value = a.weight;
  if (a.bias_opt->count() > 0) cfg.bias = a.bias;
  LayerGenerator gen(cfg);
  const auto n = gen.neurons();

  fs::create_directories(a.out);
  static const std::regex layer_file(R"(n[0-9]+-l[0-9]+\.(tsv|bin))");
  std::vector<fs::path> stale;
  for (const auto& entry : fs::directory_iterator(a.out)) {
    if (std::regex_match(entry.path().filename().string(), layer_file)) stale.push_back(entry.path());
  }
  if (!stale.empty()) {
    if (!a.force) usage(a.out.string() + " already holds layer files; pass --force to replace them");
    for (const auto& p : stale) fs::remove(p);
  }

  const bool tsv = a.format != "bin";
  const bool bin = a.format != "tsv";
  std::vector<std::uint64_t> nnz(gen.depth(), 0);
  for_each_layer(gen, a.workers, [&](std::size_t t, LayerWeights&& layer) {
    nnz[t] = layer.weights.nnz();
    if (tsv) save_matrix(layer.weights, a.out / layer_file_name(n, t + 1, MatrixFormat::tsv));
    if (bin) save_matrix(layer.weights, a.out / layer_file_name(n, t + 1, MatrixFormat::binary));
  });
  std::uint64_t connections = 0;
  for (auto c : nnz) connections += c;

  auto& d = manifest.doc;
  d["neurons"] = n;
  d["layers"] = gen.depth();
  d["seed"] = cfg.seed;
  d["weight"] = cfg.weight_value;
  d["bias"] = gen.bias();
  d["radix"] = cfg.radix.radices;
  d["kron"] = cfg.kron.factor();
  d["connections"] = connections;
  d["format"] = a.format;
  manifest.write(a.out / "manifest.json");

  out << "generated " << gen.depth() << " layers of " << n << " neurons in " << a.out.string()
      << "\nconnections " << connections << "\n";
  return kOk;
}

// -------------------------------------------------------------- preprocess

struct PreprocessArgs {
  fs::path mnist;
  std::size_t side = 32;
  fs::path out;
  std::size_t limit = 0;
  fs::path manifest;
  bool timestamps = false;
};

int cmd_preprocess(const PreprocessArgs& a, std::ostream& out) {
  Manifest manifest("preprocess", a.timestamps);
  if (!is_supported_side(a.side)) {
    usage("unsupported --side " + std::to_string(a.side) + "; use 32, 64, 128 or 256");
  }
  auto images = read_idx_file(a.mnist);
  if (a.limit != 0) images = take_images(images, a.limit);
  const auto batch = resize_threshold_flatten(images, a.side);
  ensure_parent(a.out);
  save_matrix(batch.matrix(), a.out);

  auto& d = manifest.doc;
  d["mnist"] = a.mnist.string();
  d["side"] = a.side;
  d["limit"] = a.limit;
  d["output"] = a.out.string();
  d["images"] = batch.images();
  d["neurons"] = batch.neurons();
  d["entries"] = batch.matrix().nnz();
  manifest.write(a.manifest.empty() ? with_suffix(a.out, ".manifest.json") : a.manifest);

  out << "wrote " << batch.images() << " images of " << batch.neurons() << " pixels ("
      << batch.matrix().nnz() << " entries) to " << a.out.string() << "\n";
  return kOk;
}

// ----------------------------------------------------------------- convert

struct ConvertArgs {
  fs::path in;
  fs::path out;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  std::optional<std::size_t> rows;
  std::optional<std::size_t> cols;
  if (a.rows != 0) rows = a.rows;
  if (a.cols != 0) cols = a.cols;
  const auto m = load_matrix(a.in, rows, cols);
  ensure_parent(a.out);
  save_matrix(m, a.out);
  out << "converted " << m.n_rows() << "x" << m.n_cols() << " matrix (" << m.nnz()
      << " entries) to " << a.out.string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------- truth

struct TruthArgs {
  WorkloadArgs work;
  double ymax = 32.0;
  std::size_t workers = 1;
  fs::path out;
  fs::path manifest;
  bool timestamps = false;
};

int cmd_truth(const TruthArgs& a, std::ostream& out) {
  Manifest manifest("truth", a.timestamps);
  if (!(a.ymax > 0.0)) usage("--ymax must be positive");
  const auto w = load_workload(a.work, a.workers);
  const auto truth = oracle_categories(w.model, w.input, a.ymax);
  ensure_parent(a.out);
  save_truth(truth, a.out);

  auto& d = manifest.doc;
  d["workload"] = workload_echo(a.work, w);
  d["ymax"] = a.ymax;
  d["truth"] = a.out.string();
  d["categories"] = truth.size();
  manifest.write(a.manifest.empty() ? with_suffix(a.out, ".manifest.json") : a.manifest);

  out << "truth: " << plural(truth.size(), "category", "categories") << " of "
      << w.input.images() << " inputs written to " << a.out.string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------- infer

struct InferArgs {
  WorkloadArgs work;
  EngineArgs engine;
  fs::path categories;
  fs::path report;
  std::string report_format;
  fs::path truth;
  std::string machine;
  fs::path manifest;
  bool timestamps = false;
};

int cmd_infer(const InferArgs& a, std::ostream& out) {
  Manifest manifest("infer", a.timestamps);
  const auto cfg = a.engine.config();
  const auto format = report_format(a.report_format, a.report);
  if (!a.truth.empty() && !fs::exists(a.truth)) {
    fail(ErrorKind::io, a.truth.string() + ": no such truth file");
  }
  const auto w = load_workload(a.work, cfg.workers);

  const auto run = infer_timed(w.model, w.input, cfg);
  ensure_parent(a.categories);
  save_truth(run.categories, a.categories);

  BenchReport r;
  r.neurons = w.model.neurons();
  r.layers = w.model.depth();
  r.connections = w.model.connections();
  r.inputs = w.input.images();
  r.seconds = run.seconds;
  r.rate = run.seconds > 0.0 ? rate(r.inputs, r.connections, r.seconds) : 0.0;
  r.mode = cfg.mode;
  r.workers = cfg.workers;
  r.machine = a.machine;
  if (!a.report.empty()) {
    std::ostringstream text;
    emit_report(std::span(&r, 1), format, text);
    ensure_parent(a.report);
    write_file(a.report, text.str());
  }

  auto& d = manifest.doc;
  d["workload"] = workload_echo(a.work, w);
  d["engine"] = a.engine.echo(cfg);
  d["machine"] = a.machine;
  d["categories"] = a.categories.string();
  d["report"] = a.report.empty() ? json(nullptr) : json(a.report.string());
  d["truth"] = a.truth.empty() ? json(nullptr) : json(a.truth.string());
  manifest.write(a.manifest.empty() ? with_suffix(a.categories, ".manifest.json") : a.manifest);

  out << plural(run.categories.size(), "category", "categories") << " from " << r.inputs
      << " inputs through " << r.layers << " layers in " << r.seconds << " s (" << r.rate
      << " edges/s)\n";

  if (a.truth.empty()) return kOk;
  const auto truth = load_truth(a.truth);
  const auto v = verify(run.categories, truth);
  print_verify(v, truth.size(), out);
  return v.match ? kOk : kMismatch;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  fs::path computed;
  fs::path truth;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto computed = load_truth(a.computed);
  const auto truth = load_truth(a.truth);
  const auto v = verify(computed, truth);
  print_verify(v, truth.size(), out);
  return v.match ? kOk : kMismatch;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::string neurons = "1024";
  std::string layers = "120";
  std::string modes = "serial";
  std::string workers = "1";
  std::size_t inputs = 1000;
  fs::path mnist;
  double density = 0.2;
  std::uint64_t seed = 0;
  std::size_t gen_workers = 1;
  EngineArgs engine;
  std::string machine;
  fs::path out;
  std::string format;
  bool timestamps = false;
};

FeatureBatch random_inputs(std::size_t rows, std::size_t cols, double density,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Triple> t;
  for (std::size_t r = 1; r <= rows; ++r) {
    for (std::size_t c = 1; c <= cols; ++c) {
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < density) t.push_back({r, c, 1.0});
    }
  }
  return FeatureBatch(build_from_triples(t, rows, cols));
}

FeatureBatch bench_inputs(const BenchArgs& a, const std::optional<ImageSet>& mnist,
                          std::size_t neurons) {
  if (!mnist) return random_inputs(a.inputs, neurons, a.density, a.seed);
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(neurons))));
  if (side * side != neurons || !is_supported_side(side)) {
    fail(ErrorKind::parameter, "no image side gives " + std::to_string(neurons) + " pixels");
  }
  return resize_threshold_flatten(take_images(*mnist, a.inputs), side);
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  Manifest manifest("bench", a.timestamps);
  const auto sizes = parse_numbers<std::size_t>(a.neurons, "--neurons");
  const auto depths = parse_numbers<std::size_t>(a.layers, "--layers");
  const auto worker_counts = parse_numbers<std::size_t>(a.workers, "--workers");
  std::vector<ExecutionMode> modes;
  for (const auto& m : split_list(a.modes)) modes.push_back(a.engine.parsed_mode(m));
  if (!(a.density >= 0.0 && a.density <= 1.0)) usage("--density must lie in [0, 1]");
  const auto format = report_format(a.format, a.out);

  std::optional<ImageSet> mnist;
  if (!a.mnist.empty()) mnist = read_idx_file(a.mnist);

  std::vector<BenchReport> reports;
  bool categories_differ = false;
  for (auto n : sizes) {
    for (auto l : depths) {
      std::optional<NetworkModel> model;
      FeatureBatch input;
      std::string setup_error;
      try {
        model = generate_network(challenge_config(n, l, a.seed), a.gen_workers);
        input = bench_inputs(a, mnist, n);
      } catch (const std::exception& e) {
        setup_error = e.what();
      }

      std::optional<CategorySet> reference;
      for (auto mode : modes) {
        for (auto workers : worker_counts) {
          BenchReport r;
          r.neurons = n;
          r.layers = l;
          r.mode = mode;
          r.workers = workers;
          r.machine = a.machine;
          if (!setup_error.empty()) {
            r.status = "error: " + setup_error;
            reports.push_back(r);
            continue;
          }
          r.connections = model->connections();
          r.inputs = input.images();
          try {
            auto cfg = a.engine.config();
            cfg.mode = mode;
            cfg.workers = workers;
            cfg.validate();
            const auto run = infer_timed(*model, input, cfg);
            r.seconds = run.seconds;
            r.rate = run.seconds > 0.0 ? rate(r.inputs, r.connections, run.seconds) : 0.0;
            if (!reference) {
              reference = run.categories;
            } else if (run.categories != *reference) {
              r.status = "categories differ from the first cell";
              categories_differ = true;
            }
          } catch (const std::exception& e) {
            r.status = std::string("error: ") + e.what();
          }
          reports.push_back(r);
        }
      }
    }
  }

  if (a.out.empty()) {
    emit_report(reports, format, out);
  } else {
    std::ostringstream text;
    emit_report(reports, format, text);
    ensure_parent(a.out);
    write_file(a.out, text.str());

    auto& d = manifest.doc;
    d["neurons"] = sizes;
    d["layers"] = depths;
    json mode_names = json::array();
    for (auto m : modes) mode_names.push_back(to_string(m));
    d["modes"] = mode_names;
    d["workers"] = worker_counts;
    d["inputs"] = a.inputs;
    d["mnist"] = a.mnist.empty() ? json(nullptr) : json(a.mnist.string());
    d["density"] = mnist ? json(nullptr) : json(a.density);
    d["seed"] = a.seed;
    d["engine"] = a.engine.echo(a.engine.config());
    d["machine"] = a.machine;
    d["report"] = a.out.string();
    manifest.write(with_suffix(a.out, ".manifest.json"));
    out << "wrote " << reports.size() << " rows to " << a.out.string() << "\n";
  }
  return categories_differ ? kMismatch : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse deep neural network inference benchmark", "sdnn"};
  app.set_version_flag("--version", SDNN_VERSION);
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic network, one file per layer");
  generate->add_option("--neurons", gen.neurons, "1024, 4096, 16384 or 65536");
  generate->add_option("--layers", gen.layers, "positive multiple of the base depth")->required();
  generate->add_option("--seed", gen.seed, "permutation seed")
      ->envname("SDNN_SEED")
      ->capture_default_str();
  generate->add_option("--weight", gen.weight, "value of every connection")->capture_default_str();
  generate->add_option("--radix", gen.radix, "comma-separated radix list, e.g. 2,3,2");
  generate->add_option("--kron", gen.kron, "Kronecker factor used with --radix (default 1)");
  gen.bias_opt = generate->add_option("--bias", gen.bias, "bias (default: by neuron count)");
  generate->add_option("--out", gen.out, "model directory")->required();
  generate->add_option("--format", gen.format, "tsv, bin or both")
      ->check(CLI::IsMember({"tsv", "bin", "both"}))
      ->capture_default_str();
  generate->add_option("--workers", gen.workers, "generator threads")
      ->envname("SDNN_WORKERS")
      ->capture_default_str();
  generate->add_flag("--force", gen.force, "replace existing layer files in --out");
  generate->add_flag("--manifest-timestamps", gen.timestamps, "record wall-clock times")
      ->envname("SDNN_MANIFEST_TIMESTAMPS");

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand("preprocess", "resize, threshold and flatten IDX images");
  preprocess->add_option("--mnist", pre.mnist, "IDX3 image file, optionally gzipped")->required();
  preprocess->add_option("--side", pre.side, "32, 64, 128 or 256")->capture_default_str();
  preprocess->add_option("--out", pre.out, "output matrix (.tsv or .bin)")->required();
  preprocess->add_option("--limit", pre.limit, "keep only the first N images");
  preprocess->add_option("--manifest", pre.manifest, "manifest path (default: <out>.manifest.json)");
  preprocess->add_flag("--manifest-timestamps", pre.timestamps, "record wall-clock times")
      ->envname("SDNN_MANIFEST_TIMESTAMPS");

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "convert a matrix between .tsv and .bin");
  convert->add_option("input", conv.in, "source matrix")->required();
  convert->add_option("output", conv.out, "destination matrix")->required();
  convert->add_option("--rows", conv.rows, "row count for TSV input (default: largest index)");
  convert->add_option("--cols", conv.cols, "column count for TSV input (default: largest index)");

  TruthArgs tr;
  auto* truth = app.add_subcommand("truth", "compute truth categories with the dense oracle");
  add_workload_options(truth, tr.work);
  truth->add_option("--ymax", tr.ymax, "activation ceiling")
      ->envname("SDNN_YMAX")
      ->capture_default_str();
  truth->add_option("--workers", tr.workers, "threads used to load the model")
      ->envname("SDNN_WORKERS")
      ->capture_default_str();
  truth->add_option("--out", tr.out, "truth file")->required();
  truth->add_option("--manifest", tr.manifest, "manifest path (default: <out>.manifest.json)");
  truth->add_flag("--manifest-timestamps", tr.timestamps, "record wall-clock times")
      ->envname("SDNN_MANIFEST_TIMESTAMPS");

  InferArgs inf;
  auto* infer_cmd = app.add_subcommand("infer", "run the network over an input matrix");
  add_workload_options(infer_cmd, inf.work);
  add_engine_options(infer_cmd, inf.engine);
  infer_cmd->add_option("--categories", inf.categories, "output category file")->required();
  infer_cmd->add_option("--report", inf.report, "timing report (.tsv or .json)");
  infer_cmd->add_option("--report-format", inf.report_format, "tsv or json (default: by extension)");
  infer_cmd->add_option("--truth", inf.truth, "truth file to verify against");
  infer_cmd->add_option("--machine", inf.machine, "processor description for the report")
      ->envname("SDNN_MACHINE");
  infer_cmd->add_option("--manifest", inf.manifest,
                        "manifest path (default: <categories>.manifest.json)");
  infer_cmd->add_flag("--manifest-timestamps", inf.timestamps, "record wall-clock times")
      ->envname("SDNN_MANIFEST_TIMESTAMPS");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "compare computed categories with truth");
  verify_cmd->add_option("computed", ver.computed, "computed category file")->required();
  verify_cmd->add_option("truth", ver.truth, "truth category file")->required();

  BenchArgs ben;
  auto* bench = app.add_subcommand("bench", "time generated networks over a grid of settings");
  bench->add_option("--neurons", ben.neurons, "comma list of network sizes")->capture_default_str();
  bench->add_option("--layers", ben.layers, "comma list of depths")->capture_default_str();
  bench->add_option("--modes", ben.modes, "comma list of modes")->capture_default_str();
  bench->add_option("--workers", ben.workers, "comma list of worker counts")->capture_default_str();
  bench->add_option("--inputs", ben.inputs, "input rows per cell")->capture_default_str();
  bench->add_option("--mnist", ben.mnist, "IDX3 images (default: random binary inputs)");
  bench->add_option("--density", ben.density, "density of random inputs")->capture_default_str();
  bench->add_option("--seed", ben.seed, "network and input seed")
      ->envname("SDNN_SEED")
      ->capture_default_str();
  bench->add_option("--gen-workers", ben.gen_workers, "threads used to generate networks")
      ->capture_default_str();
  bench->add_option("--ymax", ben.engine.ymax, "activation ceiling")
      ->envname("SDNN_YMAX")
      ->capture_default_str();
  bench->add_option("--batch-tile", ben.engine.batch_tile, "input rows per work unit")
      ->envname("SDNN_BATCH_TILE")
      ->capture_default_str();
  bench->add_option("--pipeline-stages", ben.engine.pipeline_stages,
                    "pipeline threads (0: the cell's worker count)")
      ->envname("SDNN_PIPELINE_STAGES")
      ->capture_default_str();
  bench->add_option("--machine", ben.machine, "processor description for the report")
      ->envname("SDNN_MACHINE");
  bench->add_option("--out", ben.out, "report file (default: stdout)");
  bench->add_option("--format", ben.format, "tsv or json (default: by extension)");
  bench->add_flag("--manifest-timestamps", ben.timestamps, "record wall-clock times")
      ->envname("SDNN_MANIFEST_TIMESTAMPS");

  std::vector<const char*> argv{"sdnn"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (preprocess->parsed()) return cmd_preprocess(pre, out);
    if (convert->parsed()) return cmd_convert(conv, out);
    if (truth->parsed()) return cmd_truth(tr, out);
    if (infer_cmd->parsed()) return cmd_infer(inf, out);
    if (verify_cmd->parsed()) return cmd_verify(ver, out);
    if (bench->parsed()) return cmd_bench(ben, out);
  } catch (const Failure& e) {
    err << "sdnn: " << e.what() << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "sdnn: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "sdnn: " << e.what() << "\n";
    return kIoOrFormat;
  }
  return kUsage;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sdnn::cli
