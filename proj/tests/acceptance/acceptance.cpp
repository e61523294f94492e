// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance <path-to-sdnn-binary> [criterion numbers...]
//
// The full training images are read from SDNN_MNIST_IDX when set, otherwise
// from the bundled data directory.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sdnn/sdnn.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace sdnn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

fs::path g_cli;
fs::path g_work;

std::size_t threads() { return std::max(1u, std::thread::hardware_concurrency()); }

fs::path mnist_train() {
  if (const char* env = std::getenv("SDNN_MNIST_IDX"); env && *env) return env;
  return fs::path(SDNN_DATA_DIR) / "train-images-idx3-ubyte.gz";
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

/// Runs the sdnn binary; output goes to the log. Returns the exit status.
int sdnn(const std::string& args, const fs::path& log) {
  const std::string cmd = quote(g_cli) + " " + args + " >>" + quote(log) + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) files[e.path().filename().string()] = read_file(e.path());
  }
  return files;
}

// Models shared between criteria 1, 2 and 5.
std::map<std::pair<std::size_t, std::size_t>, NetworkModel> g_models;

const NetworkModel& challenge_model(std::size_t n, std::size_t l, double* gen_seconds = nullptr) {
  auto key = std::make_pair(n, l);
  if (auto it = g_models.find(key); it != g_models.end()) return it->second;
  const auto start = Clock::now();
  auto model = generate_network(challenge_config(n, l, 20190000 + n + l), threads());
  if (gen_seconds) *gen_seconds = seconds_since(start);
  return g_models.emplace(key, std::move(model)).first->second;
}

const ImageSet& train_images() {
  static const ImageSet images = read_idx_file(mnist_train());
  return images;
}

// ------------------------------------------------------------------ 1

void connection_counts(Outcome& o) {
  const struct {
    std::size_t n, l;
    std::uint64_t expected;
  } rows[] = {{1024, 120, 3932160}, {1024, 480, 15728640}, {4096, 120, 15728640}};
  for (const auto& r : rows) {
    double secs = 0.0;
    const auto& model = challenge_model(r.n, r.l, &secs);
    std::uint64_t nnz = 0;
    for (const auto& layer : model.layers()) nnz += layer.weights.nnz();
    o.detail << " " << r.n << "x" << r.l << "=" << nnz << " (" << secs << " s)";
    o.require(nnz == r.expected, std::to_string(r.n) + "x" + std::to_string(r.l) + " count");
    o.require(count_connections(model) == r.expected, "count_connections");
    o.require(secs < 120.0, "generation time");
  }
  if (g_models.count({1024, 480})) g_models.erase({1024, 480});
}

// ------------------------------------------------------------------ 2

void density_and_bias(Outcome& o) {
  const struct {
    std::size_t n;
    double density;  // exact 32/N
    double printed_density;
    double bias;
  } rows[] = {{1024, 0.03125, 0.03, -0.30}, {4096, 0.0078125, 0.008, -0.35}};
  for (const auto& r : rows) {
    const auto& model = challenge_model(r.n, 120);
    bool all_exact = true;
    for (const auto& layer : model.layers()) {
      const auto& w = layer.weights;
      const double d = static_cast<double>(w.nnz()) / (static_cast<double>(r.n) * r.n);
      all_exact = all_exact && d == r.density && d == 32.0 / static_cast<double>(r.n);
      all_exact = all_exact && layer.bias == r.bias;
      std::vector<std::size_t> col_degree(r.n, 0);
      for (std::size_t row = 0; row < r.n; ++row) {
        all_exact = all_exact && w.row_nnz(row) == 32;
        for (auto c : w.row_cols(row)) ++col_degree[c];
      }
      all_exact = all_exact && std::all_of(col_degree.begin(), col_degree.end(),
                                           [](std::size_t c) { return c == 32; });
      all_exact = all_exact && std::all_of(w.values().begin(), w.values().end(),
                                           [](double v) { return v == 0.0625; });
    }
    o.detail << " N=" << r.n << ": density " << r.density << " (printed " << r.printed_density
             << "), bias " << r.bias << ";";
    o.require(all_exact, "N=" + std::to_string(r.n) + " density/bias/degree");
    o.require(std::round(r.density * (r.n == 1024 ? 100 : 1000)) / (r.n == 1024 ? 100 : 1000) ==
                  r.printed_density,
              "agrees with the printed rounding");
  }
}

// ------------------------------------------------------------------ 3

void all_radix_lists(std::vector<std::vector<std::uint32_t>>& out, std::vector<std::uint32_t>& cur,
                     std::size_t product) {
  if (!cur.empty()) out.push_back(cur);
  for (std::uint32_t r = 2; product * r <= 64; ++r) {
    cur.push_back(r);
    all_radix_lists(out, cur, product * r);
    cur.pop_back();
  }
}

void path_constancy(Outcome& o) {
  std::vector<std::vector<std::uint32_t>> specs;
  std::vector<std::uint32_t> cur;
  all_radix_lists(specs, cur, 1);

  std::size_t checks = 0;
  std::size_t failures = 0;
  auto check = [&](std::span<const SparseMatrix> stages, std::optional<std::int64_t> value) {
    ++checks;
    const auto p = testing::path_counts(stages);
    bool ok = testing::is_constant(p) && p[0][0] > 0;
    if (value) ok = ok && p[0][0] == *value;
    if (!ok) ++failures;
  };

  for (const auto& radices : specs) {
    const auto base = mixed_radix_butterfly(RadixSpec{radices});
    for (std::uint32_t k = 1; k <= 4; ++k) {
      const auto expanded = kronecker_expand(base, k);
      // one path per pair in the base; expansion multiplies by k at every
      // stage boundary, giving k^(B-1)
      check(expanded, static_cast<std::int64_t>(std::pow(k, radices.size() - 1)));
      for (std::uint64_t seed : {11ULL, 2024ULL, 987654321ULL}) {
        check(deepen(expanded, 3 * base.size(), seed), std::nullopt);
      }
    }
  }
  o.detail << " " << specs.size() << " radix lists with N<=64 (incl. [2,2], [2,2,2], [3,2], "
           << "[2,3,2]), k=1..4, 3 seeds: " << checks - failures << "/" << checks
           << " products constant";
  o.require(failures == 0, std::to_string(failures) + " non-constant products");
  auto has = [&](std::vector<std::uint32_t> s) {
    return std::find(specs.begin(), specs.end(), s) != specs.end();
  };
  o.require(has({2, 2}) && has({2, 2, 2}) && has({3, 2}) && has({2, 3, 2}), "named specs covered");
}

// ------------------------------------------------------------------ 4

void oracle_equivalence(Outcome& o) {
  std::mt19937_64 rng(0x5eed0004);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  constexpr int kInstances = 240;
  std::size_t runs = 0;
  std::size_t mismatches = 0;
  std::size_t clamped = 0;
  std::size_t nonempty = 0;
  for (int i = 0; i < kInstances; ++i) {
    const std::size_t n = pick(1, 64);
    const std::size_t l = pick(1, 8);
    const std::size_t batch = pick(1, 100);
    const double scale = std::array{0.25, 1.0, 8.0}[pick(0, 2)];
    std::vector<LayerWeights> layers;
    for (std::size_t t = 0; t < l; ++t) {
      layers.push_back({testing::random_sparse(n, n, uniform(0.02, 0.6), -1.0 * scale, 2.0 * scale,
                                               rng),
                        uniform(-1.0, 0.5)});
    }
    const NetworkModel model(n, std::move(layers));
    const FeatureBatch y0(pick(0, 1) ? testing::random_sparse(batch, n, uniform(0.05, 0.7), 1.0,
                                                              1.0, rng)
                                     : testing::random_sparse(batch, n, uniform(0.05, 0.7), 0.1,
                                                              4.0, rng));
    const auto expected = sparsify(oracle_infer(model, densify(y0.matrix())));
    if (expected.nnz() > 0) ++nonempty;
    if (std::find(expected.values().begin(), expected.values().end(), 32.0) !=
        expected.values().end()) {
      ++clamped;
    }

    for (auto mode : {ExecutionMode::serial, ExecutionMode::data_parallel, ExecutionMode::pipeline}) {
      for (std::size_t workers : {1, 2, 8}) {
        InferenceConfig cfg;
        cfg.mode = mode;
        cfg.workers = workers;
        cfg.batch_tile = std::array<std::size_t, 4>{1, 3, 16, 512}[pick(0, 3)];
        ++runs;
        if (!(infer(model, y0, cfg).matrix() == expected)) ++mismatches;
      }
    }
  }
  o.detail << " " << kInstances << " instances x 3 modes x workers {1,2,8} = " << runs
           << " runs, " << mismatches << " mismatches (" << nonempty << " with surviving output, "
           << clamped << " hitting the ceiling)";
  o.require(mismatches == 0, "bit-exact equality");
  o.require(nonempty > kInstances / 4, "instances exercise non-trivial output");
}

// ------------------------------------------------------------------ 5

SparseMatrix from_rows(std::vector<std::vector<double>> rows) {
  std::vector<Triple> t;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      if (rows[r][c] != 0.0) t.push_back({r + 1, c + 1, rows[r][c]});
  return build_from_triples(t, rows.size(), rows.empty() ? 0 : rows[0].size());
}

void kernel_semantics(Outcome& o) {
  const auto& model = challenge_model(1024, 120);
  const auto mnist = resize_threshold_flatten(take_images(train_images(), 500), 32);

  // (a) every post-layer value in (0, 32], on the challenge model and on a
  // large-weight network that saturates.
  bool in_range = true;
  std::size_t at_ceiling = 0;
  auto layerwise = [&](const NetworkModel& m, const FeatureBatch& y0) {
    SparseMatrix y = y0.matrix();
    for (const auto& layer : m.layers()) {
      y = apply_bias_relu_clamp(spmm(y, layer.weights), layer.bias, 32.0);
      for (double v : y.values()) {
        in_range = in_range && v > 0.0 && v <= 32.0;
        at_ceiling += v == 32.0;
      }
    }
    return y;
  };
  const auto challenge_out = layerwise(model, mnist);
  o.require(infer(model, mnist, {}).matrix() == challenge_out, "(a) fused equals layer-wise");
  std::mt19937_64 rng(5);
  std::vector<LayerWeights> heavy;
  for (int t = 0; t < 20; ++t) heavy.push_back({testing::random_sparse(64, 64, 0.2, 0.5, 20.0, rng), 0.1});
  layerwise(NetworkModel(64, std::move(heavy)), testing::random_binary_batch(100, 64, 0.3, rng));
  o.require(in_range, "(a) values in (0, 32]");
  o.require(at_ceiling > 0, "(a) ceiling reached");
  o.detail << " (a) all values in (0,32], " << at_ceiling << " at the ceiling;";

  // (b) zero input rows stay zero through 120 layers, in every mode, even
  // with a positive bias.
  std::vector<Triple> t;
  const auto& m = mnist.matrix();
  std::set<std::size_t> empty_rows;
  for (std::size_t r = 0; r < 200; ++r) {
    if (r % 3 == 1) {
      empty_rows.insert(r);
      continue;
    }
    const auto cols = m.row_cols(r);
    for (auto c : cols) t.push_back({r + 1, c + 1u, 1.0});
  }
  const FeatureBatch holes(build_from_triples(t, 200, 1024));
  std::vector<LayerWeights> positive;
  for (const auto& layer : model.layers()) positive.push_back({layer.weights, 0.5});
  const NetworkModel positive_model(1024, std::move(positive));
  bool zero_stays_zero = true;
  for (const NetworkModel* net : {&model, &positive_model}) {
    for (auto mode : {ExecutionMode::serial, ExecutionMode::data_parallel, ExecutionMode::pipeline}) {
      for (std::size_t workers : {1, 2, 8}) {
        InferenceConfig cfg;
        cfg.mode = mode;
        cfg.workers = workers;
        cfg.batch_tile = 16;
        const auto out = infer(*net, holes, cfg);
        for (auto r : empty_rows) zero_stays_zero = zero_stays_zero && out.matrix().row_nnz(r) == 0;
      }
    }
  }
  o.require(zero_stays_zero, "(b) zero rows stay zero");
  o.detail << " (b) " << empty_rows.size() << " zero rows stay zero through 120 layers;";

  // (c) 40 before bias clamps to 32.
  const bool clamp = apply_bias_relu_clamp(from_rows({{40.0}}), 0.0, 32.0).at(0, 0) == 32.0 &&
                     apply_bias_relu_clamp(from_rows({{40.0}}), -0.3, 32.0).at(0, 0) == 32.0 &&
                     infer(NetworkModel(1, {{from_rows({{40.0}}), 0.0}}),
                           FeatureBatch(from_rows({{1.0}})), {})
                             .matrix()
                             .at(0, 0) == 32.0;
  o.require(clamp, "(c) clamp");
  o.detail << " (c) 40 -> 32;";

  // (d) bias only where Z is stored.
  const auto z = apply_bias_relu_clamp(from_rows({{0.7, 0.0}}), 0.25, 32.0);
  const auto y = infer(NetworkModel(2, {{from_rows({{0.7, 0.0}, {0.0, 0.0}}), 0.25}}),
                       FeatureBatch(from_rows({{1.0, 0.0}})), {});
  const bool masked = z.nnz() == 1 && z.at(0, 0) == 0.7 + 0.25 && z.at(0, 1) == 0.0 &&
                      y.matrix() == z;
  o.require(masked, "(d) entry-masked bias");
  o.detail << " (d) {0.7, 0} + 0.25 -> {0.95, 0}";
}

// ------------------------------------------------------------------ 6

void rate_and_speed(Outcome& o) {
  const double r1 = rate(60000, 3932160, 626.0);
  const double r2 = rate(60000, 15728640, 2440.0);
  const double e1 = std::abs(r1 / 376e6 - 1.0);
  const double e2 = std::abs(r2 / 386e6 - 1.0);
  o.detail << " rate " << r1 << " vs 376e6 (" << e1 * 100 << "%), " << r2 << " vs 386e6 ("
           << e2 * 100 << "%);";
  o.require(e1 <= 0.005 && e2 <= 0.005, "rate within 0.5%");

  const auto& model = challenge_model(1024, 120);
  const auto& images = train_images();
  const auto all = resize_threshold_flatten(images, 32);
  InferenceConfig cfg;
  cfg.mode = threads() > 1 ? ExecutionMode::data_parallel : ExecutionMode::serial;
  cfg.workers = threads();
  const auto full = infer_timed(model, all, cfg);
  o.detail << " full run: " << all.images() << " images in " << full.seconds << " s ("
           << rate(all.images(), model.connections(), full.seconds) << " edges/s, "
           << full.categories.size() << " categories);";
  o.require(all.images() == 60000, "full MNIST (60000 images) run");

  const auto subset = resize_threshold_flatten(take_images(images, 1000), 32);
  const auto engine = infer_timed(model, subset, {});
  const auto start = Clock::now();
  const auto dense = oracle_infer(model, densify(subset.matrix()));
  const double oracle_seconds = seconds_since(start);
  const double speedup = oracle_seconds / engine.seconds;
  o.detail << " 1000 images: serial engine " << engine.seconds << " s, dense oracle "
           << oracle_seconds << " s, " << speedup << "x";
  o.require(speedup >= 10.0, "engine at least 10x faster than the oracle");
  o.require(sparsify(dense) == engine.output.matrix(), "engine equals oracle on the subset");
}

// ------------------------------------------------------------------ 7

void end_to_end(Outcome& o) {
  const auto dir = g_work / "e2e";
  fs::create_directories(dir);
  const auto log = dir / "log.txt";
  const auto start = Clock::now();
  const int gen = sdnn("generate --neurons 1024 --layers 120 --seed 7 --force --out " +
                           quote(dir / "model") + " --workers " + std::to_string(threads()),
                       log);
  const int pre = sdnn("preprocess --mnist " + quote(mnist_train()) +
                           " --side 32 --limit 1000 --out " + quote(dir / "input.tsv"),
                       log);
  const int tru = sdnn("truth --model " + quote(dir / "model") + " --input " +
                           quote(dir / "input.tsv") + " --out " + quote(dir / "truth.txt"),
                       log);
  const int inf = sdnn("infer --model " + quote(dir / "model") + " --input " +
                           quote(dir / "input.tsv") + " --categories " +
                           quote(dir / "categories.txt") + " --report " +
                           quote(dir / "report.tsv"),
                       log);
  const int ver = sdnn("verify " + quote(dir / "categories.txt") + " " + quote(dir / "truth.txt"),
                       log);
  const double total = seconds_since(start);
  const auto categories = load_truth(dir / "categories.txt");
  const auto truth = load_truth(dir / "truth.txt");
  o.detail << " generate/preprocess/truth/infer/verify exit " << gen << "/" << pre << "/" << tru
           << "/" << inf << "/" << ver << ", " << categories.size() << " of 1000 categorized, "
           << total << " s";
  o.require(gen == 0 && pre == 0 && tru == 0 && inf == 0, "pipeline steps succeed");
  o.require(ver == 0 && categories == truth, "verify exits 0 with an exact match");
  o.require(total < 600.0, "under 10 minutes");
}

// ------------------------------------------------------------------ 8

SparseMatrix load_matrix_from_tsv_text(const std::string& text, std::size_t rows, std::size_t cols) {
  std::istringstream in(text);
  return read_tsv(in, rows, cols);
}

template <class Fn>
double median_seconds(int reps, Fn&& fn) {
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    fn();
    t.push_back(seconds_since(start));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

void format_stability(Outcome& o) {
  const auto dir = g_work / "formats";
  fs::create_directories(dir);
  const auto log = dir / "log.txt";
  const auto input_tsv = dir / "input.tsv";
  o.require(sdnn("preprocess --mnist " + quote(mnist_train()) + " --side 32 --limit 1000 --out " +
                     quote(input_tsv),
                 log) == 0,
            "preprocess");
  o.require(sdnn("convert " + quote(input_tsv) + " " + quote(dir / "input.bin"), log) == 0 &&
                sdnn("convert " + quote(dir / "input.bin") + " " + quote(dir / "back.tsv"), log) == 0 &&
                sdnn("convert " + quote(dir / "back.tsv") + " " + quote(dir / "again.bin"), log) == 0,
            "convert");
  const bool tsv_identical = read_file(input_tsv) == read_file(dir / "back.tsv");
  const bool bin_identical = read_file(dir / "input.bin") == read_file(dir / "again.bin");
  const auto layer = challenge_model(1024, 120).layer(0).weights;
  const bool layer_identical = to_tsv(load_matrix_from_tsv_text(to_tsv(layer), 1024, 1024)) ==
                                   to_tsv(layer) &&
                               to_binary(from_binary(to_binary(layer))) == to_binary(layer);
  o.require(tsv_identical && bin_identical && layer_identical, "byte-identical round trips");

  const double tsv_s = median_seconds(9, [&] { (void)load_matrix(input_tsv); });
  const double bin_s = median_seconds(9, [&] { (void)load_matrix(dir / "input.bin"); });
  const double ratio = tsv_s / bin_s;
  o.detail << " round trips identical; read 1000-image input: TSV " << tsv_s * 1e3 << " ms, binary "
           << bin_s * 1e3 << " ms (" << ratio << "x);";
  o.require(ratio >= 5.0, "binary at least 5x faster");

  const auto bytes = read_file(dir / "input.bin");
  std::size_t rejected = 0;
  const std::size_t positions[] = {48, bytes.size() / 2, bytes.size() - 9};
  for (auto pos : positions) {
    auto bad = bytes;
    bad[pos] = static_cast<char>(bad[pos] ^ 0x01);
    try {
      (void)from_binary(bad);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::corruption &&
          std::string(e.what()).find("checksum") != std::string::npos) {
        ++rejected;
      }
    }
  }
  auto bad = bytes;
  bad[bytes.size() / 2] ^= 0x01;
  write_file(dir / "corrupt.bin", bad);
  const int cli_code = sdnn("convert " + quote(dir / "corrupt.bin") + " " + quote(dir / "x.tsv"), log);
  o.detail << " single-bit corruption rejected by checksum at " << rejected << "/3 positions, CLI exit "
           << cli_code;
  o.require(rejected == 3 && cli_code == 3, "corruption rejected");
}

// ------------------------------------------------------------------ 9

void determinism(Outcome& o) {
  const auto dir = g_work / "determinism";
  fs::create_directories(dir);
  const auto log = dir / "log.txt";
  const std::string gen = "generate --neurons 1024 --layers 120 --seed 99 --format both --force "
                          "--out " + quote(dir / "model") + " --workers " + std::to_string(threads());
  const std::string pre = "preprocess --mnist " + quote(mnist_train()) +
                          " --side 32 --limit 1000 --out " + quote(dir / "input.bin");
  const std::string inf = "infer --model " + quote(dir / "model") + " --input " +
                          quote(dir / "input.bin") + " --mode data_parallel --workers 2 --categories " +
                          quote(dir / "out" / "categories.txt");

  std::vector<std::map<std::string, std::string>> models, outputs;
  std::vector<std::string> inputs;
  for (int run = 0; run < 2; ++run) {
    o.require(sdnn(gen, log) == 0 && sdnn(pre, log) == 0 && sdnn(inf, log) == 0, "runs succeed");
    models.push_back(snapshot(dir / "model"));
    inputs.push_back(read_file(dir / "input.bin") + read_file(dir / "input.bin.manifest.json"));
    outputs.push_back(snapshot(dir / "out"));
  }
  o.detail << " two runs: " << models[0].size() << " model files + manifest, input, "
           << outputs[0].size() << " category/manifest files";
  o.require(models[0] == models[1], "model files and manifest identical");
  o.require(inputs[0] == inputs[1], "input identical");
  o.require(outputs[0] == outputs[1], "category file and manifest identical");
  o.require(models[0].count("manifest.json") && outputs[0].count("categories.txt.manifest.json"),
            "manifests present");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <sdnn-binary> [criteria...]\n";
    return 2;
  }
  g_cli = fs::absolute(argv[1]);
  g_work = fs::temp_directory_path() / "sdnn_acceptance";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"connection counts", connection_counts},
      {"density and bias", density_and_bias},
      {"path-count constancy", path_constancy},
      {"oracle equivalence", oracle_equivalence},
      {"kernel semantics", kernel_semantics},
      {"rate arithmetic and desk-scale speed", rate_and_speed},
      {"end-to-end through the CLI", end_to_end},
      {"format stability", format_stability},
      {"determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 2; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(number)) continue;
    Outcome o;
    const auto start = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << " (" << criteria[i].first
              << ", " << std::lround(seconds_since(start)) << " s):" << o.detail.str() << std::endl;
    failed += !o.pass;
  }
  fs::remove_all(g_work);
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
