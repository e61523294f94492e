#include "sdnn/challenge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"
#include "sdnn/errors.hpp"

namespace sdnn {

namespace {

void check_limits(std::size_t rows, std::size_t cols, const OracleLimits& limits) {
  if (cols > limits.max_neurons) {
    fail(ErrorKind::capacity, "oracle: " + std::to_string(cols) + " neurons exceeds the limit of " +
                                  std::to_string(limits.max_neurons));
  }
  if (cols != 0 && rows > limits.max_elements / cols) {
    fail(ErrorKind::capacity, "oracle: " + std::to_string(rows) + "x" + std::to_string(cols) +
                                  " dense block exceeds " + std::to_string(limits.max_elements) +
                                  " elements");
  }
}

DenseMatrix dense_weights(const SparseMatrix& w) {
  DenseMatrix d(w.n_rows(), w.n_cols());
  for (std::size_t r = 0; r < w.n_rows(); ++r) {
    const auto cols = w.row_cols(r);
    const auto vals = w.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) d(r, cols[k]) = vals[k];
  }
  return d;
}

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

DenseMatrix densify(const SparseMatrix& m, const OracleLimits& limits) {
  if (m.n_cols() != 0 && m.n_rows() > limits.max_elements / m.n_cols()) {
    fail(ErrorKind::capacity, "densify: " + std::to_string(m.n_rows()) + "x" +
                                  std::to_string(m.n_cols()) + " is too large");
  }
  DenseMatrix d(m.n_rows(), m.n_cols());
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    const auto cols = m.row_cols(r);
    const auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) d(r, cols[k]) = vals[k];
  }
  return d;
}

SparseMatrix sparsify(const DenseMatrix& m) {
  CsrParts p;
  p.n_rows = m.rows;
  p.n_cols = m.cols;
  p.row_offsets.push_back(0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (m(r, c) != 0.0) {
        p.col_indices.push_back(static_cast<ColIndex>(c));
        p.values.push_back(m(r, c));
      }
    }
    p.row_offsets.push_back(p.col_indices.size());
  }
  return SparseMatrix::adopt(std::move(p));
}

CategorySet categorize(const FeatureBatch& y) {
  std::vector<std::uint64_t> rows;
  const auto& m = y.matrix();
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    if (m.row_nnz(r) > 0) rows.push_back(r + 1);
  }
  return CategorySet(std::move(rows));
}

CategorySet categorize(const DenseMatrix& y) {
  std::vector<std::uint64_t> rows;
  for (std::size_t r = 0; r < y.rows; ++r) {
    for (std::size_t c = 0; c < y.cols; ++c) {
      if (y(r, c) > 0.0) {
        rows.push_back(r + 1);
        break;
      }
    }
  }
  return CategorySet(std::move(rows));
}

DenseMatrix oracle_infer(const NetworkModel& model, const DenseMatrix& y0, double ymax,
                         const OracleLimits& limits) {
  const std::size_t n = model.neurons();
  if (y0.cols != n) {
    fail(ErrorKind::shape, "oracle: input has " + std::to_string(y0.cols) +
                               " columns, network has " + std::to_string(n));
  }
  check_limits(y0.rows, n, limits);

  DenseMatrix y = y0;
  DenseMatrix z(y0.rows, n);
  for (const auto& layer : model.layers()) {
    const DenseMatrix w = dense_weights(layer.weights);
    std::fill(z.data.begin(), z.data.end(), 0.0);
    for (std::size_t i = 0; i < y.rows; ++i) {
      double* zi = &z(i, 0);
      for (std::size_t k = 0; k < n; ++k) {
        const double a = y(i, k);
        const double* wk = w.data.data() + k * n;
        for (std::size_t j = 0; j < n; ++j) zi[j] += a * wk[j];
      }
    }
    // Y = Z + logical(Z) .* b; Y(Y < 0) = 0; Y(Y > ymax) = ymax
    for (std::size_t e = 0; e < z.data.size(); ++e) {
      double v = z.data[e];
      if (v != 0.0) v += layer.bias;
      if (v < 0.0) v = 0.0;
      if (v > ymax) v = ymax;
      y.data[e] = v;
    }
  }
  return y;
}

CategorySet oracle_categories(const NetworkModel& model, const FeatureBatch& y0, double ymax,
                              const OracleLimits& limits) {
  const std::size_t n = model.neurons();
  if (y0.neurons() != n) {
    fail(ErrorKind::shape, "oracle: input has " + std::to_string(y0.neurons()) +
                               " columns, network has " + std::to_string(n));
  }
  check_limits(1, n, limits);
  const std::size_t chunk = std::max<std::size_t>(1, limits.max_elements / std::max<std::size_t>(n, 1));

  std::vector<std::uint64_t> rows;
  const auto& m = y0.matrix();
  for (std::size_t first = 0; first < m.n_rows(); first += chunk) {
    const std::size_t last = std::min(first + chunk, m.n_rows());
    DenseMatrix block(last - first, n);
    for (std::size_t r = first; r < last; ++r) {
      const auto cols = m.row_cols(r);
      const auto vals = m.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) block(r - first, cols[k]) = vals[k];
    }
    const auto found = categorize(oracle_infer(model, block, ymax, limits));
    for (auto r : found.rows()) rows.push_back(first + r);
  }
  return CategorySet(std::move(rows));
}

VerifyReport verify(const CategorySet& computed, const CategorySet& truth) {
  VerifyReport report;
  report.false_positives = computed.minus(truth);
  report.false_negatives = truth.minus(computed);
  report.match = report.false_positives.empty() && report.false_negatives.empty();
  return report;
}

double rate(std::uint64_t inputs, std::uint64_t connections, double seconds) {
  if (!(seconds > 0.0) || !std::isfinite(seconds)) {
    fail(ErrorKind::parameter, "rate: elapsed seconds must be positive");
  }
  return static_cast<double>(inputs) * static_cast<double>(connections) / seconds;
}

void emit_report(std::span<const BenchReport> reports, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::json) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      rows.push_back({{"neurons", r.neurons},
                      {"layers", r.layers},
                      {"connections", r.connections},
                      {"inputs", r.inputs},
                      {"seconds", r.seconds},
                      {"rate", r.rate},
                      {"mode", to_string(r.mode)},
                      {"workers", r.workers},
                      {"machine", r.machine},
                      {"status", r.status}});
    }
    out << rows.dump(2) << '\n';
  } else {
    out << "neurons\tlayers\tconnections\tinputs\tseconds\trate\tmode\tworkers\tmachine\tstatus\n";
    auto clean = [](std::string s) {
      std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n'; }, ' ');
      return s;
    };
    for (const auto& r : reports) {
      out << r.neurons << '\t' << r.layers << '\t' << r.connections << '\t' << r.inputs << '\t'
          << shortest(r.seconds) << '\t' << shortest(r.rate) << '\t' << to_string(r.mode) << '\t'
          << r.workers << '\t' << clean(r.machine) << '\t' << clean(r.status) << '\n';
    }
  }
  if (!out) fail(ErrorKind::io, "failed writing report");
}

}  // namespace sdnn
