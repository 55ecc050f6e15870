#include "inflate/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "inflate/rng.hpp"

namespace infl {

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("matrix market parse error at line " +
                           std::to_string(line_no) + ": " + what);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

SparseSymMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) parse_fail(1, "empty stream");
  ++line_no;
  std::istringstream hdr(line);
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
    parse_fail(line_no, "missing %%MatrixMarket matrix banner");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate")
    throw std::runtime_error("unsupported matrix market format: " + format);
  if (field != "real" && field != "integer")
    throw std::runtime_error("unsupported matrix market field: " + field);
  if (symmetry != "symmetric" && symmetry != "general")
    throw std::runtime_error("unsupported matrix market symmetry: " + symmetry);
  const bool mirror = symmetry == "symmetric";

  // Skip comments and blank lines up to the size line.
  std::size_t rows = 0, cols = 0, declared = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> declared)) parse_fail(line_no, "bad size line");
    break;
  }
  if (rows == 0 || rows != cols)
    parse_fail(line_no, "matrix must be square and nonempty");

  std::vector<Triplet> entries;
  entries.reserve(declared * (mirror ? 2 : 1));
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream es(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(es >> i >> j >> v)) parse_fail(line_no, "bad entry line");
    if (i < 1 || j < 1 || i > static_cast<long long>(rows) ||
        j > static_cast<long long>(cols))
      parse_fail(line_no, "index out of bounds");
    if (!std::isfinite(v)) parse_fail(line_no, "non-finite value");
    std::size_t r = static_cast<std::size_t>(i - 1);
    std::size_t c = static_cast<std::size_t>(j - 1);
    entries.push_back({r, c, v});
    if (mirror && r != c) entries.push_back({c, r, v});
    ++seen;
  }
  if (seen != declared)
    parse_fail(line_no, "expected " + std::to_string(declared) + " entries, got " +
                            std::to_string(seen));
  // Content-level failures (asymmetry, non-finite values) stay input
  // errors, distinct from the parse errors above.
  return SparseSymMatrix::from_triplets(rows, std::move(entries));
}

SparseSymMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open matrix file: " + path);
  return read_matrix_market(f);
}

void write_matrix_market(const SparseSymMatrix& A, std::ostream& out) {
  const auto& off = A.row_offsets();
  const auto& col = A.col_indices();
  const auto& val = A.values();
  std::size_t stored = 0;
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k)
      if (col[k] <= i) ++stored;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << A.dim() << " " << A.dim() << " " << stored << "\n";
  char buf[64];
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k)
      if (col[k] <= i) {
        std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1, col[k] + 1, val[k]);
        out << buf;
      }
}

void write_matrix_market_file(const SparseSymMatrix& A, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  write_matrix_market(A, f);
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.empty()) throw std::invalid_argument("empty generator spec");

  auto need = [&](std::size_t count) {
    if (parts.size() != count)
      throw std::invalid_argument("generator spec '" + text + "': expected " +
                                  std::to_string(count - 1) + " parameters");
  };
  auto num = [&](std::size_t idx) {
    try {
      return std::stod(parts.at(idx));
    } catch (...) {
      throw std::invalid_argument("generator spec: bad number '" + parts.at(idx) + "'");
    }
  };

  GeneratorSpec s;
  const std::string& kind = parts[0];
  if (kind == "laplacian1d") {
    need(2);
    s.kind = GeneratorKind::laplacian1d;
    s.n = static_cast<std::size_t>(num(1));
  } else if (kind == "random_sparse") {
    need(4);
    s.kind = GeneratorKind::random_sparse;
    s.n = static_cast<std::size_t>(num(1));
    s.density = num(2);
    s.seed = static_cast<std::uint64_t>(num(3));
  } else if (kind == "diag_dominant") {
    need(5);
    s.kind = GeneratorKind::diag_dominant;
    s.n = static_cast<std::size_t>(num(1));
    s.spread = num(2);
    s.coupling = num(3);
    s.seed = static_cast<std::uint64_t>(num(4));
  } else if (kind == "near_degenerate") {
    need(4);
    s.kind = GeneratorKind::near_degenerate;
    s.n = static_cast<std::size_t>(num(1));
    s.gap = num(2);
    s.seed = static_cast<std::uint64_t>(num(3));
  } else {
    throw std::invalid_argument("unknown generator kind: " + kind);
  }
  if (s.n < 2) throw std::invalid_argument("generator spec: n must be >= 2");
  if (s.kind == GeneratorKind::random_sparse &&
      !(s.density > 0.0 && s.density <= 1.0))
    throw std::invalid_argument("generator spec: density must be in (0, 1]");
  if (s.kind == GeneratorKind::near_degenerate && !(s.gap > 0.0))
    throw std::invalid_argument("generator spec: gap must be > 0");
  return s;
}

SparseSymMatrix generate(const GeneratorSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 2) throw std::invalid_argument("generator: n must be >= 2");
  std::vector<Triplet> t;
  switch (spec.kind) {
    case GeneratorKind::laplacian1d: {
      for (std::size_t i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i + 1 < n) {
          t.push_back({i, i + 1, -1.0});
          t.push_back({i + 1, i, -1.0});
        }
      }
      break;
    }
    case GeneratorKind::random_sparse: {
      if (!(spec.density > 0.0 && spec.density <= 1.0))
        throw std::invalid_argument("generator: density must be in (0, 1]");
      Rng rng(spec.seed);
      for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, rng.uniform(-1.0, 1.0)});
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng.uniform01() < spec.density) {
            double v = rng.uniform(-1.0, 1.0);
            t.push_back({i, j, v});
            t.push_back({j, i, v});
          }
      break;
    }
    case GeneratorKind::diag_dominant: {
      if (spec.spread <= 0.0)
        throw std::invalid_argument("generator: spread must be > 0");
      Rng rng(spec.seed);
      double density = std::min(1.0, 10.0 / static_cast<double>(n));
      for (std::size_t i = 0; i < n; ++i)
        t.push_back({i, i, rng.uniform(0.0, spec.spread)});
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng.uniform01() < density) {
            double v = spec.coupling * rng.uniform(-1.0, 1.0);
            t.push_back({i, j, v});
            t.push_back({j, i, v});
          }
      break;
    }
    case GeneratorKind::near_degenerate: {
      if (spec.gap <= 0.0) throw std::invalid_argument("generator: gap must be > 0");
      Rng rng(spec.seed);
      for (std::size_t i = 0; i < n; ++i) {
        double d = i == 0 ? 0.0 : (i == 1 ? spec.gap : static_cast<double>(i - 1));
        t.push_back({i, i, d});
      }
      double density = std::min(1.0, 4.0 / static_cast<double>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng.uniform01() < density) {
            double v = 0.1 * spec.gap * rng.uniform(-1.0, 1.0);
            t.push_back({i, j, v});
            t.push_back({j, i, v});
          }
      break;
    }
  }
  return SparseSymMatrix::from_triplets(n, std::move(t));
}

void write_trace(const Trace& trace, std::ostream& out) {
  out << "step,m,lambda,mu,dt,lambda_tilde\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", r.step, r.m,
                  r.lambda, r.mu, r.dt, r.lambda_tilde);
    out << buf;
  }
}

void write_trace_file(const Trace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  write_trace(trace, f);
}

Trace read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "step,m,lambda,mu,dt,lambda_tilde")
    throw std::runtime_error("trace: malformed header");
  Trace out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceRecord r;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    if (!(ls >> r.step >> r.m >> r.lambda >> r.mu >> r.dt >> r.lambda_tilde))
      throw std::runtime_error("trace: bad record at line " + std::to_string(line_no));
    out.push_back(r);
  }
  return out;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open trace file: " + path);
  return read_trace(f);
}

}  // namespace infl
