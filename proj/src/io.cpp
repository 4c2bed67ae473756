#include "gdht/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gdht/error.hpp"

namespace gdht {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> data_lines(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

double parse_cell(std::string_view cell, std::size_t row) {
  cell = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorKind::ParseError,
                "row " + std::to_string(row) + ": cannot parse '" + std::string(cell) + "'");
  }
  return v;
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

}  // namespace

std::string format_real(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_matrix_csv(const DenseMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      out += format_real(row[j]);
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path) {
  write_text_file(path, format_matrix_csv(m));
}

DenseMatrix parse_matrix_csv(std::string_view text) {
  const auto lines = data_lines(text);
  if (lines.empty()) throw Error(ErrorKind::RaggedRows, "row 1: matrix file is empty");
  std::vector<double> values;
  std::size_t cols = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (trim(lines[r]).empty() || (r > 0 && cells.size() != cols)) {
      throw Error(ErrorKind::RaggedRows, "row " + std::to_string(r + 1) + ": expected " +
                                             std::to_string(cols) + " values, found " +
                                             std::to_string(trim(lines[r]).empty() ? 0 : cells.size()));
    }
    if (r == 0) cols = cells.size();
    for (auto cell : cells) values.push_back(parse_cell(cell, r + 1));
  }
  return DenseMatrix(lines.size(), cols, std::move(values));
}

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  try {
    return parse_matrix_csv(read_text_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string format_trace_csv(const std::vector<TraceRecord>& records) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.t) + ',' + format_real(r.loss) + ',' + opt_cell(r.err_w) + ',' +
           opt_cell(r.err_omega) + ',' + format_real(r.opt_err_w) + ',' +
           format_real(r.opt_err_omega) + ',' + opt_cell(r.eta2_used) + '\n';
  }
  return out;
}

std::string format_trace_csv(const SolverTrace& trace) { return format_trace_csv(trace.records); }

std::string format_comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out(kComparisonHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.method + ',' + format_real(r.est_err_mean) + ',' + format_real(r.est_err_sd) + ',' +
           format_real(r.pred_err_mean) + ',' + format_real(r.pred_err_sd) + ',' +
           format_real(r.wall_seconds) + '\n';
  }
  return out;
}

std::string format_replications_csv(const std::vector<ReplicationOutcome>& reps) {
  std::string out(kReplicationHeader);
  out += '\n';
  for (const auto& r : reps) {
    out += std::to_string(r.replication) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.n_train) + ',' + std::to_string(r.s1_star) + ',' +
           std::to_string(r.s2_star) + ',' + format_real(r.init_error.err_w) + ',' +
           format_real(r.init_error.err_omega) + ',' + format_real(r.final_error.err_w) + ',' +
           format_real(r.final_error.err_omega) + ',' + format_real(r.init_pred_error) + ',' +
           format_real(r.final_pred_error) + ',' + format_real(r.init_seconds) + ',' +
           format_real(r.fit_seconds) + ',' + std::to_string(r.backtracks) + '\n';
  }
  return out;
}

std::vector<ReplicationOutcome> parse_replications_csv(std::string_view text) {
  const auto lines = data_lines(text);
  if (lines.empty() || trim(lines.front()) != kReplicationHeader) {
    throw Error(ErrorKind::ParseError, "row 1: replication table header mismatch");
  }
  auto count = [](std::string_view cell, std::size_t row) {
    std::uint64_t v = 0;
    cell = trim(cell);
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw Error(ErrorKind::ParseError,
                  "row " + std::to_string(row) + ": cannot parse '" + std::string(cell) + "'");
    }
    return v;
  };
  std::vector<ReplicationOutcome> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto c = split(lines[r], ',');
    if (c.size() != 14) {
      throw Error(ErrorKind::RaggedRows, "row " + std::to_string(r + 1) + ": expected 14 cells");
    }
    ReplicationOutcome o;
    o.replication = count(c[0], r + 1);
    o.seed = count(c[1], r + 1);
    o.n_train = count(c[2], r + 1);
    o.s1_star = count(c[3], r + 1);
    o.s2_star = count(c[4], r + 1);
    o.init_error = {parse_cell(c[5], r + 1), parse_cell(c[6], r + 1)};
    o.final_error = {parse_cell(c[7], r + 1), parse_cell(c[8], r + 1)};
    o.init_pred_error = parse_cell(c[9], r + 1);
    o.final_pred_error = parse_cell(c[10], r + 1);
    o.init_seconds = parse_cell(c[11], r + 1);
    o.fit_seconds = parse_cell(c[12], r + 1);
    o.backtracks = count(c[13], r + 1);
    out.push_back(std::move(o));
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gdht
