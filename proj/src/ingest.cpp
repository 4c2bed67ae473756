#include "gdht/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
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

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

PricePanel parse_price_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  // Trailing blank lines are not data rows.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorKind::TooFewRows, "price file is empty");

  PricePanel panel{{}, DenseMatrix(1, 1)};
  for (auto name : split_commas(lines.front())) {
    if (name.empty()) throw Error(ErrorKind::ParseError, at_line(1) + ": empty ticker name");
    panel.tickers.emplace_back(name);
  }
  const std::size_t m = panel.tickers.size();
  const std::size_t days = lines.size() - 1;
  if (days < 2) {
    throw Error(ErrorKind::TooFewRows,
                "need at least 2 price rows, found " + std::to_string(days));
  }

  std::vector<double> values;
  values.reserve(days * m);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t line_no = r + 1;
    const auto cells = split_commas(lines[r]);
    if (cells.size() != m) {
      throw Error(ErrorKind::ParseError, at_line(line_no) + ": expected " + std::to_string(m) +
                                             " cells, found " + std::to_string(cells.size()));
    }
    for (auto cell : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw Error(ErrorKind::ParseError,
                    at_line(line_no) + ": cannot parse '" + std::string(cell) + "'");
      }
      if (!(v > 0.0)) {
        throw Error(ErrorKind::NonPositivePrice,
                    at_line(line_no) + ": price " + std::string(cell) + " is not positive");
      }
      values.push_back(v);
    }
  }
  panel.prices = DenseMatrix(days, m, std::move(values));
  return panel;
}

PricePanel load_price_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_price_csv(buf.str());
}

DenseMatrix log_ratio_transform(const PricePanel& panel) {
  const DenseMatrix& p = panel.prices;
  if (p.rows() < 2) throw Error(ErrorKind::TooFewRows, "need at least 2 price rows");
  DenseMatrix out(p.rows() - 1, p.cols());
  for (std::size_t t = 0; t + 1 < p.rows(); ++t)
    for (std::size_t j = 0; j < p.cols(); ++j)
      out(t, j) = std::log(p(t + 1, j)) - std::log(p(t, j));
  return out;
}

Dataset build_ar1_dataset(const DenseMatrix& returns) {
  if (returns.rows() < 2) {
    throw Error(ErrorKind::TooFewRows, "AR(1) design needs at least 2 return rows");
  }
  const std::size_t n = returns.rows() - 1;
  return Dataset(row_block(returns, 0, n), row_block(returns, 1, n));
}

DatasetSplit temporal_split(const Dataset& data, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::RangeError, "train_fraction must lie in (0, 1)");
  }
  const std::size_t n = data.n();
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) {
    throw Error(ErrorKind::TooFewRows, "temporal split of " + std::to_string(n) +
                                           " rows leaves an empty side");
  }
  std::vector<std::size_t> train(n_train);
  std::vector<std::size_t> test(n - n_train);
  std::iota(train.begin(), train.end(), std::size_t{0});
  std::iota(test.begin(), test.end(), n_train);
  return DatasetSplit{Dataset(row_block(data.x(), 0, n_train), row_block(data.y(), 0, n_train)),
                      Dataset(row_block(data.x(), n_train, n - n_train),
                              row_block(data.y(), n_train, n - n_train)),
                      std::move(train), std::move(test)};
}

}  // namespace gdht
