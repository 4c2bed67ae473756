#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gdht/matrix.hpp"
#include "gdht/model.hpp"

namespace gdht {

/// Daily closing prices, oldest row first, one column per ticker. All entries > 0.
struct PricePanel {
  std::vector<std::string> tickers;
  DenseMatrix prices;
};

/// Header of ticker names, then one comma-separated row of positive decimals per day.
/// Decimal parsing is locale-independent ('.' separator). Line numbers in
/// errors count the header as line 1.
PricePanel load_price_csv(const std::filesystem::path& path);
PricePanel parse_price_csv(std::string_view text);

/// Y(t, j) = log P(t+1, j) − log P(t, j)
DenseMatrix log_ratio_transform(const PricePanel& panel);

/// Lag-one design: X = returns rows 0..T−2, Y = rows 1..T−1.
Dataset build_ar1_dataset(const DenseMatrix& returns);

struct DatasetSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// First floor(n · train_fraction) rows train, the rest test; both non-empty.
DatasetSplit temporal_split(const Dataset& data, double train_fraction);

}  // namespace gdht
