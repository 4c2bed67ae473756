#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gdht/experiments.hpp"
#include "gdht/matrix.hpp"
#include "gdht/solver.hpp"

namespace gdht {

inline constexpr std::string_view kTraceHeader =
    "iter,loss,err_w,err_omega,opt_err_w,opt_err_omega,eta2_used";
inline constexpr std::string_view kComparisonHeader =
    "method,est_err_mean,est_err_sd,pred_err_mean,pred_err_sd,wall_seconds";
inline constexpr std::string_view kReplicationHeader =
    "replication,seed,n_train,s1_star,s2_star,init_err_w,init_err_omega,final_err_w,"
    "final_err_omega,init_pred_err,final_pred_err,init_seconds,fit_seconds,backtracks";

/// "%.17g"; finite values read back bit-exactly.
std::string format_real(double x);

/// Headerless, comma-separated, one matrix row per line.
std::string format_matrix_csv(const DenseMatrix& m);
void write_matrix_csv(const DenseMatrix& m, const std::filesystem::path& path);

/// Throws RaggedRows (with the offending row number, 1-based) on unequal row
/// lengths or an empty file, ParseError on a bad cell, IoError if unreadable.
DenseMatrix parse_matrix_csv(std::string_view text);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);

/// Trace schema; err_* cells stay empty without ground truth and eta2_used is empty at t = 0.
std::string format_trace_csv(const SolverTrace& trace);
std::string format_trace_csv(const std::vector<TraceRecord>& records);

std::string format_comparison_csv(const std::vector<ComparisonRow>& rows);
std::string format_replications_csv(const std::vector<ReplicationOutcome>& reps);
/// Reads back the per-replication table (trace fields are left empty).
std::vector<ReplicationOutcome> parse_replications_csv(std::string_view text);

/// Writes `text` verbatim (binary mode), creating parent directories. IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gdht
