#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttlr/tensor3.hpp"

namespace ttlr {

/// TT3D: magic "TT3D", then I1, I2, I3 as u32 little-endian, then
/// I1*I2*I3 binary64 little-endian values, mode-1 index fastest.
void write_tt3d(const std::string& path, const Tensor3& x);
Tensor3 read_tt3d(const std::string& path);

/// 8-bit binary netpbm: PGM (P5) maps to I3 = 1, PPM (P6) to I3 = 3.
/// Pixel values become doubles in [0, 255]; writing clamps and rounds.
void write_image(const std::string& path, const Tensor3& x);
Tensor3 read_image(const std::string& path);

/// One benchmark run; round-trips losslessly through the CSV schema.
struct RunRecord {
  std::string algorithm;
  int n = 0;
  int L = 0;
  int K = 0;
  int H = 0;
  int rank = 0;
  double eps = 0.0;
  int block = 0;
  int passes = 0;  // requested q
  std::uint64_t seed = 0;
  double time_s = 0.0;
  double rel_err = 0.0;
  int est_rank = 0;
  long pass_count = 0;  // observed data passes

  bool operator==(const RunRecord&) const = default;
};

std::string csv_header();
std::string to_csv(const RunRecord& r);
RunRecord from_csv(const std::string& line);

void write_csv(const std::string& path, const std::vector<RunRecord>& rows);
std::vector<RunRecord> read_csv(const std::string& path);

}  // namespace ttlr
