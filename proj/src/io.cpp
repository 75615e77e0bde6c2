#include "ttlr/io.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ttlr {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw IoError("TT3D: truncated header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  os.write(b, 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw IoError("TT3D: truncated payload");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace

void write_tt3d(const std::string& path, const Tensor3& x) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write("TT3D", 4);
  put_u32(os, static_cast<std::uint32_t>(x.rows()));
  put_u32(os, static_cast<std::uint32_t>(x.cols()));
  put_u32(os, static_cast<std::uint32_t>(x.depth()));
  for (double v : x.values()) put_f64(os, v);
  if (!os) throw IoError("write failed: " + path);
}

Tensor3 read_tt3d(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "TT3D", 4) != 0)
    throw IoError("TT3D: bad magic in " + path);
  const std::uint32_t i1 = get_u32(is), i2 = get_u32(is), i3 = get_u32(is);
  Tensor3 x(static_cast<int>(i1), static_cast<int>(i2), static_cast<int>(i3));
  for (double& v : x.values()) v = get_f64(is);
  // reject trailing garbage as a damaged file
  char extra;
  if (is.read(&extra, 1)) throw IoError("TT3D: trailing bytes in " + path);
  return x;
}

void write_image(const std::string& path, const Tensor3& x) {
  const Dims d = x.dims();
  if (d.i3 != 1 && d.i3 != 3)
    throw IoError("write_image: depth must be 1 (PGM) or 3 (PPM)");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << (d.i3 == 1 ? "P5" : "P6") << "\n" << d.i2 << " " << d.i1 << "\n255\n";
  // rows are the image height; netpbm is row-major
  for (int i = 0; i < d.i1; ++i)
    for (int j = 0; j < d.i2; ++j)
      for (int k = 0; k < d.i3; ++k) {
        double v = std::round(x(i, j, k));
        v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
        os.put(static_cast<char>(static_cast<unsigned char>(v)));
      }
  if (!os) throw IoError("write failed: " + path);
}

namespace {

int read_pnm_token(std::istream& is) {
  // skips whitespace and '#' comment lines
  int c = is.get();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#')
      while (c != EOF && c != '\n') c = is.get();
    c = is.get();
  }
  int v = 0;
  bool any = false;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    any = true;
    c = is.get();
  }
  if (!any) throw IoError("netpbm: malformed header");
  return v;
}

}  // namespace

Tensor3 read_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  char m0 = 0, m1 = 0;
  is.get(m0);
  is.get(m1);
  int depth;
  if (m0 == 'P' && m1 == '5') depth = 1;
  else if (m0 == 'P' && m1 == '6') depth = 3;
  else throw IoError("netpbm: unsupported format in " + path);

  const int width = read_pnm_token(is);
  const int height = read_pnm_token(is);
  const int maxval = read_pnm_token(is);
  if (maxval != 255) throw IoError("netpbm: only 8-bit images are supported");

  Tensor3 x(height, width, depth);
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j)
      for (int k = 0; k < depth; ++k) {
        const int c = is.get();
        if (c == EOF) throw IoError("netpbm: truncated pixel data in " + path);
        x(i, j, k) = static_cast<double>(c);
      }
  return x;
}

std::string csv_header() {
  return "algorithm,n,L,K,H,rank,eps,block,passes,seed,time_s,rel_err,est_rank,pass_count";
}

std::string to_csv(const RunRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.algorithm << ',' << r.n << ',' << r.L << ',' << r.K << ',' << r.H << ','
     << r.rank << ',' << r.eps << ',' << r.block << ',' << r.passes << ',' << r.seed
     << ',' << r.time_s << ',' << r.rel_err << ',' << r.est_rank << ',' << r.pass_count;
  return os.str();
}

RunRecord from_csv(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  f.push_back(cur);
  if (f.size() != 14) throw IoError("CSV: expected 14 fields, got " + std::to_string(f.size()));
  RunRecord r;
  r.algorithm = f[0];
  r.n = std::stoi(f[1]);
  r.L = std::stoi(f[2]);
  r.K = std::stoi(f[3]);
  r.H = std::stoi(f[4]);
  r.rank = std::stoi(f[5]);
  r.eps = std::stod(f[6]);
  r.block = std::stoi(f[7]);
  r.passes = std::stoi(f[8]);
  r.seed = std::stoull(f[9]);
  r.time_s = std::stod(f[10]);
  r.rel_err = std::stod(f[11]);
  r.est_rank = std::stoi(f[12]);
  r.pass_count = std::stol(f[13]);
  return r;
}

void write_csv(const std::string& path, const std::vector<RunRecord>& rows) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << csv_header() << '\n';
  for (const auto& r : rows) os << to_csv(r) << '\n';
  if (!os) throw IoError("write failed: " + path);
}

std::vector<RunRecord> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line != csv_header())
    throw IoError("CSV: missing or unexpected header in " + path);
  std::vector<RunRecord> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    rows.push_back(from_csv(line));
  }
  return rows;
}

}  // namespace ttlr
