#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "ttlr/completion.hpp"
#include "ttlr/fixed_precision.hpp"
#include "ttlr/io.hpp"
#include "ttlr/single_pass.hpp"
#include "ttlr/synthetic.hpp"

using namespace ttlr;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void append_record(const std::string& path, const RunRecord& r) {
  std::vector<RunRecord> rows;
  if (std::filesystem::exists(path)) rows = read_csv(path);
  rows.push_back(r);
  write_csv(path, rows);
}

struct AlgChoice {
  std::string name = "alg7";
  int L = 50, K = 50, H = 45, rank = 40;
  double eps = 1e-5;  // relative; scaled by the data norm at run time
  int block = 25;
  int passes = 1;  // power iterations, or total passes for alg10
  std::uint64_t seed = 0;
};

/// Runs one algorithm on x and reports the reconstruction plus a RunRecord.
/// eps is interpreted relative to ||x||_F.
std::pair<Tensor3, RunRecord> run_algorithm(const Tensor3& x, const AlgChoice& a) {
  CountedTensor cx(x);
  RunRecord r;
  r.algorithm = a.name;
  r.n = x.rows();
  r.L = a.L;
  r.K = a.K;
  r.H = a.H;
  r.rank = a.rank;
  r.eps = a.eps;
  r.block = a.block;
  r.passes = a.passes;
  r.seed = a.seed;

  SketchParams sp{a.L, a.K, a.H, a.rank, a.seed};
  FixedPrecisionConfig fc;
  fc.eps = a.eps * cx.fro_norm();
  fc.block = a.block;
  fc.power_or_passes = a.passes;
  fc.seed = a.seed;

  const double t0 = now_seconds();
  Tensor3 approx;
  int est_rank = 0;
  if (a.name == "alg4") {
    CurFactors f = alg4_tcur(cx, a.L, a.K, a.seed);
    approx = reconstruct(f);
    est_rank = a.rank;
  } else if (a.name == "alg5") {
    QbFactors f = alg5_qb(cx, a.L, a.K, a.seed);
    approx = reconstruct(f);
    est_rank = f.k;
  } else if (a.name == "alg6" || a.name == "alg7" || a.name == "alg8") {
    TsvdFactors f = a.name == "alg6"   ? alg6_single_pass(cx, sp)
                    : a.name == "alg7" ? alg7_single_pass(cx, sp)
                                       : alg8_two_sided(cx, sp);
    approx = reconstruct(f);
    est_rank = f.k;
  } else if (a.name == "alg9" || a.name == "alg10" || a.name == "alg11") {
    QbFactors f = a.name == "alg9"    ? alg9_fixed_precision(cx, fc)
                  : a.name == "alg10" ? alg10_fixed_precision(cx, fc)
                                      : alg11_fixed_precision(cx, fc);
    approx = reconstruct(f);
    est_rank = truncate_qb(f, fc.eps).k;
  } else if (a.name == "tsvd") {
    approx = reconstruct(t_svd_truncated(x, a.rank));
    est_rank = a.rank;
  } else {
    throw CLI::ValidationError("--alg", "unknown algorithm " + a.name);
  }
  r.time_s = now_seconds() - t0;
  r.rel_err = rel_err(x, approx);
  r.est_rank = est_rank;
  r.pass_count = cx.passes();
  return {std::move(approx), std::move(r)};
}

void check_alg10_passes(const AlgChoice& a) {
  if (a.name == "alg10" && a.passes <= 2)
    throw CLI::ValidationError("--passes", "alg10 needs more than 2 passes");
}

Tensor3 make_data(const std::string& kind, int n, int rank, double delta,
                  std::uint64_t seed) {
  SyntheticSpec s;
  s.n = n;
  s.rank = rank;
  s.delta = delta;
  s.seed = seed;
  if (kind == "lowrank") s.kind = SyntheticKind::Lowrank;
  else if (kind == "case1") s.kind = SyntheticKind::Case1;
  else if (kind == "case2") s.kind = SyntheticKind::Case2;
  else if (kind == "case3") s.kind = SyntheticKind::Case3;
  else throw CLI::ValidationError("--kind", "unknown generator " + kind);
  return s.kind == SyntheticKind::Lowrank ? gen_lowrank(s) : gen_case(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low tubal rank tensor approximation toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string output;
  int trials = 1;
  bool desk = false;
  app.add_option("--seed", seed, "base RNG seed")->capture_default_str();
  app.add_option("--output", output, "output path (format depends on the subcommand)");
  app.add_option("--trials", trials, "repetitions per configuration")
      ->capture_default_str();
  app.add_flag("--desk", desk, "shrink benchmark sizes for a laptop-scale run");
  // let the global options above appear after the subcommand name too
  app.fallthrough();

  // gen
  auto* gen = app.add_subcommand("gen", "write a synthetic tensor as TT3D");
  std::string gen_kind = "lowrank";
  int gen_n = 100, gen_rank = 10;
  double gen_delta = 0.0;
  gen->add_option("--kind", gen_kind, "lowrank|case1|case2|case3")
      ->capture_default_str();
  gen->add_option("--n", gen_n, "cubic dimension")->capture_default_str();
  gen->add_option("--rank", gen_rank, "tubal rank (lowrank only)")
      ->capture_default_str();
  gen->add_option("--delta", gen_delta, "relative noise level (lowrank only)")
      ->capture_default_str();

  // approx
  auto* approx = app.add_subcommand("approx", "run one algorithm on a TT3D tensor");
  std::string ap_input;
  AlgChoice ap;
  approx->add_option("--input", ap_input, "TT3D input path")->required();
  approx->add_option("--alg", ap.name, "alg4..alg11 or tsvd")->capture_default_str();
  approx->add_option("--L", ap.L)->capture_default_str();
  approx->add_option("--K", ap.K)->capture_default_str();
  approx->add_option("--H", ap.H)->capture_default_str();
  approx->add_option("--rank", ap.rank)->capture_default_str();
  approx->add_option("--eps", ap.eps, "error bound relative to the data norm")
      ->capture_default_str();
  approx->add_option("--block", ap.block)->capture_default_str();
  approx->add_option("--passes", ap.passes, "power iterations (alg10: total passes)")
      ->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "reproduce a benchmark table as CSV");
  int table = 0, size_override = 0;
  bench->add_option("--table", table, "1, 2 or 3")->required();
  bench->add_option("--size", size_override, "override the tensor dimension n");

  // compress
  auto* compress = app.add_subcommand("compress", "low-rank image compression");
  std::string cp_input;
  AlgChoice cp;
  cp.name = "alg7";
  cp.L = 350;
  cp.K = 350;
  cp.H = 100;
  cp.rank = 30;
  compress->add_option("--input", cp_input, "PGM/PPM input image")->required();
  compress->add_option("--alg", cp.name)->capture_default_str();
  compress->add_option("--L", cp.L)->capture_default_str();
  compress->add_option("--K", cp.K)->capture_default_str();
  compress->add_option("--H", cp.H)->capture_default_str();
  compress->add_option("--rank", cp.rank)->capture_default_str();

  // complete
  auto* complete_cmd =
      app.add_subcommand("complete", "super-resolution by masked completion");
  std::string cm_input;
  int cm_factor = 4, cm_rank = 60, cm_iters = 80;
  double cm_sigma = 0.5, cm_tol = 1e-4;
  complete_cmd->add_option("--input", cm_input, "PGM/PPM input image")->required();
  complete_cmd->add_option("--factor", cm_factor, "upsampling factor")
      ->capture_default_str();
  complete_cmd->add_option("--rank", cm_rank, "truncation rank of the iteration")
      ->capture_default_str();
  complete_cmd->add_option("--iters", cm_iters)->capture_default_str();
  complete_cmd->add_option("--sigma", cm_sigma, "post-loop Gaussian sigma, 0 disables")
      ->capture_default_str();
  complete_cmd->add_option("--tol", cm_tol)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const std::string out = output.empty() ? "tensor.tt3d" : output;
      write_tt3d(out, make_data(gen_kind, gen_n, gen_rank, gen_delta, seed));
      std::cout << "wrote " << out << "\n";
      return 0;
    }

    if (*approx) {
      ap.seed = seed;
      check_alg10_passes(ap);
      Tensor3 x = read_tt3d(ap_input);
      auto [recon, rec] = run_algorithm(x, ap);
      const std::string stem =
          std::filesystem::path(ap_input).replace_extension("").string();
      write_tt3d(stem + "_approx.tt3d", recon);
      const std::string csv = output.empty() ? stem + "_runs.csv" : output;
      append_record(csv, rec);
      std::cout << csv_header() << "\n" << to_csv(rec) << "\n";
      return 0;
    }

    if (*bench) {
      if (table < 1 || table > 3)
        throw CLI::ValidationError("--table", "table id must be 1, 2 or 3");
      std::vector<RunRecord> rows;
      const std::string csv = output.empty() ? "bench.csv" : output;

      if (table == 1) {
        std::vector<int> sizes = desk ? std::vector<int>{100, 150, 200}
                                      : std::vector<int>{200, 300, 400, 500};
        if (size_override > 0) sizes = {size_override};
        for (int n : sizes)
          for (int t = 0; t < trials; ++t) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
            Tensor3 x = make_data("lowrank", n, std::min(50, n), 1e-3, s);
            int est = 0;
            for (const char* name : {"alg9", "alg10", "alg11"}) {
              AlgChoice a;
              a.name = name;
              a.eps = 1e-5;
              a.block = 25;
              a.passes = std::string(name) == "alg10" ? 4 : 1;
              a.seed = s;
              auto [recon, rec] = run_algorithm(x, a);
              est = rec.est_rank;
              rows.push_back(rec);
            }
            AlgChoice base;
            base.name = "tsvd";
            base.rank = std::max(est, 1);
            base.seed = s;
            rows.push_back(run_algorithm(x, base).second);
          }
      } else {
        const int n = size_override > 0 ? size_override : (desk ? 150 : 300);
        const std::vector<std::string> kinds =
            table == 2 ? std::vector<std::string>{"lowrank"}
                       : std::vector<std::string>{"case1", "case2", "case3"};
        for (const auto& kind : kinds)
          for (int t = 0; t < trials; ++t) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
            Tensor3 x = make_data(kind, n, std::min(50, n), 1e-3, s);
            for (const char* name : {"alg4", "alg5", "alg6", "alg7", "alg8"}) {
              AlgChoice a;
              a.name = name;
              a.L = std::min(50, n);
              a.K = std::min(50, n);
              a.H = std::min(45, a.K);
              a.rank = std::min(40, a.K);
              a.seed = s;
              auto [recon, rec] = run_algorithm(x, a);
              rec.algorithm = table == 3 ? rec.algorithm + "/" + kind : rec.algorithm;
              rows.push_back(rec);
            }
          }
      }
      write_csv(csv, rows);
      std::cout << "wrote " << rows.size() << " rows to " << csv << "\n";
      return 0;
    }

    if (*compress) {
      cp.seed = seed;
      check_alg10_passes(cp);
      Tensor3 img = read_image(cp_input);
      AlgChoice a = cp;
      a.L = std::min(a.L, img.rows());
      a.K = std::min({a.K, img.cols(), a.L});
      a.H = std::min(a.H, a.K);
      a.rank = std::min(a.rank, a.K);
      auto [recon, rec] = run_algorithm(img, a);
      for (double& v : recon.values()) v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
      const std::string out =
          output.empty() ? std::filesystem::path(cp_input)
                               .replace_extension("")
                               .string() +
                               "_recon" +
                               std::filesystem::path(cp_input).extension().string()
                         : output;
      write_image(out, recon);
      try {
        std::cout << "psnr_db=" << psnr(img, recon) << "\n";
      } catch (const IdenticalInputs&) {
        std::cout << "psnr_db=inf\n";
      }
      std::cout << "rel_err=" << rec.rel_err << "\n" << to_csv(rec) << "\n";
      return 0;
    }

    if (*complete_cmd) {
      Tensor3 img = read_image(cm_input);
      MaskedTensor m = upsample_mask(img, cm_factor);
      CompletionConfig cfg;
      const int r = std::min({cm_rank, m.data.rows(), m.data.cols()});
      cfg.rank_operator = [r](const Tensor3& c) {
        return reconstruct(t_svd_truncated(c, r));
      };
      cfg.max_iters = cm_iters;
      cfg.tol = cm_tol;
      cfg.filter_sigma = 0.0;
      Tensor3 raw = complete(m, cfg);
      Tensor3 filtered = cm_sigma > 0.0 ? gaussian_blur(raw, cm_sigma) : raw;
      for (double& v : filtered.values()) v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);

      const std::string out =
          output.empty() ? std::filesystem::path(cm_input)
                               .replace_extension("")
                               .string() +
                               "_sr" +
                               std::filesystem::path(cm_input).extension().string()
                         : output;
      write_image(out, filtered);
      // PSNR of the known grid against the input, pre and post filter
      Tensor3 known_raw(img.rows(), img.cols(), img.depth());
      Tensor3 known_flt(img.rows(), img.cols(), img.depth());
      for (int k = 0; k < img.depth(); ++k)
        for (int j = 0; j < img.cols(); ++j)
          for (int i = 0; i < img.rows(); ++i) {
            known_raw(i, j, k) = raw(i * cm_factor, j * cm_factor, k);
            known_flt(i, j, k) = filtered(i * cm_factor, j * cm_factor, k);
          }
      auto report = [&](const char* tag, const Tensor3& got) {
        try {
          const double v = psnr(img, got);
          std::cout << tag << "=" << v << "\n";
        } catch (const IdenticalInputs&) {
          std::cout << tag << "=inf\n";
        }
      };
      report("psnr_db_pre_filter", known_raw);
      report("psnr_db_post_filter", known_flt);
      std::cout << "wrote " << out << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
