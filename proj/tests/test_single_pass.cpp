#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "ttlr/single_pass.hpp"

using namespace ttlr;

namespace {

Tensor3 random_tensor(int i1, int i2, int i3, std::mt19937_64& rng) {
  return gauss_tensor(i1, i2, i3, GaussKind::Full, rng);
}

Tensor3 lowrank(int n, int r, int i3, std::mt19937_64& rng) {
  return t_product(random_tensor(n, r, i3, rng), random_tensor(r, n, i3, rng));
}

double rel(const Tensor3& got, const Tensor3& want) {
  return fro_norm(sub(got, want)) / fro_norm(want);
}

}  // namespace

TEST_CASE("alg4 cross approximation recovers a low-rank tensor") {
  std::mt19937_64 rng(1);
  Tensor3 x = lowrank(20, 3, 4, rng);
  CountedTensor cx(x);
  CurFactors f = alg4_tcur(cx, 10, 10, 7);
  CHECK(cx.passes() == 1);
  CHECK(rel(reconstruct(f), x) < 1e-8);
  CHECK(f.lateral_idx.size() == 10);
  CHECK(f.horizontal_idx.size() == 10);
  // sampled without replacement
  auto lat = f.lateral_idx;
  std::sort(lat.begin(), lat.end());
  CHECK(std::adjacent_find(lat.begin(), lat.end()) == lat.end());
  CHECK_THROWS_AS(alg4_tcur(cx, 0, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(alg4_tcur(cx, 25, 5, 1), std::invalid_argument);
}

TEST_CASE("alg5 QB recovers a low-rank tensor in one pass") {
  std::mt19937_64 rng(2);
  Tensor3 x = lowrank(20, 4, 3, rng);
  CountedTensor cx(x);
  QbFactors f = alg5_qb(cx, 10, 10, 5);
  CHECK(cx.passes() == 1);
  CHECK(rel(reconstruct(f), x) < 1e-8);
}

TEST_CASE("alg6/7/8 single pass, exact on low rank, deterministic in the seed") {
  std::mt19937_64 rng(3);
  Tensor3 x = lowrank(25, 5, 4, rng);
  // alg8's core solve needs K >= R + H to be exact, so keep H modest here
  SketchParams p{12, 10, 5, 5, 99};

  using Fn = TsvdFactors (*)(const CountedTensor&, const SketchParams&);
  for (Fn fn : {Fn(alg6_single_pass), Fn(alg7_single_pass), Fn(alg8_two_sided)}) {
    CountedTensor cx(x);
    TsvdFactors f = fn(cx, p);
    CHECK(cx.passes() == 1);
    CHECK(rel(reconstruct(f), x) < 1e-8);
    CHECK(f.k <= p.R);
    TsvdFactors g = fn(cx, p);
    CHECK(fro_norm(sub(reconstruct(f), reconstruct(g))) == 0.0);
  }
}

TEST_CASE("sketch parameter validation") {
  std::mt19937_64 rng(4);
  Tensor3 x = random_tensor(10, 10, 3, rng);
  CHECK_THROWS_AS(alg7_single_pass(x, SketchParams{4, 6, 2, 2, 0}),
                  std::invalid_argument);  // L < K
  CHECK_THROWS_AS(alg7_single_pass(x, SketchParams{6, 4, 5, 2, 0}),
                  std::invalid_argument);  // K < H
  CHECK_THROWS_AS(alg7_single_pass(x, SketchParams{6, 4, 2, 0, 0}),
                  std::invalid_argument);  // R < 1
  CHECK_THROWS_AS(alg7_single_pass(x, SketchParams{20, 4, 2, 2, 0}),
                  std::invalid_argument);  // L > I1
}

TEST_CASE("streaming sketch matches the batch run bit for bit") {
  std::mt19937_64 rng(5);
  const Dims d{18, 18, 4};
  Tensor3 x(d.i1, d.i2, d.i3);
  SketchParams p{9, 8, 6, 4, 1234};

  // seven sparse additive updates summing to x
  std::vector<Tensor3> updates;
  for (int u = 0; u < 7; ++u) {
    Tensor3 up(d.i1, d.i2, d.i3);
    std::uniform_int_distribution<int> pos1(0, d.i1 - 1), pos2(0, d.i2 - 1),
        pos3(0, d.i3 - 1);
    std::normal_distribution<double> val;
    for (int e = 0; e < 30; ++e)
      up(pos1(rng), pos2(rng), pos3(rng)) += val(rng);
    x = add(x, up);
    updates.push_back(std::move(up));
  }

  for (auto which : {SinglePassAlg::Alg6, SinglePassAlg::Alg7, SinglePassAlg::Alg8}) {
    SketchState fwd(d, p, which);
    for (const auto& up : updates) fwd.ingest(up);
    SketchState rev(d, p, which);
    for (auto it = updates.rbegin(); it != updates.rend(); ++it) rev.ingest(*it);

    Tensor3 a = reconstruct(sketch_finalize(fwd, p, which));
    Tensor3 b = reconstruct(sketch_finalize(rev, p, which));
    CHECK(rel(a, b) < 1e-12);

    Tensor3 batch = which == SinglePassAlg::Alg6
                        ? reconstruct(alg6_single_pass(x, p))
                        : which == SinglePassAlg::Alg7
                              ? reconstruct(alg7_single_pass(x, p))
                              : reconstruct(alg8_two_sided(x, p));
    CHECK(rel(a, batch) < 1e-10);
  }
}

TEST_CASE("sketch merge combines shards") {
  std::mt19937_64 rng(6);
  const Dims d{12, 12, 3};
  SketchParams p{6, 5, 4, 3, 77};
  Tensor3 u1 = random_tensor(d.i1, d.i2, d.i3, rng);
  Tensor3 u2 = random_tensor(d.i1, d.i2, d.i3, rng);

  SketchState whole(d, p, SinglePassAlg::Alg7);
  whole.ingest(u1);
  whole.ingest(u2);
  SketchState s1(d, p, SinglePassAlg::Alg7), s2(d, p, SinglePassAlg::Alg7);
  s1.ingest(u1);
  s2.ingest(u2);
  s1.merge(s2);
  CHECK(fro_norm(sub(s1.range_sketch(), whole.range_sketch())) < 1e-12);
  CHECK(fro_norm(sub(s1.corange_sketch(), whole.corange_sketch())) < 1e-12);

  SketchState wrong(d, SketchParams{6, 5, 4, 3, 78}, SinglePassAlg::Alg7);
  CHECK_THROWS_AS(s1.merge(wrong), DimMismatch);
  CHECK_THROWS_AS(whole.ingest(Tensor3(5, 5, 3)), DimMismatch);
  CHECK_THROWS_AS(sketch_finalize(whole, p, SinglePassAlg::Alg6),
                  std::invalid_argument);
}
