// Copyright 2026 The focus-sparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>

#include "focus/cmff.hpp"
#include "focus/random.hpp"
#include "oracles.hpp"

using namespace focus;

namespace {

SparsificationMap row_mask(std::vector<std::uint8_t> bits) {
  const auto n = Index(bits.size());
  return {1, n, std::move(bits)};
}

}  // namespace

TEST_CASE("complement_mask examples") {
  Rng rng(1);
  const auto m = oracle::random_mask(rng, 4, 4, 0.5);
  CHECK(complement_mask(m, m).kept_count() == 0);
  CHECK(complement_mask(row_mask({1, 1, 0, 0}), row_mask({1, 0, 1, 0})).bits() ==
        std::vector<std::uint8_t>{0, 1, 0, 0});
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = oracle::random_mask(rng, 1, 1000, 0.5), i = oracle::random_mask(rng, 1, 1000, 0.5);
    const auto c = complement_mask(e, i);
    for (Index k = 0; k < 1000; ++k) CHECK(c[k] == (e[k] && !i[k]));
  }
  CHECK_THROWS_AS(complement_mask(row_mask({1, 0}), row_mask({1})), Error);
}

TEST_CASE("cae_map examples") {
  CHECK(cae_map(row_mask({0, 0, 0}), 1.5).values == Vector<double>::Ones(3));
  const auto m = cae_map(row_mask({0, 1}), 1.5);
  CHECK(m.values(0) == 1.0);
  CHECK(m.values(1) == 1.5);
  CHECK(cae_map(row_mask({1, 0, 1}), 1.0).values == Vector<double>::Ones(3));
  CHECK_THROWS_AS(cae_map(row_mask({1}), 0.0), Error);
}

TEST_CASE("cae_apply examples") {
  Rng rng(2);
  const auto g = oracle::random_grid(rng, 3, 3, 4);
  CHECK(cae_apply(cae_map(SparsificationMap::filled(3, 3, false), 2.0), g).features == g.features);

  TokenGrid<double> one(1, 1, 2, 1);
  one.features << 2, 2;
  const auto scaled = cae_apply(cae_map(row_mask({1}), 1.5), one);
  CHECK(scaled.features(0, 0) == 3.0);
  CHECK(scaled.features(0, 1) == 3.0);

  const auto diff = oracle::random_mask(rng, 3, 3, 0.5);
  const auto out = cae_apply(cae_map(diff, 1.7), g);
  for (Index i = 0; i < 9; ++i)
    for (Index c = 0; c < 4; ++c) CHECK(out.features(i, c) == g.features(i, c) * (diff[i] ? 1.7 : 1.0));
  CHECK_THROWS_AS(cae_apply(cae_map(row_mask({1, 0}), 1.5), g), Error);
}

TEST_CASE("union_mask examples") {
  Rng rng(3);
  const auto e = oracle::random_mask(rng, 4, 4, 0.4);
  CHECK(union_mask(SparsificationMap::filled(4, 4, false), e) == e);
  CHECK(union_mask(row_mask({1, 0, 0}), row_mask({0, 0, 1})).bits() == std::vector<std::uint8_t>{1, 0, 1});
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_mask(rng, 1, 40, rng.unit()), b = oracle::random_mask(rng, 1, 40, rng.unit());
    const auto u = union_mask(a, b);
    CHECK(u.kept_count() >= std::max(a.kept_count(), b.kept_count()));
    CHECK(u.kept_count() == a.kept_count() + complement_mask(b, a).kept_count());
  }
}

TEST_CASE("gather and scatter") {
  Rng rng(4);
  const auto g = oracle::random_grid(rng, 3, 4, 5);
  const auto all = gather(g, SparsificationMap::filled(3, 4, true));
  CHECK(all.tokens == g.features);
  for (Index i = 0; i < 12; ++i) CHECK(all.indices[std::size_t(i)] == i);
  const auto none = gather(g, SparsificationMap::filled(3, 4, false));
  CHECK(none.size() == 0);
  CHECK(scatter(none, g).features == g.features);

  const auto m = oracle::random_mask(rng, 3, 4, 0.5);
  CHECK(scatter(gather(g, m), g).features == g.features);
  const auto gm = gather(g, m);
  CHECK(std::is_sorted(gm.indices.begin(), gm.indices.end()));

  GatheredSequence<double> single{RowMatrix<double>::Constant(1, 5, 9.0), {7}};
  const auto s = scatter(single, g);
  for (Index i = 0; i < 12; ++i) CHECK((s.features.row(i) == g.features.row(i)) == (i != 7));

  GatheredSequence<double> bad{RowMatrix<double>::Zero(1, 5), {12}};
  try {
    scatter(bad, g);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
  }
  CHECK_THROWS_AS(gather(g, SparsificationMap::filled(4, 4, true)), Error);
}

TEST_CASE("interleave and deinterleave") {
  GatheredSequence<double> empty_i{RowMatrix<double>(0, 2), {}}, empty_e{RowMatrix<double>(0, 2), {}};
  CHECK(interleave(empty_i, empty_e).rows() == 0);

  GatheredSequence<double> i{RowMatrix<double>(2, 1), {0, 3}}, e{RowMatrix<double>(2, 1), {0, 3}};
  i.tokens << 1, 2;
  e.tokens << 10, 20;
  const auto seq = interleave(i, e);
  CHECK(seq(0, 0) == 1);
  CHECK(seq(1, 0) == 10);
  CHECK(seq(2, 0) == 2);
  CHECK(seq(3, 0) == 20);
  const auto [a, b] = deinterleave(seq);
  CHECK(a == i.tokens);
  CHECK(b == e.tokens);

  GatheredSequence<double> other{RowMatrix<double>(2, 1), {0, 2}};
  try {
    interleave(i, other);
    FAIL("no throw");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::IndexMismatch);
  }
  try {
    deinterleave<double>(RowMatrix<double>::Zero(3, 1));
    FAIL("no throw");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::OddLength);
  }
}

TEST_CASE("depthwise_conv3x3 uses zero padding") {
  TokenGrid<double> g(3, 3, 1, 1);
  g.features.setOnes();
  const RowMatrix<double> k = RowMatrix<double>::Ones(1, 9);
  const Vector<double> bias = Vector<double>::Zero(1);
  const auto out = depthwise_conv3x3(g, k, bias);
  CHECK(out.features(4, 0) == 9.0);
  CHECK(out.features(0, 0) == 4.0);
  CHECK(out.features(1, 0) == 6.0);
}

TEST_CASE("fi_mamba examples") {
  Rng rng(5);
  const auto w = random_fi_mamba_weights<double>(rng, 6, 4);
  const auto gi = oracle::random_grid(rng, 4, 4, 6), ge = oracle::random_grid(rng, 4, 4, 6);
  const auto none = SparsificationMap::filled(4, 4, false);
  const auto [ni, ne] = fi_mamba(gi, ge, none, none, w);
  CHECK(ni.features == fi_preprocess(gi, w.image_linear, w.image_dw, w.image_dw_bias).features);
  CHECK(ne.features == fi_preprocess(ge, w.event_linear, w.event_dw, w.event_dw_bias).features);

  const auto wz = random_fi_mamba_weights<double>(rng, 6, 4, false);
  const TokenGrid<double> zero(4, 4, 6, 1);
  const auto m = oracle::random_mask(rng, 4, 4, 0.5);
  const auto [zi, ze] = fi_mamba(zero, zero, m, m, wz);
  CHECK(zi.features.isZero(0));
  CHECK(ze.features.isZero(0));

  const auto all = SparsificationMap::filled(4, 4, true);
  const auto [ai, ae] = fi_mamba(gi, ge, all, all, w);
  const auto [oi, oe] = oracle::dense_interlaced(gi, ge, w);
  CHECK(oracle::max_rel_diff(ai.features, oi) < 1e-9);
  CHECK(oracle::max_rel_diff(ae.features, oe) < 1e-9);

  // tokens outside the union mask come straight from preprocessing
  const auto mi = oracle::random_mask(rng, 4, 4, 0.3), me = oracle::random_mask(rng, 4, 4, 0.3);
  const auto u = union_mask(mi, me);
  const auto [si, se] = fi_mamba(gi, ge, mi, me, w);
  const auto pi = fi_preprocess(gi, w.image_linear, w.image_dw, w.image_dw_bias);
  for (Index i = 0; i < 16; ++i)
    if (!u[i]) CHECK(si.features.row(i) == pi.features.row(i));

  CHECK_THROWS_AS(fi_mamba(gi, oracle::random_grid(rng, 4, 2, 6), all, all, w), Error);
}

TEST_CASE("cmff examples") {
  Rng rng(6);
  const auto w = random_cmff_weights<double>(rng, 6, LayerShape{4, 2, 2});
  const auto gi = oracle::random_grid(rng, 4, 4, 6), ge = oracle::random_grid(rng, 4, 4, 6);

  // identical masks: beta has no effect
  const auto m = oracle::random_mask(rng, 4, 4, 0.5);
  CHECK(cmff(gi, ge, m, m, w, 1.5).features == cmff(gi, ge, m, m, w, 7.0).features);

  // disjoint masks: each modality is enhanced where only the other kept
  const auto mi = row_mask({1, 0}), me = row_mask({0, 1});
  TokenGrid<double> ti(1, 2, 1, 1), te(1, 2, 1, 1);
  ti.features << 2, 4;
  te.features << 3, 5;
  const auto ci = cae_apply(cae_map(complement_mask(me, mi), 1.5), ti);
  const auto ce = cae_apply(cae_map(complement_mask(mi, me), 1.5), te);
  CHECK(ci.features(0, 0) == 2.0);
  CHECK(ci.features(1, 0) == 6.0);
  CHECK(ce.features(0, 0) == 4.5);
  CHECK(ce.features(1, 0) == 5.0);

  // positions outside the union only see the addition of the preprocessed grids
  const auto ai = oracle::random_mask(rng, 4, 4, 0.3), ae = oracle::random_mask(rng, 4, 4, 0.3);
  const auto u = union_mask(ai, ae);
  const auto fused = cmff(gi, ge, ai, ae, w, 1.5);
  // preprocessing mixes neighbours, so compare against the CAE-scaled inputs
  const auto si = fi_preprocess(cae_apply(cae_map(complement_mask(ae, ai), 1.5), gi), w.fi.image_linear,
                                w.fi.image_dw, w.fi.image_dw_bias);
  const auto se = fi_preprocess(cae_apply(cae_map(complement_mask(ai, ae), 1.5), ge), w.fi.event_linear,
                                w.fi.event_dw, w.fi.event_dw_bias);
  for (Index i = 0; i < 16; ++i)
    if (!u[i]) CHECK(fused.features.row(i) == si.features.row(i) + se.features.row(i));

  const auto dense = dense_cmff(gi, ge, w);
  const auto all = SparsificationMap::filled(4, 4, true);
  CHECK(oracle::max_rel_diff(cmff(gi, ge, all, all, w, 1.5).features, dense.features) < 1e-9);
}

TEST_CASE("CAE is symmetric under swapping the modalities") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gi = oracle::random_grid(rng, 3, 3, 2), ge = oracle::random_grid(rng, 3, 3, 2);
    const auto mi = oracle::random_mask(rng, 3, 3, 0.5), me = oracle::random_mask(rng, 3, 3, 0.5);
    const auto ci = cae_apply(cae_map(complement_mask(me, mi), 1.5), gi);
    const auto ce = cae_apply(cae_map(complement_mask(mi, me), 1.5), ge);
    // swapped roles: the "image" slot now holds the event grid
    const auto si = cae_apply(cae_map(complement_mask(mi, me), 1.5), ge);
    const auto se = cae_apply(cae_map(complement_mask(me, mi), 1.5), gi);
    CHECK(si.features == ce.features);
    CHECK(se.features == ci.features);
  }
}

TEST_CASE("scan length is twice the union size") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto gi = oracle::random_grid(rng, 4, 4, 3), ge = oracle::random_grid(rng, 4, 4, 3);
    const auto mi = oracle::random_mask(rng, 4, 4, 0.4), me = oracle::random_mask(rng, 4, 4, 0.4);
    const auto u = union_mask(mi, me);
    const auto seq = interleave(gather(gi, u), gather(ge, u));
    CHECK(seq.rows() == 2 * u.kept_count());
    // multiset of tokens is preserved
    const auto [a, b] = deinterleave(seq);
    CHECK(a == gather(gi, u).tokens);
    CHECK(b == gather(ge, u).tokens);
  }
}
