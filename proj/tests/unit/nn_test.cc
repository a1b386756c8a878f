#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "election/netgen/graph.h"
#include "election/nn/layers.h"
#include "../support/fixtures.h"
#include "../support/gradcheck.h"

namespace election::nn {
namespace {

double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void Zero(ParamStore& store) {
  for (auto& [name, p] : store) p.value.Fill(0.0);
}

TEST_CASE("linear closed forms") {
  ParamStore store;
  Rng rng(1);
  Linear elu(store, "a", 2, 2, Activation::kElu, rng);
  Zero(store);
  Tape tape;
  CHECK(elu.Forward(tape, tape.Constant(Tensor::Vector({0, 0}))).value() == Tensor::Vector({0, 0}));

  store.Get("a/bias").value = Tensor::Vector({-1.0, 0.0});
  Tape fresh;  // a tape snapshots parameter values on first use
  Var y = elu.Forward(fresh, fresh.Constant(Tensor::Vector({0, 0})));
  CHECK(y.value()[0] == doctest::Approx(std::exp(-1.0) - 1.0).epsilon(1e-15));
  CHECK(y.value()[0] == doctest::Approx(-0.63212).epsilon(1e-5));

  Linear id(store, "b", 3, 3, Activation::kNone, rng);
  store.Get("b/weight").value = Tensor::Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  store.Get("b/bias").value.Fill(0.0);
  const Tensor x = Tensor::Vector({0.3, -1.2, 4.0});
  CHECK(id.Forward(tape, tape.Constant(x)).value() == x);
}

TEST_CASE("initialization respects the fan-in bound") {
  ParamStore store;
  Rng rng(2);
  Linear layer(store, "l", 9, 4, Activation::kNone, rng);
  for (const auto& [name, p] : store)
    for (double v : p.value.values()) CHECK(std::abs(v) <= 1.0 / 3.0);
}

TEST_CASE("lstm with zero parameters") {
  ParamStore store;
  Rng rng(1);
  LstmCell cell(store, "lstm", 2, 3, rng);
  Zero(store);
  Tape tape;
  LstmState zero{tape.Constant(Tensor({3})), tape.Constant(Tensor({3}))};
  LstmState out = cell.Step(tape, tape.Constant(Tensor::Vector({0.4, -0.1})), zero);
  CHECK(out.h.value() == Tensor({3}));
  CHECK(out.c.value() == Tensor({3}));

  LstmState ones{tape.Constant(Tensor({3})), tape.Constant(Tensor::Vector({1, 1, 1}))};
  out = cell.Step(tape, tape.Constant(Tensor::Vector({0.4, -0.1})), ones);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out.c.value()[i] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out.h.value()[i] == doctest::Approx(0.5 * std::tanh(0.5)).epsilon(1e-15));
  }
}

TEST_CASE("lstm matches a scalar-loop oracle") {
  const std::size_t in = 3, hid = 4;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ParamStore store;
    Rng rng(seed);
    LstmCell cell(store, "lstm", in, hid, rng);
    std::vector<double> x(in), h(hid), c(hid);
    for (double& v : x) v = rng.Normal();
    for (double& v : h) v = rng.Normal(0, 0.5);
    for (double& v : c) v = rng.Normal(0, 0.5);

    auto gate = [&](const char* g, std::size_t r) {
      const Tensor& w = store.Get(std::string("lstm/") + g + "/weight").value;
      double s = store.Get(std::string("lstm/") + g + "/bias").value[r];
      for (std::size_t k = 0; k < in; ++k) s += w.at(r, k) * x[k];
      for (std::size_t k = 0; k < hid; ++k) s += w.at(r, in + k) * h[k];
      return s;
    };
    std::vector<double> h_ref(hid), c_ref(hid);
    for (std::size_t r = 0; r < hid; ++r) {
      const double i = Sig(gate("input", r));
      const double f = Sig(gate("forget", r));
      const double g = std::tanh(gate("cell", r));
      const double o = Sig(gate("output", r));
      c_ref[r] = f * c[r] + i * g;
      h_ref[r] = o * std::tanh(c_ref[r]);
    }
    Tape tape;
    LstmState out = cell.Step(tape, tape.Constant(Tensor::Vector(x)),
                              {tape.Constant(Tensor::Vector(h)), tape.Constant(Tensor::Vector(c))});
    for (std::size_t r = 0; r < hid; ++r) {
      CHECK(std::abs(out.h.value()[r] - h_ref[r]) < 1e-12);
      CHECK(std::abs(out.c.value()[r] - c_ref[r]) < 1e-12);
    }
  }
}

TEST_CASE("normalized adjacency of a path") {
  const Tensor a = NormalizeAdjacency(testing::Path(3).DenseAdjacency());
  // A + I has degrees (2, 3, 2).
  const double s23 = 1.0 / std::sqrt(6.0);
  const double expected[9] = {0.5, s23, 0, s23, 1.0 / 3.0, s23, 0, s23, 0.5};
  for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(a[i] - expected[i]) < 1e-15);
}

TEST_CASE("normalized adjacency is symmetric with entries in [0, 1]") {
  Rng rng(4);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      if (rng.Uniform() < 0.3) edges.emplace_back(i, j);
  const Tensor a = NormalizeAdjacency(netgen::Graph::FromEdges(12, edges).DenseAdjacency());
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      CHECK(a.at(i, j) >= 0.0);
      CHECK(a.at(i, j) <= 1.0);
      CHECK(std::abs(a.at(i, j) - a.at(j, i)) <= 1e-12);
    }
}

TEST_CASE("gcn on a 3-node path matches hand arithmetic") {
  ParamStore store;
  Rng rng(1);
  GcnLayer gcn(store, "gcn", 2, 1, rng);
  store.Get("gcn/weight").value = Tensor::Matrix(2, 1, {1.0, -1.0});
  const Tensor h = Tensor::Matrix(3, 2, {1, 0, 0, 1, 2, 2});
  // HW = (1, -1, 0). Rows of A_hat times HW:
  const double s = 1.0 / std::sqrt(6.0);
  const double pre[3] = {0.5 * 1 + s * -1, s * 1 + (1.0 / 3.0) * -1 + s * 0, s * -1 + 0.5 * 0};
  Tape tape;
  Var out = gcn.Forward(tape, tape.Constant(NormalizeAdjacency(testing::Path(3).DenseAdjacency())),
                        tape.Constant(h));
  for (std::size_t i = 0; i < 3; ++i) {
    const double expected = pre[i] > 0 ? pre[i] : std::exp(pre[i]) - 1.0;
    CHECK(std::abs(out.value()[i] - expected) < 1e-12);
  }
}

TEST_CASE("gcn single node and symmetric pair") {
  ParamStore store;
  Rng rng(3);
  GcnLayer gcn(store, "gcn", 2, 3, rng);
  Tape tape;
  const Tensor h = Tensor::Matrix(1, 2, {0.5, -1.5});
  Var single = gcn.Forward(tape, tape.Constant(NormalizeAdjacency(Tensor({1, 1}))), tape.Constant(h));
  const Tensor& w = store.Get("gcn/weight").value;
  for (std::size_t c = 0; c < 3; ++c) {
    const double z = 0.5 * w.at(0, c) - 1.5 * w.at(1, c);
    CHECK(std::abs(single.value()[c] - (z > 0 ? z : std::exp(z) - 1)) < 1e-15);
  }
  const Tensor pair_h = Tensor::Matrix(2, 2, {0.5, -1.5, 0.5, -1.5});
  Var pair = gcn.Forward(tape, tape.Constant(NormalizeAdjacency(testing::Path(2).DenseAdjacency())),
                         tape.Constant(pair_h));
  for (std::size_t c = 0; c < 3; ++c) CHECK(pair.value().at(0, c) == pair.value().at(1, c));
}

TEST_CASE("gcn is permutation-equivariant") {
  ParamStore store;
  Rng rng(8);
  GcnLayer gcn(store, "gcn", 2, 4, rng);
  const std::size_t n = 9;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j)
      if (rng.Uniform() < 0.35) edges.emplace_back(i, j);
  const netgen::Graph g = netgen::Graph::FromEdges(n, edges);
  Tensor h({n, 2});
  for (double& v : h.values()) v = rng.Normal();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  std::vector<std::pair<int, int>> pedges;
  for (auto [u, v] : edges) pedges.emplace_back(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
  Tensor ph({n, 2});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < 2; ++c) ph.at(static_cast<std::size_t>(perm[i]), c) = h.at(i, c);

  Tape tape;
  Var out = gcn.Forward(tape, tape.Constant(NormalizeAdjacency(g.DenseAdjacency())), tape.Constant(h));
  Var pout = gcn.Forward(tape, tape.Constant(NormalizeAdjacency(netgen::Graph::FromEdges(n, pedges).DenseAdjacency())),
                         tape.Constant(ph));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(std::abs(pout.value().at(static_cast<std::size_t>(perm[i]), c) - out.value().at(i, c)) < 1e-12);
}

TEST_CASE("column max pool") {
  Tape tape;
  CHECK(diff::ColumnMaxPool(tape.Constant(Tensor::Matrix(1, 3, {1, -2, 3}))).value() ==
        Tensor::Vector({1, -2, 3}));
  CHECK(diff::ColumnMaxPool(tape.Constant(Tensor::Matrix(2, 2, {1, 5, 3, 2}))).value() ==
        Tensor::Vector({3, 5}));
  CHECK(diff::ColumnMaxPool(tape.Constant(Tensor::Matrix(2, 2, {3, 2, 1, 5}))).value() ==
        Tensor::Vector({3, 5}));
}

TEST_CASE("max pool tie gradient goes to the first row") {
  Tape tape;
  Var m = tape.Input(Tensor::Matrix(3, 1, {2, 2, 1}));
  tape.Backward(diff::Sum(diff::ColumnMaxPool(m)));
  CHECK(m.grad() == Tensor::Matrix(3, 1, {1, 0, 0}));
}

TEST_CASE("embedding lookup") {
  ParamStore store;
  Rng rng(1);
  EmbeddingTable table(store, "emb", 4, 3, rng);
  const Tensor& t = store.Get("emb").value;
  Tape tape;
  Var row = table.Lookup(tape, tape.Constant(Tensor::OneHot(4, 2)));
  for (std::size_t c = 0; c < 3; ++c) CHECK(row.value()[c] == t.at(2, c));
  Var mean = table.Lookup(tape, tape.Constant(Tensor::Vector({0.25, 0.25, 0.25, 0.25})));
  for (std::size_t c = 0; c < 3; ++c) {
    const double expected = (t.at(0, c) + t.at(1, c) + t.at(2, c) + t.at(3, c)) / 4.0;
    CHECK(mean.value()[c] == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("embedding table gradient matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ParamStore store;
    Rng rng(seed);
    EmbeddingTable table(store, "emb", 5, 3, rng);
    Tensor weights({5});
    for (double& v : weights.values()) v = rng.Uniform();
    Tensor out_w({3});
    for (double& v : out_w.values()) v = rng.Normal();
    diff::Parameter* params[] = {&store.Get("emb")};
    const auto r = testing::GradCheck(params, [&](Tape& t) {
      return diff::Sum(diff::Mul(table.Lookup(t, t.Constant(weights)), t.Constant(out_w)));
    });
    CHECK(r.relative_error < 1e-5);
  }
}

}  // namespace
}  // namespace election::nn
