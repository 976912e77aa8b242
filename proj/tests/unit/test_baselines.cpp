#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "trfnet/baselines.hpp"
#include "trfnet/error.hpp"
#include "trfnet/synthetic.hpp"

using namespace trfnet;

namespace {

DenseNetConfig small_dense(int epochs) {
  DenseNetConfig cfg;
  cfg.hidden = {16, 8};
  cfg.train.max_epochs = epochs;
  cfg.train.patience = epochs;
  cfg.train.batch_size = 32;
  cfg.train.adam.step_size = 0.01;
  cfg.train.seed = 7;
  return cfg;
}

std::vector<std::int64_t> kept_indices(const Matrix& mask) {
  std::vector<std::int64_t> out;
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) {
      if (mask(i, j) != 0.0) out.push_back(i * mask.cols() + j);
    }
  }
  return out;
}

}  // namespace

TEST(DenseNetwork, ShapeAndFullMasks) {
  DenseNetConfig cfg = small_dense(1);
  const Network net = make_dense_network(10, 3, cfg);
  ASSERT_EQ(net.layers.size(), 2u);
  EXPECT_EQ(net.layers[0].hidden(), 16);
  EXPECT_EQ(net.layers[0].visible(), 10);
  EXPECT_EQ(net.layers[1].visible(), 16);
  EXPECT_EQ(net.head->outputs(), 3);
  EXPECT_EQ(sparsity(net), 1.0);
  EXPECT_TRUE(net.plans.empty());
  EXPECT_EQ(parameter_count(net), 10 * 16 + 16 + 16 * 8 + 8 + 8 * 3 + 3);
  cfg.hidden.clear();
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(DenseNetwork, TrainsOnBlobs) {
  const Dataset all = synthetic::gaussian_blobs(600, 8, 3, 6.0, 1);
  const Split s = split(all, 0.6, 0.2, 1);
  const TrainedModel m = train_dense(s.train, &*s.valid, small_dense(20));
  EXPECT_GE(*evaluate(m.network, s.test).accuracy, 0.95);
  EXPECT_EQ(m.report.sparsity, 1.0);
}

TEST(MagnitudeMask, MatchesSortOracle) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> small(-3, 3);  // plenty of magnitude ties
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    Matrix w(5, 7);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = trial % 2 ? small(rng) : g(rng);
    for (double keep : {0.01, 0.1, 0.25, 0.5, 0.99, 1.0}) {
      const auto k = static_cast<std::int64_t>(std::ceil(keep * 35 - 1e-9));
      EXPECT_EQ(kept_indices(magnitude_mask(w, keep)), oracle::top_k_by_magnitude(w, k))
          << "trial " << trial << " keep " << keep;
    }
  }
  EXPECT_THROW(magnitude_mask(Matrix::Ones(2, 2), 1.5), ArgumentError);
  EXPECT_THROW(magnitude_mask(Matrix::Ones(2, 2), 0.0), ArgumentError);
}

TEST(Prune, KeepsTopTenPercentAndRetrains) {
  const Dataset all = synthetic::gaussian_blobs(600, 8, 3, 6.0, 3);
  const Split s = split(all, 0.6, 0.2, 3);
  const DenseNetConfig cfg = small_dense(20);
  const TrainedModel dense = train_dense(s.train, &*s.valid, cfg);
  const TrainedModel pruned = prune_and_retrain(dense.network, 0.1, s.train, &*s.valid, cfg.train);
  for (std::size_t k = 0; k < dense.network.layers.size(); ++k) {
    const Matrix& w = dense.network.layers[k].weights;
    const auto expected = oracle::top_k_by_magnitude(w, static_cast<std::int64_t>(std::ceil(0.1 * w.size() - 1e-9)));
    EXPECT_EQ(kept_indices(pruned.network.layers[k].mask), expected) << "layer " << k;
  }
  EXPECT_TRUE(pruned.network.masks_hold());
  EXPECT_EQ(pruned.network.head->weights.size(), dense.network.head->weights.size());
  EXPECT_NEAR(sparsity(pruned.network), 0.1, 0.01);
  EXPECT_GE(*evaluate(pruned.network, s.test).accuracy, 0.95);
}

TEST(Prune, KeepAllChangesNoMask) {
  const Dataset d = synthetic::gaussian_blobs(100, 4, 2, 5.0, 4);
  const DenseNetConfig cfg = small_dense(2);
  const TrainedModel dense = train_dense(d, nullptr, cfg);
  const TrainedModel kept = prune_and_retrain(dense.network, 1.0, d, nullptr, cfg.train);
  EXPECT_EQ(sparsity(kept.network), 1.0);
}

TEST(L1, ZeroStrengthMatchesDense) {
  const Dataset d = synthetic::gaussian_blobs(200, 6, 2, 4.0, 5);
  const DenseNetConfig cfg = small_dense(5);
  const TrainedModel dense = train_dense(d, nullptr, cfg);
  const TrainedModel l1 = train_l1(d, nullptr, cfg, 0.0);
  for (std::size_t k = 0; k < dense.network.layers.size(); ++k) {
    EXPECT_EQ(l1.network.layers[k].weights, dense.network.layers[k].weights);
  }
  ASSERT_TRUE(l1.report.effective_sparsity);
  EXPECT_EQ(*l1.report.effective_sparsity, effective_sparsity(l1.network));
  EXPECT_THROW(train_l1(d, nullptr, cfg, -1.0), ArgumentError);
}

TEST(L1, EffectiveSparsityNonIncreasingInStrength) {
  const Dataset all = synthetic::gaussian_blobs(400, 8, 3, 5.0, 6);
  const Split s = split(all, 0.7, 0.15, 6);
  const DenseNetConfig cfg = small_dense(15);
  double previous = 2.0;
  for (double strength : {0.0, 1e-4, 1e-2}) {
    const double eff = *train_l1(s.train, &*s.valid, cfg, strength).report.effective_sparsity;
    EXPECT_LE(eff, previous) << "strength " << strength;
    previous = eff;
  }
}
