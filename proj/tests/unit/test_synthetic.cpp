#include <gtest/gtest.h>

#include <set>

#include "trfnet/error.hpp"
#include "trfnet/synthetic.hpp"

using namespace trfnet;

TEST(MarkovChain, FlipRateAndBinaryValues) {
  const Dataset d = synthetic::markov_chain(10, 20000, 0.1, 1);
  EXPECT_EQ(d.rows(), 20000);
  EXPECT_EQ(d.cols(), 10);
  EXPECT_TRUE(((d.values().array() == 0.0) || (d.values().array() == 1.0)).all());
  for (Eigen::Index j = 1; j < 10; ++j) {
    const double flips = (d.values().col(j) - d.values().col(j - 1)).cwiseAbs().mean();
    EXPECT_NEAR(flips, 0.1, 0.01);
  }
  EXPECT_NEAR(d.values().col(0).mean(), 0.5, 0.02);
}

TEST(BlockDataset, IntraBlockCorrelationHitsTarget) {
  const Dataset d = synthetic::block_dataset(3, 4, 0.9, 20000, 2);
  const Matrix& x = d.values();
  auto corr = [&](Eigen::Index a, Eigen::Index b) {
    const Vector xa = x.col(a).array() - x.col(a).mean();
    const Vector xb = x.col(b).array() - x.col(b).mean();
    return xa.dot(xb) / std::sqrt(xa.squaredNorm() * xb.squaredNorm());
  };
  EXPECT_NEAR(corr(0, 1), 0.9, 0.02);
  EXPECT_NEAR(corr(8, 11), 0.9, 0.02);
  EXPECT_NEAR(corr(0, 4), 0.0, 0.03);
}

TEST(GaussianBlobs, LabelsAndCenters) {
  const Dataset d = synthetic::gaussian_blobs(3000, 5, 3, 4.0, 3);
  EXPECT_EQ(d.num_classes(), 3);
  for (int c = 0; c < 3; ++c) {
    Vector mean = Vector::Zero(5);
    int n = 0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      if (d.labels()[static_cast<std::size_t>(i)] != c) continue;
      mean += d.values().row(i).transpose();
      ++n;
    }
    mean /= n;
    EXPECT_NEAR(mean(c), 4.0, 0.15);
    EXPECT_NEAR(mean((c + 1) % 5), 0.0, 0.15);
  }
}

TEST(TopicCorpus, ShapeNamesLabelsAndDeterminism) {
  synthetic::CorpusConfig cfg;
  cfg.documents = 200;
  cfg.vocabulary = 300;
  const Dataset d = synthetic::topic_corpus(cfg);
  EXPECT_EQ(d.rows(), 200);
  EXPECT_EQ(d.cols(), 300);
  EXPECT_EQ(d.num_classes(), 4);
  EXPECT_EQ(std::set<std::string>(d.feature_names().begin(), d.feature_names().end()).size(), 300u);
  EXPECT_TRUE((d.values().array() >= 0.0).all());
  EXPECT_TRUE((d.values().array() == d.values().array().round()).all());
  EXPECT_GT(d.values().rowwise().sum().minCoeff(), 0.0);
  EXPECT_EQ(synthetic::topic_corpus(cfg).values(), d.values());
  cfg.seed = 1;
  EXPECT_NE(synthetic::topic_corpus(cfg).values(), d.values());
}

TEST(TopicCorpus, RejectsBadShares) {
  synthetic::CorpusConfig cfg;
  cfg.topical = 0.8;
  cfg.confusing = 0.3;
  EXPECT_THROW(synthetic::topic_corpus(cfg), ArgumentError);
}
