#include <gtest/gtest.h>

#include <sstream>

#include "trfnet/dae.hpp"
#include "trfnet/error.hpp"
#include "trfnet/synthetic.hpp"

using namespace trfnet;

namespace {

ConnectivityMask full_mask(Eigen::Index h, Eigen::Index v) {
  ConnectivityMask m;
  m.a = Matrix::Ones(h, v);
  m.row_kind.assign(static_cast<std::size_t>(h), RowKind::global);
  return m;
}

ConnectivityMask chain_mask(Eigen::Index v) {
  ConnectivityMask m;
  m.a = Matrix::Zero(v, v);
  for (Eigen::Index i = 0; i < v; ++i) {
    m.a(i, i) = 1.0;
    if (i + 1 < v) m.a(i, i + 1) = 1.0;
  }
  m.row_kind.assign(static_cast<std::size_t>(v), RowKind::trf);
  return m;
}

}  // namespace

TEST(Corrupt, MaskingRateZeroAndOne) {
  Rng rng(1);
  const Matrix x = Matrix::Random(10, 10);
  CorruptionConfig c;
  c.rate = 0.0;
  EXPECT_EQ(corrupt(x, c, rng), x);
  c.rate = 1.0;
  EXPECT_TRUE((corrupt(x, c, rng).array() == 0.0).all());
}

TEST(Corrupt, MaskingZeroFraction) {
  Rng rng(2);
  const Matrix x = Matrix::Ones(100, 1000);
  CorruptionConfig c;
  c.rate = 0.3;
  const Matrix y = corrupt(x, c, rng);
  EXPECT_NEAR(static_cast<double>((y.array() == 0.0).count()) / 1e5, 0.3, 0.01);
}

TEST(Corrupt, GaussianNoiseStd) {
  Rng rng(3);
  const Matrix x = Matrix::Zero(200, 500);
  CorruptionConfig c;
  c.kind = CorruptionConfig::Kind::gaussian_additive;
  c.rate = 0.2;
  const Matrix y = corrupt(x, c, rng);
  const double sd = std::sqrt(y.array().square().mean());
  EXPECT_NEAR(sd, 0.2, 0.005);
}

TEST(Corrupt, ConfigValidation) {
  CorruptionConfig c;
  c.rate = 1.2;
  EXPECT_THROW(c.validate(), ArgumentError);
  c.kind = CorruptionConfig::Kind::gaussian_additive;
  c.rate = -0.1;
  EXPECT_THROW(c.validate(), ArgumentError);
  EXPECT_EQ(parse_corruption_kind(to_string(CorruptionConfig::Kind::gaussian_additive)),
            CorruptionConfig::Kind::gaussian_additive);
}

TEST(Corrupt, AutomaticChoice) {
  const Dataset counts(Matrix::Ones(3, 3));
  EXPECT_EQ(CorruptionConfig::automatic(counts, 0).kind, CorruptionConfig::Kind::masking);
  const Dataset real(-Matrix::Ones(3, 3));
  EXPECT_EQ(CorruptionConfig::automatic(real, 0).kind, CorruptionConfig::Kind::gaussian_additive);
  EXPECT_EQ(CorruptionConfig::automatic(real, 0).rate, 0.2);
}

TEST(TrainDae, LossDecreasesAndLogHasOneEntryPerEpoch) {
  const Dataset d = synthetic::markov_chain(12, 400, 0.1, 5);
  CorruptionConfig c;
  c.seed = 6;
  DaeHyper h;
  h.epochs = 15;
  h.batch_size = 32;
  h.seed = 7;
  const TwoLayerModel m = train_dae(chain_mask(12), d, c, h);
  ASSERT_EQ(m.training_log.size(), 15u);
  EXPECT_LT(m.training_log.back(), m.training_log.front());
  EXPECT_EQ(m.family, LossFamily::bernoulli);
  EXPECT_TRUE(m.layer.mask_holds());
  EXPECT_EQ(m.layer.activation, Activation::sigmoid);
}

TEST(TrainDae, IdentityCapableMaskLearnsToCopy) {
  const Dataset d = synthetic::block_dataset(4, 2, 0.2, 300, 8);
  CorruptionConfig c;
  c.rate = 0.0;
  DaeHyper h;
  h.epochs = 300;
  h.batch_size = 300;
  h.adam.step_size = 0.05;
  ConnectivityMask diag;
  diag.a = Matrix::Identity(8, 8);
  diag.row_kind.assign(8, RowKind::trf);
  const TwoLayerModel m = train_dae(diag, d, c, h);
  EXPECT_LT(m.training_log.back(), 0.05 * m.training_log.front());
}

TEST(TrainDae, MaskedWeightsStayZero) {
  const Dataset d = synthetic::markov_chain(10, 200, 0.2, 9);
  CorruptionConfig c;
  DaeHyper h;
  h.epochs = 5;
  const TwoLayerModel m = train_dae(chain_mask(10), d, c, h);
  EXPECT_EQ(((m.layer.mask.array() == 0.0) && (m.layer.weights.array() != 0.0)).count(), 0);
}

TEST(TrainDae, DeterministicGivenSeeds) {
  const Dataset d = synthetic::markov_chain(10, 200, 0.2, 10);
  CorruptionConfig c;
  c.seed = 3;
  DaeHyper h;
  h.epochs = 4;
  h.seed = 4;
  const TwoLayerModel a = train_dae(chain_mask(10), d, c, h);
  const TwoLayerModel b = train_dae(chain_mask(10), d, c, h);
  EXPECT_EQ(a.layer.weights, b.layer.weights);
  EXPECT_EQ(a.training_log, b.training_log);
  h.seed = 5;
  EXPECT_NE(train_dae(chain_mask(10), d, c, h).layer.weights, a.layer.weights);
}

TEST(TrainDae, FamilyDataMismatch) {
  const Dataset d(Matrix::Constant(5, 3, 2.0));
  DaeHyper h;
  h.family = LossFamily::bernoulli;
  EXPECT_THROW(train_dae(full_mask(2, 3), d, CorruptionConfig{}, h), DomainError);
  EXPECT_EQ(default_family(d), LossFamily::gaussian);
  EXPECT_EQ(default_family(Dataset(Matrix::Constant(5, 3, 0.5))), LossFamily::bernoulli);
}

TEST(TrainDae, WidthMismatch) {
  const Dataset d(Matrix::Zero(5, 3));
  EXPECT_THROW(train_dae(full_mask(2, 4), d, CorruptionConfig{}, DaeHyper{}), ShapeError);
}

TEST(TrainDae, HyperValidation) {
  DaeHyper h;
  h.epochs = 0;
  EXPECT_THROW(h.validate(), ArgumentError);
  h.epochs = 1;
  h.batch_size = 0;
  EXPECT_THROW(h.validate(), ArgumentError);
}

TEST(Project, ZeroWeightsGiveHalfAndBinaryZero) {
  MaskedLayer l;
  l.mask = Matrix::Ones(3, 4);
  l.weights = Matrix::Zero(3, 4);
  l.bias_hidden = Vector::Zero(3);
  l.bias_visible = Vector::Zero(4);
  const Projection p = project(l, Dataset(Matrix::Random(6, 4)));
  EXPECT_TRUE((p.probabilities.values().array() == 0.5).all());
  EXPECT_TRUE((p.binary.values().array() == 0).all());
  EXPECT_EQ(p.probabilities.cols(), 3);
}

TEST(Project, ThresholdAtHalf) {
  MaskedLayer l;
  l.mask = Matrix::Ones(2, 2);
  l.weights = Matrix::Zero(2, 2);
  l.bias_hidden = (Vector(2) << std::log(0.7 / 0.3), -1.0).finished();
  l.bias_visible = Vector::Zero(2);
  const Projection p = project(l, Dataset(Matrix::Zero(1, 2)));
  EXPECT_NEAR(p.probabilities.values()(0, 0), 0.7, 1e-12);
  EXPECT_EQ(p.binary.values()(0, 0), 1);
  EXPECT_EQ(p.binary.values()(0, 1), 0);
}

TEST(Project, UsesSigmoidEvenForReluLayers) {
  MaskedLayer l;
  l.mask = Matrix::Ones(2, 2);
  l.weights = Matrix::Zero(2, 2);
  l.bias_hidden = Vector::Constant(2, -3.0);
  l.bias_visible = Vector::Zero(2);
  l.activation = Activation::relu;
  const Projection p = project(l, Dataset(Matrix::Zero(2, 2)));
  EXPECT_GT(p.probabilities.values()(0, 0), 0.0);
  EXPECT_LT(p.probabilities.values()(0, 0), 1.0);
}

TEST(Project, KeepsLabels) {
  const Dataset d(Matrix::Zero(2, 2), {}, {0, 1});
  MaskedLayer l;
  l.mask = Matrix::Ones(2, 2);
  l.weights = Matrix::Zero(2, 2);
  l.bias_hidden = Vector::Zero(2);
  l.bias_visible = Vector::Zero(2);
  EXPECT_EQ(project(l, d).probabilities.labels(), d.labels());
}

TEST(TrainingLog, Csv) {
  TwoLayerModel m;
  m.training_log = {0.5, 0.25};
  std::ostringstream out;
  write_training_log(m, out);
  EXPECT_EQ(out.str(), "epoch,mean_loss\n1,0.5\n2,0.25\n");
}
