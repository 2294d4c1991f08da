#pragma once

#include <cstdint>
#include <vector>

#include "pucorrect/losses.hpp"
#include "pucorrect/model.hpp"

namespace pucorrect {

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 10;
  int batch_size = 100;
  double l2_lambda = 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
};

/// The mini-batch visit order for one epoch. A pure function of
/// (n, seed, epoch): the shuffle is seed-keyed, never derived from the data,
/// so identical seeds give identical batch sequences.
std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed, int epoch);

/// Deterministic mini-batch subgradient descent on
///   risk(spec) + l2_lambda/2 ||w||^2   (bias unregularised),
/// from a zero-initialised model. After each epoch the full-data objective is
/// checked; an epoch that raised it is rolled back and retried at half the
/// step size (floor 1e-8, then stop), so the final training risk never
/// exceeds the initial one. Throws if a non-finite value appears.
LinearModel train(const Matrix& features, const std::vector<LabelState>& labels,
                  const RiskAux& aux, const RiskSpec& spec, const TrainConfig& config);

}  // namespace pucorrect
