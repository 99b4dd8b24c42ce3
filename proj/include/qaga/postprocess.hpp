#pragma once

#include "qaga/ising.hpp"

namespace qaga {

/// Reconstruction choices for multi-qubit correction. Pairing order is the
/// SampleSet order; on a zero energy difference the first parent's component
/// values are kept. Both choices are fixed so results are deterministic.
struct MqcPolicy {
  enum class TieBreak { KeepFirstParent };
  TieBreak tie_break = TieBreak::KeepFirstParent;
};

/// Recombines two samples: the disagreement set splits into connected
/// components of the coupling graph, and each component independently takes
/// whichever parent's values give lower energy. Offspring energy is never
/// above either parent's.
Sample mqc_pair(const IsingModel& model, const Sample& a, const Sample& b,
                const MqcPolicy& policy = {});

/// Sequential tournament: folds mqc_pair over the set in order.
/// Result energy <= the minimum energy in the set.
Sample mqc_reduce(const IsingModel& model, const SampleSet& set,
                  const MqcPolicy& policy = {});

/// Single-qubit correction: greedy steepest single-spin descent (ties to the
/// smallest label) until no flip lowers the energy.
Sample sqc(const IsingModel& model, const Sample& z);

}  // namespace qaga
