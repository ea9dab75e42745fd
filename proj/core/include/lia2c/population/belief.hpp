#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lia2c/population/configuration.hpp"
#include "lia2c/population/types.hpp"

namespace lia2c::pop {

/// A candidate model of another agent: an action distribution for every
/// public observation plus an opaque history tag.
struct CandidateModel {
  std::vector<ActionDistribution> policy;
  std::string history;
};

struct AgentBelief {
  std::vector<CandidateModel> models;
  std::vector<double> probabilities;
};

/// Independent per-agent beliefs over candidate models.
struct ModelBelief {
  std::vector<AgentBelief> agents;
};

/// W0(a0, true counts, observed counts) -> likelihood.
using PrivateObservationFunction =
    std::function<double(int self_action, const Configuration& true_counts,
                         const Configuration& observed)>;

/// Likelihood of `observed` given `true_counts` when every agent's action is
/// reported truthfully with probability 1 - delta and otherwise replaced by
/// one of the other actions uniformly at random.
double misreport_likelihood(const Configuration& true_counts, const Configuration& observed,
                            double delta);

PrivateObservationFunction uniform_misreport_w0(double delta);

/// Filters each tracked agent's model belief on one step of evidence.
///
/// For agent j, the new mass of model m is proportional to
///   b(m) * sum_{a_j} Pr(a_j | m, o) * sum_C Pr(C | a_j, b_{-j}) * W0(a0, C, w)
/// where C is the configuration of all tracked agents, built from j's action
/// and the configuration distribution of the others' belief-marginal
/// actions. Throws DegenerateEvidenceError if every model gets zero mass.
ModelBelief belief_update_bu(const ModelBelief& belief, int self_action, int public_obs,
                             const PrivateObservation& obs,
                             const PrivateObservationFunction& w0);

}  // namespace lia2c::pop
