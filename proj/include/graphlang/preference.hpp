#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "graphlang/parallel.hpp"

namespace graphlang {

/// Sequence log-probabilities of a chosen/rejected pair under the policy and
/// the frozen reference model.
struct LogProbQuad {
  double policy_chosen = 0.0;
  double policy_rejected = 0.0;
  double ref_chosen = 0.0;
  double ref_rejected = 0.0;
};

struct SequenceScore {
  double nll = 0.0;
  double ppl = 1.0;
};

/// nll = -mean(token log-probs), ppl = exp(nll). Throws EmptySequence.
SequenceScore sequence_nll(const std::vector<double>& token_logprobs);

/// delta = beta * ((pc - rc) - (pr - rr)); the preference probability of
/// chosen over rejected is sigmoid(delta).
double bt_margin(const LogProbQuad& q, double beta);

double sigmoid(double x);
/// log(1 + exp(x)) without overflow.
double softplus(double x);

double preference_probability(const LogProbQuad& q, double beta);

/// Mean of -log sigmoid(delta) over the batch. Throws EmptyBatch.
double dpo_loss(const std::vector<LogProbQuad>& batch, double beta, Exec exec = Exec::parallel);

struct DpoGrad {
  double policy_chosen = 0.0;
  double policy_rejected = 0.0;
};

/// d loss / d policy_chosen = -beta * sigmoid(-delta) / N and the negation
/// for policy_rejected.
std::vector<DpoGrad> dpo_grad(const std::vector<LogProbQuad>& batch, double beta, Exec exec = Exec::parallel);

using TokenPair = std::pair<std::vector<double>, std::vector<double>>;

/// Fraction of pairs with ppl(chosen) < ppl(rejected); ties are wrong.
/// Throws EmptyInput.
double preference_accuracy(const std::vector<TokenPair>& pairs, Exec exec = Exec::parallel);

}  // namespace graphlang
