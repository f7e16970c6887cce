#include "graphlang/preference.hpp"

#include <cmath>
#include <string>

#include "graphlang/error.hpp"

namespace graphlang {
namespace {

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be a positive finite number");
}

void check_quad(const LogProbQuad& q) {
  for (double v : {q.policy_chosen, q.policy_rejected, q.ref_chosen, q.ref_rejected}) {
    if (!std::isfinite(v)) throw InvalidArgument("log-probabilities must be finite");
  }
}

}  // namespace

SequenceScore sequence_nll(const std::vector<double>& token_logprobs) {
  if (token_logprobs.empty()) throw EmptySequence("token log-probability sequence is empty");
  for (double v : token_logprobs) {
    if (!std::isfinite(v)) throw InvalidArgument("token log-probabilities must be finite");
  }
  const double nll = -pairwise_sum(token_logprobs) / static_cast<double>(token_logprobs.size());
  return {nll, std::exp(nll)};
}

double bt_margin(const LogProbQuad& q, double beta) {
  check_beta(beta);
  check_quad(q);
  return beta * ((q.policy_chosen - q.ref_chosen) - (q.policy_rejected - q.ref_rejected));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double preference_probability(const LogProbQuad& q, double beta) { return sigmoid(bt_margin(q, beta)); }

double dpo_loss(const std::vector<LogProbQuad>& batch, double beta, Exec exec) {
  if (batch.empty()) throw EmptyBatch("DPO batch is empty");
  check_beta(beta);
  auto terms = map_indices<double>(batch.size(), exec, [&](std::size_t i) {
    return softplus(-bt_margin(batch[i], beta));
  });
  return pairwise_sum(terms) / static_cast<double>(batch.size());
}

std::vector<DpoGrad> dpo_grad(const std::vector<LogProbQuad>& batch, double beta, Exec exec) {
  if (batch.empty()) throw EmptyBatch("DPO batch is empty");
  check_beta(beta);
  const double n = static_cast<double>(batch.size());
  return map_indices<DpoGrad>(batch.size(), exec, [&](std::size_t i) {
    const double g = beta * sigmoid(-bt_margin(batch[i], beta)) / n;
    return DpoGrad{-g, g};
  });
}

double preference_accuracy(const std::vector<TokenPair>& pairs, Exec exec) {
  if (pairs.empty()) throw EmptyInput("no preference pairs");
  auto hits = map_indices<double>(pairs.size(), exec, [&](std::size_t i) {
    return sequence_nll(pairs[i].first).ppl < sequence_nll(pairs[i].second).ppl ? 1.0 : 0.0;
  });
  return pairwise_sum(hits) / static_cast<double>(pairs.size());
}

}  // namespace graphlang
