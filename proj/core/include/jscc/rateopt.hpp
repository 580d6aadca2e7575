#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "jscc/sensitivity.hpp"

namespace jscc::rateopt {

/// Expected number of the k systematic source units recovered from an (n, k)
/// erasure code when each of the n units is lost independently with
/// probability `loss`: all k if at least k arrive, otherwise on average v*k/n
/// for v arrivals.
double expected_recovered(int n, int k, double loss);

/// Q = expected_recovered / k.
double layer_success(int n, int k, double loss);

/// D_0 - sum_i (prod_{m <= i} q_m) Delta D_i with one success probability per packet.
double expected_distortion(const sensitivity::DistortionProfile& profile, std::span<const double> packet_success);

/// One protection option for a layer: parity symbols per row / per column of
/// every packet grid in the layer, and the layer's total symbol cost.
struct ProtectionLevel {
  int row_parity = 0;
  int col_parity = 0;
  std::int64_t cost = 0;

  friend bool operator==(const ProtectionLevel&, const ProtectionLevel&) = default;
};

struct Layer {
  std::size_t first_packet = 0;
  std::size_t packet_count = 0;
  std::vector<ProtectionLevel> candidates;
};

/// Layers cover consecutive packets in transmission order.
struct LayerSpec {
  std::vector<Layer> layers;

  void validate(std::size_t packets) const;
};

/// Success probability Q_j of layer `layer` when protected at `level`.
using SuccessModel = std::function<double(std::size_t layer, const ProtectionLevel& level)>;

struct RateVector {
  std::vector<std::size_t> choice;  // candidate index per layer
  std::vector<ProtectionLevel> levels;
  std::int64_t total_cost = 0;
  double expected_distortion = 0.0;
  double lambda = 0.0;
  int rounds = 0;
  bool converged = false;
  bool refined = false;  // the exact stage improved on the Lagrangian result
};

struct OptimizerOptions {
  int max_rounds = 100;
  int max_bisections = 64;
  /// Constrained single-coordinate descent on D after the Lagrangian search.
  bool polish = true;
  /// Dynamic program over (layer, remaining budget), exact for integer costs.
  /// Skipped when layers * (budget + 1) exceeds max_exact_states.
  bool exact = true;
  std::size_t max_exact_states = 50'000'000;
};

/// Precomputed Q table and cost/distortion evaluation for a fixed problem.
class Problem {
 public:
  Problem(const sensitivity::DistortionProfile& profile, const LayerSpec& layers, const SuccessModel& model);

  std::size_t layer_count() const { return layers_.layers.size(); }
  std::size_t candidate_count(std::size_t layer) const { return layers_.layers[layer].candidates.size(); }
  const ProtectionLevel& level(std::size_t layer, std::size_t c) const { return layers_.layers[layer].candidates[c]; }
  double success(std::size_t layer, std::size_t c) const { return q_[layer][c]; }

  double distortion(std::span<const std::size_t> choice) const;
  std::int64_t cost(std::span<const std::size_t> choice) const;
  std::int64_t min_cost() const;
  std::int64_t max_cost() const;
  std::size_t first_packet(std::size_t layer) const { return layers_.layers[layer].first_packet; }
  std::size_t packet_count(std::size_t layer) const { return layers_.layers[layer].packet_count; }
  double delta_d(std::size_t packet) const { return profile_.delta_d[packet]; }

  RateVector make_vector(std::vector<std::size_t> choice) const;

 private:
  sensitivity::DistortionProfile profile_;
  LayerSpec layers_;
  std::vector<std::vector<double>> q_;
  std::vector<std::size_t> layer_of_packet_;
};

/// Minimizes expected distortion subject to total cost <= budget: for fixed
/// lambda the Lagrangian D + lambda * cost is minimized one layer at a time in
/// round-robin order starting from candidate 1 of every layer, and lambda is
/// bisected until the cost meets the budget. The Lagrangian relaxation can
/// miss the constrained optimum when costs are discrete, so the result is then
/// polished and checked against an exact budget-indexed search. Throws std::invalid_argument if
/// even the cheapest allocation exceeds the budget.
RateVector optimize(const sensitivity::DistortionProfile& profile, const LayerSpec& layers,
                    const SuccessModel& model, std::int64_t budget, const OptimizerOptions& opts = {});

/// Alternating-variables minimization of the Lagrangian for one lambda.
RateVector minimize_lagrangian(const Problem& problem, double lambda, int max_rounds = 100);

/// Exact minimum of D subject to cost <= budget. Uses the nested form
/// D = D_0 - (A_1 + P_1 (A_2 + P_2 (...))) where A_j is the layer's own
/// expected reduction and P_j its all-packets success probability.
RateVector solve_exact(const Problem& problem, std::int64_t budget);

void write_rate_csv(std::ostream& out, const RateVector& r);

}  // namespace jscc::rateopt
