#include "jscc/rateopt.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace jscc::rateopt {

namespace {

double binomial(int n, int v) {
  double c = 1.0;
  for (int i = 1; i <= v; ++i) c = c * static_cast<double>(n - v + i) / static_cast<double>(i);
  return c;
}

void check_code(int n, int k, double loss) {
  if (k < 1 || n < k) throw std::invalid_argument("expected_recovered: need n >= k >= 1");
  if (!(loss >= 0.0 && loss <= 1.0)) throw std::invalid_argument("expected_recovered: loss must lie in [0, 1]");
}

// Relative tolerance for comparing objective values.
bool lower(double a, double b) { return a < b - 1e-12 * std::max(1.0, std::abs(b)); }
bool tied(double a, double b) { return !lower(a, b) && !lower(b, a); }

}  // namespace

double expected_recovered(int n, int k, double loss) {
  check_code(n, k, loss);
  double ep = 0.0;
  for (int v = 1; v <= n; ++v) {
    const double pv = binomial(n, v) * std::pow(loss, n - v) * std::pow(1.0 - loss, v);
    ep += v < k ? pv * static_cast<double>(v) * k / n : pv * k;
  }
  // The binomial weights can sum to a hair above 1.
  return std::clamp(ep, 0.0, static_cast<double>(k));
}

double layer_success(int n, int k, double loss) { return expected_recovered(n, k, loss) / k; }

double expected_distortion(const sensitivity::DistortionProfile& profile, std::span<const double> packet_success) {
  if (packet_success.size() != profile.delta_d.size())
    throw std::invalid_argument("expected_distortion: one success probability per packet required");
  double d = profile.d0;
  double prefix = 1.0;
  for (std::size_t i = 0; i < packet_success.size(); ++i) {
    const double q = packet_success[i];
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("expected_distortion: probability outside [0, 1]");
    prefix *= q;
    d -= prefix * profile.delta_d[i];
  }
  return d;
}

void LayerSpec::validate(std::size_t packets) const {
  std::size_t next = 0;
  for (const Layer& l : layers) {
    if (l.first_packet != next) throw std::invalid_argument("LayerSpec: layers must cover consecutive packets");
    if (l.candidates.empty()) throw std::invalid_argument("LayerSpec: empty candidate set");
    for (const auto& c : l.candidates)
      if (c.cost < 0 || c.row_parity < 0 || c.col_parity < 0)
        throw std::invalid_argument("LayerSpec: negative parity or cost");
    next += l.packet_count;
  }
  if (next != packets) throw std::invalid_argument("LayerSpec: layers do not cover every packet");
}

Problem::Problem(const sensitivity::DistortionProfile& profile, const LayerSpec& layers, const SuccessModel& model)
    : profile_(profile), layers_(layers) {
  layers_.validate(profile_.packet_count());
  q_.resize(layers_.layers.size());
  for (std::size_t j = 0; j < layers_.layers.size(); ++j) {
    const Layer& l = layers_.layers[j];
    for (const auto& c : l.candidates) {
      const double q = model(j, c);
      if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("optimize: success model returned a non-probability");
      q_[j].push_back(q);
    }
    layer_of_packet_.insert(layer_of_packet_.end(), l.packet_count, j);
  }
}

double Problem::distortion(std::span<const std::size_t> choice) const {
  double d = profile_.d0;
  double prefix = 1.0;
  for (std::size_t i = 0; i < layer_of_packet_.size(); ++i) {
    const std::size_t j = layer_of_packet_[i];
    prefix *= q_[j][choice[j]];
    d -= prefix * profile_.delta_d[i];
  }
  return d;
}

std::int64_t Problem::cost(std::span<const std::size_t> choice) const {
  std::int64_t c = 0;
  for (std::size_t j = 0; j < choice.size(); ++j) c += level(j, choice[j]).cost;
  return c;
}

std::int64_t Problem::min_cost() const {
  std::int64_t c = 0;
  for (const Layer& l : layers_.layers)
    c += std::min_element(l.candidates.begin(), l.candidates.end(),
                          [](const auto& a, const auto& b) { return a.cost < b.cost; })
             ->cost;
  return c;
}

std::int64_t Problem::max_cost() const {
  std::int64_t c = 0;
  for (const Layer& l : layers_.layers)
    c += std::max_element(l.candidates.begin(), l.candidates.end(),
                          [](const auto& a, const auto& b) { return a.cost < b.cost; })
             ->cost;
  return c;
}

RateVector Problem::make_vector(std::vector<std::size_t> choice) const {
  RateVector r;
  for (std::size_t j = 0; j < choice.size(); ++j) r.levels.push_back(level(j, choice[j]));
  r.total_cost = cost(choice);
  r.expected_distortion = distortion(choice);
  r.choice = std::move(choice);
  return r;
}

RateVector minimize_lagrangian(const Problem& problem, double lambda, int max_rounds) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("minimize_lagrangian: lambda must be >= 0");
  const std::size_t layers = problem.layer_count();
  std::vector<std::size_t> choice(layers);
  for (std::size_t j = 0; j < layers; ++j) choice[j] = std::min<std::size_t>(1, problem.candidate_count(j) - 1);

  int rounds = 0;
  bool converged = false;
  while (rounds < max_rounds) {
    ++rounds;
    bool changed = false;
    for (std::size_t j = 0; j < layers; ++j) {
      const std::size_t current = choice[j];
      std::size_t best = current;
      double best_j = 0.0;
      std::int64_t best_cost = 0;
      for (std::size_t c = 0; c < problem.candidate_count(j); ++c) {
        choice[j] = c;
        const std::int64_t cost = problem.cost(choice);
        const double obj = problem.distortion(choice) + lambda * static_cast<double>(cost);
        // Among equal objectives prefer the cheaper, then the lower index.
        if (c == 0 || lower(obj, best_j) || (tied(obj, best_j) && cost < best_cost)) {
          best = c;
          best_j = obj;
          best_cost = cost;
        }
      }
      choice[j] = best;
      changed |= best != current;
    }
    if (!changed) {
      converged = true;
      break;
    }
  }
  RateVector r = problem.make_vector(std::move(choice));
  r.lambda = lambda;
  r.rounds = rounds;
  r.converged = converged;
  return r;
}

RateVector solve_exact(const Problem& problem, std::int64_t budget) {
  if (problem.min_cost() > budget) throw std::invalid_argument("solve_exact: infeasible budget");
  const std::size_t layers = problem.layer_count();
  const std::int64_t cap = std::min(budget, problem.max_cost());
  const auto width = static_cast<std::size_t>(cap) + 1;

  // value[b]: largest expected reduction from layers j.. with b symbols left.
  std::vector<double> value(width, 0.0), next(width);
  std::vector<char> ok(width, 1), next_ok(width);
  std::vector<std::vector<std::uint32_t>> arg(layers, std::vector<std::uint32_t>(width, 0));
  for (std::size_t j = layers; j-- > 0;) {
    const std::size_t nc = problem.candidate_count(j);
    std::vector<double> own(nc), pass(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      const double q = problem.success(j, c);
      double prefix = 1.0, a = 0.0;
      for (std::size_t t = 0; t < problem.packet_count(j); ++t) {
        prefix *= q;
        a += prefix * problem.delta_d(problem.first_packet(j) + t);
      }
      own[c] = a;
      pass[c] = prefix;
    }
    for (std::size_t b = 0; b < width; ++b) {
      double best = 0.0;
      std::uint32_t best_c = 0;
      bool any = false;
      for (std::size_t c = 0; c < nc; ++c) {
        const std::int64_t w = problem.level(j, c).cost;
        if (w > static_cast<std::int64_t>(b) || !ok[b - static_cast<std::size_t>(w)]) continue;
        const double v = own[c] + pass[c] * value[b - static_cast<std::size_t>(w)];
        // Larger reduction wins; ties go to the cheaper candidate.
        if (!any || lower(best, v) || (tied(v, best) && w < problem.level(j, best_c).cost)) {
          best = v;
          best_c = static_cast<std::uint32_t>(c);
          any = true;
        }
      }
      next[b] = best;
      next_ok[b] = any;
      arg[j][b] = best_c;
    }
    value.swap(next);
    ok.swap(next_ok);
  }

  std::vector<std::size_t> choice(layers);
  std::size_t b = width - 1;
  for (std::size_t j = 0; j < layers; ++j) {
    choice[j] = arg[j][b];
    b -= static_cast<std::size_t>(problem.level(j, choice[j]).cost);
  }
  RateVector r = problem.make_vector(std::move(choice));
  r.converged = true;
  return r;
}

namespace {

bool better_feasible(const RateVector& a, const RateVector& b) {
  if (b.choice.empty()) return true;
  if (lower(a.expected_distortion, b.expected_distortion)) return true;
  return tied(a.expected_distortion, b.expected_distortion) && a.total_cost < b.total_cost;
}

// Steepest single-coordinate descent on D within the budget.
void polish(const Problem& problem, RateVector& r, std::int64_t budget) {
  std::vector<std::size_t> choice = r.choice;
  double d = r.expected_distortion;
  for (int guard = 0; guard < 10000; ++guard) {
    std::size_t best_layer = 0, best_c = 0;
    double best_d = d;
    std::int64_t best_cost = 0;
    bool found = false;
    for (std::size_t j = 0; j < problem.layer_count(); ++j) {
      const std::size_t keep = choice[j];
      for (std::size_t c = 0; c < problem.candidate_count(j); ++c) {
        if (c == keep) continue;
        choice[j] = c;
        const std::int64_t cost = problem.cost(choice);
        if (cost > budget) continue;
        const double cand = problem.distortion(choice);
        if (lower(cand, best_d) || (found && tied(cand, best_d) && cost < best_cost)) {
          if (!lower(cand, d)) continue;
          best_layer = j;
          best_c = c;
          best_d = cand;
          best_cost = cost;
          found = true;
        }
      }
      choice[j] = keep;
    }
    if (!found) break;
    choice[best_layer] = best_c;
    d = best_d;
  }
  const double lambda = r.lambda;
  const int rounds = r.rounds;
  const bool converged = r.converged;
  r = problem.make_vector(std::move(choice));
  r.lambda = lambda;
  r.rounds = rounds;
  r.converged = converged;
}

}  // namespace

RateVector optimize(const sensitivity::DistortionProfile& profile, const LayerSpec& layers,
                    const SuccessModel& model, std::int64_t budget, const OptimizerOptions& opts) {
  const Problem problem(profile, layers, model);
  if (problem.min_cost() > budget)
    throw std::invalid_argument("optimize: budget " + std::to_string(budget) + " is below the minimum cost " +
                                std::to_string(problem.min_cost()));

  RateVector best;
  auto consider = [&](const RateVector& r) {
    if (r.total_cost <= budget && better_feasible(r, best)) best = r;
  };

  const RateVector free = minimize_lagrangian(problem, 0.0, opts.max_rounds);
  consider(free);
  if (free.total_cost > budget) {
    // Grow lambda until the allocation fits, then bisect towards the budget.
    double lo = 0.0;
    double hi = std::max(profile.d0, 1.0) / std::max<double>(1.0, static_cast<double>(budget));
    RateVector at_hi = minimize_lagrangian(problem, hi, opts.max_rounds);
    for (int i = 0; i < 200 && at_hi.total_cost > budget; ++i) {
      lo = hi;
      hi *= 2.0;
      at_hi = minimize_lagrangian(problem, hi, opts.max_rounds);
    }
    consider(at_hi);
    for (int i = 0; i < opts.max_bisections && budget - at_hi.total_cost >= 1; ++i) {
      const double mid = 0.5 * (lo + hi);
      RateVector r = minimize_lagrangian(problem, mid, opts.max_rounds);
      consider(r);
      if (r.total_cost <= budget) {
        hi = mid;
        at_hi = std::move(r);
      } else {
        lo = mid;
      }
    }
  }
  if (best.choice.empty()) {
    // Coordinate descent can stall above the budget; fall back to the cheapest allocation.
    std::vector<std::size_t> cheapest(problem.layer_count());
    for (std::size_t j = 0; j < cheapest.size(); ++j)
      for (std::size_t c = 1; c < problem.candidate_count(j); ++c)
        if (problem.level(j, c).cost < problem.level(j, cheapest[j]).cost) cheapest[j] = c;
    best = problem.make_vector(std::move(cheapest));
  }
  if (opts.polish) polish(problem, best, budget);
  if (opts.exact && problem.layer_count() * static_cast<std::size_t>(std::min(budget, problem.max_cost()) + 1) <=
                        opts.max_exact_states) {
    RateVector exact = solve_exact(problem, budget);
    if (lower(exact.expected_distortion, best.expected_distortion)) {
      exact.lambda = best.lambda;
      exact.rounds = best.rounds;
      exact.refined = true;
      best = std::move(exact);
    }
  }
  return best;
}

void write_rate_csv(std::ostream& out, const RateVector& r) {
  out << "layer,row_parity,col_parity,cost\n";
  for (std::size_t j = 0; j < r.levels.size(); ++j)
    out << j << ',' << r.levels[j].row_parity << ',' << r.levels[j].col_parity << ',' << r.levels[j].cost << '\n';
}

}  // namespace jscc::rateopt
