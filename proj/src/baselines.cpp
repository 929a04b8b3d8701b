#include "vqt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqt/rng.hpp"

namespace vqt::baselines {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

void validate_spsa(const SpsaConfig& cfg) {
  if (cfg.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(cfg.a_gain > 0.0) || !(cfg.c_perturb > 0.0))
    throw std::invalid_argument("gains must be positive");
  if (cfg.calibration_samples < 0)
    throw std::invalid_argument("calibration sample count must be >= 0");
}

void validate_memetic(const MemeticConfig& cfg) {
  if (cfg.generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (cfg.population < 2) throw std::invalid_argument("population must be >= 2");
  if (cfg.tournament < 1 || cfg.tournament > cfg.population)
    throw std::invalid_argument("tournament size out of range");
  if (cfg.mutation_prob < 0.0 || cfg.mutation_prob > 1.0)
    throw std::invalid_argument("mutation probability out of range");
  if (!(cfg.mutation_sigma > 0.0) || !(cfg.local_step > 0.0))
    throw std::invalid_argument("mutation sigma and local step must be positive");
  if (cfg.local_search_passes < 0)
    throw std::invalid_argument("local search passes must be >= 0");
}

}  // namespace

double mse_loss(const sv::ParamCircuit& circuit, const std::vector<double>& angles,
                const sv::EncodedDataset& data, const sv::ReadoutSpec& readout) {
  if (data.inputs.empty()) throw std::invalid_argument("empty dataset");
  const long n = static_cast<long>(data.inputs.size());
  // Per-record squared errors are computed in parallel but summed in
  // record order, so the result is bit-identical for any worker count.
  std::vector<double> sq(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double p = sv::class1_probability(
        sv::apply(circuit, angles, data.inputs[i]), readout);
    const double diff = static_cast<double>(data.labels[i]) - p;
    sq[i] = diff * diff;
  }
  double total = 0.0;
  for (long i = 0; i < n; ++i) total += sq[i];
  return total / static_cast<double>(n);
}

SpsaResult spsa_minimize(const Objective& objective, std::vector<double> start,
                         const SpsaConfig& cfg) {
  validate_spsa(cfg);
  const int dim = static_cast<int>(start.size());
  if (dim < 1) throw std::invalid_argument("empty start point");

  std::mt19937_64 eng = rng::make_engine(cfg.seed, 0x5b5aULL);
  SpsaResult result;

  const double big_a = 0.1 * cfg.iterations;
  const double c = cfg.c_perturb;
  double a = cfg.a_gain;

  if (cfg.calibration_samples > 0) {
    // Estimate the loss response to c-sized perturbations and scale `a`
    // so the expected first step has magnitude a_gain.
    double response = 0.0;
    std::vector<double> plus(dim), minus(dim);
    for (int s = 0; s < cfg.calibration_samples; ++s) {
      for (int i = 0; i < dim; ++i) {
        const double delta = (eng() & 1) ? 1.0 : -1.0;
        plus[i] = start[i] + c * delta;
        minus[i] = start[i] - c * delta;
      }
      response += std::abs(objective(plus) - objective(minus)) / (2.0 * c);
      result.loss_evals += 2;
    }
    response /= cfg.calibration_samples;
    a = cfg.a_gain * std::pow(big_a + 1.0, 0.602) / std::max(response, 1e-12);
  }

  std::vector<double> x = std::move(start);
  std::vector<double> delta(dim), plus(dim), minus(dim);
  for (int k = 0; k < cfg.iterations; ++k) {
    const double ak = a / std::pow(k + 1.0 + big_a, 0.602);
    const double ck = c / std::pow(k + 1.0, 0.101);
    for (int i = 0; i < dim; ++i) {
      delta[i] = (eng() & 1) ? 1.0 : -1.0;
      plus[i] = x[i] + ck * delta[i];
      minus[i] = x[i] - ck * delta[i];
    }
    const double fp = objective(plus);
    const double fm = objective(minus);
    result.loss_evals += 2;
    for (int i = 0; i < dim; ++i)
      x[i] -= ak * (fp - fm) / (2.0 * ck * delta[i]);
    result.trace.push_back(0.5 * (fp + fm));
  }
  result.point = std::move(x);
  return result;
}

TrainResult spsa_train(const sv::ParamCircuit& circuit, const sv::EncodedDataset& train,
                       const sv::ReadoutSpec& readout, const SpsaConfig& cfg) {
  std::mt19937_64 eng = rng::make_engine(cfg.seed, 0x57a7ULL);
  std::vector<double> start(circuit.num_angles);
  for (double& v : start) v = rng::uniform(eng, 0.0, kTwoPi);

  const Objective objective = [&](const std::vector<double>& angles) {
    return mse_loss(circuit, angles, train, readout);
  };
  SpsaResult opt = spsa_minimize(objective, std::move(start), cfg);

  TrainResult out;
  out.angles = std::move(opt.point);
  out.taccuracy = sv::accuracy(circuit, out.angles, train, readout);
  out.loss = mse_loss(circuit, out.angles, train, readout);
  out.evaluations = opt.loss_evals;
  out.trace = std::move(opt.trace);
  return out;
}

namespace {

// Greedy fixed-step coordinate descent around the elite individual.
void refine_elite(const FitnessFn& fitness,
                  const std::vector<std::pair<double, double>>& bounds,
                  const MemeticConfig& cfg, std::vector<double>& elite,
                  Fitness& elite_fit, long& evaluations) {
  const int dim = static_cast<int>(bounds.size());
  for (int pass = 0; pass < cfg.local_search_passes; ++pass) {
    for (int g = 0; g < dim; ++g) {
      const double step = cfg.local_step * (bounds[g].second - bounds[g].first);
      for (const double dir : {+1.0, -1.0}) {
        // Walk while strictly improving, staying inside the bounds.
        for (int moves = 0; moves < 100; ++moves) {
          const double next = elite[g] + dir * step;
          if (next < bounds[g].first || next > bounds[g].second) break;
          std::vector<double> probe = elite;
          probe[g] = next;
          const Fitness f = fitness(probe);
          ++evaluations;
          if (!fitter(f, elite_fit)) break;
          elite[g] = next;
          elite_fit = f;
        }
      }
    }
  }
}

}  // namespace

MemeticResult memetic_optimize(const FitnessFn& fitness,
                               const std::vector<std::pair<double, double>>& bounds,
                               const MemeticConfig& cfg) {
  validate_memetic(cfg);
  const int dim = static_cast<int>(bounds.size());
  if (dim < 1) throw std::invalid_argument("empty bounds");
  for (const auto& [lo, hi] : bounds)
    if (!(hi > lo)) throw std::invalid_argument("degenerate gene bounds");

  std::mt19937_64 eng = rng::make_engine(cfg.seed, 0x3e3eULL);
  MemeticResult result;

  std::vector<std::vector<double>> pop(cfg.population, std::vector<double>(dim));
  for (auto& ind : pop)
    for (int g = 0; g < dim; ++g)
      ind[g] = rng::uniform(eng, bounds[g].first, bounds[g].second);

  std::vector<Fitness> fits(cfg.population);
  const auto evaluate_population = [&]() {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < cfg.population; ++i) fits[i] = fitness(pop[i]);
    result.evaluations += cfg.population;
  };
  const auto best_index = [&]() {
    int best = 0;
    for (int i = 1; i < cfg.population; ++i)
      if (fitter(fits[i], fits[best])) best = i;
    return best;
  };
  const auto tournament_pick = [&]() {
    int winner = static_cast<int>(rng::uniform_index(eng, cfg.population));
    for (int t = 1; t < cfg.tournament; ++t) {
      const int rival = static_cast<int>(rng::uniform_index(eng, cfg.population));
      if (fitter(fits[rival], fits[winner])) winner = rival;
    }
    return winner;
  };

  evaluate_population();
  int elite = best_index();
  refine_elite(fitness, bounds, cfg, pop[elite], fits[elite], result.evaluations);
  result.trace.push_back(fits[elite].primary);

  for (int gen = 1; gen < cfg.generations; ++gen) {
    std::vector<std::vector<double>> next;
    next.reserve(cfg.population);
    next.push_back(pop[elite]);  // elitism

    while (static_cast<int>(next.size()) < cfg.population) {
      const auto& pa = pop[tournament_pick()];
      const auto& pb = pop[tournament_pick()];
      std::vector<double> child(dim);
      for (int g = 0; g < dim; ++g)
        child[g] = rng::uniform01(eng) < 0.5 ? pa[g] : pb[g];
      for (int g = 0; g < dim; ++g) {
        if (rng::uniform01(eng) >= cfg.mutation_prob) continue;
        const double range = bounds[g].second - bounds[g].first;
        child[g] = std::clamp(child[g] + cfg.mutation_sigma * range * rng::normal(eng),
                              bounds[g].first, bounds[g].second);
      }
      next.push_back(std::move(child));
    }

    pop = std::move(next);
    evaluate_population();
    elite = best_index();
    refine_elite(fitness, bounds, cfg, pop[elite], fits[elite], result.evaluations);
    result.trace.push_back(fits[elite].primary);
  }

  result.best = pop[elite];
  result.best_fitness = fits[elite];
  return result;
}

MemeticResult memetic_minimize(const Objective& objective,
                               const std::vector<std::pair<double, double>>& bounds,
                               const MemeticConfig& cfg) {
  const FitnessFn fitness = [&](const std::vector<double>& x) {
    const double v = objective(x);
    return Fitness{-v, v};
  };
  return memetic_optimize(fitness, bounds, cfg);
}

TrainResult memetic_train(const sv::ParamCircuit& circuit,
                          const sv::EncodedDataset& train,
                          const sv::ReadoutSpec& readout, const MemeticConfig& cfg) {
  const FitnessFn fitness = [&](const std::vector<double>& angles) {
    return Fitness{sv::accuracy_serial(circuit, angles, train, readout),
                   mse_loss(circuit, angles, train, readout)};
  };
  const std::vector<std::pair<double, double>> bounds(circuit.num_angles,
                                                      {0.0, kTwoPi});
  MemeticResult opt = memetic_optimize(fitness, bounds, cfg);

  TrainResult out;
  out.angles = std::move(opt.best);
  out.taccuracy = opt.best_fitness.primary;
  out.loss = opt.best_fitness.secondary;
  out.evaluations = opt.evaluations;
  out.trace = std::move(opt.trace);
  return out;
}

}  // namespace vqt::baselines
