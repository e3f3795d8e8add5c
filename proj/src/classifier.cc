#include "mlqa/classifier.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "mlqa/error.h"
#include "mlqa/random.h"

namespace mlqa {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + e^z) without overflow.
double log1p_exp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double linear(std::span<const double> params, std::span<const double> x) {
  double z = params[0];
  for (std::size_t k = 0; k < x.size(); ++k) z += params[k + 1] * x[k];
  return z;
}

void check_params(const LogisticProblem& problem,
                  std::span<const double> params) {
  if (params.size() != problem.dim + 1) {
    throw Error("parameter vector has " + std::to_string(params.size()) +
                " entries, expected " + std::to_string(problem.dim + 1));
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

double regularized_log_likelihood(const LogisticProblem& problem,
                                  std::span<const double> params, double l2) {
  check_params(problem, params);
  double ll = 0.0;
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    const double z = linear(params, problem.row(i));
    ll += (problem.y[i] ? z : 0.0) - log1p_exp(z);
  }
  double penalty = 0.0;
  for (std::size_t k = 1; k < params.size(); ++k) {
    penalty += params[k] * params[k];
  }
  return ll - 0.5 * l2 * penalty;
}

std::vector<double> regularized_gradient(const LogisticProblem& problem,
                                         std::span<const double> params,
                                         double l2) {
  check_params(problem, params);
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    const auto x = problem.row(i);
    const double residual = (problem.y[i] ? 1.0 : 0.0) - sigmoid(linear(params, x));
    grad[0] += residual;
    for (std::size_t k = 0; k < x.size(); ++k) grad[k + 1] += residual * x[k];
  }
  for (std::size_t k = 1; k < params.size(); ++k) grad[k] -= l2 * params[k];
  return grad;
}

LogisticFit fit_logistic(const LogisticProblem& problem,
                         const TrainerConfig& config) {
  const double l2 = config.l2;
  LogisticFit fit;
  fit.params.assign(problem.dim + 1, 0.0);
  double f = regularized_log_likelihood(problem, fit.params, l2);
  std::vector<double> g = regularized_gradient(problem, fit.params, l2);

  // 1/L for L a Lipschitz bound of the gradient; always accepted.
  double lipschitz = l2;
  for (std::size_t i = 0; i < problem.rows(); ++i) {
    double sq = 1.0;
    for (double v : problem.row(i)) sq += v * v;
    lipschitz += 0.25 * sq;
  }
  double step = 1.0 / lipschitz;

  constexpr double kArmijo = 1e-4;
  std::vector<double> trial(fit.params.size());
  while (fit.iterations < config.max_iterations) {
    const double gnorm2 = dot(g, g);
    if (std::sqrt(gnorm2) <= config.tolerance) {
      fit.converged = true;
      break;
    }
    const double noise = 1e-13 * (1.0 + std::fabs(f));
    double f_trial = f;
    bool accepted = false;
    while (step > 1e-30) {
      for (std::size_t k = 0; k < trial.size(); ++k) {
        trial[k] = fit.params[k] + step * g[k];
      }
      f_trial = regularized_log_likelihood(problem, trial, l2);
      if (f_trial >= f + kArmijo * step * gnorm2 - noise) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    ++fit.iterations;
    std::vector<double> g_trial = regularized_gradient(problem, trial, l2);
    // Barzilai-Borwein trial step for the next iteration.
    double ss = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < trial.size(); ++k) {
      const double s = trial[k] - fit.params[k];
      const double y = g_trial[k] - g[k];
      ss += s * s;
      sy += s * y;
    }
    step = sy < 0.0 ? ss / -sy : 2.0 * step;
    fit.params.swap(trial);
    g.swap(g_trial);
    f = f_trial;
  }
  if (!fit.converged && std::sqrt(dot(g, g)) <= config.tolerance) {
    fit.converged = true;
  }
  return fit;
}

std::vector<std::vector<std::size_t>> partition_balanced(
    std::span<const TrainingExample> examples, std::uint64_t seed) {
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    (examples[i].label ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw Error("balanced partition needs at least one positive and one "
                "negative example");
  }
  Rng rng(seed);
  rng.shuffle(negatives);
  const std::size_t count =
      (negatives.size() + positives.size() - 1) / positives.size();
  const std::size_t base = negatives.size() / count;
  const std::size_t extra = negatives.size() % count;
  std::vector<std::vector<std::size_t>> subsets;
  std::size_t next = 0;
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<std::size_t> subset = positives;
    const std::size_t size = base + (s < extra ? 1 : 0);
    subset.insert(subset.end(), negatives.begin() + static_cast<long>(next),
                  negatives.begin() + static_cast<long>(next + size));
    next += size;
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

EnsembleModel train_ensemble(std::span<const TrainingExample> examples,
                             const TrainerConfig& config) {
  if (examples.empty()) throw Error("no training examples");
  const auto& mask = examples.front().features.active;
  for (const TrainingExample& ex : examples) {
    if (ex.features.active != mask) {
      throw Error("training examples disagree on the active feature mask");
    }
    for (double v : ex.features.values) {
      if (!std::isfinite(v)) throw Error("non-finite feature value");
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    if (mask[k]) active.push_back(k);
  }

  EnsembleModel model;
  model.feature_names.assign(feature_names().begin(), feature_names().end());
  model.active.assign(mask.begin(), mask.end());
  model.config = config;

  for (const auto& subset : partition_balanced(examples, config.seed)) {
    LogisticProblem problem;
    problem.dim = active.size();
    problem.x.reserve(subset.size() * active.size());
    for (std::size_t i : subset) {
      for (std::size_t k : active) {
        problem.x.push_back(examples[i].features.values[k]);
      }
      problem.y.push_back(examples[i].label ? 1 : 0);
    }
    LogisticFit fit = fit_logistic(problem, config);
    EnsembleMember member;
    member.bias = fit.params[0];
    member.weights.assign(kFeatureCount, 0.0);
    for (std::size_t a = 0; a < active.size(); ++a) {
      member.weights[active[a]] = fit.params[a + 1];
    }
    model.members.push_back(std::move(member));
  }
  return model;
}

std::vector<double> member_probabilities(const EnsembleModel& model,
                                         std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw Error("feature vector has " + std::to_string(x.size()) +
                " values, model expects " + std::to_string(model.dim()));
  }
  if (model.members.empty()) throw Error("model has no members");
  std::vector<double> probs;
  probs.reserve(model.members.size());
  for (const EnsembleMember& m : model.members) {
    double z = m.bias;
    for (std::size_t k = 0; k < x.size(); ++k) z += m.weights[k] * x[k];
    probs.push_back(sigmoid(z));
  }
  return probs;
}

double score(const EnsembleModel& model, std::span<const double> x) {
  const auto probs = member_probabilities(model, x);
  double sum = 0.0;
  for (double p : probs) sum += p;
  return sum / static_cast<double>(probs.size());
}

double score(const EnsembleModel& model, const FeatureVector& fv) {
  return score(model, std::span<const double>(fv.values));
}

bool predict(const EnsembleModel& model, std::span<const double> x) {
  const auto probs = member_probabilities(model, x);
  std::size_t votes = 0;
  double sum = 0.0;
  for (double p : probs) {
    if (p >= 0.5) ++votes;
    sum += p;
  }
  if (2 * votes != probs.size()) return 2 * votes > probs.size();
  return sum / static_cast<double>(probs.size()) >= 0.5;
}

bool predict(const EnsembleModel& model, const FeatureVector& fv) {
  return predict(model, std::span<const double>(fv.values));
}

void write_model(std::ostream& out, const EnsembleModel& model) {
  out << "# mlqa max-ent ensemble\n";
  out << "features";
  for (const auto& name : model.feature_names) out << '\t' << name;
  out << "\nactive";
  for (bool a : model.active) out << '\t' << (a ? 1 : 0);
  out << "\nconfig\tl2\t" << format_double(model.config.l2) << "\ttolerance\t"
      << format_double(model.config.tolerance) << "\tmax_iterations\t"
      << model.config.max_iterations << "\tseed\t" << model.config.seed << '\n';
  for (const EnsembleMember& m : model.members) {
    out << "member\t" << format_double(m.bias);
    for (double w : m.weights) out << '\t' << format_double(w);
    out << '\n';
  }
}

EnsembleModel read_model(std::istream& in, const std::string& source_name) {
  EnsembleModel model;
  bool have_features = false;
  for_each_record(in, [&](std::size_t line_no, const std::string& line) {
    auto fields = split_tabs(line);
    try {
      if (fields[0] == "features") {
        model.feature_names.assign(fields.begin() + 1, fields.end());
        have_features = true;
      } else if (fields[0] == "active") {
        model.active.clear();
        for (std::size_t k = 1; k < fields.size(); ++k) {
          model.active.push_back(fields[k] == "1");
        }
      } else if (fields[0] == "config") {
        for (std::size_t k = 1; k + 1 < fields.size(); k += 2) {
          const std::string& key = fields[k];
          const std::string& value = fields[k + 1];
          if (key == "l2") model.config.l2 = parse_double(value);
          else if (key == "tolerance") model.config.tolerance = parse_double(value);
          else if (key == "max_iterations")
            model.config.max_iterations = static_cast<int>(parse_integer(value));
          else if (key == "seed")
            model.config.seed = std::stoull(value);
          else throw Error("unknown config key '" + key + "'");
        }
      } else if (fields[0] == "member") {
        if (!have_features) throw Error("member line before features line");
        if (fields.size() != model.feature_names.size() + 2) {
          throw Error("member has the wrong number of weights");
        }
        EnsembleMember m;
        m.bias = parse_double(fields[1]);
        for (std::size_t k = 2; k < fields.size(); ++k) {
          m.weights.push_back(parse_double(fields[k]));
        }
        model.members.push_back(std::move(m));
      } else {
        throw Error("unknown record '" + fields[0] + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(source_name, line_no, e.what());
    }
  });
  if (model.members.empty()) throw Error(source_name + ": model has no members");
  if (model.active.size() != model.feature_names.size()) {
    throw Error(source_name + ": active mask does not match the feature list");
  }
  return model;
}

EnsembleModel load_model(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_model(in, path.string());
}

}  // namespace mlqa
