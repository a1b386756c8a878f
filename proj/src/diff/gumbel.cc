#include "election/diff/gumbel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "election/errors.h"

namespace election::diff {

double GumbelSample(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("GumbelSample: u must lie in (0,1), got " + std::to_string(u));
  return -std::log(-std::log(u));
}

std::vector<double> SampleGumbelNoise(Rng& rng, std::size_t k) {
  std::vector<double> noise(k);
  for (double& g : noise) {
    const double u = std::clamp(rng.Uniform(), kUniformClamp, 1.0 - kUniformClamp);
    g = GumbelSample(u);
  }
  return noise;
}

Var GumbelSoftmax(Var logits, Var temperature, std::span<const double> noise) {
  const Tensor& lv = logits.value();
  if (lv.rank() != 1 || lv.size() < 2) throw ContractError("GumbelSoftmax: need a vector of K >= 2 logits");
  if (noise.size() != lv.size()) throw ContractError("GumbelSoftmax: noise size mismatch");
  if (temperature.value().size() != 1) throw ContractError("GumbelSoftmax: temperature must be scalar");
  const double temp = temperature.value()[0];
  if (!(temp > 0.0)) throw DomainError("GumbelSoftmax: temperature must be positive");

  const std::size_t k = lv.size();
  std::vector<double> perturbed(k);
  for (std::size_t i = 0; i < k; ++i) perturbed[i] = lv[i] + noise[i];
  const double mx = *std::max_element(perturbed.begin(), perturbed.end());
  Tensor y(Shape{k});
  double z = 0.0;
  for (std::size_t i = 0; i < k; ++i) z += (y[i] = std::exp((perturbed[i] - mx) / temp));
  for (double& v : y.values()) v /= z;

  Tape& tape = *logits.tape();
  const int il = logits.id(), it = temperature.id();
  const int iy = static_cast<int>(tape.size());
  return tape.Record(std::move(y), {logits, temperature},
                     [il, it, iy, perturbed = std::move(perturbed)](Tape& t, const Tensor& g) {
                       const Tensor& yv = t.value(iy);
                       const double temp = t.value(it)[0];
                       double inner = 0.0;
                       for (std::size_t i = 0; i < yv.size(); ++i) inner += g[i] * yv[i];
                       // d/dz of softmax(z), z = perturbed / temp
                       std::vector<double> gz(yv.size());
                       for (std::size_t i = 0; i < yv.size(); ++i) gz[i] = yv[i] * (g[i] - inner);
                       if (Tensor* gl = t.MutableGrad(il))
                         for (std::size_t i = 0; i < gz.size(); ++i) (*gl)[i] += gz[i] / temp;
                       if (Tensor* gt = t.MutableGrad(it)) {
                         double acc = 0.0;
                         for (std::size_t i = 0; i < gz.size(); ++i) acc -= gz[i] * perturbed[i];
                         (*gt)[0] += acc / (temp * temp);
                       }
                     });
}

Var GumbelSoftmax(Var logits, double temperature, std::span<const double> noise) {
  return GumbelSoftmax(logits, logits.tape()->Constant(Tensor::Scalar(temperature)), noise);
}

std::size_t Argmax(std::span<const double> values) {
  if (values.empty()) throw ContractError("Argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

Var StraightThrough(Var y) {
  const Tensor& yv = y.value();
  if (yv.rank() != 1) throw ContractError("StraightThrough: expected a vector");
  Tensor hard = Tensor::OneHot(yv.size(), Argmax(yv.values()));
  const int iy = y.id();
  return y.tape()->Record(std::move(hard), {y}, [iy](Tape& t, const Tensor& g) {
    if (Tensor* gy = t.MutableGrad(iy)) gy->Accumulate(g);
  });
}

CategoricalSample SampleCategorical(Var logits, Var temperature, Rng& rng, SampleMode mode) {
  const std::vector<double> noise = SampleGumbelNoise(rng, logits.value().size());
  Var y = GumbelSoftmax(logits, temperature, noise);
  const std::size_t index = Argmax(y.value().values());
  return {mode == SampleMode::kHard ? StraightThrough(y) : y, index};
}

}  // namespace election::diff
