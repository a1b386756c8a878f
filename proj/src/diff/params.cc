#include "election/diff/params.h"

#include "election/errors.h"

namespace election::diff {

Parameter& ParamStore::Create(const std::string& name, Shape shape, double bound, Rng& rng) {
  if (params_.contains(name)) throw ContractError("duplicate parameter " + name);
  Tensor value(std::move(shape));
  for (double& v : value.values()) v = (2.0 * rng.Uniform() - 1.0) * bound;
  Parameter p{name, value, Tensor(value.shape())};
  return params_.emplace(name, std::move(p)).first->second;
}

Parameter& ParamStore::Get(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ContractError("unknown parameter " + name);
  return it->second;
}

const Parameter& ParamStore::Get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ContractError("unknown parameter " + name);
  return it->second;
}

std::vector<Parameter*> ParamStore::Group(std::string_view group) {
  const std::string prefix = std::string(group) + "/";
  std::vector<Parameter*> out;
  for (auto& [name, p] : params_)
    if (name.starts_with(prefix)) out.push_back(&p);
  return out;
}

std::vector<std::string> ParamStore::Names() const {
  std::vector<std::string> out;
  for (const auto& [name, p] : params_) out.push_back(name);
  return out;
}

std::size_t ParamStore::ScalarCount() const {
  std::size_t n = 0;
  for (const auto& [name, p] : params_) n += p.value.size();
  return n;
}

void ParamStore::ZeroGrad() {
  for (auto& [name, p] : params_) {
    if (p.grad.size() != p.value.size()) p.grad = Tensor(p.value.shape());
    p.grad.Fill(0.0);
  }
}

}  // namespace election::diff
