#ifndef ELECTION_DIFF_PARAMS_H_
#define ELECTION_DIFF_PARAMS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "election/diff/tape.h"
#include "election/random.h"

namespace election::diff {

// Named parameters. Names are slash-separated; the first segment is the
// parameter group ("comm", "c1", "c2", "member"). Parameter addresses are
// stable for the lifetime of the store.
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;

  // New parameter drawn uniformly from [-bound, bound].
  Parameter& Create(const std::string& name, Shape shape, double bound, Rng& rng);
  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;
  bool Contains(const std::string& name) const { return params_.contains(name); }

  // Parameters whose name starts with "<group>/", in name order.
  std::vector<Parameter*> Group(std::string_view group);
  std::vector<std::string> Names() const;
  std::size_t size() const { return params_.size(); }
  std::size_t ScalarCount() const;

  void ZeroGrad();

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::map<std::string, Parameter, std::less<>> params_;
};

}  // namespace election::diff

#endif  // ELECTION_DIFF_PARAMS_H_
