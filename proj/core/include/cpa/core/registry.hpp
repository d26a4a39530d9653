#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpa/core/configuration.hpp"

namespace cpa {

using CpaFactory = std::function<CpaPtr(const Program&, const Configuration&)>;

class UnknownCpaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Name → factory table that configurations refer to.
class CpaRegistry {
 public:
  /// Throws std::invalid_argument on a duplicate name.
  void add(const std::string& name, CpaFactory factory);
  bool contains(const std::string& name) const { return factories_.count(name) > 0; }
  std::vector<std::string> names() const;
  /// Builds the analysis and applies any merge override from `config`.
  CpaPtr create(const std::string& name, const Program& program, const Configuration& config) const;

 private:
  std::map<std::string, CpaFactory> factories_;
};

}  // namespace cpa
