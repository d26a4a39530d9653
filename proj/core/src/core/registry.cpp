#include "cpa/core/registry.hpp"

namespace cpa {

std::optional<Threshold> Threshold::parse(const std::string& text) {
  if (text == "inf" || text == "∞") return infinite();
  if (text.empty() || text.size() > 18) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return of(v);
}

void CpaRegistry::add(const std::string& name, CpaFactory factory) {
  if (!factories_.emplace(name, std::move(factory)).second)
    throw std::invalid_argument("analysis '" + name + "' is already registered");
}

std::vector<std::string> CpaRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, f] : factories_) out.push_back(name);
  return out;
}

CpaPtr CpaRegistry::create(const std::string& name, const Program& program, const Configuration& config) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw UnknownCpaError("unknown analysis '" + name + "'");
  CpaPtr cpa = it->second(program, config);
  if (auto m = config.merge.find(name); m != config.merge.end()) cpa->set_merge_mode(m->second);
  return cpa;
}

}  // namespace cpa
