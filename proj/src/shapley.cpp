#include "connshare/shapley.hpp"

#include <stdexcept>
#include <string>

namespace connshare {

Rational total(const Allocation& allocation) {
  Rational sum;
  for (const auto& [node, share] : allocation) sum += share;
  return sum;
}

std::vector<Rational> shapley_weights(std::size_t n) {
  std::vector<mpz_class> factorial(n + 1, 1);
  for (std::size_t k = 1; k <= n; ++k) factorial[k] = factorial[k - 1] * static_cast<unsigned long>(k);
  std::vector<Rational> weights;
  weights.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Rational w(factorial[s] * factorial[n - s - 1], factorial[n]);
    w.canonicalize();
    weights.push_back(std::move(w));
  }
  return weights;
}

std::vector<Rational> shapley_values(const ValueTable& table) {
  const std::size_t n = table.player_count;
  if (table.values.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("value table has " + std::to_string(table.values.size()) + " entries, expected " +
                                std::to_string(std::size_t{1} << n));
  }
  const auto weights = shapley_weights(n);
  std::vector<Rational> phi(n);
  Rational marginal;
  for (std::size_t i = 0; i < n; ++i) {
    const Coalition bit = Coalition{1} << i;
    for (Coalition s = 0; s < table.values.size(); ++s) {
      if (s & bit) continue;
      marginal = table[s | bit] - table[s];
      if (sgn(marginal) == 0) continue;
      phi[i] += weights[static_cast<std::size_t>(__builtin_popcount(s))] * marginal;
    }
  }
  return phi;
}

Allocation shapley_allocate(const ValueTable& table, std::span<const NodeId> players) {
  if (table.player_count != players.size()) {
    throw std::invalid_argument("value table covers " + std::to_string(table.player_count) + " players, got " +
                                std::to_string(players.size()));
  }
  auto phi = shapley_values(table);
  Allocation out;
  for (std::size_t k = 0; k < players.size(); ++k) out.emplace(players[k], std::move(phi[k]));
  return out;
}

}  // namespace connshare
