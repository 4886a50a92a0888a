#pragma once

#include <cstddef>
#include <vector>

// Reference gate recomputed from the full indicator history at every frame.
// Frames up to and including the most recent edge never count toward the
// next edge.
namespace exogate::oracle {

inline std::vector<bool> brute_force_gate(const std::vector<bool>& plus,
                                          const std::vector<bool>& minus, std::size_t n_on,
                                          double rho_on, std::size_t n_off, double rho_off) {
  std::vector<bool> out;
  bool gate = false;
  std::size_t since = 0;
  for (std::size_t k = 0; k < plus.size(); ++k) {
    const std::vector<bool>& chi = gate ? minus : plus;
    const std::size_t n = gate ? n_off : n_on;
    const double rho = gate ? rho_off : rho_on;
    if (k + 1 - since >= n) {
      std::size_t ones = 0;
      for (std::size_t j = k + 1 - n; j <= k; ++j) ones += chi[j] ? 1 : 0;
      if (static_cast<double>(ones) / static_cast<double>(n) >= rho) {
        gate = !gate;
        since = k + 1;
      }
    }
    out.push_back(gate);
  }
  return out;
}

}  // namespace exogate::oracle
