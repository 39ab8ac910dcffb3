#include <sstream>

#include "polydecay/harness.hpp"

namespace polydecay::harness {

const std::vector<std::string>& required_anchors() {
  static const std::vector<std::string> a{
      "main decay exponent",
      "comparison decay rates",
      "resolvent growth hypothesis",
      "damped wave equation",
      "decay in real interpolation norm",
      "integer-order decay",
      "decay in fractional domain norm",
      "Wrobel sharpness example",
      "resolvent powers on interpolation spaces",
      "interpolation space via K-functional",
      "interpolation and fractional domain sandwich",
      "sectoriality of the negative generator",
      "Besov embeddings",
      "Hardy-Littlewood type and cotype",
      "power weight",
      "truncation in Besov spaces",
      "damped orbit in Besov space",
      "resolvent multiplier into L^p'",
      "resolvent multiplier into L^inf",
      "multiplier symbol growth",
  };
  return a;
}

const std::vector<ZooEntry>& zoo_catalog() {
  static const std::vector<ZooEntry> z{
      {"diagonal",
       {{"eigs", "list of [re, im] eigenvalues with negative real part"}},
       "bounded-resolvent sanity case"},
      {"borichev_tomilov",
       {{"alpha", "resolvent growth exponent, > 0"}},
       "resolvent growth hypothesis"},
      {"jordan_growth",
       {{"mu_spacing", "imaginary spacing of the blocks, default 1"},
        {"a_decay", "a_k = k^-a_decay, > 0"},
        {"c_gain", "off-diagonal c_k = k^c_gain"}},
       "Wrobel sharpness example"},
      {"damped_wave",
       {{"damping_const", "constant part of a(x), default 1"},
        {"damping_amp", "amplitude of the sin(2 pi x) part of a(x), default 0"}},
       "damped wave equation"},
  };
  return z;
}

std::string list_zoo() {
  std::ostringstream os;
  for (const auto& e : zoo_catalog()) {
    os << e.family << "  [" << e.anchor << "]\n";
    for (const auto& [k, v] : e.parameters.items()) os << "    " << k << ": " << v.get<std::string>() << '\n';
  }
  return os.str();
}

}  // namespace polydecay::harness
