#pragma once

// Flat key=value experiment configuration.
//
//   geometry        = line | cylinder | h3 | euclidean:<n>
//   potential       = power:<alpha> | logpower:<c>,<alpha> (or logpow:<c>:<alpha>) | iterlog:<depth> | piecewise:<file>
//   potential_floor = <real>               (family default 1)
//   delta           = <real in (0, 1)>     (default 0.2)
//   lambda_grid     = <v1>,<v2>,... | <lo>:<hi>:<step> | arith:<lo>,<hi>,<n> | geom:<lo>,<hi>,<n>
//   criterion_grid  = same syntax; grid for the invariant trend (default 25,50,100,200)
//   mesh            = <h_initial>,<refinement_rounds>[,<rel_tol>]
//   expect          = satisfied | fails | none
//   output          = <path>               (default: stdout)
//
// '#' starts a comment. Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "weylab/models.hpp"
#include "weylab/spectral.hpp"

namespace weylab {

GeometryModel parse_geometry(const std::string& text);
PotentialModel parse_potential(const std::string& text, double floor = 1.0);
std::vector<double> parse_grid(const std::string& text);

enum class Expectation { None, Satisfied, Fails };

struct ExperimentConfig {
  std::string geometry = "line";
  std::string potential = "power:2";
  double potential_floor = 1.0;
  double delta = 0.2;
  std::vector<double> lambda_grid{10.5, 20.5, 40.5, 80.5};
  std::vector<double> criterion_grid{25.0, 50.0, 100.0, 200.0};
  MeshControl mesh;
  Expectation expect = Expectation::None;
  std::string output;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Throws PreconditionError on a violated invariant.
  void validate() const;
  GeometryModel geometry_model() const;
  PotentialModel potential_model() const;

  /// Canonical key=value rendering; equal configs render identically.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

}  // namespace weylab
