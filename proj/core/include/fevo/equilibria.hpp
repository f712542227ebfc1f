#pragma once

// Fixed points of the game-environment systems: closed-form catalogs,
// numerical search, Jacobians and linear stability classification.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fevo/linalg.hpp"
#include "fevo/vector_field.hpp"

namespace fevo {

// Saddles are reported as Unstable with FixedPointReport::saddle set.
enum class StabilityClass { AsymptoticallyStable, Unstable, NeutralCenter, Marginal, Undetermined };
enum class Provenance { Catalog, NumericalSearch };
enum class JacobianMode { Analytic, FiniteDifference };

std::string_view to_string(StabilityClass c);
std::string_view to_string(Provenance p);
std::string_view to_string(JacobianMode m);

struct StabilityTolerances {
  double re_tol = 1e-8;
  double im_tol = 1e-8;

  static StabilityTolerances for_mode(JacobianMode m) {
    return m == JacobianMode::Analytic ? StabilityTolerances{1e-8, 1e-8}
                                       : StabilityTolerances{1e-5, 1e-5};
  }
};

inline constexpr double kResidualThreshold = 1e-9;
inline constexpr double kKinkThreshold = 1e-9;
inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kDedupRadius = 1e-6;

struct FixedPointReport {
  std::string label;
  Vec coordinates;           // reduced coordinates, possibly out of domain
  PopulationState point;     // same point; t unused
  double residual = 0.0;     // max-norm of the field at the point
  Matrix jacobian;
  JacobianMode jacobian_mode = JacobianMode::FiniteDifference;
  std::vector<std::complex<double>> eigenvalues;
  StabilityClass cls = StabilityClass::Undetermined;
  bool saddle = false;
  bool in_domain = false;
  bool nonsmooth = false;    // on a positive-part kink; one-sided differences used
  bool rejected = false;     // catalog entry whose residual exceeds kResidualThreshold
  std::string note;
  Provenance provenance = Provenance::Catalog;
};

// Analytic mode throws AnalyticUnavailable if the field has no closed-form
// Jacobian. Finite differences are central with step kFiniteDifferenceStep,
// or second-order forward when the point lies within kKinkThreshold of a
// positive-part kink.
Matrix jacobian(const VectorField& field, std::span<const double> point, JacobianMode mode);

bool on_kink(const VectorField& field, std::span<const double> point);

struct Classification {
  StabilityClass cls = StabilityClass::Undetermined;
  bool saddle = false;
};

Classification classify_eigenvalues(std::span<const std::complex<double>> ev,
                                    StabilityTolerances tol);

// Fills eigenvalues (when empty), class and saddle flag from the report's
// Jacobian, with tolerances chosen by its jacobian_mode.
FixedPointReport classify(FixedPointReport report);

// Residual, Jacobian (analytic when available and off-kink), eigenvalues and
// class for a single point. Domain membership uses the unit box (plus the
// simplex for OPD).
FixedPointReport analyze_point(const VectorField& field, std::span<const double> point,
                               Provenance provenance, std::string label = {});

bool in_unit_domain(const Layout& layout, std::span<const double> v, double tol = 1e-9);

// Closed-form fixed points known for the model, each evaluated against
// `target` (by default the model's general field). Entries whose residual
// exceeds kResidualThreshold are kept with rejected = true and a note.
std::vector<FixedPointReport> catalog_fixed_points(const Model& model);
std::vector<FixedPointReport> catalog_fixed_points(const Model& model, const VectorField& target);

struct SearchDomain {
  std::vector<std::pair<double, double>> bounds;  // per reduced coordinate
  bool simplex = false;                           // require x1 + x2 <= 1

  static SearchDomain unit(const Layout& layout);
  bool contains(std::span<const double> v, double tol = 1e-9) const;
};

struct SearchOptions {
  int max_iterations = 100;
};

// Damped Newton with finite-difference Jacobians from every lattice seed
// (`resolution` >= 4 points per axis). Converged points inside the domain
// with residual below kResidualThreshold are deduplicated within
// kDedupRadius (max-norm) and returned sorted lexicographically.
std::vector<FixedPointReport> find_fixed_points(const VectorField& field, const SearchDomain& domain,
                                                std::size_t resolution, SearchOptions opts = {});

}  // namespace fevo
