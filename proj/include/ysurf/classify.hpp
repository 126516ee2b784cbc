#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ysurf/types.hpp"

namespace ysurf {

/// Constant-test-function invariants of one face:
/// alpha = 2 pi (1 - 2g - e - d), beta = -1/2 int |A|^2, theta = alpha + beta.
struct FaceTheta {
  int face = -1;
  Topology topology;
  int euler_chi = 0;
  double alpha = 0.0;
  double truncated_total_curvature = 0.0;
  double tail_estimate = 0.0;    // R^-2 extrapolation of the missing end contribution
  double total_curvature = 0.0;  // truncated + tail
  double beta = 0.0;
  double theta = 0.0;
};

double alpha_of(const Topology& t);

FaceTheta face_theta(const FacePatch& face);

struct ThetaReport {
  std::vector<FaceTheta> faces;
  // Face indices sorted by ascending theta (ties by face index); valid for three faces.
  std::array<int, 3> order{0, 1, 2};

  std::array<double, 3> sorted_theta() const;
  std::array<Topology, 3> sorted_topology() const;
};

ThetaReport theta_report(const YSurface& surface);

/// Report built directly from values, for exercising the classifier without a
/// mesh. beta is theta - alpha.
ThetaReport theta_report_from_values(const std::array<double, 3>& theta,
                                     const std::array<Topology, 3>& topology);

/// Topology guess for a bare theta value: a disk above -2 pi, an annulus otherwise.
Topology default_topology_for(double theta);

/// Q restricted to constants with c3 = -c1 - c2:
/// [[t1 + t3, t3], [t3, t2 + t3]].
struct ConstantModeForm {
  Eigen::Matrix2d matrix;
  double trace = 0.0;
  double determinant = 0.0;
  std::array<double, 2> eigenvalues{};
  int negative_count = 0;
  std::array<int, 3> permutation{0, 1, 2};  // input positions in sorted order
  std::array<double, 3> sorted{};
};

ConstantModeForm reduced_constant_form(double theta1, double theta2, double theta3);

enum class Conclusion {
  YCatenoid,
  DiskAnnulusStable,
  IndexAtLeastTwo,
  FlatAnnulusImpossible,
  ExtraCompactFace,
  BoundaryCase,
};

std::string to_string(Conclusion c);

struct RuleStep {
  std::string id;
  std::string anchor;
  std::vector<std::pair<std::string, double>> inputs;
  std::string outcome;
  bool decisive = false;
};

struct Verdict {
  std::vector<RuleStep> rules;
  Conclusion conclusion = Conclusion::BoundaryCase;
  std::string deciding_rule;
  std::vector<std::string> boundary_flags;
  std::vector<Topology> sigma2_admissible;
  std::array<int, 3> face_order{0, 1, 2};

  std::vector<std::string> path() const;  // ids of decisive rules, in order
};

/// Replays the index-one case analysis on (theta, topology). Requires exactly
/// three faces; only index_hypothesis == 1 is meaningful.
Verdict classify_index_one(const ThetaReport& report, int index_hypothesis = 1);

struct ConstantsRow {
  double R = 0.0;
  std::array<double, 3> c_sorted{};
  double q_value = 0.0;
  double theta_prediction = 0.0;
  double gap = 0.0;
};

struct ConstantsCrossCheck {
  bool applicable = false;
  std::string note;
  std::vector<ConstantsRow> rows;
  int negative_count = 0;
};

/// Tabulates Q(phi_R c) against sum c_i^2 theta_i on the basis (1,-1,0),
/// (1,1,-2) in sorted-theta order.
ConstantsCrossCheck cross_check_constants(const YSurface& surface, const ThetaReport& report,
                                          const std::vector<double>& R_list);

}  // namespace ysurf
