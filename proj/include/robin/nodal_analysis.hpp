#pragma once

// Nodal geometry of square eigenfunctions. A pair (p,q) with p != q spans a
// two-dimensional eigenspace
//
//   Phi_theta(x,y) = cos(theta) u_p(x) u_q(y) + sin(theta) u_p(y) u_q(x),
//
// and theta in [0, pi) covers it up to sign. Hyperbolic factors are divided by
// cosh(beta/2) so that deep parameters do not overflow; both products carry
// the same constant, so the meaning of theta is unchanged.

#include <string>
#include <utility>
#include <vector>

#include "robin/interval_spectrum.hpp"
#include "robin/square_spectrum.hpp"

namespace robin {

// Cross-formula agreement for critical angles.
inline constexpr double kThetaTolerance = 1e-8;
// A sample counts as lying on the nodal set when |Phi| is below this fraction
// of |cos(theta) u_p(x) u_q(y)| + |sin(theta) u_p(y) u_q(x)|.
inline constexpr double kZeroCellFactor = 1e-10;
inline constexpr int kMinResolution = 256;
inline constexpr int kEdgeSamples = 4096;

// Reduces theta to [0, pi).
double reduce_theta(double theta);
// Distance between two angles modulo pi.
double theta_distance(double a, double b);

struct EigenfunctionSpec {
  PairIndex pair;
  double h = -1.0;
  double theta = 0.0;

  // Canonicalises the pair, reduces theta mod pi and fixes theta = pi/4 for
  // p == q (the single product mode). Swapping p and q maps theta to
  // pi/2 - theta.
  static EigenfunctionSpec make(int p, int q, RobinParam h, double theta);
  // True when Phi is a single product u_a(x) u_b(y).
  bool product_mode() const;
};

// Mode shape with hyperbolic factors divided by cosh(beta/2).
ShapeValue scaled_shape(const IntervalEigenvalue& mode, double x);

class PhiEvaluator {
 public:
  explicit PhiEvaluator(const EigenfunctionSpec& spec);

  const EigenfunctionSpec& spec() const { return spec_; }
  const IntervalEigenvalue& mode_p() const { return mp_; }
  const IntervalEigenvalue& mode_q() const { return mq_; }

  double operator()(double x, double y) const;
  // The two products whose sum is Phi.
  void terms(double x, double y, double& t1, double& t2) const;
  bool on_nodal_set(double x, double y) const;

  struct Derivatives {
    double value, dx, dy, dxx, dxy, dyy;
  };
  Derivatives derivatives(double x, double y) const;

  double c() const { return c_; }
  double s() const { return s_; }

 private:
  EigenfunctionSpec spec_;
  IntervalEigenvalue mp_;
  IntervalEigenvalue mq_;
  double c_ = 1.0;
  double s_ = 0.0;
};

double eval_phi(const EigenfunctionSpec& spec, double x, double y);

struct WronskianZeros {
  int q = 0;
  double h = 0.0;
  // Sorted, antisymmetric, contains 0.
  std::vector<double> zeros;
  // Positive zeros gamma_1 < gamma_2 < ...
  std::vector<double> positive() const;
};

// W(x) = beta_0 sinh(beta_0 x/pi) cos(alpha_q x/pi)
//      + alpha_q cosh(beta_0 x/pi) sin(alpha_q x/pi).
double wronskian(int q, RobinParam h, double x);

// Zeros of W for even q >= 4. Each positive zero is
// solved in ((2l-1) pi^2/(2 alpha_q), l pi^2/alpha_q) and the total is
// cross-checked against a sign scan; CountMismatch if they disagree.
WronskianZeros wronskian_zeros(int q, RobinParam h);

enum class CriticalKind { AxisX, AxisY, Diagonal, Grid, Boundary };
const char* to_string(CriticalKind k);

struct CriticalPoint {
  double x = 0.0;
  double y = 0.0;
  CriticalKind kind = CriticalKind::Grid;
  // Wronskian zero indices of |x| and |y| (0 for the origin coordinate, l for
  // gamma_l, -1 for a boundary coordinate).
  int i = 0;
  int j = 0;
  double theta = 0.0;
  // m11 = (beta_0^2 + alpha_q^2) pi^-2 cos(theta) cosh(beta_0 x/pi) cos(alpha_q y/pi).
  double m11 = 0.0;
  // Laplacian of Phi at the point, relative to the Hessian scale.
  double trace = 0.0;
  bool hessian_ok = false;
};

struct CriticalZeroSet {
  int q = 0;
  double h = 0.0;
  std::vector<double> wronskian_zeros;
  // Interior critical zeros; at most (q-1)^2.
  std::vector<CriticalPoint> points;
  // Points (gamma, +-pi/2) and (+-pi/2, gamma) where a nodal line is tangent
  // to an edge; the domain count can change there too.
  std::vector<CriticalPoint> boundary;
  // Candidates whose three angle formulas disagreed.
  std::vector<std::string> dropped;

  // Sorted distinct critical angles (interior and boundary).
  std::vector<double> thetas() const;
  // Interior critical zeros of Phi_theta.
  int count_at(double theta) const;
  std::vector<std::pair<double, double>> points_at(double theta) const;
};

// Angle at which (x,y) is a critical zero of Phi_{0,q,theta}, from
//   (a) Phi = 0, (b) d/dx Phi = 0, (c) d/dy Phi = 0.
// Formulas whose numerator and denominator both vanish are skipped; the rest
// must agree within kThetaTolerance or InconsistentTheta is thrown.
double critical_theta_at(int q, RobinParam h, double x, double y);

// All interior critical zeros over the Wronskian grid (axis, diagonal and
// origin candidates included), plus the boundary tangencies. Requires
// lambda_(0,q) < 0 (RegimeError otherwise).
CriticalZeroSet critical_thetas(int q, RobinParam h);

struct ThetaAsymptotic {
  int j = 0;
  double gamma = 0.0;
  // (-1)^{j+1} beta_0/(2 alpha_q cos(arctan(alpha_q/beta_0))) e^{beta_0 gamma_j/pi}
  double tan_theta = 0.0;
  // tan(theta(gamma_j, 0)) from the critical-angle formulas.
  double tan_theta_exact = 0.0;
};

// Requires |h| >= 10 and 1 <= j <= (q-2)/2; std::invalid_argument otherwise.
ThetaAsymptotic theta_asymptotics(int q, RobinParam h, int j);

// sigma_jk = log((-1)^{j-k} tan(theta_j)/tan(theta_k)) from the exact angles,
// and its leading term (beta_0/alpha_q)(j-k) pi.
double sigma_jk(int q, RobinParam h, int j, int k);
double sigma_jk_leading(int q, RobinParam h, int j, int k);
// sigma_jk - sigma_j'k' > 0 whenever j - k > j' - k' (all indices in
// 1..(q-2)/2); this is what keeps the critical angles distinct.
bool sigma_ordering_holds(int q, RobinParam h);
// Largest sampled h (step `step` upward from h_floor, below tilde_h(q)) such
// that at every sample in [h_floor, h] sigma_ordering_holds and the critical
// angles of distinct off-diagonal classes differ from each other and from
// 3pi/4 (sign and log|tan theta| compared at 1e-12). NaN if it fails at h_floor.
// Same-difference classes such as (gamma_1, gamma_2) and (gamma_2, gamma_3)
// approach each other like exp(c h), so very deep floors exceed double
// resolution.
double empirical_distinct_threshold(int q, double h_floor = -40.0, double step = 0.05);

struct BoundaryZeroCount {
  // With multiplicity, corners excluded.
  int total = 0;
  // bottom, right, top, left
  int per_edge[4] = {0, 0, 0, 0};
  int corner_zeros = 0;
  int tangencies = 0;
  // 4 max(p,q), or 4 (max(p,q) - 1) when the corners vanish.
  int cap = 0;
  int samples = 0;
  // rho for each boundary zero (1 simple, 2 tangency), then 1 per vanishing
  // corner (the nodal curve ending there).
  std::vector<int> rho;
  // Edge points where a nodal line touches the boundary.
  std::vector<std::pair<double, double>> tangency_points;
};

// Sign changes along each edge plus tangencies located from sign changes of
// the tangential derivative. Exceeding the cap triggers one refinement with 4x
// the samples, then CapViolation.
BoundaryZeroCount count_boundary_zeros(const EigenfunctionSpec& spec,
                                       int samples = kEdgeSamples);

// k = 1 + b1 - b0 + sum(nu/2 - 1) + sum(rho)/2, rounded down. For negative
// eigenvalues b1 = b0 and the value is exact.
int euler_bound(int b0, int b1, const std::vector<int>& interior,
                const std::vector<int>& boundary);

struct GridCount {
  int domains = 0;
  // Components containing a boundary node.
  int boundary_domains = 0;
  int refined_cells = 0;
  int resolution = 0;
};

// Union-find labelling of {Phi > 0} and {Phi < 0} on a (R+1)^2 grid with
// 4-connectivity. Checkerboard cells and cells with a corner on the nodal set
// are subdivided dyadically until two successive levels agree on which
// corners connect (at most 3 levels); Unresolved otherwise.
//
// `pins` are known points of the nodal set where two same-sign regions touch
// (interior critical zeros, boundary tangencies). Symmetric configurations put
// them exactly on grid lines, where a grid edge would join the regions; edges
// through a pin are cut and the cells around it refined.
GridCount count_domains_on_grid(const EigenfunctionSpec& spec, int resolution,
                                int threads = 0,
                                const std::vector<std::pair<double, double>>& pins = {});

struct NodalReport {
  EigenfunctionSpec spec;
  // Grid count; for negative eigenvalues with known critical zeros it must
  // equal the Euler value or Unresolved is raised.
  int domains = 0;
  int boundary_zeros = 0;
  int corner_zeros = 0;
  int interior_critical_zeros = 0;
  // False when no closed form for the critical zeros is available; the count
  // is then 0, which is correct away from isolated critical angles.
  bool critical_zeros_exact = false;
  int euler_upper_bound = 0;
  int resolution = 0;
  int boundary_domains = 0;
  int refined_cells = 0;
  bool negative = false;
};

struct NodalOptions {
  int resolution = 1024;
  // Recount at 2R and require the same answer.
  bool verify_doubling = true;
  int threads = 0;
};

NodalReport count_nodal_domains(const EigenfunctionSpec& spec,
                                const NodalOptions& opts = {});
NodalReport count_nodal_domains(const EigenfunctionSpec& spec, int resolution);

enum class Verdict { Sharp, NotSharp, Undecided };
const char* to_string(Verdict v);

struct VerdictResult {
  int label = 0;
  double value = 0.0;
  Verdict verdict = Verdict::Undecided;
  std::string evidence;
};

struct VerdictOptions {
  int theta_samples = 720;
  int resolution = kMinResolution;
  int threads = 0;
};

// Verdict for the minimal label of `entry`.
VerdictResult courant_sharp_verdict(const SpectrumEntry& entry, RobinParam h,
                                    const VerdictOptions& opts = {});
// One row per label 1..K; labels that are not minimal are NotSharp.
std::vector<VerdictResult> verdict_table(RobinParam h, int K,
                                         const VerdictOptions& opts = {});

struct ThetaSample {
  double theta = 0.0;
  NodalReport report;
  bool resolved = true;
  std::string error;
};

// Domain counts for each theta (parallel over theta). Unresolved samples are
// kept with resolved = false.
std::vector<ThetaSample> sweep_theta(PairIndex pair, RobinParam h,
                                     const std::vector<double>& thetas,
                                     const NodalOptions& opts);
// theta_samples uniform angles in [0, pi), the critical angles of the (0,q)
// family when applicable, the midpoints between consecutive critical angles,
// and 0, pi/4, pi/2, 3pi/4. Sorted and deduplicated.
std::vector<double> theta_grid(PairIndex pair, RobinParam h, int theta_samples);

}  // namespace robin
