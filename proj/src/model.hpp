#pragma once

// Complex Ginzburg-Landau lattice model: parameters, states, difference
// operators, the vector field and the constants derived from the parameters.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cgl {

using Complex = std::complex<double>;

enum class LatticeKind { FullWindow, Truncated };

/// Finite complex vector standing for an l2 sequence. Sites run over
/// -half_width..half_width; everything outside is zero.
///
/// FullWindow states stand in for the bi-infinite lattice (zero padding at the
/// window edge). Truncated states are the (2m+1)-dimensional periodic systems.
class LatticeState {
 public:
  LatticeState() = default;
  LatticeState(LatticeKind kind, int half_width);
  LatticeState(LatticeKind kind, int half_width, std::vector<Complex> values);

  static LatticeState delta(LatticeKind kind, int half_width, int site, Complex value = 1.0);

  LatticeKind kind() const noexcept { return kind_; }
  int half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Value at lattice site j; zero outside the window.
  Complex at(int site) const noexcept;
  void set(int site, Complex value);

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }

  double norm_squared() const noexcept;
  double norm() const noexcept;

  bool same_shape(const LatticeState& other) const noexcept {
    return kind_ == other.kind_ && half_width_ == other.half_width_;
  }

  friend bool operator==(const LatticeState&, const LatticeState&) = default;

 private:
  LatticeKind kind_ = LatticeKind::FullWindow;
  int half_width_ = 0;
  std::vector<Complex> values_;
};

/// l2 distance; throws DimensionError on shape mismatch.
double distance(const LatticeState& a, const LatticeState& b);

/// l2 inner product (a, b) = sum a_j conj(b_j).
Complex inner(const LatticeState& a, const LatticeState& b);

struct ModelParams {
  double lambda = 0.1;
  double mu = 0.2;
  double gamma = 1.0;
  double beta = 0.5;
  double k = 1.0;
  double nu = 0.3;
  double p = 2.0;
  double eta = 1.0;
  int window = 128;
  /// External force on sites -window..window (size 2*window+1).
  std::vector<Complex> g;

  /// The reference parameter set with g = delta_0 on a window of the given size.
  static ModelParams reference(int window = 128);

  Complex force(int site) const noexcept;
  void set_force(int site, Complex value);
  /// Resizes g to the current window, keeping entries that still fit.
  void resize_window(int window);

  /// Throws ParameterError on a violated invariant (gamma > 4 lambda, k > 0, ...).
  void validate() const;

  /// Gap gamma - 4 lambda of the dissipation estimate.
  double dissipation_gap() const noexcept { return gamma - 4.0 * lambda; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// ||g||_2 restricted to |j| <= half_width (the full window when negative).
double force_l2_norm(const ModelParams& params, int half_width = -1);
/// ||g||_q^q with q = (p+2)/(p+1), restricted as above.
double force_dual_mass(const ModelParams& params, int half_width = -1);

/// Constants of the Lipschitz and absorbing-ball estimates.
struct DerivedConstants {
  double c1 = 0.0;
  double c2 = 1.5;
  double c3 = 0.0;
  double cp = 0.0;
  double r_star = 0.0;
  double eps_star = 0.0;

  double linear_coeff = 0.0;     // 4 lambda + 4|mu| + gamma + |beta|
  double nonlinear_coeff = 0.0;  // k + |nu|
  double g_norm = 0.0;
  double p = 2.0;

  /// M_r: bound on ||F u|| over the ball of radius r.
  double bound_m(double r) const noexcept;
  /// L_r: Lipschitz constant of F over the ball of radius r.
  double bound_l(double r) const noexcept;
};

DerivedConstants compute_constants(const ModelParams& params);
/// Same constants with g replaced by its restriction g^m (c1^m, r^{*,m}).
/// eps_star stays the full-system value, which bounds the truncated one.
DerivedConstants compute_constants_truncated(const ModelParams& params, int m);

/// Smooth cutoff xi(|j|/l): 0 on [0,1], 1 on [2,inf), cubic smoothstep between.
struct CutoffProfile {
  static constexpr double lipschitz = 1.5;  // c2

  int l = 1;

  static double xi(double s) noexcept;
  double weight(int site) const noexcept;
};

/// Lambda u with zero padding outside the window; requires a FullWindow state.
LatticeState apply_laplacian(const LatticeState& u);

/// D+ u on the zero-padded lattice. The result lives on a window one site wider
/// (the entry at -J-1 is u_{-J}) so that (Lambda u, u) = ||D+ u||^2 exactly.
LatticeState forward_difference(const LatticeState& u);

/// F u = (lambda + i mu) Lambda u - (gamma + i beta) u - (k + i nu)|u|^p u + g.
/// FullWindow states use the zero-padded Lambda; Truncated(m) states use the
/// circulant Lambda_m and the restriction g^m.
LatticeState vector_field(const LatticeState& u, const ModelParams& params);

/// ||F u - F v||.
double lipschitz_gap(const LatticeState& u, const LatticeState& v, const ModelParams& params);

/// sum_j xi(|j|/l) |u_j|^2.
double tail_mass(const LatticeState& u, const CutoffProfile& cutoff);

/// sum_{|j| >= from} |u_j|^2.
double sharp_tail(const LatticeState& u, int from);

namespace detail {

enum class Boundary { ZeroPadded, Periodic };

/// Coefficients of the (possibly noise-modulated) vector field
///   diffusion * Lambda u + linear * u + nonlinear * |u|^p u + forcing_scale * g.
struct FieldCoefficients {
  Complex diffusion;
  Complex linear;
  Complex nonlinear;
  double forcing_scale = 1.0;
  double p = 2.0;
};

FieldCoefficients deterministic_coefficients(const ModelParams& params);

Boundary boundary_of(LatticeKind kind) noexcept;

/// Force restricted to the state's window, centred like the state.
std::vector<Complex> force_on(const ModelParams& params, int half_width);

/// out = field(u). out must not alias u.
void evaluate_field(std::span<const Complex> u, std::span<const Complex> g,
                    const FieldCoefficients& c, Boundary boundary, std::span<Complex> out);

/// Throws DimensionError unless the state can be combined with params.
void check_shape(const LatticeState& u, const ModelParams& params);

}  // namespace detail

}  // namespace cgl
