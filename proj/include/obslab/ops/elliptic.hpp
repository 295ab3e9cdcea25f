#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obslab/ops/matrix.hpp"

namespace obslab {

enum class OperatorKind {
    Trace,
    TraceModulated,
    PucciMinus,
    PucciPlus,
    Bellman,
    Isaacs,
    PLaplacianNormalized,
    MMomentum,
    SpecialLagrangianPerturbed,
    Recession,
    Scaled,
};

const char* operator_kind_name(OperatorKind k);

/// Descriptor (C_F, omega) for the coefficient-oscillation bound
/// sup_X |F(x,X) - F(y,X)| / ||X|| <= C_F omega(|x-y|).
struct CoeffModulus {
    double C_F{0.0};
    enum class Omega { Zero, Linear } omega{Omega::Zero};

    double operator()(double t) const { return omega == Omega::Zero ? 0.0 : t; }
};

/// Evaluator for F(x, X) with declared ellipticity pair (lambda, Lambda).
///
/// For the spectral families whose eigenvalue slopes are unbounded or vanish
/// somewhere (m-momentum, perturbed Special Lagrangian), the declared pair is
/// valid on a declared eigenvalue trust band [band_lo, band_hi]; the sampled
/// ellipticity checks draw matrices with spectra inside that band.
class EllipticOperator {
public:
    static EllipticOperator trace();
    /// Tr((1 + c x_1) X); the one x-dependent family, with omega(t) = t.
    static EllipticOperator trace_modulated(double c);
    static EllipticOperator pucci_minus_op(double lambda, double Lambda);
    static EllipticOperator pucci_plus_op(double lambda, double Lambda);
    /// inf over the coefficient table of Tr(A X); each A symmetric with
    /// spectrum in (0, inf).
    static EllipticOperator bellman(std::vector<SymMat> tables);
    /// sup over groups of inf over each group's tables; admitted only under
    /// the small ellipticity aperture 1 - lambda/Lambda <= 0.1.
    static EllipticOperator isaacs(std::vector<std::vector<SymMat>> groups);
    static EllipticOperator p_laplacian(double p);
    /// sum_j (sigma_j^m + e_j^m)^{1/m} - sum_j sigma_j, m odd.
    static EllipticOperator m_momentum(int m, std::vector<double> sigma,
                                       double band_lo = 0.25, double band_hi = 2.0);
    /// sum_j [h_j e_j + arctan(e_j)].
    static EllipticOperator special_lagrangian(std::vector<double> h_values,
                                               double band_half_width = 2.0);
    /// Operator whose value is the recession limit of `inner`.
    static EllipticOperator recession_of(EllipticOperator inner);
    /// F_{tau,x0}(x, X) = tau^2 F(x0 + tau x, X / tau^2).
    static EllipticOperator scaled(EllipticOperator inner, double tau, Vec center);

    OperatorKind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    double Lambda() const { return Lambda_; }
    const CoeffModulus& coeff_modulus() const { return modulus_; }
    double band_lo() const { return band_lo_; }
    double band_hi() const { return band_hi_; }
    bool needs_gradient() const { return kind_ == OperatorKind::PLaplacianNormalized; }
    bool x_dependent() const;
    double p_exponent() const { return p_; }

    /// F(x, X). `grad` is required (and must be nonzero) for the normalized
    /// p-Laplacian; ignored by the other kinds.
    double evaluate(const Vec& x, const SymMat& X, const Vec* grad = nullptr) const;

private:
    EllipticOperator() = default;

    OperatorKind kind_{OperatorKind::Trace};
    double lambda_{1.0};
    double Lambda_{1.0};
    CoeffModulus modulus_{};
    double band_lo_{-1e30};
    double band_hi_{1e30};

    double p_{2.0};                        // p-Laplacian exponent
    double mod_c_{0.0};                    // trace_modulated slope
    int m_{3};                             // m-momentum order
    std::vector<double> sigma_;            // m-momentum anchors
    std::vector<double> h_values_;         // Special-Lagrangian weights
    std::vector<SymMat> tables_;           // Bellman
    std::vector<std::vector<SymMat>> groups_;  // Isaacs
    std::shared_ptr<const EllipticOperator> inner_;  // Recession / Scaled
    double tau_{1.0};
    Vec center_{};
};

/// ((|grad|^2 + grad_floor^2)^{gamma/2}) F(x, X); grad_floor = 0 gives
/// exactly |Du|^gamma F.
double degenerate_wrapper(const EllipticOperator& op, const Vec& x, const Vec& grad,
                          const SymMat& X, double gamma, double grad_floor);

/// tau F(x, X / tau).
double recession(const EllipticOperator& op, double tau, const Vec& x, const SymMat& X);

struct RecessionLimit {
    double value{0.0};
    bool converged{false};
    double spread{0.0};
};

/// Extrapolates tau F(X/tau) over tau in {1e-2, 1e-3, 1e-4} with one
/// Richardson step; throws when the extrapolants disagree beyond `tol`
/// (relative to 1 + |value|).
RecessionLimit recession_limit(const EllipticOperator& op, const Vec& x, const SymMat& X,
                               double tol = 1e-4);

}  // namespace obslab
