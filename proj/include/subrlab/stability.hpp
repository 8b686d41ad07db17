#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "subrlab/surfaces.hpp"

namespace subrlab {

// scalar field on a patch with its first and second derivatives along Z = d/ds
struct TestFunction {
    std::vector<double> values;
    std::vector<double> z_derivative;
    std::vector<double> z_second;
    SupportBox support_box;
    double mean = 0.0;  // integral against dSigma
};

TestFunction make_test_function(const SurfacePatch& patch, const SurfaceFields& fields, std::vector<double> values);

// |B(Z)+S|^2 + 4(K-1)|N_h|^2 at a node
double potential(const SurfacePatch& patch, const SurfacePointData& d);

double index_form(const SurfacePatch& patch, const SurfaceFields& fields, const TestFunction& u, const TestFunction& v);

std::vector<double> stability_operator(const SurfacePatch& patch, const SurfaceFields& fields, const TestFunction& v);

// 4(|N_h|^-2 <B(Z),S> + H^2 + K - 1)
std::vector<double> closed_form_L_Nh(const SurfacePatch& patch, const SurfaceFields& fields);

struct IbpResiduals {
    double r1 = 0.0;
    double r2 = 0.0;
};

IbpResiduals ibp_residuals(const SurfacePatch& patch, const SurfaceFields& fields, const TestFunction& u,
                           const TestFunction& v);

struct Discriminant {
    int branch = 1;  // 1 when H^2 + K = 0, 2 when positive
    std::vector<double> lhs;
    std::vector<double> rhs;
};

Discriminant discriminant_check(const SurfacePatch& patch, const SurfaceFields& fields);

struct SecondVariationCheck {
    double fd_value = 0.0;
    double Q_value = 0.0;
};

SecondVariationCheck second_variation_fd_check(const SurfacePatch& patch, const SurfaceFields& fields,
                                               const TestFunction& u, double h_fd = 1e-3);

// two-lobed bump on [-1, 1] with phi(0) > 0 and zero integral
double certificate_phi(double x);

struct Certificate {
    long n = 0;
    double Q_value = 0.0;
    double norm2 = 0.0;
    double mean_residual = 0.0;
    TestFunction u;
};

// |L(|N_h|)| below this on an H^2 + K = 0 patch counts as vertical
inline constexpr double kVerticalTol = 1e-6;

enum class CertificateOutcome { certificate, vertical_degenerate, none_at_scale };
const char* to_string(CertificateOutcome o);

struct CertificateOptions {
    long max_n = 64;
    double threshold = 1e-6;  // relative to the squared norm of the test function
    double s_scale = 1.0;     // half-width of the n = 1 s-factor
};

struct StabilityReport {
    int kappa = 0;
    double H = 0.0;
    double HsqPlusK = 0.0;
    double area = 0.0;
    std::optional<double> Q_u1;
    std::vector<double> L_Nh_field;
    double min_L_Nh = 0.0, max_L_Nh = 0.0;
    std::vector<double> discriminant_field;
    double discriminant_residual = 0.0;
    std::vector<std::pair<long, double>> trials;  // (n, Q / norm^2)
    long max_n_tried = 0;
    CertificateOutcome outcome = CertificateOutcome::none_at_scale;
    std::optional<Certificate> certificate;
};

StabilityReport instability_certificate(const SurfacePatch& patch, const SurfaceFields& fields,
                                        const CertificateOptions& opts = {});

}  // namespace subrlab
