#pragma once

#include "slab/grid.hpp"

namespace slab {

/// Harmonic (Poisson) extension of a periodic surface function into the slab:
/// sum_n f_hat(n) e^{2 pi |n| x3} e^{2 pi i n.x'} restricted to x3 in [-d, 0].
/// The trace at x3 = 0 equals f exactly in mode space.  Nyquist modes of f
/// are dropped (surface data is treated as band-limited below Nyquist).
Field3 poisson_extend(const SurfaceFunction& f, const SlabGrid& grid);

/// Per-time-instant fields of the flattening map
///   Phi(t, x) = (x1, x2, x3 + eta_bar(t, x) dtilde(x3)),  dtilde = 1 + x3/d:
/// A = d1(eta_bar) dtilde, B = d2(eta_bar) dtilde,
/// J = 1 + eta_bar/d + d3(eta_bar) dtilde (the Jacobian), K = 1/J,
/// and the surface normal N = (-d1 eta, -d2 eta, 1) on Sigma_+.
/// The inverse-transpose gradient has the sparse form
///   A_cal = [[1,0,-A K],[0,1,-B K],[0,0,K]],
/// so (A, B, K) determine it completely.
/// All eta_bar derivatives are spectral in x' and analytic in x3
/// (exact 2 pi |n| factors per mode).
struct GeometryTensors {
    SlabGrid grid;
    double time = 0.0;
    Field3 eta_bar, A, B, J, K;
    // Present when the surface velocity was provided: the Poisson extension
    // of dt_eta and the analytic dt_J = d3(dt_eta_bar dtilde).
    bool has_surface_velocity = false;
    Field3 deta_bar_dt, dJ_dt;
    // Surface fields on Gamma.
    std::vector<double> surf_eta, surf_deta_dt;
    std::vector<double> N_1, N_2; // normal components (-d1 eta, -d2 eta); N_3 = 1
    std::vector<double> N_mag;    // |N| = sqrt(1 + |grad eta|^2)

    double nmag_at(int i1, int i2) const {
        return N_mag[static_cast<std::size_t>(i1) * grid.N2 + i2];
    }
};

/// Builds the tensor family.  Throws NumericalError if J <= 0 anywhere
/// (the flattening map must be a diffeomorphism).
GeometryTensors compute_geometry(const SurfaceFunction& eta, const SlabGrid& grid);

/// Max-norm residuals of the four geometric identities:
/// id1: dk(J Acal_ik) = 0 (discrete vertical derivative),
/// id2: dt_J = d3(dt_eta_bar dtilde) (discrete vertical derivative; requires
///      surface velocity, reported as NaN otherwise),
/// id3: J Acal_j3 = N_j on Sigma_+,
/// id4: J Acal_j3 = e3_j on Sigma_-.
struct GeometryIdentityReport {
    double id1 = 0.0;
    double id2 = 0.0;
    double id3 = 0.0;
    double id4 = 0.0;
};
GeometryIdentityReport verify_geometric_identities(const GeometryTensors& g);

/// c0 = sup max(J, 1/J); c1 = sup over nodes of max(lambda_max, 1/lambda_min)
/// of the symmetric 3x3 matrix J Acal^T Acal (closed-form eigenvalues), so
/// (1/c0) <= J <= c0 and (1/c1) I <= J Acal^T Acal <= c1 I hold with the
/// reported constants.  The smallness report checks the five sup-norms
/// ||J-1||, ||A||, ||B||, ||N - e3||, ||K-1|| <= 1/2 directly.
struct GeometryBounds {
    double c0 = 1.0;
    double c1 = 1.0;
    double sup_J_minus_1 = 0.0;
    double sup_A = 0.0;
    double sup_B = 0.0;
    double sup_N_minus_e3 = 0.0;
    double sup_K_minus_1 = 0.0;
    bool smallness_ok = true;
};
GeometryBounds geometry_bounds(const GeometryTensors& g);

/// Eigenvalue range {lambda_min, lambda_max} of J Acal^T Acal at one node,
/// from the closed form for its (A, B, J) structure.
void jata_eigen_range(double A, double B, double J, double& lmin, double& lmax);

} // namespace slab
