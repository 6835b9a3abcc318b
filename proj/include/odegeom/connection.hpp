#pragma once

#include <array>
#include <vector>

#include "odegeom/geom.hpp"

namespace odegeom {

/// Spinor connection one-forms over (dy, dp, dq, dr, ds), with
///   grad o = phi o + psi iota,   grad iota = chi o - phi iota.
struct ConnectionForms {
  Expr alpha, gamma, delta;
  std::vector<Expr> phi, psi, chi;
};

/// phi = alpha dy - q^{-1/2} gamma dp, chi = 4 gamma dy + delta dp, and psi,
/// with the closed forms found for the conic equation.
ConnectionForms connection_forms(const PentadData& pd);

/// Coefficients of grad e^(m+1) = c_phi phi e^(m+1) + c_psi psi e^m + c_chi chi e^(m+2)
/// for e^(m+1) = o^m iota^(4-m).
struct FrameLaw {
  int phi = 0, psi = 0, chi = 0;
};

/// Closed form (2m - 4, m, 4 - m).
FrameLaw frame_law(int m);

/// The same coefficients obtained by applying the Leibniz rule to each of
/// the four spinor factors separately.
FrameLaw frame_law_by_expansion(int m);

/// Compatibility of the frame with the Levi-Civita connection, plus the
/// connection forms extracted numerically from grad e^1 and grad e^5 and
/// compared with the closed forms.
CheckReport connection_check(const ConnectionForms& cf, const PentadData& pd, const CurvatureEngine& engine,
                             const JetOde& ode, const EquivOptions& opts);

/// chi has no dq, dr, ds components and the hypersurfaces y = const are null.
CheckReport integrability_check(const ConnectionForms& cf, const MetricField& m, const JetOde& ode,
                                const EquivOptions& opts);

}  // namespace odegeom
