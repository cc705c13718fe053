#pragma once

// Energy functional, Nehari functional and related quantities on the
// trace side:
//
//   Q(u) = sum_xi (a(xi) + mu) |u^(xi)|^2
//   I(u) = Q(u)/2 - ||u||_p^p / p
//   J(u) = Q(u) - ||u||_p^p

#include "prnls/model.hpp"
#include "prnls/symbol.hpp"

namespace prnls {

struct EnergyReport {
  double quadratic = 0.0;     // Q
  double lp = 0.0;            // ||u||_p^p
  double energy = 0.0;        // I
  double nehari = 0.0;        // J
  double residual = 0.0;      // relative L^2 residual of the strong equation
  double identity_gap = 0.0;  // |I - (1/2 - 1/p) ||u||_p^p|
};

double quadratic_form(const RealField& u, const Multiplier& M);

/// Fills every field; residual is 0 for u = 0.
EnergyReport energy(const RealField& u, const Multiplier& M);

struct NehariProjection {
  double t_star;
  RealField projected;
};

/// t* = (Q/||u||_p^p)^{1/(p-2)}; throws for u = 0.
NehariProjection nehari_project(const RealField& u, const Multiplier& M);

/// (A + mu) u
RealField apply_shifted(const Multiplier& M, const RealField& u);

/// |u|^{p-2} u
RealField power_nonlinearity(const RealField& u, double p);

/// ||(A + mu) u - |u|^{p-2} u||_2 / ||u||_2
double residual(const RealField& u, const Multiplier& M);

/// Q^{p/(p-2)} / (||u||_p^p)^{2/(p-2)}; minimized by ground states, where it
/// equals (1/2 - 1/p)^{-1} I.
double rayleigh_quotient(const RealField& u, const Multiplier& M);

}  // namespace prnls
