//! Numerical building blocks: log-space sums, adaptive quadrature, an
//! embedded Runge–Kutta integrator and monotone root finding.

pub mod logsum;
pub mod ode;
pub mod quad;
pub mod roots;
