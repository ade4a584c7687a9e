//! Numerical building blocks: an adaptive Runge-Kutta integrator, monotone
//! cubic interpolation, quadrature helpers and a tridiagonal eigenvalue
//! counter.

pub mod ode;
pub mod pchip;
pub mod quad;
pub mod roots;
pub mod tridiag;
