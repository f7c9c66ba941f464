//! Small self-contained numeric kernels: root bracketing, adaptive Simpson
//! quadrature, a Dormand-Prince 5(4) driver, and Sturm bisection for
//! symmetric tridiagonal matrices.

pub mod ode;
pub mod quad;
pub mod roots;
pub mod tridiag;
