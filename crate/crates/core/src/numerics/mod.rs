//! Small numerical building blocks: dense linear algebra on tiny matrices,
//! adaptive Gauss-Kronrod quadrature and Gauss-Hermite rules.

pub mod gauss_hermite;
pub mod linalg;
pub mod quadrature;
