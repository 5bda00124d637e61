//! Numerical Mahler measures of P_k.

pub mod bertin;
pub mod eta;
pub mod mc;
pub mod quadrature;

pub use bertin::{bertin_series, BertinEstimate};
pub use eta::{eta, k_of_tau, tau_of_k, w_of_tau, CMPoint, TauSource};
pub use mc::{mahler_mc, mahler_mc_with, McEstimate, McIntegrand, McOptions};
pub use quadrature::{jensen_integrand, mahler_quadrature, mahler_quadrature_prec};
