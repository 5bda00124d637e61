//! L-values of the CM newforms behind m(P_k), and the constant d₃.

pub mod dirichlet;
pub mod forms;
pub mod newforms;

pub use dirichlet::{d3, dirichlet_lvalue};
pub use forms::{
    epstein_combo, epstein_sum, form_coefficients, hecke_lvalue, weight3_tail_bound, BinaryForm, DirichletCoeffs,
    EpsteinSeries, FormTerm, QuadFormSeries,
};
pub use newforms::{
    lvalue_from_coeffs, newform_coefficients, newform_table, twist_character, twist_coeff,
    twisted_newform_coefficients, NewformEntry, TABLE_PRIMES,
};
