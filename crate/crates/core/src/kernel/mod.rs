//! Polynomial arithmetic, Gröbner bases and ideal operations over `F_p`.

pub mod field;
pub mod groebner;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod random;

pub use field::{Field, DEFAULT_PRIME};
pub use groebner::{groebner_basis, normal_form, GroebnerBasis, DEFAULT_PAIR_BUDGET};
pub use monomial::{binomial, monomials_of_degree, Monomial, MonomialOrder, MAX_VARS};
pub use poly::{parse_polynomial, Polynomial, Ring, Term};
pub use ideal::{HomogeneousIdeal, Saturation};
pub use linalg::Matrix;
