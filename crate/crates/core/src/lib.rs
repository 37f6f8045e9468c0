//! Exact Gröbner-basis kernel over `F_p` and `F_{p^2}`, and a checker for the
//! strong and weak Lefschetz properties of graded Artinian quotients.
//!
//! The checker places the candidate Lefschetz element in the last variable of
//! a graded reverse lexicographic order. In that position, multiplication by
//! powers of the candidate on the quotient has the same ranks as on the
//! quotient by the initial ideal, so every rank reduces to counting standard
//! monomials.

pub mod cli;
pub mod coxeter;
pub mod field;
pub mod groebner;
pub mod lefschetz;
pub mod poly;
