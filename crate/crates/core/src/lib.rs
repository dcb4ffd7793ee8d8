//! Exact arithmetic for probabilistic zeta functions of finite and profinite
//! groups.

pub mod appendix;
pub mod arith;
pub mod cli;
pub mod coxeter;
pub mod lie;
pub mod perm;
pub mod profinite;
pub mod series;
pub mod sporadic;

pub use series::FiniteDirichletSeries;
