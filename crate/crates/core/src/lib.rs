//! Exact fusion and braiding data of abelian Dijkgraaf–Witten theories in
//! 2+1D and 3+1D, a brute-force state-sum oracle, and exact checks of the
//! quantum-surgery identities relating them.

pub mod caps;
pub mod complexes;
pub mod error;
pub mod exactnum;
pub mod groupcohomology;
pub mod model;
pub mod modular2d;
pub mod modular3p1d;
pub mod mono;
pub mod report;
pub mod statesum;
pub mod surgery_verify;

pub use error::{Error, Result};
pub use exactnum::CycNum;
pub use mono::{Acc, Mono};
