pub mod asymptotics;
pub mod checks;
pub mod discrete_log;
pub mod error;
pub mod gridfile;
pub mod jet;
pub mod lattice;
pub mod lax;
pub mod matrix;
pub mod numerics;
pub mod ortho;
pub mod parametrix;
pub mod pattern;

pub use error::{Error, Result, Site};
pub use lattice::{axis_step, cross_ratio, cross_ratio_fill, evolve_grid, AxisKind, PowerMapGrid};
pub use matrix::TransferMatrix;
pub use numerics::{
    bessel_j, branch_power, gamma_real, hankel_h, BigComplex, BranchSpec, HankelKind,
    MathConstants, PrecisionContext,
};
