//! Exact verification of two pentagon-equation solutions on polygon
//! triangulations, with a hyperbolic-geometry oracle.

pub mod symexpr;
pub mod polygon;
pub mod gamma;
pub mod ptolemy;
pub mod korepanov;
pub mod hyperbolic;
pub mod cli;
