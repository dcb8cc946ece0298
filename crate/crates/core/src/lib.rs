//! Static electromechanical model of a piezoelectric micro-scanner: a rigid
//! square mirror held between two three-layer piezoelectric multimorphs
//! driven with opposite voltages.
//!
//! The layers, bottom up:
//!
//! - [`materials`]: constants, units and the built-in registry
//! - [`multimorph`]: stack equilibrium, tip deflection, transformed section,
//!   equivalent actuator force
//! - [`scanner`]: the symmetry-reduced propped beam, tilt and profile
//! - [`oracle`]: finite-difference reference solution for the same beam
//! - [`sweep`]: parameter sweeps, 1-D optimisation, the published table
//! - [`verify`]: the self-check suite behind `piezoscan verify`
//! - [`cli`]: config format, CSV output and the command-line driver
//!
//! All quantities are SI inside the crate.
//!
//! ```
//! use piezoscan::ScannerDesign;
//!
//! let sol = ScannerDesign::reference(850e-6).solve(401).unwrap();
//! assert!((sol.tilt_deg() - 0.532).abs() < 1e-3);
//! ```

pub mod cli;
pub mod design;
pub mod error;
pub mod linalg;
pub mod materials;
pub mod multimorph;
pub mod oracle;
pub mod scanner;
pub mod sweep;
pub mod verify;

pub use design::{Geometry, ScannerDesign};
pub use error::{Error, Result};
pub use materials::{Material, MaterialRegistry};
pub use multimorph::{CrossSection, ModulusReference, MultimorphStack};
pub use scanner::{solve_scanner, HalfBeam, ScannerGeometry, ScannerSolution};
