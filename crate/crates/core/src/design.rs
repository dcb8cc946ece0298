//! A complete scanner design: materials, geometry and drive voltage.

use crate::error::Result;
use crate::materials::{Material, MaterialRegistry};
use crate::multimorph::MultimorphStack;
use crate::scanner::{solve_scanner, ScannerGeometry, ScannerSolution};

/// Geometry in SI units (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub beam_length: f64,
    pub beam_width: f64,
    pub substrate_thickness: f64,
    pub piezo_thickness: f64,
    pub mirror_side: f64,
}

/// Everything needed to evaluate one scanner.
#[derive(Debug, Clone, PartialEq)]
pub struct ScannerDesign {
    pub substrate: Material,
    pub piezo: Material,
    pub geometry: Geometry,
    /// Drive voltage across each piezo layer (V).
    pub voltage: f64,
}

impl ScannerDesign {
    /// Silicon substrate 5 µm, two 1 µm PZT-5H layers, 30 µm wide beams,
    /// 300 µm square mirror, 50 V.
    pub fn reference(beam_length: f64) -> Self {
        let reg = MaterialRegistry::builtin();
        Self::reference_with(&reg, beam_length).expect("built-in registry has both materials")
    }

    /// Reference geometry using `silicon` and `pzt-5h` from `registry`.
    pub fn reference_with(registry: &MaterialRegistry, beam_length: f64) -> Result<Self> {
        Ok(Self {
            substrate: registry.lookup("silicon")?.clone(),
            piezo: registry.lookup("pzt-5h")?.clone(),
            geometry: Geometry {
                beam_length,
                beam_width: 30e-6,
                substrate_thickness: 5e-6,
                piezo_thickness: 1e-6,
                mirror_side: 300e-6,
            },
            voltage: 50.0,
        })
    }

    pub fn stack(&self) -> Result<MultimorphStack> {
        let g = &self.geometry;
        MultimorphStack::from_materials(
            &self.substrate,
            &self.piezo,
            g.substrate_thickness,
            g.piezo_thickness,
            g.beam_width,
            g.beam_length,
        )
    }

    pub fn scanner_geometry(&self) -> Result<ScannerGeometry> {
        ScannerGeometry::new(self.stack()?, self.geometry.mirror_side)
    }

    pub fn solve(&self, samples: usize) -> Result<ScannerSolution> {
        solve_scanner(&self.scanner_geometry()?, self.voltage, samples)
    }
}
