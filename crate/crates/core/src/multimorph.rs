//! Three-layer piezoelectric multimorph: one passive substrate under two
//! identical piezoelectric layers driven with opposite polarity.
//!
//! Layer heights are measured from the bottom face of the substrate:
//!
//! ```text
//!   ┌──────────────────────┐  t_s + 2 t_p
//!   │   piezo (top)   S_2  │
//!   ├──────────────────────┤  t_s + t_p
//!   │   piezo (bottom) S_1 │
//!   ├──────────────────────┤  t_s
//!   │                      │
//!   │   substrate          │
//!   └──────────────────────┘  0
//! ```
//!
//! The in-plane resultants `P_i` are forces per unit width (N/m). Electrodes
//! are not modelled.

use crate::error::{Error, Result};
use crate::linalg::solve_dense;
use crate::materials::Material;

/// Bonded cross-section of the beam, independent of length and drive.
///
/// A zero piezo thickness is accepted here so the homogeneous single-layer
/// limit of the transformed section can be evaluated directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSection {
    /// Substrate Young modulus (Pa).
    pub substrate_e: f64,
    /// Substrate thickness (m).
    pub substrate_t: f64,
    /// Piezo layer Young modulus (Pa), shared by both layers.
    pub piezo_e: f64,
    /// Thickness of one piezo layer (m).
    pub piezo_t: f64,
    /// Beam width (m).
    pub width: f64,
}

impl CrossSection {
    pub fn new(substrate_e: f64, substrate_t: f64, piezo_e: f64, piezo_t: f64, width: f64) -> Result<Self> {
        let section = Self {
            substrate_e,
            substrate_t,
            piezo_e,
            piezo_t,
            width,
        };
        section.validate()?;
        Ok(section)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("substrate modulus", self.substrate_e),
            ("substrate thickness", self.substrate_t),
            ("piezo modulus", self.piezo_e),
            ("width", self.width),
        ];
        for (what, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidStack(format!("{what} must be positive, got {v:e}")));
            }
        }
        if !(self.piezo_t.is_finite() && self.piezo_t >= 0.0) {
            return Err(Error::InvalidStack(format!(
                "piezo thickness must be non-negative, got {:e}",
                self.piezo_t
            )));
        }
        Ok(())
    }

    pub fn total_thickness(&self) -> f64 {
        self.substrate_t + 2.0 * self.piezo_t
    }

    /// `(modulus, thickness, mid-height)` of substrate, lower piezo, upper piezo.
    pub fn layers(&self) -> [(f64, f64, f64); 3] {
        let (ts, tp) = (self.substrate_t, self.piezo_t);
        [
            (self.substrate_e, ts, 0.5 * ts),
            (self.piezo_e, tp, ts + 0.5 * tp),
            (self.piezo_e, tp, ts + 1.5 * tp),
        ]
    }

    pub fn reference_modulus(&self, choice: ModulusReference) -> f64 {
        match choice {
            ModulusReference::Substrate => self.substrate_e,
            ModulusReference::Piezo => self.piezo_e,
            ModulusReference::Max => self.substrate_e.max(self.piezo_e),
        }
    }

    /// Transformed-section homogenisation: every layer's width is scaled
    /// by `E_i / E_ref`, then the neutral axis is the area barycentre and the
    /// inertia follows from the parallel-axis sum over layers.
    pub fn equivalent_section(&self, choice: ModulusReference) -> EquivalentSection {
        let e_ref = self.reference_modulus(choice);
        let layers = self.layers();

        let (weighted, area) = layers
            .iter()
            .fold((0.0, 0.0), |(m, s), &(e, t, h)| (m + e * t * h, s + e * t));
        let neutral_axis = weighted / area;

        let inertia = self.width
            * layers
                .iter()
                .map(|&(e, t, h)| {
                    let d = neutral_axis - h;
                    (e / e_ref) * (t * t * t / 12.0 + t * d * d)
                })
                .sum::<f64>();

        EquivalentSection {
            neutral_axis,
            inertia,
            reference_modulus: e_ref,
            rigidity: e_ref * inertia,
        }
    }

    /// Closed-form neutral-axis height for equal piezo layers.
    pub fn neutral_axis_closed_form(&self) -> f64 {
        let (e1, t1, e3, t3) = (self.substrate_e, self.substrate_t, self.piezo_e, self.piezo_t);
        (t1 * t1 * e1 + 4.0 * t3 * t3 * e3 + 4.0 * t1 * t3 * e3) / (2.0 * (t1 * e1 + 2.0 * t3 * e3))
    }

    /// Closed-form inertia normalised to the piezo modulus, including the
    /// `1/12` factor that the single-layer limit `W t³ / 12` requires.
    pub fn inertia_closed_form(&self) -> f64 {
        let (e1, t1, e3, t3) = (self.substrate_e, self.substrate_t, self.piezo_e, self.piezo_t);
        self.width * stack_polynomial(e1, t1, e3, t3) / (12.0 * e3 * (t1 * e1 + 2.0 * t3 * e3))
    }
}

/// `8 E1 t1³ E3 t3 + 24 E1 t1² E3 t3² + 32 E1 t1 E3 t3³ + E1² t1⁴ + 16 E3² t3⁴`,
/// the polynomial shared by the tip deflection and the section inertia.
fn stack_polynomial(e1: f64, t1: f64, e3: f64, t3: f64) -> f64 {
    let (a, b) = (e1 * t1, e3 * t3);
    8.0 * a * t1 * t1 * b
        + 24.0 * a * t1 * b * t3
        + 32.0 * a * b * t3 * t3
        + a * a * t1 * t1
        + 16.0 * b * b * t3 * t3
}

/// Which modulus the transformed section is normalised to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModulusReference {
    Substrate,
    Piezo,
    #[default]
    Max,
}

impl ModulusReference {
    pub const ALL: [ModulusReference; 3] = [Self::Substrate, Self::Piezo, Self::Max];
}

/// Homogenised section properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentSection {
    /// Neutral-axis height above the substrate bottom (m).
    pub neutral_axis: f64,
    /// Second moment of area of the width-normalised section (m⁴).
    pub inertia: f64,
    /// Normalising modulus (Pa).
    pub reference_modulus: f64,
    /// Flexural rigidity `E_ref * I` (N·m²); independent of the reference.
    pub rigidity: f64,
}

/// Piezoelectric strains of the lower and upper active layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strains {
    pub s1: f64,
    pub s2: f64,
}

/// In-plane resultants per unit width and the common curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSolution {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// Curvature `1/R` (1/m).
    pub kappa: f64,
}

/// A multimorph cantilever: cross-section, transverse coefficient and length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultimorphStack {
    section: CrossSection,
    d31: f64,
    length: f64,
}

impl MultimorphStack {
    pub fn new(section: CrossSection, d31: f64, length: f64) -> Result<Self> {
        section.validate()?;
        if section.piezo_t <= 0.0 {
            return Err(Error::InvalidStack(format!(
                "piezo thickness must be positive, got {:e}",
                section.piezo_t
            )));
        }
        if !d31.is_finite() {
            return Err(Error::InvalidStack("d31 must be finite".into()));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidStack(format!("length must be positive, got {length:e}")));
        }
        Ok(Self { section, d31, length })
    }

    /// Builds a stack from registry materials; the piezo material must carry d31.
    pub fn from_materials(
        substrate: &Material,
        piezo: &Material,
        substrate_t: f64,
        piezo_t: f64,
        width: f64,
        length: f64,
    ) -> Result<Self> {
        let d31 = piezo.d31().ok_or_else(|| Error::InvalidMaterial {
            name: piezo.name().to_string(),
            reason: "piezo layer material has no d31 coefficient".into(),
        })?;
        let section = CrossSection::new(
            substrate.young_modulus(),
            substrate_t,
            piezo.young_modulus(),
            piezo_t,
            width,
        )?;
        Self::new(section, d31, length)
    }

    pub fn section(&self) -> &CrossSection {
        &self.section
    }

    pub fn d31(&self) -> f64 {
        self.d31
    }

    /// Cantilever length (m).
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn with_d31(self, d31: f64) -> Result<Self> {
        Self::new(self.section, d31, self.length)
    }

    pub fn with_length(self, length: f64) -> Result<Self> {
        Self::new(self.section, self.d31, length)
    }

    /// Opposite-polarity drive: the lower layer gets `-d31 V / t_p`, the
    /// upper `+d31 V / t_p`.
    pub fn piezo_strains(&self, voltage: f64) -> Strains {
        let s = self.d31 * voltage / self.section.piezo_t;
        Strains { s1: -s, s2: s }
    }

    /// Solves force equilibrium, moment equilibrium and strain continuity at
    /// both interfaces for `(P_1, P_2, P_3, 1/R)`.
    ///
    /// The unknowns are scaled (`P_i` by `E_p t_p`, curvature by the total
    /// thickness) so the 4×4 system has O(1) entries before pivoting.
    pub fn solve_curvature(&self, voltage: f64) -> Result<CurvatureSolution> {
        let CrossSection {
            substrate_e: es,
            substrate_t: ts,
            piezo_e: ep,
            piezo_t: tp,
            ..
        } = self.section;
        let Strains { s1, s2 } = self.piezo_strains(voltage);
        let force_scale = ep * tp;
        let total = self.section.total_thickness();
        let bending = (es * ts.powi(3) + 2.0 * ep * tp.powi(3)) / 12.0;

        let matrix = [
            [1.0, 1.0, 1.0, 0.0],
            [
                0.5 * ts / total,
                (ts + 0.5 * tp) / total,
                (ts + 1.5 * tp) / total,
                bending / (force_scale * total * total),
            ],
            [force_scale / (es * ts), -1.0, 0.0, 0.5 * (ts + tp) / total],
            [0.0, 1.0, -1.0, tp / total],
        ];
        let [p1, p2, p3, k] = solve_dense(matrix, [0.0, 0.0, s1, s2 - s1])?;
        Ok(CurvatureSolution {
            p1: p1 * force_scale,
            p2: p2 * force_scale,
            p3: p3 * force_scale,
            kappa: k / total,
        })
    }

    /// Free tip deflection `kappa L² / 2` from the equilibrium solve.
    pub fn tip_deflection(&self, voltage: f64) -> Result<f64> {
        let sol = self.solve_curvature(voltage)?;
        Ok(0.5 * sol.kappa * self.length * self.length)
    }

    /// Closed-form tip deflection,
    /// `6 L² E_p t_p d31 (E_s t_s + 2 E_p t_p) V / poly` where `poly` carries
    /// the `E_s² t_s⁴` term.
    pub fn tip_deflection_closed_form(&self, voltage: f64) -> f64 {
        let s = &self.section;
        let (es, ts, ep, tp) = (s.substrate_e, s.substrate_t, s.piezo_e, s.piezo_t);
        6.0 * self.length * self.length * ep * tp * self.d31 * (es * ts + 2.0 * ep * tp) * voltage
            / stack_polynomial(es, ts, ep, tp)
    }

    pub fn equivalent_section(&self, choice: ModulusReference) -> EquivalentSection {
        self.section.equivalent_section(choice)
    }

    /// Flexural rigidity of the homogenised section (N·m²).
    pub fn rigidity(&self) -> f64 {
        self.equivalent_section(ModulusReference::default()).rigidity
    }

    /// Cantilever stiffness `3 E I / L³` (N/m).
    pub fn stiffness(&self) -> f64 {
        3.0 * self.rigidity() / self.length.powi(3)
    }

    /// End force producing the same tip deflection as the piezoelectric drive:
    /// stiffness times free tip deflection. Its sign follows `d31 * V`.
    pub fn equivalent_force(&self, voltage: f64) -> Result<f64> {
        Ok(self.stiffness() * self.tip_deflection(voltage)?)
    }

    /// `(3/2) W t_p E_p d31 V / L`.
    pub fn equivalent_force_closed_form(&self, voltage: f64) -> f64 {
        let s = &self.section;
        1.5 * s.width * s.piezo_t * s.piezo_e * self.d31 * voltage / self.length
    }

    /// Relative residuals of the four equations at `sol`, each divided by the
    /// largest term magnitude in that equation (zero when every term is zero).
    pub fn residuals(&self, voltage: f64, sol: &CurvatureSolution) -> [f64; 4] {
        let s = &self.section;
        let (es, ts, ep, tp) = (s.substrate_e, s.substrate_t, s.piezo_e, s.piezo_t);
        let Strains { s1, s2 } = self.piezo_strains(voltage);
        let CurvatureSolution { p1, p2, p3, kappa } = *sol;

        fn rel(terms: &[f64]) -> f64 {
            let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
            if scale == 0.0 {
                0.0
            } else {
                terms.iter().sum::<f64>().abs() / scale
            }
        }

        [
            rel(&[p1, p2, p3]),
            rel(&[
                0.5 * ts * p1,
                (ts + 0.5 * tp) * p2,
                (ts + 1.5 * tp) * p3,
                (es * ts.powi(3) + 2.0 * ep * tp.powi(3)) / 12.0 * kappa,
            ]),
            rel(&[
                p1 / (es * ts),
                0.5 * ts * kappa,
                -p2 / (ep * tp),
                0.5 * tp * kappa,
                -s1,
            ]),
            rel(&[s1, p2 / (ep * tp), 0.5 * tp * kappa, -p3 / (ep * tp), 0.5 * tp * kappa, -s2]),
        ]
    }
}
