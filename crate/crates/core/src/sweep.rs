//! One-parameter sweeps and a bounded 1-D maximiser over a scanner design.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::design::ScannerDesign;
use crate::error::{Error, Result};

/// Relative (to the sweep interval) width at which golden-section stops.
pub const GOLDEN_TOLERANCE: f64 = 1e-4;

/// Design quantity varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    BeamLength,
    BeamWidth,
    SubstrateThickness,
    PiezoThickness,
    MirrorSide,
    Voltage,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        Self::BeamLength,
        Self::BeamWidth,
        Self::SubstrateThickness,
        Self::PiezoThickness,
        Self::MirrorSide,
        Self::Voltage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::BeamLength => "beam_length",
            Self::BeamWidth => "beam_width",
            Self::SubstrateThickness => "substrate_thickness",
            Self::PiezoThickness => "piezo_thickness",
            Self::MirrorSide => "mirror_side",
            Self::Voltage => "voltage",
        }
    }

    /// Unit a user would naturally type for this axis.
    pub fn natural_unit(self) -> crate::materials::Unit {
        match self {
            Self::Voltage => crate::materials::Unit::Volt,
            _ => crate::materials::Unit::Micrometer,
        }
    }

    /// Copy of `base` with this axis set to `value` (SI).
    pub fn apply(self, base: &ScannerDesign, value: f64) -> ScannerDesign {
        let mut d = base.clone();
        let g = &mut d.geometry;
        match self {
            Self::BeamLength => g.beam_length = value,
            Self::BeamWidth => g.beam_width = value,
            Self::SubstrateThickness => g.substrate_thickness = value,
            Self::PiezoThickness => g.piezo_thickness = value,
            Self::MirrorSide => g.mirror_side = value,
            Self::Voltage => d.voltage = value,
        }
        d
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::InvalidSweep(format!(
                    "unknown axis `{s}` (expected one of {})",
                    Self::ALL.map(|a| a.name()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ScannerDesign,
    pub axis: SweepAxis,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("need at least 2 steps, got {}", self.steps)));
        }
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(Error::InvalidSweep(format!(
                "need from < to, got [{:e}, {:e}]",
                self.from, self.to
            )));
        }
        Ok(())
    }

    /// Uniform points including both endpoints, ascending.
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Scalar outputs at one design point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub tilt_deg: f64,
    pub y_max_m: f64,
    pub force_n: f64,
    pub reaction_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    /// Failed points keep their error instead of being dropped.
    pub result: Result<PointResult>,
}

/// Evaluates `design` without a profile.
pub fn evaluate(design: &ScannerDesign) -> Result<PointResult> {
    let sol = design.solve(2)?;
    Ok(PointResult {
        tilt_deg: sol.tilt_deg(),
        y_max_m: sol.y_max,
        force_n: sol.force,
        reaction_n: sol.reaction,
    })
}

/// Evaluates every sweep point (in parallel) and returns them in ascending
/// parameter order. Each point is a pure function of its value, so the output
/// does not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    Ok(spec
        .values()
        .into_par_iter()
        .map(|value| SweepRecord {
            value,
            result: evaluate(&spec.axis.apply(&spec.base, value)),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Tilt,
    YMax,
}

impl Objective {
    fn score(self, r: &PointResult) -> f64 {
        match self {
            Objective::Tilt => r.tilt_deg,
            Objective::YMax => r.y_max_m,
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tilt" => Ok(Self::Tilt),
            "y_max" => Ok(Self::YMax),
            other => Err(Error::InvalidSweep(format!("unknown objective `{other}`"))),
        }
    }
}

/// Best point found by [`optimize_1d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub value: f64,
    pub objective: f64,
    /// Largest objective among the coarse grid samples.
    pub grid_best: f64,
    pub evaluations: usize,
}

/// Maximises `objective` along the sweep axis: a coarse scan over
/// `spec.steps` points, then golden-section search inside the bracket around
/// the best sample. Ties go to the smaller parameter value, and the answer is
/// never worse than the best grid sample.
pub fn optimize_1d(spec: &SweepSpec, objective: Objective) -> Result<Optimum> {
    let grid = run_sweep(spec)?;
    let eval = |x: f64| -> Result<f64> {
        Ok(objective.score(&evaluate(&spec.axis.apply(&spec.base, x))?))
    };

    let mut scores = Vec::with_capacity(grid.len());
    for rec in &grid {
        let r = rec.result.as_ref().map_err(Clone::clone)?;
        scores.push((rec.value, objective.score(r)));
    }

    // strict > keeps the earliest (smallest) value on ties
    let mut best_idx = 0;
    for (i, &(_, s)) in scores.iter().enumerate() {
        if s > scores[best_idx].1 {
            best_idx = i;
        }
    }
    let grid_best = scores[best_idx].1;
    let mut best = scores[best_idx];
    let mut evaluations = scores.len();

    let lo = scores[best_idx.saturating_sub(1)].0;
    let hi = scores[(best_idx + 1).min(scores.len() - 1)].0;
    let tol = GOLDEN_TOLERANCE * (spec.to - spec.from);

    let mut consider = |x: f64, s: f64| {
        if s > best.1 || (s == best.1 && x < best.0) {
            best = (x, s);
        }
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    evaluations += 2;
    consider(c, fc);
    consider(d, fd);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c)?;
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d)?;
            consider(d, fd);
        }
        evaluations += 1;
    }

    Ok(Optimum {
        value: best.0,
        objective: best.1,
        grid_best,
        evaluations,
    })
}

/// Scanner label, beam length (m), published tilt (deg) and y_max (m).
pub const TABLE1_ROWS: [(&str, f64, f64, f64); 3] = [
    ("A", 850e-6, 0.57, 2.45e-6),
    ("B", 600e-6, 0.48, 1.76e-6),
    ("C", 500e-6, 0.42, 1.48e-6),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub label: &'static str,
    pub published_tilt_deg: f64,
    pub published_y_max_m: f64,
    pub record: SweepRecord,
}

/// The three published scanners (850, 600 and 500 µm beams) on `base`'s
/// cross-section, materials and drive.
pub fn table1(base: &ScannerDesign) -> Vec<Table1Row> {
    TABLE1_ROWS
        .iter()
        .map(|&(label, length, tilt, ymax)| Table1Row {
            label,
            published_tilt_deg: tilt,
            published_y_max_m: ymax,
            record: SweepRecord {
                value: length,
                result: evaluate(&SweepAxis::BeamLength.apply(base, length)),
            },
        })
        .collect()
}
