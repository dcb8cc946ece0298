//! Self-verification suite: closed-form identities, profile invariants and
//! agreement with the finite-difference oracle.
//!
//! Every check reports the measured worst case next to its fixed tolerance.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::ScannerDesign;
use crate::error::Result;
use crate::materials::MaterialRegistry;
use crate::multimorph::{CrossSection, ModulusReference, MultimorphStack};
use crate::oracle::{self, BeamProblem, MirrorModel};
use crate::scanner::HalfBeam;
use crate::sweep::{table1, TABLE1_ROWS};

pub const IDENTITY_TOL: f64 = 1e-10;
pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const PROFILE_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 5e-3;
pub const MIN_CONVERGENCE_ORDER: f64 = 1.8;
pub const STIFF_MIRROR_TOL: f64 = 1e-4;
pub const TABLE1_TOL: f64 = 0.15;

const SEED: u64 = 0x5eed_2007;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Worst measured value.
    pub value: f64,
    pub tolerance: f64,
    /// `true` when `value >= tolerance` is the passing direction.
    pub lower_bound: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            lower_bound: false,
        }
    }

    fn at_least(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            lower_bound: true,
        }
    }

    pub fn passed(&self) -> bool {
        if self.lower_bound {
            self.value >= self.tolerance
        } else {
            self.value <= self.tolerance
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<5} {:<28} {:>12.3e} {} {:.1e}",
            if self.passed() { "ok" } else { "FAIL" },
            self.name,
            self.value,
            if self.lower_bound { ">=" } else { "<=" },
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Material constants the checks were run with.
    pub assumptions: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assumptions {
            writeln!(f, "assume {a}")?;
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Random stack over a broad physical range: moduli 10–400 GPa, substrate
/// 0.5–50 µm, piezo 0.1–10 µm, width 5–200 µm, length 50 µm–5 mm,
/// |d31| up to 600 pm/V, |V| up to 200 V.
pub fn random_stack(rng: &mut impl Rng) -> (MultimorphStack, f64) {
    let section = CrossSection::new(
        rng.gen_range(10e9..400e9),
        rng.gen_range(0.5e-6..50e-6),
        rng.gen_range(10e9..400e9),
        rng.gen_range(0.1e-6..10e-6),
        rng.gen_range(5e-6..200e-6),
    )
    .expect("sampled inside the valid range");
    let mut d31: f64 = rng.gen_range(-600e-12..600e-12);
    if d31 == 0.0 {
        d31 = -274e-12;
    }
    let stack = MultimorphStack::new(section, d31, rng.gen_range(50e-6..5e-3)).expect("valid");
    let mut v: f64 = rng.gen_range(-200.0..200.0);
    if v.abs() < 1e-3 {
        v = 50.0;
    }
    (stack, v)
}

/// Profile evaluated from the expanded polynomial, independent of the
/// factored form used by [`HalfBeam`].
struct ExpandedProfile {
    k: f64,
    a: f64,
    l: f64,
}

impl ExpandedProfile {
    fn new(beam: &HalfBeam) -> Self {
        let (a, l) = (beam.a(), beam.span());
        Self {
            k: beam.force() * a / (4.0 * beam.rigidity() * (a * a + l * a + l * l)),
            a,
            l,
        }
    }

    fn mirror(&self, x: f64) -> f64 {
        -self.k * (self.a - self.l).powi(3) * x
    }

    fn mirror_slope(&self) -> f64 {
        -self.k * (self.a - self.l).powi(3)
    }

    fn beam(&self, x: f64) -> f64 {
        let (a, l) = (self.a, self.l);
        self.k
            * ((a + l) * x.powi(3) + x * x * (-2.0 * l * l - 2.0 * a * a - 2.0 * a * l)
                + x * (l.powi(3) + 4.0 * a * a * l + a * l * l)
                - 2.0 * a * a * l * l)
    }

    fn beam_slope(&self, x: f64) -> f64 {
        let (a, l) = (self.a, self.l);
        self.k
            * (3.0 * (a + l) * x * x - 2.0 * x * (2.0 * l * l + 2.0 * a * a + 2.0 * a * l)
                + (l.powi(3) + 4.0 * a * a * l + a * l * l))
    }
}

/// Worst relative violation of the profile invariants for one beam, scaled by
/// `y_max` (slopes are scaled by `y_max / L`).
pub fn profile_invariant_violation(beam: &HalfBeam) -> f64 {
    let p = ExpandedProfile::new(beam);
    let (a, l) = (beam.a(), beam.span());
    let ymax = beam.max_deflection().y_max;
    if ymax == 0.0 {
        return 0.0;
    }
    let slope_scale = ymax / l;
    let mut worst = [
        p.mirror(0.0).abs() / ymax,
        p.beam(l).abs() / ymax,
        p.beam_slope(l).abs() / slope_scale,
        (p.mirror(a) - p.beam(a)).abs() / ymax,
        (p.mirror_slope() - p.beam_slope(a)).abs() / slope_scale,
        (beam.tilt().tan().abs() - p.mirror_slope().abs()).abs() / slope_scale,
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);

    // mirror segment carries no curvature
    for i in 0..8 {
        let x = a * i as f64 / 8.0;
        worst = worst.max(beam.curvature(x).unwrap_or(f64::NAN).abs() * l * l / ymax);
    }
    for i in 0..=32 {
        let x = a + (l - a) * i as f64 / 32.0;
        worst = worst.max((beam.deflection(x).unwrap_or(f64::NAN) - p.beam(x)).abs() / ymax);
    }
    worst
}

/// Runs the whole suite. `nodes` sets the oracle resolution for the
/// agreement checks.
pub fn run(nodes: usize) -> Result<Report> {
    let registry = MaterialRegistry::builtin();
    let assumptions = registry.iter().map(|m| m.to_string()).collect();
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let (mut identity, mut spread, mut residual) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let (stack, v) = random_stack(&mut rng);
        let f21 = stack.equivalent_force(v)?;
        let f25 = stack.equivalent_force_closed_form(v);
        identity = identity.max((f21 - f25).abs() / f25.abs());

        let [r0, r1, r2] = ModulusReference::ALL.map(|r| stack.equivalent_section(r).rigidity);
        spread = spread.max(((r1 - r0).abs().max((r2 - r0).abs())) / r0);

        let sol = stack.solve_curvature(v)?;
        residual = stack.residuals(v, &sol).into_iter().fold(residual, f64::max);
    }
    checks.push(Check::at_most("force identity (1000 stacks)", identity, IDENTITY_TOL));
    checks.push(Check::at_most("rigidity vs reference", spread, NORMALIZATION_TOL));
    checks.push(Check::at_most("equilibrium residual", residual, RESIDUAL_TOL));

    let mut worst_profile = 0.0_f64;
    for _ in 0..200 {
        let l = rng.gen_range(100e-6..5e-3);
        let a = l * rng.gen_range(0.05..0.75);
        let beam = HalfBeam::new(rng.gen_range(-1e-3..1e-3), a, l, rng.gen_range(1e-13..1e-8))?;
        worst_profile = worst_profile.max(profile_invariant_violation(&beam));
    }
    checks.push(Check::at_most("profile invariants (200)", worst_profile, PROFILE_TOL));

    let thin = CrossSection::new(169e9, 5e-6, 60.6e9, 0.0, 30e-6)?;
    let eq = thin.equivalent_section(ModulusReference::Substrate);
    let homogeneous = ((eq.neutral_axis - 2.5e-6).abs() / 2.5e-6)
        .max((eq.inertia - 30e-6 * 125e-18 / 12.0).abs() / (30e-6 * 125e-18 / 12.0));
    checks.push(Check::at_most("homogeneous section limit", homogeneous, 1e-15));

    let design = ScannerDesign::reference_with(&registry, 850e-6)?;
    let geom = design.scanner_geometry()?;
    let stack = geom.stack();
    let beam = HalfBeam::new(
        stack.equivalent_force(design.voltage)?,
        geom.a(),
        geom.half_span(),
        stack.rigidity(),
    )?;
    let problem = BeamProblem::from_half_beam(&beam, nodes)?;
    let agreement = oracle::compare_with_closed_form(&problem)?;
    checks.push(Check::at_most("oracle profile error", agreement.relative_error, ORACLE_TOL));
    checks.push(Check::at_most("oracle reaction error", agreement.reaction_error, ORACLE_TOL));

    let fd = oracle::solve_fd(&problem)?;
    let snapped = HalfBeam::new(beam.force(), fd.a, beam.span(), beam.rigidity())?;
    let tilt_err = ((fd.tilt() - snapped.tilt()) / snapped.tilt()).abs();
    checks.push(Check::at_most("oracle tilt error", tilt_err, ORACLE_TOL));

    let study = oracle::convergence_study(&problem, &[101, 201, 401])?;
    checks.push(Check::at_least(
        "convergence order 101->401",
        oracle::observed_order(&study[0], &study[2]),
        MIN_CONVERGENCE_ORDER,
    ));

    let mid = oracle::solve_fd(&BeamProblem::new(1.0, 0.5, 1.0, 1.0, nodes)?)?;
    checks.push(Check::at_most(
        "midpoint reaction -5F/14",
        (mid.reaction + 5.0 / 14.0).abs() / (5.0 / 14.0),
        ORACLE_TOL,
    ));

    let stiff = oracle::solve_fd_with(&problem, MirrorModel::Flexible { rigidity_ratio: 1e6 })?;
    checks.push(Check::at_most(
        "stiff mirror vs rigid tilt",
        ((stiff.tilt() - fd.tilt()) / fd.tilt()).abs(),
        STIFF_MIRROR_TOL,
    ));

    let mut table = 0.0_f64;
    for row in table1(&design) {
        let r = row.record.result?;
        table = table
            .max((r.tilt_deg / row.published_tilt_deg - 1.0).abs())
            .max((r.y_max_m / row.published_y_max_m - 1.0).abs());
    }
    debug_assert_eq!(TABLE1_ROWS.len(), 3);
    checks.push(Check::at_most("published scanners deviation", table, TABLE1_TOL));

    Ok(Report { assumptions, checks })
}
