//! Finite-difference reference solution for the propped half beam.
//!
//! The beam is discretised on a uniform grid and `EI y'' = M(x)` is imposed
//! with central differences, where the bending moment comes from statics
//! with the support reaction `R_A` left as an unknown:
//!
//! ```text
//! M(x) = R_A x                 on the mirror   [0, a]
//! M(x) = R_A x + F (x - a)     on the beam     [a, L]
//! ```
//!
//! `y(0) = y(L) = 0` close the tridiagonal system; the clamp slope
//! `y'(L) = 0` (one-sided, second order) is the extra row that fixes the
//! redundant reaction. The system is bordered by that single unknown, so it is
//! solved by superposition of two tridiagonal solves (unit load, unit reaction)
//! and one scalar compatibility equation.
//!
//! Nothing here uses the closed-form reaction or profile.

use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use crate::scanner::HalfBeam;

/// Default grid resolution.
pub const DEFAULT_NODES: usize = 2001;

/// How the mirror segment `[0, a]` is represented.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum MirrorModel {
    /// Exact `y'' = 0` rows.
    #[default]
    Rigid,
    /// Finite rigidity `ratio * EI`.
    Flexible { rigidity_ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamProblem {
    /// Support-to-clamp length `L` (m).
    pub span: f64,
    /// Load / junction position (m).
    pub a: f64,
    pub force: f64,
    /// Rigidity of the flexible segment (N·m²).
    pub rigidity: f64,
    pub nodes: usize,
}

impl BeamProblem {
    pub fn new(span: f64, a: f64, force: f64, rigidity: f64, nodes: usize) -> Result<Self> {
        let p = Self {
            span,
            a,
            force,
            rigidity,
            nodes,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same beam as a closed-form [`HalfBeam`], at the given resolution.
    pub fn from_half_beam(beam: &HalfBeam, nodes: usize) -> Result<Self> {
        Self::new(beam.span(), beam.a(), beam.force(), beam.rigidity(), nodes)
    }

    pub fn with_nodes(self, nodes: usize) -> Result<Self> {
        Self { nodes, ..self }.validate().map(|_| Self { nodes, ..self })
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 11 || self.nodes.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "node count must be odd and at least 11, got {}",
                self.nodes
            )));
        }
        if !(self.a > 0.0 && self.a < self.span && self.span.is_finite()) {
            return Err(Error::DegenerateGeometry(format!(
                "need 0 < a < L, got a = {:e} m, L = {:e} m",
                self.a, self.span
            )));
        }
        if !(self.rigidity.is_finite() && self.rigidity > 0.0) || !self.force.is_finite() {
            return Err(Error::DegenerateGeometry(
                "rigidity must be positive and force finite".into(),
            ));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.span / (self.nodes - 1) as f64
    }

    /// Grid index nearest to `a`, kept off both ends.
    pub fn junction_index(&self) -> usize {
        let j = (self.a / self.spacing()).round() as usize;
        j.clamp(1, self.nodes - 2)
    }

    /// `a` moved onto the grid.
    pub fn snapped_a(&self) -> f64 {
        self.node_position(self.junction_index())
    }

    fn node_position(&self, i: usize) -> f64 {
        self.span * i as f64 / (self.nodes - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub reaction: f64,
    pub grid: Vec<f64>,
    pub deflection: Vec<f64>,
    /// Junction position actually used (m).
    pub a: f64,
}

impl OracleSolution {
    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    /// Support slope from a second-order one-sided difference.
    pub fn support_slope(&self) -> f64 {
        let y = &self.deflection;
        (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * self.spacing())
    }

    /// Signed mirror rotation (rad).
    pub fn tilt(&self) -> f64 {
        self.support_slope().atan()
    }

    /// Residual of the clamp slope condition.
    pub fn clamp_slope(&self) -> f64 {
        let n = self.deflection.len();
        let y = &self.deflection;
        (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * self.spacing())
    }
}

pub fn solve_fd(problem: &BeamProblem) -> Result<OracleSolution> {
    solve_fd_with(problem, MirrorModel::Rigid)
}

pub fn solve_fd_with(problem: &BeamProblem, mirror: MirrorModel) -> Result<OracleSolution> {
    problem.validate()?;
    let n = problem.nodes;
    let h = problem.spacing();
    let j = problem.junction_index();
    let a = problem.snapped_a();
    let ei = problem.rigidity;
    let mirror_ei = match mirror {
        MirrorModel::Rigid => None,
        MirrorModel::Flexible { rigidity_ratio } if rigidity_ratio > 0.0 => Some(rigidity_ratio * ei),
        MirrorModel::Flexible { rigidity_ratio } => {
            return Err(Error::DegenerateGeometry(format!(
                "mirror rigidity ratio must be positive, got {rigidity_ratio}"
            )))
        }
    };
    let grid: Vec<f64> = (0..n).map(|i| problem.node_position(i)).collect();

    // y'' per unit reaction and from the load alone, node by node
    let mirror_curv = |x: f64| mirror_ei.map_or(0.0, |m| x / m);
    let mut per_reaction = vec![0.0; n];
    let mut from_load = vec![0.0; n];
    for i in 1..n - 1 {
        let x = grid[i];
        let (r, f) = if i < j {
            (mirror_curv(x), 0.0)
        } else if i > j {
            (x / ei, (x - a) / ei)
        } else {
            // kink in y'': central difference sees the mean of both sides
            (0.5 * (mirror_curv(x) + x / ei), 0.0)
        };
        per_reaction[i] = r * h * h;
        from_load[i] = problem.force * f * h * h;
    }

    let mut lower = vec![1.0; n];
    let mut diag = vec![-2.0; n];
    let mut upper = vec![1.0; n];
    diag[0] = 1.0;
    upper[0] = 0.0;
    diag[n - 1] = 1.0;
    lower[n - 1] = 0.0;
    per_reaction[0] = 0.0;
    per_reaction[n - 1] = 0.0;
    from_load[0] = 0.0;
    from_load[n - 1] = 0.0;

    let y_load = solve_tridiagonal(&lower, &diag, &upper, &from_load)?;
    let y_unit = solve_tridiagonal(&lower, &diag, &upper, &per_reaction)?;

    let clamp = |y: &[f64]| 3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3];
    let unit_slope = clamp(&y_unit);
    if unit_slope == 0.0 || !unit_slope.is_finite() {
        return Err(Error::SingularSystem);
    }
    let reaction = -clamp(&y_load) / unit_slope;
    let deflection = y_load
        .iter()
        .zip(&y_unit)
        .map(|(yl, yu)| yl + reaction * yu)
        .collect();

    Ok(OracleSolution {
        reaction,
        grid,
        deflection,
        a,
    })
}

/// Max-norm discrepancy against the closed form at one resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub nodes: usize,
    pub spacing: f64,
    /// `max |y_fd - y_closed|` (m).
    pub error: f64,
    /// `error / max |y_closed|`, zero for an unloaded beam.
    pub relative_error: f64,
    /// `|R_fd - R_closed| / |R_closed|`, zero for an unloaded beam.
    pub reaction_error: f64,
}

/// Compares the oracle with the closed-form half beam (built at the snapped
/// junction) at every requested resolution.
pub fn compare_with_closed_form(problem: &BeamProblem) -> Result<ConvergencePoint> {
    let sol = solve_fd(problem)?;
    let exact = HalfBeam::new(problem.force, sol.a, problem.span, problem.rigidity)?;
    let mut error = 0.0_f64;
    let mut peak = 0.0_f64;
    for (x, y) in sol.grid.iter().zip(&sol.deflection) {
        let ye = exact.deflection(x.min(problem.span))?;
        error = error.max((y - ye).abs());
        peak = peak.max(ye.abs());
    }
    let r_exact = exact.reaction();
    Ok(ConvergencePoint {
        nodes: problem.nodes,
        spacing: problem.spacing(),
        error,
        relative_error: if peak > 0.0 { error / peak } else { 0.0 },
        reaction_error: if r_exact != 0.0 {
            (sol.reaction - r_exact).abs() / r_exact.abs()
        } else {
            0.0
        },
    })
}

pub fn convergence_study(problem: &BeamProblem, node_counts: &[usize]) -> Result<Vec<ConvergencePoint>> {
    node_counts
        .iter()
        .map(|&n| compare_with_closed_form(&problem.with_nodes(n)?))
        .collect()
}

/// Log-log slope of error against spacing between two resolutions.
pub fn observed_order(coarse: &ConvergencePoint, fine: &ConvergencePoint) -> f64 {
    (coarse.error / fine.error).ln() / (coarse.spacing / fine.spacing).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    const UM: f64 = 1e-6;

    fn scanner_a(nodes: usize) -> BeamProblem {
        BeamProblem::new(1000.0 * UM, 150.0 * UM, -4.395282352941e-5, 9.29782828607e-11, nodes).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(BeamProblem::new(1.0, 0.5, 1.0, 1.0, 9).is_err());
        assert!(BeamProblem::new(1.0, 0.5, 1.0, 1.0, 100).is_err());
        assert!(BeamProblem::new(1.0, 1.0, 1.0, 1.0, 101).is_err());
        assert!(BeamProblem::new(1.0, 0.5, 1.0, 0.0, 101).is_err());
        assert!(scanner_a(101).with_nodes(12).is_err());
    }

    #[test]
    fn unloaded_beam() {
        let p = BeamProblem::new(1.0, 0.3, 0.0, 1.0, 101).unwrap();
        let sol = solve_fd(&p).unwrap();
        assert_eq!(sol.reaction, 0.0);
        assert!(sol.deflection.iter().all(|y| *y == 0.0));
        let study = convergence_study(&p, &[101, 201]).unwrap();
        assert!(study.iter().all(|c| c.error == 0.0 && c.relative_error == 0.0));
    }

    #[test]
    fn midpoint_load_reaction() {
        // a = L/2: R_A = -5F/14 for the rigid-segment propped beam
        let mut prev = f64::INFINITY;
        for nodes in [101, 401, 1601] {
            let p = BeamProblem::new(1.0, 0.5, 1.0, 1.0, nodes).unwrap();
            let err = (solve_fd(&p).unwrap().reaction + 5.0 / 14.0).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn boundary_rows_hold() {
        let sol = solve_fd(&scanner_a(201)).unwrap();
        let n = sol.deflection.len();
        assert_eq!(sol.deflection[0], 0.0);
        assert_eq!(sol.deflection[n - 1], 0.0);
        let scale = sol.deflection.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
        assert!(sol.clamp_slope().abs() * 1000.0 * UM < 1e-10 * scale);
        // mirror stays straight
        let h = sol.spacing();
        let s = (sol.deflection[1] - sol.deflection[0]) / h;
        for i in 1..30 {
            let si = (sol.deflection[i + 1] - sol.deflection[i]) / h;
            assert!((si - s).abs() <= 1e-9 * s.abs());
        }
    }

    #[test]
    fn agrees_with_closed_form_at_default_resolution() {
        let c = compare_with_closed_form(&scanner_a(DEFAULT_NODES)).unwrap();
        assert!(c.relative_error < 5e-3, "{c:?}");
        assert!(c.reaction_error < 5e-3, "{c:?}");
    }

    #[test]
    fn second_order_convergence() {
        let pts = convergence_study(&scanner_a(101), &[101, 201, 401]).unwrap();
        assert!(pts[0].error > pts[1].error && pts[1].error > pts[2].error);
        let ratio = pts[1].error / pts[2].error;
        assert!((ratio - 4.0).abs() <= 1.0, "ratio {ratio}");
        assert!(observed_order(&pts[0], &pts[2]) >= 1.8);
    }

    #[test]
    fn stiff_mirror_matches_rigid() {
        let p = scanner_a(DEFAULT_NODES);
        let rigid = solve_fd(&p).unwrap().tilt();
        let stiff = solve_fd_with(&p, MirrorModel::Flexible { rigidity_ratio: 1e6 })
            .unwrap()
            .tilt();
        assert!(((stiff - rigid) / rigid).abs() < 1e-4);
        assert!(solve_fd_with(&p, MirrorModel::Flexible { rigidity_ratio: 0.0 }).is_err());
    }

    #[test]
    fn snaps_junction_to_grid() {
        let p = BeamProblem::new(1.0, 0.3037, 1.0, 1.0, 11).unwrap();
        assert_eq!(p.junction_index(), 3);
        assert!((p.snapped_a() - 0.3).abs() < 1e-15);
    }
}
