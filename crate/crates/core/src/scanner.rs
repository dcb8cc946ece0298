//! Mirror-plus-two-multimorphs scanner reduced by antisymmetry to one
//! propped beam.
//!
//! Half-beam coordinate `x` runs from the mirror centre `A` (`x = 0`, simple
//! support) through the mirror/beam junction `B` (`x = a`, where the
//! actuator force acts) to the clamped anchor `C` (`x = L`, the half span).
//! `[A, B]` is the rigid half mirror; `[B, C]` is the multimorph with
//! rigidity `EI`. With `Q = a² + aL + L²`:
//!
//! ```text
//! R_A            = -F (a³ - 3aL² + 2L³) / (2L³ - 2a³)
//! y(x), x <= a   =  F a (L - a)³ x / (4 EI Q)
//! y(x), x >= a   =  F a [(a + L)x³ - 2Q x² + (L³ + 4a²L + aL²)x - 2a²L²] / (4 EI Q)
//!                =  F a (x - L)² ((a + L)x - 2a²) / (4 EI Q)
//! tan(phi)       =  F a (L - a)³ / (4 EI Q)
//! ```
//!
//! The bending moment is `M = R_A x` on the mirror and `M = R_A x + F (x - a)`
//! on the beam, with `EI y'' = M`; shear is reported as `T = -dM/dx`.

use crate::error::{Error, Result};
use crate::multimorph::MultimorphStack;

/// Redundant reaction at the mirror-centre support.
pub fn reaction(force: f64, a: f64, span: f64) -> Result<f64> {
    check_span(a, span)?;
    Ok(reaction_unchecked(force, a, span))
}

fn reaction_unchecked(force: f64, a: f64, l: f64) -> f64 {
    -force * (a.powi(3) - 3.0 * a * l * l + 2.0 * l.powi(3)) / (2.0 * l.powi(3) - 2.0 * a.powi(3))
}

fn check_span(a: f64, span: f64) -> Result<()> {
    if !(a.is_finite() && span.is_finite()) || a <= 0.0 || a >= span {
        return Err(Error::DegenerateGeometry(format!(
            "need 0 < a < L, got a = {a:e} m, L = {span:e} m"
        )));
    }
    Ok(())
}

/// Shear force and bending moment at a section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalLoads {
    pub shear: f64,
    pub moment: f64,
}

/// Largest deflection magnitude along the half beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// `|y|` at the extremum (m).
    pub y_max: f64,
    /// Signed deflection there (m).
    pub y: f64,
    /// Distance from the mirror centre (m).
    pub x: f64,
}

/// The symmetry-reduced propped beam loaded by the actuator force at `x = a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfBeam {
    force: f64,
    a: f64,
    span: f64,
    rigidity: f64,
}

impl HalfBeam {
    pub fn new(force: f64, a: f64, span: f64, rigidity: f64) -> Result<Self> {
        check_span(a, span)?;
        if !(rigidity.is_finite() && rigidity > 0.0) {
            return Err(Error::DegenerateGeometry(format!(
                "rigidity must be positive, got {rigidity:e} N m^2"
            )));
        }
        if !force.is_finite() {
            return Err(Error::DegenerateGeometry("force must be finite".into()));
        }
        Ok(Self {
            force,
            a,
            span,
            rigidity,
        })
    }

    pub fn force(&self) -> f64 {
        self.force
    }

    /// Support-to-junction distance (m).
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Support-to-clamp distance (m).
    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn rigidity(&self) -> f64 {
        self.rigidity
    }

    pub fn reaction(&self) -> f64 {
        reaction_unchecked(self.force, self.a, self.span)
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !(0.0..=self.span).contains(&x) {
            return Err(Error::OutOfRange { x, span: self.span });
        }
        Ok(())
    }

    /// `F a / (4 EI Q)`, the common prefactor of the profile.
    fn prefactor(&self) -> f64 {
        let (a, l) = (self.a, self.span);
        self.force * a / (4.0 * self.rigidity * (a * a + l * a + l * l))
    }

    pub fn internal_loads(&self, x: f64) -> Result<InternalLoads> {
        self.check_x(x)?;
        let r = self.reaction();
        Ok(if x < self.a {
            InternalLoads {
                shear: -r,
                moment: r * x,
            }
        } else {
            InternalLoads {
                shear: -(r + self.force),
                moment: r * x + self.force * (x - self.a),
            }
        })
    }

    /// Deflection `y(x)` of the half beam.
    pub fn deflection(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let (a, l, k) = (self.a, self.span, self.prefactor());
        Ok(if x <= a {
            k * (l - a).powi(3) * x
        } else {
            // (a + L) x - 2a² written so both terms stay positive
            k * (x - l) * (x - l) * ((a + l) * (x - a) + a * (l - a))
        })
    }

    /// Slope `y'(x)`; at the junction the two one-sided values agree.
    pub fn slope(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let (a, l, k) = (self.a, self.span, self.prefactor());
        Ok(if x <= a {
            k * (l - a).powi(3)
        } else {
            k * (x - l) * (3.0 * (a + l) * (x - a) - (l - a) * (l - a))
        })
    }

    /// Curvature `y''(x)`: zero on the rigid mirror.
    pub fn curvature(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let (a, l, k) = (self.a, self.span, self.prefactor());
        Ok(if x < a {
            0.0
        } else {
            k * (6.0 * (a + l) * (x - a) - 2.0 * (l - a) * (a + 2.0 * l))
        })
    }

    /// Signed mirror rotation (rad); its tangent is the rigid-segment slope.
    pub fn tilt(&self) -> f64 {
        (self.prefactor() * (self.span - self.a).powi(3)).atan()
    }

    /// Compares the stationary point of the flexible segment,
    /// `x* = a + (L - a)² / (3(a + L))`, with the junction deflection.
    pub fn max_deflection(&self) -> Extremum {
        let (a, l) = (self.a, self.span);
        let at = |x: f64| {
            let y = self.deflection(x).expect("x within span");
            Extremum { y_max: y.abs(), y, x }
        };
        let junction = at(a);
        // always strictly inside (a, L)
        let interior = at(a + (l - a) * (l - a) / (3.0 * (a + l)));
        if interior.y_max > junction.y_max {
            interior
        } else {
            junction
        }
    }
}

/// Mirror plus two identical multimorphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScannerGeometry {
    stack: MultimorphStack,
    mirror_side: f64,
}

impl ScannerGeometry {
    pub fn new(stack: MultimorphStack, mirror_side: f64) -> Result<Self> {
        if !(mirror_side.is_finite() && mirror_side > 0.0) {
            return Err(Error::DegenerateGeometry(format!(
                "mirror side must be positive, got {mirror_side:e} m"
            )));
        }
        Ok(Self { stack, mirror_side })
    }

    pub fn stack(&self) -> &MultimorphStack {
        &self.stack
    }

    pub fn mirror_side(&self) -> f64 {
        self.mirror_side
    }

    /// Mirror-centre to junction distance, half the mirror side.
    pub fn a(&self) -> f64 {
        0.5 * self.mirror_side
    }

    /// Mirror-centre to anchor distance, `a` plus the multimorph length.
    pub fn half_span(&self) -> f64 {
        self.a() + self.stack.length()
    }
}

/// One sample of the full-device profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    /// Position from the left anchor (m).
    pub u: f64,
    /// Deflection (m).
    pub y: f64,
}

/// Static response of the scanner at one drive voltage.
#[derive(Debug, Clone, PartialEq)]
pub struct ScannerSolution {
    /// Equivalent actuator force (N), signed like `d31 V`.
    pub force: f64,
    /// Mirror-centre reaction (N).
    pub reaction: f64,
    /// Multimorph flexural rigidity (N·m²).
    pub rigidity: f64,
    /// Tilt magnitude (rad).
    pub tilt: f64,
    /// Signed tilt (rad).
    pub tilt_signed: f64,
    /// Largest deflection magnitude (m).
    pub y_max: f64,
    /// Signed deflection at the extremum on the left half (m).
    pub y_extremum: f64,
    /// Extremum position measured from the mirror centre (m).
    pub x_at_ymax: f64,
    pub half_span: f64,
    /// Full-device profile from the left anchor (`u = 0`) through the mirror
    /// centre (`u = L`) to the right anchor (`u = 2L`).
    pub profile: Vec<ProfilePoint>,
}

impl ScannerSolution {
    pub fn tilt_deg(&self) -> f64 {
        self.tilt.to_degrees()
    }
}

/// Evaluates force, rigidity, reaction, tilt, extremum and profile.
///
/// `samples` uniform points cover `[0, 2L]` including both anchors. When
/// `samples` is even the mirror centre is not on that grid and is inserted,
/// giving `samples + 1` points.
pub fn solve_scanner(geometry: &ScannerGeometry, voltage: f64, samples: usize) -> Result<ScannerSolution> {
    if samples < 2 {
        return Err(Error::DegenerateGeometry(format!(
            "need at least 2 profile samples, got {samples}"
        )));
    }
    let stack = geometry.stack();
    let force = stack.equivalent_force(voltage)?;
    let rigidity = stack.rigidity();
    let span = geometry.half_span();
    let beam = HalfBeam::new(force, geometry.a(), span, rigidity)?;
    let ext = beam.max_deflection();
    let tilt_signed = beam.tilt();

    Ok(ScannerSolution {
        force,
        reaction: beam.reaction(),
        rigidity,
        tilt: tilt_signed.abs(),
        tilt_signed,
        y_max: ext.y_max,
        y_extremum: ext.y,
        x_at_ymax: ext.x,
        half_span: span,
        profile: full_profile(&beam, samples)?,
    })
}

/// Antisymmetric extension of the half-beam deflection:
/// `y(u) = y_half(L - u)` left of centre, `-y_half(u - L)` right of it.
///
/// Mirror-image samples share the same half-beam coordinate bit for bit,
/// so the exported profile is exactly antisymmetric.
pub fn full_profile(beam: &HalfBeam, samples: usize) -> Result<Vec<ProfilePoint>> {
    let span = beam.span();
    let last = samples - 1;
    let mut points = Vec::with_capacity(samples + 1);
    let mut push = |offset: usize, left: bool| -> Result<()> {
        let x = if offset == last {
            span
        } else {
            span * offset as f64 / last as f64
        };
        // +0.0 folds a negative zero into +0
        let y = beam.deflection(x)? + 0.0;
        let point = if left {
            ProfilePoint { u: span - x, y }
        } else {
            ProfilePoint { u: span + x, y: -y + 0.0 }
        };
        points.push(point);
        Ok(())
    };

    for i in 0..=last {
        // offset from the centre in units of span / last
        let (offset, left) = if 2 * i <= last {
            (last - 2 * i, true)
        } else {
            (2 * i - last, false)
        };
        if offset == 1 && !left {
            push(0, true)?;
        }
        push(offset, left)?;
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multimorph::CrossSection;
    use proptest::prelude::*;

    const UM: f64 = 1e-6;

    fn stack(length: f64) -> MultimorphStack {
        MultimorphStack::new(
            CrossSection::new(169e9, 5.0 * UM, 60.6e9, 1.0 * UM, 30.0 * UM).unwrap(),
            -274e-12,
            length,
        )
        .unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// The profile bracket multiplied out into monomials.
    fn expanded_bracket(x: f64, a: f64, l: f64) -> f64 {
        (a + l) * x.powi(3) + x * x * (-2.0 * l * l - 2.0 * a * a - 2.0 * a * l)
            + x * (l.powi(3) + 4.0 * a * a * l + a * l * l)
            - 2.0 * a * a * l * l
    }

    #[test]
    fn reaction_cases() {
        assert_eq!(reaction(0.0, 0.3, 1.0).unwrap().abs(), 0.0);
        assert!(rel(reaction(2.0, 1e-9, 1.0).unwrap(), -2.0) < 1e-8);
        assert!(rel(reaction(1.4, 0.5, 1.0).unwrap(), -0.5) < 1e-15);
        assert!(reaction(1.0, 1.0, 1.0).is_err());
        assert!(reaction(1.0, 1.2, 1.0).is_err());
        assert!(reaction(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn internal_loads_cases() {
        let beam = HalfBeam::new(1.0, 0.5, 1.0, 1.0).unwrap();
        let m = beam.internal_loads(0.25).unwrap().moment;
        assert!(rel(m, -5.0 / 56.0) < 1e-15);
        assert_eq!(beam.internal_loads(0.0).unwrap().moment, 0.0);
        let left = beam.internal_loads(0.5 - 1e-12).unwrap().moment;
        let right = beam.internal_loads(0.5).unwrap().moment;
        assert!((left - right).abs() < 1e-11);
        assert!(beam.internal_loads(1.5).is_err());
        assert!(beam.internal_loads(-0.1).is_err());

        let unloaded = HalfBeam::new(0.0, 0.5, 1.0, 1.0).unwrap();
        for x in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let l = unloaded.internal_loads(x).unwrap();
            assert_eq!((l.shear.abs(), l.moment.abs()), (0.0, 0.0));
        }
    }

    #[test]
    fn moment_matches_profile_curvature() {
        let beam = HalfBeam::new(-3e-5, 150.0 * UM, 1000.0 * UM, 9.3e-11).unwrap();
        for x in [200.0, 359.0, 700.0, 1000.0].map(|v| v * UM) {
            let m = beam.internal_loads(x).unwrap().moment;
            let c = beam.curvature(x).unwrap() * beam.rigidity();
            assert!(rel(c, m) < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn factored_profile_matches_expanded_polynomial() {
        let (a, l) = (150.0 * UM, 1000.0 * UM);
        let beam = HalfBeam::new(-4.4e-5, a, l, 9.3e-11).unwrap();
        let k = -4.4e-5 * a / (4.0 * 9.3e-11 * (a * a + a * l + l * l));
        let peak = beam.max_deflection().y_max;
        for i in 0..=100 {
            let x = a + (l - a) * i as f64 / 100.0;
            let expanded = k * expanded_bracket(x, a, l);
            assert!((beam.deflection(x).unwrap() - expanded).abs() <= 1e-12 * peak);
        }
    }

    #[test]
    fn scanner_a_extremum_and_tilt() {
        let geom = ScannerGeometry::new(stack(850.0 * UM), 300.0 * UM).unwrap();
        let sol = solve_scanner(&geom, 50.0, 401).unwrap();
        assert!(rel(sol.x_at_ymax, 359.420289855e-6) < 1e-9);
        assert!(rel(sol.y_max, 2.285130752594e-6) < 1e-9);
        assert!(rel(sol.tilt_deg(), 0.53197424170) < 1e-9);
        assert!(sol.tilt_signed < 0.0 && sol.y_extremum < 0.0);
        assert!(rel(sol.y_max, 2.45e-6) < 0.15);
        assert!(rel(sol.tilt_deg(), 0.57) < 0.15);
    }

    #[test]
    fn tilt_limits() {
        assert_eq!(HalfBeam::new(0.0, 0.2, 1.0, 1.0).unwrap().tilt(), 0.0);
        let near = HalfBeam::new(1.0, 1.0 - 1e-6, 1.0, 1.0).unwrap().tilt();
        assert!(near.abs() < 1e-18);
    }

    #[test]
    fn zero_force_extremum_convention() {
        let e = HalfBeam::new(0.0, 0.2, 1.0, 1.0).unwrap().max_deflection();
        assert_eq!((e.y_max, e.x), (0.0, 0.2));
    }

    #[test]
    fn profile_sampling() {
        let geom = ScannerGeometry::new(stack(850.0 * UM), 300.0 * UM).unwrap();
        let sol = solve_scanner(&geom, 50.0, 5).unwrap();
        let p = &sol.profile;
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].y, 0.0);
        assert_eq!(p[2].u, sol.half_span);
        assert_eq!(p[2].y, 0.0);
        assert_eq!(p[4].u, 2.0 * sol.half_span);
        assert_eq!(p[4].y, 0.0);

        let even = solve_scanner(&geom, 50.0, 4).unwrap();
        assert_eq!(even.profile.len(), 5);
        assert!(even.profile.windows(2).all(|w| w[0].u < w[1].u));
        assert_eq!(even.profile[2].u, even.half_span);
        assert!(solve_scanner(&geom, 50.0, 1).is_err());
    }

    #[test]
    fn profile_is_antisymmetric_s_curve() {
        let geom = ScannerGeometry::new(stack(850.0 * UM), 300.0 * UM).unwrap();
        let sol = solve_scanner(&geom, 50.0, 401).unwrap();
        let p = &sol.profile;
        let n = p.len();
        for i in 0..n {
            assert_eq!(p[i].y, -p[n - 1 - i].y);
        }
        let lo = p.iter().map(|q| q.y).fold(f64::INFINITY, f64::min);
        let hi = p.iter().map(|q| q.y).fold(f64::NEG_INFINITY, f64::max);
        assert!(rel(hi, sol.y_max) < 1e-3 && rel(-lo, sol.y_max) < 1e-3);
        // left half on one side of zero, right half on the other
        assert!(p[1..n / 2].iter().all(|q| q.y < 0.0));
        assert!(p[n / 2 + 1..n - 1].iter().all(|q| q.y > 0.0));
    }

    #[test]
    fn table_ordering() {
        let tilts: Vec<f64> = [850.0, 600.0, 500.0]
            .iter()
            .map(|&len| {
                let geom = ScannerGeometry::new(stack(len * UM), 300.0 * UM).unwrap();
                solve_scanner(&geom, 50.0, 3).unwrap().tilt
            })
            .collect();
        assert!(tilts[0] > tilts[1] && tilts[1] > tilts[2]);
    }

    proptest! {
        #[test]
        fn boundary_and_continuity(
            f in -1e-3f64..1e-3,
            frac in 0.02f64..0.98,
            l in 1e-4f64..1e-2,
            ei in 1e-13f64..1e-8,
        ) {
            let a = frac * l;
            let beam = HalfBeam::new(f, a, l, ei).unwrap();
            let ymax = beam.max_deflection().y_max.max(f64::MIN_POSITIVE);
            let tol = 1e-12 * ymax;
            prop_assert_eq!(beam.deflection(0.0).unwrap().abs(), 0.0);
            prop_assert!(beam.deflection(l).unwrap().abs() <= tol);
            prop_assert!(beam.slope(l).unwrap().abs() * l <= tol);
            let tan = beam.tilt().tan();
            prop_assert!((tan - beam.slope(0.0).unwrap()).abs() <= 1e-12 * tan.abs());
        }

        #[test]
        fn linear_in_force(f in 1e-13f64..1e-9, frac in 0.05f64..0.95) {
            let b1 = HalfBeam::new(f, frac, 1.0, 1e-9).unwrap();
            let b2 = HalfBeam::new(2.0 * f, frac, 1.0, 1e-9).unwrap();
            prop_assert!(rel(b2.tilt().tan(), 2.0 * b1.tilt().tan()) < 1e-12);
            prop_assert!(rel(b2.max_deflection().y_max, 2.0 * b1.max_deflection().y_max) < 1e-12);
            prop_assert!(rel(b2.reaction(), 2.0 * b1.reaction()) < 1e-12);
        }
    }
}
