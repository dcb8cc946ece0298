//! Sweeps the mirror side of scanner A in parallel, then refines the size
//! that maximises the tilt.
//!
//! ```text
//! cargo run --example sweep_optimize
//! ```

use piezoscan::sweep::{self, Objective, SweepAxis, SweepSpec};
use piezoscan::ScannerDesign;

fn main() -> piezoscan::Result<()> {
    let spec = SweepSpec {
        base: ScannerDesign::reference(850e-6),
        axis: SweepAxis::MirrorSide,
        from: 100e-6,
        to: 2000e-6,
        steps: 20,
    };
    for rec in sweep::run_sweep(&spec)? {
        match rec.result {
            Ok(r) => println!(
                "mirror {:>6.0} um  phi {:.4} deg  y_max {:.4} um",
                rec.value * 1e6,
                r.tilt_deg,
                r.y_max_m * 1e6
            ),
            Err(e) => println!("mirror {:>6.0} um  failed: {e}", rec.value * 1e6),
        }
    }

    let best = sweep::optimize_1d(&spec, Objective::Tilt)?;
    println!(
        "best mirror side {:.2} um: phi {:.5} deg ({} evaluations, grid best {:.5})",
        best.value * 1e6,
        best.objective,
        best.evaluations,
        best.grid_best
    );
    Ok(())
}
