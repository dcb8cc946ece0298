//! Evaluates the three published scanners (850, 600 and 500 µm beams) and
//! prints them next to the published tilt and deflection.
//!
//! ```text
//! cargo run --example table1
//! ```

use piezoscan::sweep;
use piezoscan::ScannerDesign;

fn main() -> piezoscan::Result<()> {
    let base = ScannerDesign::reference(850e-6);
    println!("scanner  beam      phi_deg  (published)  y_max_um  (published)");
    for row in sweep::table1(&base) {
        let r = row.record.result?;
        println!(
            "{:<8} {:>4.0}x30  {:>7.4}  ({:.2})       {:>7.4}   ({:.2})",
            row.label,
            row.record.value * 1e6,
            r.tilt_deg,
            row.published_tilt_deg,
            r.y_max_m * 1e6,
            row.published_y_max_m * 1e6
        );
    }
    Ok(())
}
