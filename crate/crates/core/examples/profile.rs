//! Writes the full-device deflection profile of scanner A as CSV on stdout:
//! left anchor at u = 0, mirror centre at u = L, right anchor at u = 2L.
//!
//! ```text
//! cargo run --example profile > profile.csv
//! cargo run --example profile -- 600 101   # beam length in µm, samples
//! ```

use piezoscan::cli::output;
use piezoscan::ScannerDesign;

fn main() -> piezoscan::Result<()> {
    let mut args = std::env::args().skip(1);
    let length_um: f64 = args.next().map_or(850.0, |s| s.parse().expect("beam length in µm"));
    let samples: usize = args.next().map_or(401, |s| s.parse().expect("sample count"));

    let sol = ScannerDesign::reference(length_um * 1e-6).solve(samples)?;
    print!("{}", output::profile_csv(&sol));
    eprintln!(
        "phi = {:.4} deg, y_max = {:.4} um at {:.1} um from the mirror centre",
        sol.tilt_deg(),
        sol.y_max * 1e6,
        sol.x_at_ymax * 1e6
    );
    Ok(())
}
