//! CSV rendering and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use crate::scanner::ScannerSolution;
use crate::sweep::SweepRecord;

pub const PROFILE_HEADER: &str = "x_um,y_um";
pub const MODEL_HEADER: &str = "phi_deg,y_max_um,x_at_ymax_um,F_uN,R_A_uN,rigidity_Nm2";
pub const SWEEP_HEADER: &str = "param_name,param_value_si,phi_deg,y_max_um,F_uN,R_A_uN,status";

/// Formats `x` with 9 significant digits: plain notation for exponents in
/// `[-5, 9)`, scientific otherwise, trailing zeros trimmed, `-0` printed as `0`.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn um(x: f64) -> String {
    sig9(x * 1e6)
}

pub fn profile_csv(sol: &ScannerSolution) -> String {
    let mut out = String::from(PROFILE_HEADER);
    out.push('\n');
    for p in &sol.profile {
        out.push_str(&format!("{},{}\n", um(p.u), um(p.y)));
    }
    out
}

pub fn model_csv(sol: &ScannerSolution) -> String {
    format!(
        "{MODEL_HEADER}\n{},{},{},{},{},{}\n",
        sig9(sol.tilt_deg()),
        um(sol.y_max),
        um(sol.x_at_ymax),
        um(sol.force),
        um(sol.reaction),
        sig9(sol.rigidity)
    )
}

/// One-line summary printed by `model`; magnitudes only.
pub fn model_summary(sol: &ScannerSolution) -> String {
    format!(
        "phi_deg={} y_max_um={} F_uN={}",
        sig9(sol.tilt_deg()),
        um(sol.y_max),
        um(sol.force.abs())
    )
}

pub fn sweep_csv(param_name: &str, records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for rec in records {
        match &rec.result {
            Ok(r) => out.push_str(&format!(
                "{param_name},{},{},{},{},{},ok\n",
                sig9(rec.value),
                sig9(r.tilt_deg),
                um(r.y_max_m),
                um(r.force_n),
                um(r.reaction_n)
            )),
            Err(e) => {
                let msg: String = e
                    .to_string()
                    .chars()
                    .map(|c| if c == ',' || c == '\n' || c == '"' { ';' } else { c })
                    .collect();
                out.push_str(&format!("{param_name},{},,,,,error: {msg}\n", sig9(rec.value)));
            }
        }
    }
    out
}

/// Writes `contents` next to `path` in a temporary file and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
