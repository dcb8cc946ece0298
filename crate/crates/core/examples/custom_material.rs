//! Two ways to use a material that is not built in: register it in code, or
//! give explicit constants in a config file.
//!
//! ```text
//! cargo run --example custom_material
//! ```

use piezoscan::cli::parse_config;
use piezoscan::{Material, MaterialRegistry, ScannerDesign};

const CONFIG: &str = include_str!("configs/custom_piezo.cfg");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut registry = MaterialRegistry::builtin();
    // override the built-in film with a stiffer, more active one
    registry.insert(Material::piezoelectric("pzt-5h", 62.5e9, -320e-12, Some(16e-12))?);
    let tuned = ScannerDesign::reference_with(&registry, 850e-6)?.solve(3)?;
    let stock = ScannerDesign::reference(850e-6).solve(3)?;
    println!("registered names: {}", registry.names().collect::<Vec<_>>().join(", "));
    println!("built-in pzt-5h:  phi {:.4} deg", stock.tilt_deg());
    println!("override:         phi {:.4} deg", tuned.tilt_deg());

    let design = parse_config(CONFIG)?.resolve(&MaterialRegistry::builtin())?;
    println!("from config:      {} / {}", design.substrate, design.piezo);
    println!("                  phi {:.4} deg", design.solve(3)?.tilt_deg());
    Ok(())
}
