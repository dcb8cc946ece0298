//! The actuator on its own: layer resultants and curvature from the stack
//! equilibrium, free tip deflection, transformed-section rigidity and the
//! equivalent point force, compared with the one-line closed form.
//!
//! ```text
//! cargo run --example multimorph_force
//! ```

use piezoscan::{ModulusReference, ScannerDesign};

fn main() -> piezoscan::Result<()> {
    let design = ScannerDesign::reference(850e-6);
    let stack = design.stack()?;
    let v = design.voltage;

    let strains = stack.piezo_strains(v);
    let sol = stack.solve_curvature(v)?;
    println!("free strains      S1 = {:.4e}, S2 = {:.4e}", strains.s1, strains.s2);
    println!("layer resultants  P = ({:.4}, {:.4}, {:.4}) N/m", sol.p1, sol.p2, sol.p3);
    println!("curvature         {:.4} 1/m", sol.kappa);
    println!("residuals         {:?}", stack.residuals(v, &sol));
    println!(
        "tip deflection    {:.4} um (closed form {:.4} um)",
        stack.tip_deflection(v)? * 1e6,
        stack.tip_deflection_closed_form(v) * 1e6
    );

    for choice in ModulusReference::ALL {
        let eq = stack.equivalent_section(choice);
        println!(
            "section ({choice:?}): h_eq = {:.4} um, I_eq = {:.4e} m^4, EI = {:.6e} N m^2",
            eq.neutral_axis * 1e6,
            eq.inertia,
            eq.rigidity
        );
    }

    let f = stack.equivalent_force(v)?;
    let closed = stack.equivalent_force_closed_form(v);
    println!(
        "equivalent force  {:.6} uN (closed form {:.6} uN, relative gap {:.1e})",
        f * 1e6,
        closed * 1e6,
        ((f - closed) / closed).abs()
    );
    Ok(())
}
