//! Checks the closed-form half beam against the finite-difference oracle and
//! measures the convergence order; also shows a flexible mirror approaching
//! the rigid one.
//!
//! ```text
//! cargo run --example oracle_check
//! ```

use piezoscan::oracle::{self, BeamProblem, MirrorModel};
use piezoscan::ScannerDesign;

fn main() -> piezoscan::Result<()> {
    let sol = ScannerDesign::reference(850e-6).solve(3)?;
    let problem = BeamProblem::new(sol.half_span, 150e-6, sol.force, sol.rigidity, 101)?;

    let study = oracle::convergence_study(&problem, &[101, 201, 401, 801, 1601, 2001])?;
    println!("nodes   spacing_um   max|dy|/y_max   reaction_err");
    for p in &study {
        println!(
            "{:>5}   {:>10.4}   {:>13.3e}   {:>12.3e}",
            p.nodes,
            p.spacing * 1e6,
            p.relative_error,
            p.reaction_error
        );
    }
    for pair in study.windows(2) {
        println!(
            "order {} -> {}: {:.3}",
            pair[0].nodes,
            pair[1].nodes,
            oracle::observed_order(&pair[0], &pair[1])
        );
    }

    let fine = problem.with_nodes(2001)?;
    let rigid = oracle::solve_fd(&fine)?;
    for ratio in [10.0, 1e3, 1e6] {
        let flex = oracle::solve_fd_with(&fine, MirrorModel::Flexible { rigidity_ratio: ratio })?;
        println!(
            "mirror {ratio:>7.0e} x EI: tilt {:.6} deg (rigid {:.6} deg)",
            flex.tilt().to_degrees(),
            rigid.tilt().to_degrees()
        );
    }
    Ok(())
}
