//! Classify per-atom Cesàro limits and verify the three-set identity: the
//! atoms with a finite limit are exactly the bounded part of the hull of
//! evaluations, which is exactly the bounded part of the hull of Cesàro
//! means.

use cesaro_hull::decomposition::Mode;
use cesaro_hull::family::{
    AtomBound, AtomRule, CesaroFamily, CoefficientFamily, FamilyRule, SequenceWindow,
};
use cesaro_hull::limits::{limit_profile, verify_three_set_identity, LimitParams};
use cesaro_hull::space::AtomicSpace;

fn main() -> cesaro_hull::Result<()> {
    let space = AtomicSpace::new(vec![0.4, 0.35, 0.25], 0.0)?;
    let family = CoefficientFamily::new(
        FamilyRule::PerAtom(vec![
            AtomRule::Decay {
                level: 2.0,
                bump: 0.5,
            },
            AtomRule::Constant { value: 0.25 },
            AtomRule::Power {
                alpha: 1.0,
                scale: 0.5,
            },
        ]),
        vec![
            AtomBound::Bounded(2.5),
            AtomBound::Bounded(0.25),
            AtomBound::Unbounded,
        ],
        "decay + constant + growth",
    )?;
    let window = SequenceWindow::identity(family, space, 1024)?;

    // a few Cesàro snapshots per atom
    let cesaro = CesaroFamily::new(window.clone())?;
    println!("k     atom1     atom2     atom3");
    for k in [1usize, 8, 64, 512, 1024] {
        let rv = cesaro.evaluate(k)?;
        println!(
            "{:>4}  {:<8.4}  {:<8.4}  {:<8.4}",
            k,
            rv.value(0),
            rv.value(1),
            rv.value(2)
        );
    }

    let params = LimitParams::default();
    let profile = limit_profile(&window, &params)?;
    println!(
        "\nlimit profile (tol {}, window {}):",
        params.tol,
        profile.window_length()
    );
    for (atom, limit) in profile.limits().iter().enumerate() {
        println!("  atom {}: {:?}", profile.labels()[atom], limit);
    }
    println!("finite set: {:?}", profile.finite_set());

    let report = verify_three_set_identity(&window, &params, Mode::Exact)?;
    println!("\nfinite set        = {:?}", report.finite_set);
    println!("Omega_b           = {:?}", report.omega_b);
    println!("Omega_b (cesaro)  = {:?}", report.omega_b_bar);
    println!(
        "pairwise equal: {:?} -> verdict {:?}",
        report.equal, report.verdict
    );
    Ok(())
}
