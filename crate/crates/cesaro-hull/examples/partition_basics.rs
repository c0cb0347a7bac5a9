//! Partition a declared family into its bounded and hereditarily unbounded
//! atom sets.
//!
//! Three atoms: a constant, a bounded oscillation, and linear growth. The
//! partition trusts the declared tags (exact mode) and spot-checks every
//! declared bound against the probed window.

use cesaro_hull::decomposition::{partition, Mode};
use cesaro_hull::family::{
    AtomBound, AtomRule, CoefficientFamily, DivergenceRule, FamilyRule, SequenceWindow,
};
use cesaro_hull::space::AtomicSpace;

fn main() -> cesaro_hull::Result<()> {
    let space = AtomicSpace::new(vec![0.5, 0.3, 0.2], 0.0)?;
    let family = CoefficientFamily::new(
        FamilyRule::PerAtom(vec![
            AtomRule::Constant { value: 1.0 },
            AtomRule::Oscillation {
                level: 1.0,
                wobble: 1.0,
            },
            AtomRule::Power {
                alpha: 1.0,
                scale: 1.0,
            },
        ]),
        vec![
            AtomBound::Bounded(1.0),
            AtomBound::Bounded(2.0),
            AtomBound::Unbounded,
        ],
        "constant + oscillation + linear growth",
    )?;

    let window = SequenceWindow::identity(family, space, 512)?;
    let part = partition(&window, Mode::Exact, &DivergenceRule::default())?;

    println!("family: {}", window.family().description());
    println!("window: first {} indices", window.len());
    println!("bounded atoms   J_b = {:?}", part.bounded_atoms());
    println!("unbounded atoms J_u = {:?}", part.unbounded_atoms());
    println!("provenance: {:?}", part.provenance());

    // the hull restricted to J_b is bounded in probability; one unbounded
    // atom in the restriction destroys that
    for (name, restrict) in [
        ("J_b", part.bounded_atoms().clone()),
        ("J_b + atom 3", part.all_atoms()),
    ] {
        let decision = cesaro_hull::decomposition::bounded_in_probability(
            &window,
            &restrict,
            0.1,
            Mode::Exact,
            &DivergenceRule::default(),
        )?;
        println!("restricted to {name}: {decision:?}");
    }
    Ok(())
}
