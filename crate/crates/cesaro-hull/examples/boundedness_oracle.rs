//! Cross-check the metadata route against the brute-force route: the exact
//! decision reads declared tags, while the oracle directly evaluates
//! `sup_X P(X > M)` over window evaluations and a thousand Dirichlet convex
//! combinations of them.

use cesaro_hull::decomposition::{
    bounded_in_probability, brute_force_boundedness_oracle, geometric_grid, Mode, OracleParams,
};
use cesaro_hull::family::{
    AtomBound, AtomRule, CoefficientFamily, DivergenceRule, FamilyRule, SequenceWindow,
};
use cesaro_hull::space::AtomicSpace;

fn run_case(name: &str, family: CoefficientFamily, space: AtomicSpace) -> cesaro_hull::Result<()> {
    let window = SequenceWindow::identity(family, space, 1024)?;
    let rvs: Vec<_> = (1..=window.len())
        .map(|k| window.evaluate(k))
        .collect::<cesaro_hull::Result<_>>()?;
    let grid = geometric_grid(0.5, 100.0, 64)?;
    let params = OracleParams {
        combos: 1000,
        seed: 7,
        ..OracleParams::default()
    };
    println!("{name}:");
    for eps in [0.5, 0.1, 0.01] {
        let exact = bounded_in_probability(
            &window,
            &window.space().label_set(),
            eps,
            Mode::Exact,
            &DivergenceRule::default(),
        )?;
        let oracle = brute_force_boundedness_oracle(&rvs, window.space(), eps, &grid, &params)?;
        println!(
            "  eps {eps:<5} exact {exact:?}  oracle {oracle:?}  agree: {}",
            oracle.agrees_with(&exact)
        );
    }
    Ok(())
}

fn main() -> cesaro_hull::Result<()> {
    let bounded = CoefficientFamily::new(
        FamilyRule::PerAtom(vec![
            AtomRule::Constant { value: 3.0 },
            AtomRule::Oscillation {
                level: 2.0,
                wobble: 0.8,
            },
        ]),
        vec![AtomBound::Bounded(3.0), AtomBound::Bounded(3.6)],
        "all bounded",
    )?;
    run_case(
        "all-bounded family",
        bounded,
        AtomicSpace::new(vec![0.5, 0.5], 0.0)?,
    )?;

    // the growing atom carries enough mass that the grid search fails at
    // every tested epsilon
    let mixed = CoefficientFamily::new(
        FamilyRule::PerAtom(vec![
            AtomRule::Constant { value: 3.0 },
            AtomRule::Power {
                alpha: 1.0,
                scale: 1.0,
            },
        ]),
        vec![AtomBound::Bounded(3.0), AtomBound::Unbounded],
        "one growing atom",
    )?;
    run_case(
        "family with a heavy growing atom",
        mixed,
        AtomicSpace::new(vec![0.4, 0.6], 0.0)?,
    )?;
    Ok(())
}
