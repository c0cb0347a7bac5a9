//! Construct the equivalent measure that certifies L1-boundedness on the
//! bounded part: `q_m = 2^{-m} / C_m` on bounded atoms, `q_m = 2^{-m}` on
//! unbounded ones, normalized by `K`.
//!
//! With `J_b = {1, 2}`, `C = (1, 2)` and `J_u = {3}` the weights come out as
//! `q = (1/2, 1/8, 1/8)`, `K = 3/4`, `Q = (2/3, 1/6, 1/6)`, and the checked
//! supremum of `E_Q[xi_k 1_{U_b}]` stays below `(1/K) * (2^-1 + 2^-2)`.

use cesaro_hull::decomposition::{
    build_equivalent_measure, certify_l1_bound, partition_with_bounds, Mode,
};
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
        "mixed family",
    )?;
    let window = SequenceWindow::identity(family, space, 256)?;

    let (part, bounds) = partition_with_bounds(&window, Mode::Exact, &DivergenceRule::default())?;
    let measure = build_equivalent_measure(&part, &bounds)?;

    println!("atom  label  q_m        Q(A_m)");
    for (i, &label) in measure.labels().iter().enumerate() {
        println!(
            "{:>4}  {:>5}  {:<9.6} {:<9.6}",
            i + 1,
            label,
            measure.weights()[i],
            measure.atom_probabilities()[i]
        );
    }
    println!("normalizer K = {}", measure.normalizer());
    println!(
        "sum of Q = {} (every weight positive, so Q ~ P)",
        measure.atom_probabilities().iter().sum::<f64>()
    );

    let certificate = certify_l1_bound(&window, &part, &measure)?;
    println!(
        "L1 certificate: sup_k E_Q[xi_k 1_(J_b)] = {:.6} <= bound {:.6}",
        certificate.checked_sup(),
        certificate.l1_bound()
    );
    Ok(())
}
