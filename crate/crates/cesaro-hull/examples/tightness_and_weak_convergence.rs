//! Distribution-level views of hull boundedness: quantile envelopes decide
//! tightness, and empirical CDFs on a fixed grid decide weak convergence of
//! a sample sequence.

use cesaro_hull::family::{
    AtomBound, AtomRule, CesaroFamily, CoefficientFamily, FamilyRule, SequenceWindow,
};
use cesaro_hull::limits::{tightness_check, weak_convergence_check, WeakConvergenceVerdict};
use cesaro_hull::space::{AtomicSpace, SimpleRv};

fn main() -> cesaro_hull::Result<()> {
    let space = AtomicSpace::new(vec![0.5, 0.5], 0.0)?;
    let eps_grid = [0.5, 0.1, 0.01];

    // bounded family: envelopes stabilize, Cesàro samples converge weakly
    let bounded = CoefficientFamily::new(
        FamilyRule::PerAtom(vec![
            AtomRule::Decay {
                level: 1.9,
                bump: 0.05,
            },
            AtomRule::Constant { value: 0.75 },
        ]),
        vec![AtomBound::Bounded(1.95), AtomBound::Bounded(0.75)],
        "bounded pair",
    )?;
    let window = SequenceWindow::identity(bounded, space.clone(), 1024)?;
    let samples: Vec<SimpleRv> = (1..=window.len())
        .map(|k| window.evaluate(k))
        .collect::<cesaro_hull::Result<_>>()?;
    let report = tightness_check(&samples, &space, &eps_grid)?;
    println!("bounded family: {:?}", report.verdict);
    for (eps, envelope) in report.eps_grid.iter().zip(&report.envelopes) {
        println!("  (1 - {eps})-quantile envelope = {envelope:.4}");
    }

    let cesaro = CesaroFamily::new(window)?;
    let cesaro_samples: Vec<SimpleRv> = (1..=cesaro.len())
        .map(|k| cesaro.evaluate(k))
        .collect::<cesaro_hull::Result<_>>()?;
    match weak_convergence_check(&cesaro_samples, &space)? {
        WeakConvergenceVerdict::ConvergesTo(summary) => {
            let median = summary
                .grid
                .iter()
                .zip(&summary.cdf)
                .find(|(_, &c)| c >= 0.5)
                .map(|(x, _)| *x)
                .unwrap_or(f64::NAN);
            println!("  cesaro samples converge weakly; median of the limit law = {median:.4}");
        }
        WeakConvergenceVerdict::NoConvergenceOnWindow => {
            println!("  cesaro samples do not converge on this window");
        }
    }

    // growing family: the envelope keeps doubling
    let growing = CoefficientFamily::new(
        FamilyRule::Uniform(AtomRule::Power {
            alpha: 1.0,
            scale: 1.0,
        }),
        vec![AtomBound::Unbounded; 2],
        "linear growth",
    )?;
    let window = SequenceWindow::identity(growing, space.clone(), 512)?;
    let samples: Vec<SimpleRv> = (1..=window.len())
        .map(|k| window.evaluate(k))
        .collect::<cesaro_hull::Result<_>>()?;
    let report = tightness_check(&samples, &space, &eps_grid)?;
    println!("growing family: {:?}", report.verdict);
    Ok(())
}
