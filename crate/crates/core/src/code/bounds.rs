//! Bounds on the solutions of `[xi^sigma] = [xi M]` for invertible `M`: at most `s + 1` on
//! any line of `PG(V*)`, and at most `(s^r - 1)/(s - 1)` inside any `PG(W)` with
//! `dim W = r`.

use serde::Serialize;

use super::twisted_eigen_solutions;
use crate::error::{Error, Result};
use crate::lambda::ProjectiveSystem;
use crate::linalg::EchelonBasis;
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineBoundReport {
    pub matrices: u64,
    pub seed: u64,
    pub lines_per_matrix: u64,
    pub bound: u64,
    pub max_on_a_line: u64,
    pub violations: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceBoundReport {
    pub matrices: u64,
    pub subspaces_per_matrix: u64,
    pub seed: u64,
    /// Largest `count / bound` observed, as `(count, bound, r)`.
    pub tightest: (u64, u64, u32),
    pub violations: u64,
    pub pass: bool,
}

fn require_twist(sys: &ProjectiveSystem) -> Result<()> {
    if sys.sigma().is_identity() {
        return Err(Error::Configuration("sigma != 1".into()));
    }
    Ok(())
}

fn solution_mask(sys: &ProjectiveSystem, rng: &mut rng::SweepRng) -> Vec<bool> {
    let m = rng::random_invertible(rng, sys.field(), sys.side());
    let mut mask = vec![false; sys.pg_len()];
    for (i, _) in twisted_eigen_solutions(sys, &m) {
        mask[i] = true;
    }
    mask
}

/// Every line of `PG(V*)`, for `matrices` random invertible `M`.
pub fn line_bound_check(sys: &ProjectiveSystem, matrices: u64, seed: u64) -> Result<LineBoundReport> {
    require_twist(sys)?;
    let lines = sys.gamma().space().lines(sys.field());
    let bound = sys.s() + 1;
    let mut rng = rng::seeded(seed, 0);
    let (mut max_on, mut violations) = (0, 0);
    for _ in 0..matrices {
        let mask = solution_mask(sys, &mut rng);
        for line in &lines {
            let on = line.iter().filter(|&&p| mask[p]).count() as u64;
            max_on = max_on.max(on);
            violations += (on > bound) as u64;
        }
    }
    Ok(LineBoundReport {
        matrices,
        seed,
        lines_per_matrix: lines.len() as u64,
        bound,
        max_on_a_line: max_on,
        violations,
        pass: violations == 0,
    })
}

/// `subspaces` random `W` (uniform dimension in `1..=n+1`) for each of `matrices` random
/// invertible `M`.
pub fn subspace_bound_check(
    sys: &ProjectiveSystem,
    matrices: u64,
    subspaces: u64,
    seed: u64,
) -> Result<SubspaceBoundReport> {
    require_twist(sys)?;
    let f = sys.field();
    let pg = sys.gamma().space();
    let side = sys.side();
    let s = sys.s();
    let mut rng = rng::seeded(seed, 1);
    let mut tightest = (0, 1, 1);
    let mut violations = 0;
    for _ in 0..matrices {
        let mask = solution_mask(sys, &mut rng);
        let solutions: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        for _ in 0..subspaces {
            let r = rand::Rng::random_range(&mut rng, 1..=side);
            let mut w = EchelonBasis::new(side);
            while w.rank() < r {
                let v = rng::random_matrix(&mut rng, f, 1, side);
                w.insert(f, v.data());
            }
            let count = solutions.iter().filter(|&&i| w.contains(f, pg.rep(i))).count() as u64;
            let bound = (s.pow(r as u32) - 1) / (s - 1);
            if count > bound {
                violations += 1;
            }
            if count * tightest.1 > tightest.0 * bound {
                tightest = (count, bound, r as u32);
            }
        }
    }
    Ok(SubspaceBoundReport {
        matrices,
        subspaces_per_matrix: subspaces,
        seed,
        tightest,
        violations,
        pass: violations == 0,
    })
}
