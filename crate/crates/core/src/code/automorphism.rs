//! The action `rho(g): c_M -> c_{g^-1 M g^sigma}` of `GL(n+1, q)` on the code.
//!
//! `rho(g)` is a monomial transformation: with `[g^sigma X_i g^-1] = [X_{pi(i)}]` and
//! `g^sigma X_i g^-1 = lambda_i X_{pi(i)}`, the new word satisfies
//! `c'[i] = lambda_i c_M[pi(i)]`.

use serde::Serialize;

use super::{act, eval_codeword};
use crate::error::Result;
use crate::gf::Elem;
use crate::lambda::ProjectiveSystem;
use crate::linalg::Mat;
use crate::rng;

/// `pi(g)` and `lambda(g, .)`; `None` if some `g^sigma X_i g^-1` is not a point of the system
/// or the map is not a bijection.
pub fn monomial_data(sys: &ProjectiveSystem, g: &Mat) -> Result<Option<(Vec<usize>, Vec<Elem>)>> {
    let f = sys.field();
    let g_inv = g.invert(f)?;
    let g_sigma = g.sigma(sys.sigma());
    let mut pi = Vec::with_capacity(sys.len());
    let mut lambda = Vec::with_capacity(sys.len());
    let mut seen = vec![false; sys.len()];
    for i in 0..sys.len() {
        let y = g_sigma.mul(f, &sys.point_mat(i))?.mul(f, &g_inv)?;
        let Some(j) = sys.locate(y.data()) else {
            return Ok(None);
        };
        if std::mem::replace(&mut seen[j], true) {
            return Ok(None);
        }
        let lead = y.data().iter().position(|&v| v != 0).expect("nonzero");
        let l = y.data()[lead];
        // points are normalized, so the lead entry is the scalar
        debug_assert_eq!(sys.point(j)[lead], 1);
        pi.push(j);
        lambda.push(l);
    }
    Ok(Some((pi, lambda)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismReport {
    pub trials: u64,
    pub seed: u64,
    pub weight_failures: u64,
    pub permutation_failures: u64,
    pub monomial_failures: u64,
    /// Scalars `alpha I`, `alpha` a nonzero element of `F_s`.
    pub kernel_scalars: u64,
    pub kernel_failures: u64,
    pub non_kernel_trials: u64,
    /// Non-kernel `g` that fixed every codeword.
    pub non_kernel_failures: u64,
    pub pass: bool,
}

/// Random `(g, M)` pairs for the monomial property, the kernel scalars against the same
/// words, and `non_kernel_trials` random `g` outside the kernel that must move some word.
pub fn automorphism_check(
    sys: &ProjectiveSystem,
    trials: u64,
    non_kernel_trials: u64,
    seed: u64,
) -> Result<AutomorphismReport> {
    let f = sys.field();
    let sigma = sys.sigma();
    let side = sys.side();
    let mut rng = rng::seeded(seed, 0);
    let mut report = AutomorphismReport {
        trials,
        seed,
        weight_failures: 0,
        permutation_failures: 0,
        monomial_failures: 0,
        kernel_scalars: 0,
        kernel_failures: 0,
        non_kernel_trials,
        non_kernel_failures: 0,
        pass: false,
    };
    let mut samples = Vec::new();
    for t in 0..trials {
        let g = rng::random_invertible(&mut rng, f, side);
        let m = rng::random_nonzero_matrix(&mut rng, f, side);
        let c = eval_codeword(sys, &m)?;
        let moved = eval_codeword(sys, &act(f, sigma, &g, &m)?)?;
        if c.weight() != moved.weight() {
            report.weight_failures += 1;
        }
        match monomial_data(sys, &g)? {
            None => report.permutation_failures += 1,
            Some((pi, lambda)) => {
                let ok = (0..sys.len()).all(|i| moved.values[i] == f.mul(lambda[i], c.values[pi[i]]));
                if !ok {
                    report.monomial_failures += 1;
                }
            }
        }
        if t < 100 {
            samples.push(c);
        }
    }
    for alpha in sigma.fixed_elements().into_iter().filter(|&a| a != 0) {
        report.kernel_scalars += 1;
        let g = Mat::scalar(side, alpha);
        let fixes = samples
            .iter()
            .all(|c| eval_codeword(sys, &act(f, sigma, &g, &c.source).unwrap()).unwrap() == *c);
        if !fixes {
            report.kernel_failures += 1;
        }
    }
    // rho(g) is linear and c_M determines M, so it is trivial iff it fixes every e_ab
    let basis: Vec<Mat> = (0..side)
        .flat_map(|a| (0..side).map(move |b| Mat::elementary(side, a, b)))
        .collect();
    for _ in 0..non_kernel_trials {
        let g = rng::random_non_kernel(&mut rng, f, sigma, side);
        let mut moves = false;
        for e in &basis {
            if eval_codeword(sys, &act(f, sigma, &g, e)?)?.values != eval_codeword(sys, e)?.values {
                moves = true;
                break;
            }
        }
        if !moves {
            report.non_kernel_failures += 1;
        }
    }
    report.pass = report.weight_failures == 0
        && report.permutation_failures == 0
        && report.monomial_failures == 0
        && report.kernel_failures == 0
        && report.non_kernel_failures == 0;
    Ok(report)
}
