//! Characterizations of the minimum and second-lowest weight codewords.

use std::collections::BTreeMap;

use serde::Serialize;

use super::sweep::{checked_class_count, class_matrix, for_each_class, run_chunks};
use super::{closed_form_min_distance, m_bound, pg_size, theta_parts, twisted_eigen_solutions, weight_from_theta};
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::lambda::ProjectiveSystem;
use crate::linalg::{dot, outer, rank_of, EchelonBasis, Mat};

fn check_n2_config(sys: &ProjectiveSystem) -> Result<()> {
    if sys.n() != 2 || sys.sigma().is_identity() || !sys.sigma().is_involutory() {
        return Err(Error::Configuration(
            "the norm condition needs n = 2 and sigma of order 2".into(),
        ));
    }
    Ok(())
}

/// Whether three independent `xi_i` solve `xi_i M = lambda_i xi_i^sigma` with
/// `N(lambda_1) = N(lambda_2) = N(lambda_3)`.
pub fn min_weight_condition_n2(sys: &ProjectiveSystem, m: &Mat) -> Result<bool> {
    check_n2_config(sys)?;
    if m.rows() != 3 || m.cols() != 3 {
        return Err(Error::Shape("expected a 3x3 matrix".into()));
    }
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(norm_condition(sys, m))
}

fn norm_condition(sys: &ProjectiveSystem, m: &Mat) -> bool {
    let f = sys.field();
    let sigma = sys.sigma();
    let pg = sys.gamma().space();
    let mut by_norm: BTreeMap<Elem, EchelonBasis> = BTreeMap::new();
    for (i, lambda) in twisted_eigen_solutions(sys, m) {
        // the norm of lambda does not depend on the representative of [xi]
        let norm = sigma.norm(f, lambda).expect("involutory");
        let basis = by_norm.entry(norm).or_insert_with(|| EchelonBasis::new(3));
        basis.insert(f, pg.rep(i));
        if basis.rank() == 3 {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinWordsReport {
    pub classes: u64,
    pub min_distance: u64,
    pub classes_at_min_distance: u64,
    pub classes_with_condition: u64,
    /// Classes on which the weight test and the norm condition disagree.
    pub disagreements: u64,
    #[serde(serialize_with = "super::serialize_mat_opt")]
    pub first_disagreement: Option<Mat>,
    pub pass: bool,
}

/// Compares `{M : weight(c_M) = d}` with `{M : norm condition}` over all classes.
pub fn min_weight_sweep(sys: &ProjectiveSystem, threads: usize) -> Result<MinWordsReport> {
    check_n2_config(sys)?;
    let total = checked_class_count(sys)?;
    let (q, n) = (sys.q(), sys.n() as u32);
    let d = closed_form_min_distance(q, n, sys.sigma())?;
    let parts = run_chunks(total, threads, |_, range| {
        let mut scratch = vec![0; 3];
        let (mut at_min, mut cond, mut bad) = (0u64, 0u64, 0u64);
        let mut first = None;
        for_each_class(sys, range, |idx, data| {
            let (kernel, fixed) = theta_parts(sys, data, &mut scratch);
            let is_min = weight_from_theta(q, n, kernel + fixed) == d;
            let m = Mat::from_vec(3, 3, data.to_vec()).expect("square");
            let holds = norm_condition(sys, &m);
            at_min += is_min as u64;
            cond += holds as u64;
            if is_min != holds {
                bad += 1;
                first.get_or_insert(idx);
            }
        });
        (at_min, cond, bad, first)
    })?;
    let mut report = MinWordsReport {
        classes: total,
        min_distance: d,
        classes_at_min_distance: 0,
        classes_with_condition: 0,
        disagreements: 0,
        first_disagreement: None,
        pass: false,
    };
    let mut first = None;
    for (a, c, b, f) in parts {
        report.classes_at_min_distance += a;
        report.classes_with_condition += c;
        report.disagreements += b;
        if first.is_none() {
            first = f;
        }
    }
    report.first_disagreement = first.map(|i| class_matrix(sys, i));
    report.pass = report.disagreements == 0;
    Ok(report)
}

/// `xi x^sigma`, the pairing deciding whether the rank-one matrix `x xi` gives a singular
/// hyperplane. Its vanishing means the flag `([x], [xi^(sigma^-1)])` is incident.
pub fn twisted_pairing(sys: &ProjectiveSystem, x: &[Elem], xi: &[Elem]) -> Elem {
    dot(sys.field(), xi, &sys.sigma().apply_slice(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondWeightScope {
    /// Every class of `PG(M_{n+1}(q))`.
    Exhaustive,
    /// Every rank-one class, with rank `r >= 2` covered by the bounds `m(r)`.
    RankOneWithBounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondWeightReport {
    pub scope: SecondWeightScope,
    pub classes: u64,
    pub min_weight: u64,
    pub expected_min_weight: u64,
    pub second_weight: u64,
    pub expected_second_weight: u64,
    /// Nonzero weights strictly below the expected minimum or strictly between the two.
    pub intermediate_weights: Vec<u64>,
    pub classes_at_min_weight: u64,
    pub classes_at_second_weight: u64,
    pub rank_one_nonsingular: u64,
    pub rank_one_singular: u64,
    /// Classes whose weight disagrees with the rank-one pairing prediction.
    pub mismatches: u64,
    /// `max m(r)` over `r >= 2` (bounds scope only).
    pub max_higher_rank_bound: Option<u64>,
    pub singular_cardinality: u64,
    pub nonsingular_cardinality: u64,
    pub pass: bool,
}

/// Checks that the minimum-weight words come from rank-one `x xi` with `xi x^sigma != 0`,
/// the second weight `q^(2n-1)` from rank-one `x xi` with `xi x^sigma = 0`, and that no
/// other weight lies at or below `q^(2n-1)`.
pub fn second_weight_check(
    sys: &ProjectiveSystem,
    scope: SecondWeightScope,
    threads: usize,
) -> Result<SecondWeightReport> {
    let sigma = sys.sigma();
    if sigma.is_identity() || (sys.n() == 2 && sigma.is_involutory()) {
        return Err(Error::Configuration("needs sigma != 1 and (n > 2 or sigma^2 != 1)".into()));
    }
    let (q, n) = (sys.q(), sys.n() as u32);
    let d = closed_form_min_distance(q, n, sigma)?;
    let second = q.pow(2 * n - 1);
    let pg = pg_size(q, n);
    let len = sys.len() as u64;
    let mut report = SecondWeightReport {
        scope,
        classes: 0,
        min_weight: u64::MAX,
        expected_min_weight: d,
        second_weight: u64::MAX,
        expected_second_weight: second,
        intermediate_weights: Vec::new(),
        classes_at_min_weight: 0,
        classes_at_second_weight: 0,
        rank_one_nonsingular: 0,
        rank_one_singular: 0,
        mismatches: 0,
        max_higher_rank_bound: None,
        singular_cardinality: len - second,
        nonsingular_cardinality: len - d,
        pass: false,
    };
    // weight histogram over the relevant classes, by theta
    let mut hist = vec![0u64; pg as usize + 1];
    match scope {
        SecondWeightScope::Exhaustive => {
            let total = checked_class_count(sys)?;
            let side = sys.side();
            let parts = run_chunks(total, threads, |_, range| {
                let mut hist = vec![0u64; pg as usize + 1];
                let (mut nonsing, mut sing, mut bad) = (0u64, 0u64, 0u64);
                let mut scratch = vec![0; side];
                for_each_class(sys, range, |_, m| {
                    let (kernel, fixed) = theta_parts(sys, m, &mut scratch);
                    let theta = kernel + fixed;
                    hist[theta as usize] += 1;
                    let w = weight_from_theta(q, n, theta);
                    if w > second {
                        return;
                    }
                    match rank_one_pairing(sys, m) {
                        Some(true) => {
                            sing += 1;
                            bad += (w != second) as u64;
                        }
                        Some(false) => {
                            nonsing += 1;
                            bad += (w != d) as u64;
                        }
                        None => bad += 1,
                    }
                });
                (hist, nonsing, sing, bad)
            })?;
            for (h, a, b, c) in parts {
                for (x, y) in hist.iter_mut().zip(h) {
                    *x += y;
                }
                report.rank_one_nonsingular += a;
                report.rank_one_singular += b;
                report.mismatches += c;
            }
            report.classes = total;
        }
        SecondWeightScope::RankOneWithBounds => {
            let pts = sys.gamma().space();
            let mut scratch = vec![0; sys.side()];
            for a in 0..pts.len() {
                for b in 0..pts.len() {
                    let (x, xi) = (pts.rep(a), pts.rep(b));
                    let m = outer(sys.field(), x, xi);
                    let (kernel, fixed) = theta_parts(sys, m.data(), &mut scratch);
                    let theta = kernel + fixed;
                    hist[theta as usize] += 1;
                    let w = weight_from_theta(q, n, theta);
                    if twisted_pairing(sys, x, xi) == 0 {
                        report.rank_one_singular += 1;
                        report.mismatches += (w != second) as u64;
                    } else {
                        report.rank_one_nonsingular += 1;
                        report.mismatches += (w != d) as u64;
                    }
                }
            }
            report.classes = (pts.len() * pts.len()) as u64;
            let bound = (2..=n + 1)
                .map(|r| m_bound(r, q, n, sys.s()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max()
                .expect("n >= 1");
            report.max_higher_rank_bound = Some(bound);
            // rank >= 2 classes have weight >= q^(n-1)(pg - bound); record it if it is low
            let floor = weight_from_theta(q, n, bound.min(pg));
            if floor <= second {
                report.intermediate_weights.push(floor);
            }
        }
    }
    let weights: Vec<(u64, u64)> = hist
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c > 0)
        .map(|(t, &c)| (weight_from_theta(q, n, t as u64), c))
        .collect();
    let nonzero: Vec<&(u64, u64)> = weights.iter().filter(|(w, _)| *w > 0).collect();
    if let Some(&&(w, c)) = nonzero.first() {
        report.min_weight = w;
        report.classes_at_min_weight = c;
    }
    if let Some(&&(w, c)) = nonzero.get(1) {
        report.second_weight = w;
        report.classes_at_second_weight = c;
    }
    for &&(w, _) in &nonzero {
        if w < second && w != d {
            report.intermediate_weights.push(w);
        }
    }
    report.intermediate_weights.sort_unstable();
    report.intermediate_weights.dedup();
    let flags = len;
    let points = sys.pg_len() as u64;
    report.pass = report.mismatches == 0
        && report.intermediate_weights.is_empty()
        && report.min_weight == d
        && report.second_weight == second
        && report.rank_one_singular == flags
        && report.rank_one_nonsingular == points * points - flags
        && report.classes_at_min_weight == report.rank_one_nonsingular
        && report.classes_at_second_weight == report.rank_one_singular
        && report.singular_cardinality == crate::hyperplanes::singular_count(q, n)
        && report.nonsingular_cardinality == crate::hyperplanes::quasi_singular_count(q, n);
    Ok(report)
}

/// For a rank-one class `x xi`: `Some(true)` if singular, `Some(false)` if not;
/// `None` for other ranks.
fn rank_one_pairing(sys: &ProjectiveSystem, m: &[Elem]) -> Option<bool> {
    let side = sys.side();
    if rank_of(sys.field(), m.to_vec(), side, side) != 1 {
        return None;
    }
    // x is any nonzero column, xi the matching row scaled so that x xi = M
    let r = m.chunks(side).position(|row| row.iter().any(|&v| v != 0))?;
    let c = m[r * side..(r + 1) * side].iter().position(|&v| v != 0)?;
    let x: Vec<Elem> = (0..side).map(|i| m[i * side + c]).collect();
    let f = sys.field();
    let xi: Vec<Elem> = m[r * side..(r + 1) * side]
        .iter()
        .map(|&v| f.div(v, x[r]))
        .collect();
    Some(twisted_pairing(sys, &x, &xi) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pure_tensor;
    use crate::linalg::{ColVec, RowVec};

    fn sys(q: u32, n: usize, j: u32) -> ProjectiveSystem {
        ProjectiveSystem::from_params(q, n, j).unwrap()
    }

    #[test]
    fn norm_condition_examples() {
        let s = sys(4, 2, 1);
        assert!(min_weight_condition_n2(&s, &Mat::identity(3)).unwrap());
        assert!(!min_weight_condition_n2(&s, &Mat::elementary(3, 0, 0)).unwrap());
        assert_eq!(min_weight_condition_n2(&s, &Mat::zeros(3, 3)), Err(Error::ZeroInput));
        assert!(min_weight_condition_n2(&sys(8, 2, 1), &Mat::identity(3)).is_err());
    }

    #[test]
    fn rank_one_factorization() {
        let s = sys(8, 2, 1);
        let f = s.field();
        let x = ColVec(vec![3, 1, 5]);
        let xi = RowVec(vec![0, 2, 7]);
        let m = pure_tensor(f, &x, &xi).unwrap();
        let expected = twisted_pairing(&s, &x, &xi) == 0;
        assert_eq!(rank_one_pairing(&s, m.data()), Some(expected));
        assert_eq!(rank_one_pairing(&s, Mat::identity(3).data()), None);
    }

    #[test]
    fn rank_one_scope_at_q8() {
        let r = second_weight_check(&sys(8, 2, 1), SecondWeightScope::RankOneWithBounds, 1).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!((r.min_weight, r.second_weight), (504, 512));
        assert_eq!(r.rank_one_singular, 657);
        assert_eq!(r.max_higher_rank_bound, Some(7));
    }

    #[test]
    fn rejects_involutory_plane() {
        assert!(second_weight_check(&sys(4, 2, 1), SecondWeightScope::Exhaustive, 1).is_err());
    }
}
