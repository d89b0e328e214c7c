//! Geometric hyperplanes `H_M = eps^-1(M^perp)` of the point-hyperplane geometry:
//! classification and explicit constructions.
//!
//! For a rank-one `M = x xi`, the functionals counted by `theta_M` are the `[eta]` with
//! `eta x = 0` together with `[xi^(sigma^-1)]` when `xi x^sigma != 0`. So `H_M` is singular
//! exactly when `xi x^sigma = 0`, and its defining flag is `([x], [xi^(sigma^-1)])`.

pub mod extfield;

use serde::Serialize;

use crate::code::{self, serialize_mat};
use crate::error::{Error, Result};
use crate::gamma::{is_geometric_hyperplane, GammaLine, HyperplaneViolation};
use crate::gf::{Elem, Field, Frobenius};
use crate::lambda::ProjectiveSystem;
use crate::linalg::{dot, normalize_slice, trace_product_raw, Mat};
use crate::projgeom::{point_count, ProjectiveSpace};
use crate::rng;

use extfield::ExtField;

fn base_term(q: u64, n: u32) -> u64 {
    (q.pow(n + 1) - 1) * (q.pow(n - 1) - 1) / ((q - 1) * (q - 1))
}

/// Cardinality of a singular hyperplane.
pub fn singular_count(q: u64, n: u32) -> u64 {
    base_term(q, n) + (q.pow(n) - 1) / (q - 1) * q.pow(n - 1)
}

/// Cardinality of a quasi-singular hyperplane that is not singular.
pub fn quasi_singular_count(q: u64, n: u32) -> u64 {
    base_term(q, n) + ((q.pow(n) - 1) / (q - 1) + 1) * q.pow(n - 1)
}

/// Cardinality of a semi-standard spread type hyperplane.
pub fn spread_count(q: u64, n: u32) -> u64 {
    (q.pow(n + 1) - 1) / (q - 1) * ((q.pow(n - 1) - 1) / (q - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HyperplaneType {
    Singular,
    QuasiSingularNonsingular,
    SpreadType,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneReport {
    #[serde(serialize_with = "serialize_mat")]
    pub matrix: Mat,
    pub rank: usize,
    /// `xi x^sigma` for `M = x xi` of rank one.
    pub pairing: Option<Elem>,
    /// `([x], [xi^(sigma^-1)])` as (point, functional) indices, for rank one.
    pub defining_flag: Option<(usize, usize)>,
    #[serde(rename = "type")]
    pub kind: HyperplaneType,
    pub theta: u64,
    pub cardinality: u64,
    pub weight: u64,
    /// The closed-form cardinality for the detected type, if it has one.
    pub expected_cardinality: Option<u64>,
    pub pass: bool,
}

/// `(x, xi)` with `x xi = M`, for `M` of rank one; `x` is normalized.
pub fn factor_rank_one(f: &Field, m: &Mat) -> Option<(Vec<Elem>, Vec<Elem>)> {
    if m.rank(f) != 1 {
        return None;
    }
    let side = m.rows();
    let c = (0..m.cols()).find(|&c| (0..side).any(|r| m.get(r, c) != 0))?;
    let mut x = m.col(c);
    normalize_slice(f, &mut x)?;
    let r = x.iter().position(|&v| v != 0)?;
    Some((x, m.row(r).to_vec()))
}

/// Points of `PG(V)` fixed by `[x] -> [A x^sigma]`.
pub fn fixed_points(f: &Field, sigma: &Frobenius, a: &Mat, pg: &ProjectiveSpace) -> Vec<usize> {
    let d = pg.dim();
    let mut y = vec![0; d];
    (0..pg.len())
        .filter(|&i| {
            let x = pg.rep(i);
            let xs = sigma.apply_slice(x);
            for (r, slot) in y.iter_mut().enumerate() {
                *slot = dot(f, a.row(r), &xs);
            }
            let lead = x.iter().position(|&v| v != 0).expect("nonzero");
            let c = y[lead];
            c != 0 && y.iter().zip(x).all(|(&u, &v)| u == f.mul(c, v))
        })
        .collect()
}

/// `mu` with `M^sigma M = mu I`, if any.
fn sigma_product_scalar(f: &Field, sigma: &Frobenius, m: &Mat) -> Option<Elem> {
    let p = m.sigma(sigma).mul(f, m).ok()?;
    let mu = p.get(0, 0);
    (mu != 0 && p == Mat::scalar(m.rows(), mu)).then_some(mu)
}

/// The spread-type test: `sigma^2 = 1`, `sigma != 1`, `n` odd, some `cM` with
/// `(cM)^sigma (cM) = I` (equivalently `M^sigma M` a nonzero scalar, the norm being onto
/// `F_s`) and `[x] -> [M x^sigma]` without fixed points.
pub fn is_spread_type(sys: &ProjectiveSystem, m: &Mat) -> bool {
    let sigma = sys.sigma();
    if sigma.is_identity() || !sigma.is_involutory() || sys.n().is_multiple_of(2) {
        return false;
    }
    sigma_product_scalar(sys.field(), sigma, m).is_some()
        && fixed_points(sys.field(), sigma, m, sys.gamma().space()).is_empty()
}

pub fn classify(sys: &ProjectiveSystem, m: &Mat) -> Result<HyperplaneReport> {
    let f = sys.field();
    let mut matrix = m.clone();
    if matrix.normalize(f).is_none() {
        return Err(Error::ZeroInput);
    }
    let theta = code::theta(sys, &matrix)?;
    let (q, n) = (sys.q(), sys.n() as u32);
    let rank = matrix.rank(f);
    let (mut pairing, mut defining_flag) = (None, None);
    let (kind, expected) = if let Some((x, xi)) = factor_rank_one(f, &matrix) {
        let pg = sys.gamma().space();
        let value = dot(f, &xi, &sys.sigma().apply_slice(&x));
        pairing = Some(value);
        let functional = sys.sigma().apply_inverse_slice(&xi);
        defining_flag = Some((
            pg.index_of(f, &x).expect("nonzero"),
            pg.index_of(f, &functional).expect("nonzero"),
        ));
        if value == 0 {
            (HyperplaneType::Singular, Some(singular_count(q, n)))
        } else {
            (HyperplaneType::QuasiSingularNonsingular, Some(quasi_singular_count(q, n)))
        }
    } else if is_spread_type(sys, &matrix) {
        (HyperplaneType::SpreadType, Some(spread_count(q, n)))
    } else {
        (HyperplaneType::Plain, None)
    };
    let cardinality = theta.intersection;
    let weight = sys.len() as u64 - cardinality;
    let mut pass = expected.is_none_or(|e| e == cardinality) && weight == theta.weight;
    if kind == HyperplaneType::SpreadType {
        pass &= theta.theta == 0;
    }
    Ok(HyperplaneReport {
        matrix,
        rank,
        pairing,
        defining_flag,
        kind,
        theta: theta.theta,
        cardinality,
        weight,
        expected_cardinality: expected,
        pass,
    })
}

/// Membership mask of `eps^-1(M^perp)` over the flags.
pub fn pullback(sys: &ProjectiveSystem, m: &Mat) -> Vec<bool> {
    let f = sys.field();
    (0..sys.len())
        .map(|i| trace_product_raw(f, sys.point(i), m.data(), sys.side()) == 0)
        .collect()
}

/// Checks that `eps^-1(M^perp)` is a geometric hyperplane of the geometry.
pub fn check_geometric(
    sys: &ProjectiveSystem,
    lines: &[GammaLine],
    m: &Mat,
) -> std::result::Result<(), HyperplaneViolation> {
    is_geometric_hyperplane(lines, &pullback(sys, m))
}

pub const SPREAD_BUDGET: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpreadWitness {
    #[serde(serialize_with = "serialize_mat")]
    pub matrix: Mat,
    pub seed: u64,
    pub attempts: u64,
    pub fixed_point_free: bool,
    pub involutory: bool,
    /// Number of lines `<[x], phi([x])>`; a spread has `(q^(n+1)-1)/(q^2-1)` of them.
    pub spread_lines: usize,
    pub is_line_spread: bool,
}

fn check_spread_config(sigma: &Frobenius, n: usize) -> Result<()> {
    if sigma.is_identity() || !sigma.is_involutory() {
        return Err(Error::Configuration("spread type needs sigma of order 2".into()));
    }
    if n.is_multiple_of(2) {
        return Err(Error::Configuration(format!("spread type needs n odd (got n = {n})")));
    }
    Ok(())
}

/// Checks a candidate `M`: `M^sigma M = I`, no fixed points, `phi^2 = 1` and the lines
/// `<[x], phi([x])>` partition `PG(V)`.
pub fn spread_witness(f: &Field, sigma: &Frobenius, m: &Mat, pg: &ProjectiveSpace) -> Result<SpreadWitness> {
    let side = m.rows();
    let fixed_point_free = fixed_points(f, sigma, m, pg).is_empty();
    let phi = |x: &[Elem]| -> Vec<Elem> {
        let xs = sigma.apply_slice(x);
        (0..side).map(|r| dot(f, m.row(r), &xs)).collect()
    };
    let mut involutory = m.sigma(sigma).mul(f, m)? == Mat::identity(side);
    let mut owner = vec![usize::MAX; pg.len()];
    let mut spread_lines = 0;
    let mut partition = fixed_point_free;
    for i in 0..pg.len() {
        let x = pg.rep(i);
        let y = phi(x);
        if pg.index_of(f, &phi(&y)) != Some(i) {
            involutory = false;
        }
        if !fixed_point_free || owner[i] != usize::MAX {
            continue;
        }
        let line = pg.span_points(f, &[x, &y]);
        spread_lines += 1;
        for p in line {
            if owner[p] != usize::MAX {
                partition = false;
            }
            owner[p] = spread_lines;
        }
    }
    let q = f.order() as u64;
    let expected = (q.pow(side as u32) - 1) / (q * q - 1);
    Ok(SpreadWitness {
        matrix: m.clone(),
        seed: 0,
        attempts: 0,
        fixed_point_free,
        involutory,
        spread_lines,
        is_line_spread: partition && spread_lines as u64 == expected,
    })
}

/// Random search over `M = B^-1 B^sigma` (so `M^sigma M = I`) for a fixed-point-free
/// `[x] -> [M x^sigma]`, with `budget` attempts from `seed`.
pub fn find_spread(f: &Field, sigma: &Frobenius, n: usize, seed: u64, budget: u64) -> Result<SpreadWitness> {
    check_spread_config(sigma, n)?;
    let pg = ProjectiveSpace::enumerate(f, n + 1)?;
    let mut rng = rng::seeded(seed, 0);
    for attempt in 1..=budget {
        let b = rng::random_invertible(&mut rng, f, n + 1);
        let m = b.invert(f)?.mul(f, &b.sigma(sigma))?;
        if fixed_points(f, sigma, &m, &pg).is_empty() {
            let mut w = spread_witness(f, sigma, &m, &pg)?;
            w.seed = seed;
            w.attempts = attempt;
            return Ok(w);
        }
    }
    Err(Error::SearchExhausted { attempts: budget, seed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpfWitness {
    /// `M` with `theta_M = 0`.
    #[serde(serialize_with = "serialize_mat")]
    pub matrix: Mat,
    /// Matrix `A` of `zeta -> zeta^e omega` on the power basis: `phi([z]) = [A z^sigma]`.
    #[serde(serialize_with = "serialize_mat")]
    pub collineation: Mat,
    /// `e = p^j`, the exponent of `sigma`.
    pub exponent: u64,
    pub gcd: u64,
    /// Coefficients of the extension modulus, constant term first.
    pub extension_modulus: Vec<Elem>,
    /// Coordinates of `omega` in the power basis.
    pub primitive: Vec<Elem>,
    pub fixed_points: usize,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Builds `M` with `theta_M = 0` from `zeta -> zeta^e omega` on `F_{q^(n+1)}`, valid when
/// `gcd((q^(n+1)-1)/(q-1), e - 1) > 1`.
pub fn find_fpf_collineation(f: &Field, sigma: &Frobenius, n: usize) -> Result<FpfWitness> {
    if n == 0 {
        return Err(Error::Configuration("n >= 1".into()));
    }
    let q = f.order() as u64;
    let e = (f.characteristic() as u64).pow(sigma.index());
    let points = point_count(q, n as u32 + 1);
    let g = gcd(points as u64, e - 1);
    if g <= 1 {
        return Err(Error::Configuration(format!(
            "gcd((q^(n+1)-1)/(q-1), p^j - 1) = gcd({points}, {}) = {g}, the construction needs > 1",
            e - 1
        )));
    }
    let ext = ExtField::new(f, n + 1)?;
    let omega = ext.primitive();
    let side = n + 1;
    let mut a = Mat::zeros(side, side);
    for i in 0..side {
        let col = ext.mul(&ext.pow(&ext.basis(i), e), &omega);
        for (r, &v) in col.iter().enumerate() {
            a.set(r, i, v);
        }
    }
    let pg = ProjectiveSpace::enumerate(f, side)?;
    let fixed = fixed_points(f, sigma, &a, &pg).len();
    if fixed != 0 {
        return Err(Error::Consistency(format!(
            "the collineation from the extension field fixes {fixed} points"
        )));
    }
    // xi M = c xi^sigma  <=>  xi^T = c' A (xi^T)^sigma  when  M^-1 = A^T
    let matrix = a.transpose().invert(f)?;
    Ok(FpfWitness {
        matrix,
        collineation: a,
        exponent: e,
        gcd: g,
        extension_modulus: ext.modulus().to_vec(),
        primitive: omega,
        fixed_points: fixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(q: u32, n: usize, j: u32) -> ProjectiveSystem {
        ProjectiveSystem::from_params(q, n, j).unwrap()
    }

    #[test]
    fn closed_form_cardinalities() {
        assert_eq!((singular_count(4, 2), quasi_singular_count(4, 2)), (41, 45));
        assert_eq!((singular_count(8, 2), quasi_singular_count(8, 2)), (145, 153));
        assert_eq!(spread_count(4, 3), 425);
    }

    #[test]
    fn classifies_elementary_matrices() {
        let s = sys(4, 2, 1);
        let r = classify(&s, &Mat::elementary(3, 0, 1)).unwrap();
        assert_eq!(r.kind, HyperplaneType::Singular);
        assert_eq!((r.cardinality, r.weight), (41, 64));
        assert!(r.pass);
        let r = classify(&s, &Mat::elementary(3, 0, 0)).unwrap();
        assert_eq!(r.kind, HyperplaneType::QuasiSingularNonsingular);
        assert_eq!((r.cardinality, r.weight), (45, 60));
        assert_eq!(r.defining_flag, Some((5, 5)));
        let r = classify(&s, &Mat::identity(3)).unwrap();
        assert_eq!(r.kind, HyperplaneType::Plain);
        assert!(classify(&s, &Mat::zeros(3, 3)).is_err());
    }

    #[test]
    fn singularity_uses_the_twisted_pairing() {
        // x = (1, w, 0)^T, xi = (w^2, 1, 0): xi x = w^2 + w = 1, xi x^sigma = w^2 + w^2 = 0
        let s = sys(4, 2, 1);
        let f = s.field();
        let w = f.primitive();
        let x = [1, w, 0];
        let xi = [f.mul(w, w), 1, 0];
        assert_ne!(dot(f, &xi, &x), 0);
        let m = crate::linalg::outer(f, &x, &xi);
        let r = classify(&s, &m).unwrap();
        assert_eq!(r.pairing, Some(0));
        assert_eq!(r.kind, HyperplaneType::Singular);
        assert_eq!(r.cardinality, singular_count(4, 2));
    }

    #[test]
    fn rank_one_classes_match_the_formulas() {
        for q in [4u32, 8] {
            let s = sys(q, 2, 1);
            let f = s.field();
            let pg = s.gamma().space();
            let mut singular = 0;
            for a in 0..pg.len() {
                for b in 0..pg.len() {
                    let m = crate::linalg::outer(f, pg.rep(a), pg.rep(b));
                    let r = classify(&s, &m).unwrap();
                    assert!(r.pass);
                    singular += (r.kind == HyperplaneType::Singular) as usize;
                }
            }
            assert_eq!(singular, s.len());
        }
    }

    #[test]
    fn pullbacks_are_geometric_hyperplanes() {
        let s = sys(4, 2, 1);
        let lines = s.gamma().lines(s.field());
        let mut rng = rng::seeded(2, 0);
        for _ in 0..200 {
            let m = rng::random_nonzero_matrix(&mut rng, s.field(), 3);
            assert_eq!(check_geometric(&s, &lines, &m), Ok(()));
        }
    }

    #[test]
    fn fpf_construction_small() {
        let f = Field::with_order(9).unwrap();
        let sigma = Frobenius::new(&f, 1).unwrap();
        let w = find_fpf_collineation(&f, &sigma, 1).unwrap();
        assert_eq!(w.gcd, 2);
        let s = ProjectiveSystem::build(f.clone(), sigma, 1).unwrap();
        assert_eq!(code::theta(&s, &w.matrix).unwrap().theta, 0);
        let f4 = Field::with_order(4).unwrap();
        let s4 = Frobenius::new(&f4, 1).unwrap();
        assert!(matches!(find_fpf_collineation(&f4, &s4, 3), Err(Error::Configuration(_))));
    }

    #[test]
    fn spread_search_preconditions() {
        let f = Field::with_order(4).unwrap();
        let s = Frobenius::new(&f, 1).unwrap();
        assert!(matches!(find_spread(&f, &s, 2, 1, 10), Err(Error::Configuration(_))));
        let f8 = Field::with_order(8).unwrap();
        let s8 = Frobenius::new(&f8, 1).unwrap();
        assert!(matches!(find_spread(&f8, &s8, 3, 1, 10), Err(Error::Configuration(_))));
    }

    /// Every `M` with `M^sigma M` scalar over `F_4` in dimension 2 has a fixed point:
    /// the semilinear involutions `[x] -> [M x^sigma]` all fix a Baer subline.
    #[test]
    fn no_fixed_point_free_involution_on_the_projective_line() {
        let f = Field::with_order(4).unwrap();
        let sigma = Frobenius::new(&f, 1).unwrap();
        let pg = ProjectiveSpace::enumerate(&f, 2).unwrap();
        let mut candidates = 0;
        for code in 0..256u32 {
            let data: Vec<Elem> = (0..4).map(|i| ((code >> (2 * i)) & 3) as Elem).collect();
            let m = Mat::from_vec(2, 2, data).unwrap();
            if sigma_product_scalar(&f, &sigma, &m).is_none() {
                continue;
            }
            candidates += 1;
            assert_eq!(fixed_points(&f, &sigma, &m, &pg).len(), 3, "{m}");
        }
        assert!(candidates > 0);
    }

    #[test]
    fn lang_parameterization_always_has_fixed_points() {
        let f = Field::with_order(4).unwrap();
        let sigma = Frobenius::new(&f, 1).unwrap();
        let pg = ProjectiveSpace::enumerate(&f, 4).unwrap();
        let mut rng = rng::seeded(9, 0);
        for _ in 0..200 {
            let b = rng::random_invertible(&mut rng, &f, 4);
            let m = b.invert(&f).unwrap().mul(&f, &b.sigma(&sigma)).unwrap();
            // B^-1 y is fixed for every y over F_2, giving PG(3, 2)
            assert_eq!(fixed_points(&f, &sigma, &m, &pg).len(), 15);
        }
    }
}
