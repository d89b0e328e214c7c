//! The code `C(Lambda_sigma)`: codewords `c_M`, the count `theta_M`, weights and parameters.
//!
//! Two independent routes to a weight are kept side by side. The flag scan evaluates
//! `Tr(X_i M)` on every point of the system. The functional scan counts
//! `theta_M = |{[xi] : [xi^sigma] in [xi M]}|` and converts through
//! `weight = q^(n-1) ((q^(n+1)-1)/(q-1) - theta_M)`.

pub mod automorphism;
pub mod bounds;
pub mod minimality;
pub mod minwords;
pub mod sweep;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, Frobenius};
use crate::lambda::ProjectiveSystem;
use crate::linalg::{row_times, trace_product_raw, Mat};

/// `(q^(n+1) - 1)/(q - 1)`.
pub fn pg_size(q: u64, n: u32) -> u64 {
    (q.pow(n + 1) - 1) / (q - 1)
}

/// `|[M^perp] cap Lambda_sigma|` for `theta_M = 0`: `(q^(n+1)-1)(q^(n-1)-1)/(q-1)^2`.
pub fn base_intersection(q: u64, n: u32) -> u64 {
    (q.pow(n + 1) - 1) * (q.pow(n - 1) - 1) / ((q - 1) * (q - 1))
}

/// Intersection size predicted from `theta`.
pub fn intersection_from_theta(q: u64, n: u32, theta: u64) -> u64 {
    base_intersection(q, n) + theta * q.pow(n - 1)
}

/// Weight predicted from `theta`.
pub fn weight_from_theta(q: u64, n: u32, theta: u64) -> u64 {
    q.pow(n - 1) * (pg_size(q, n) - theta)
}

/// `N = (q^(n+1)-1)(q^n-1)/(q-1)^2`.
pub fn length(q: u64, n: u32) -> u64 {
    (q.pow(n + 1) - 1) * (q.pow(n) - 1) / ((q - 1) * (q - 1))
}

/// `m(r) = (q^(n+1-r)-1)/(q-1) + (s^r-1)/(s-1)`, the upper bound on `theta_M` for rank `r`.
pub fn m_bound(r: u32, q: u64, n: u32, s: u64) -> Result<u64> {
    if r == 0 || r > n + 1 {
        return Err(Error::Configuration(format!("1 <= r <= {} (got r = {r})", n + 1)));
    }
    if s < 2 {
        return Err(Error::Configuration("a fixed subfield of order s >= 2".into()));
    }
    Ok((q.pow(n + 1 - r) - 1) / (q - 1) + (s.pow(r) - 1) / (s - 1))
}

/// Closed-form minimum distance: `q^3 - s^3` when `sigma^2 = 1` and `n = 2`,
/// `q^(2n-1) - q^(n-1)` otherwise.
pub fn closed_form_min_distance(q: u64, n: u32, sigma: &Frobenius) -> Result<u64> {
    if sigma.is_identity() {
        return Err(Error::Configuration("sigma != 1".into()));
    }
    let s = sigma.fixed_order() as u64;
    Ok(if sigma.is_involutory() && n == 2 {
        q.pow(3) - s.pow(3)
    } else {
        q.pow(2 * n - 1) - q.pow(n - 1)
    })
}

/// `[N, k, d]` together with the automorphism data that determines `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    #[serde(rename = "N")]
    pub length: u64,
    pub k: u64,
    pub d: u64,
    pub sigma_order: u32,
    pub s: u64,
}

pub fn params(q: u64, n: u32, sigma: &Frobenius) -> Result<CodeParams> {
    if n == 0 {
        return Err(Error::Configuration("n >= 1".into()));
    }
    Ok(CodeParams {
        length: length(q, n),
        k: ((n + 1) * (n + 1)) as u64,
        d: closed_form_min_distance(q, n, sigma)?,
        sigma_order: sigma.order(),
        s: sigma.fixed_order() as u64,
    })
}

/// `c_M = (Tr(X_1 M), .., Tr(X_N M))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub values: Vec<Elem>,
    pub source: Mat,
}

impl Codeword {
    pub fn weight(&self) -> u64 {
        self.values.iter().filter(|&&v| v != 0).count() as u64
    }
}

fn check_shape(sys: &ProjectiveSystem, m: &Mat) -> Result<()> {
    if m.rows() != sys.side() || m.cols() != sys.side() {
        return Err(Error::Shape(format!(
            "expected a {0}x{0} matrix, got {1}x{2}",
            sys.side(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

pub fn eval_codeword(sys: &ProjectiveSystem, m: &Mat) -> Result<Codeword> {
    check_shape(sys, m)?;
    let f = sys.field();
    let d = sys.side();
    let values = (0..sys.len())
        .map(|i| trace_product_raw(f, sys.point(i), m.data(), d))
        .collect();
    Ok(Codeword {
        values,
        source: m.clone(),
    })
}

/// `|[M^perp] cap Lambda_sigma|` by scanning every flag.
pub fn intersection_count(sys: &ProjectiveSystem, m: &[Elem]) -> u64 {
    let f = sys.field();
    let d = sys.side();
    (0..sys.len())
        .filter(|&i| trace_product_raw(f, sys.point(i), m, d) == 0)
        .count() as u64
}

/// Does `v` equal `c w` for some nonzero `c`? `w` must be nonzero with `w[lead] = 1`.
#[inline]
fn proportional_to(f: &Field, v: &[Elem], w: &[Elem], lead: usize) -> Option<Elem> {
    let c = v[lead];
    if c == 0 {
        return None;
    }
    v.iter()
        .zip(w)
        .all(|(&a, &b)| a == f.mul(c, b))
        .then_some(c)
}

/// `(kernel_part, fixed_part)` of `theta_M` by scanning all functionals.
pub(crate) fn theta_parts(sys: &ProjectiveSystem, m: &[Elem], scratch: &mut [Elem]) -> (u64, u64) {
    let f = sys.field();
    let pg = sys.gamma().space();
    let d = sys.side();
    let (mut kernel, mut fixed) = (0, 0);
    for i in 0..pg.len() {
        row_times(f, pg.rep(i), m, d, scratch);
        if scratch.iter().all(|&x| x == 0) {
            kernel += 1;
        } else if proportional_to(f, scratch, sys.functional_sigma(i), sys.functional_lead(i))
            .is_some()
        {
            fixed += 1;
        }
    }
    (kernel, fixed)
}

/// Solutions of `xi M = lambda xi^sigma` with `lambda != 0`, as `(functional index, lambda)`
/// for the normalized representative of each functional.
pub fn twisted_eigen_solutions(sys: &ProjectiveSystem, m: &Mat) -> Vec<(usize, Elem)> {
    let f = sys.field();
    let pg = sys.gamma().space();
    let d = sys.side();
    let mut v = vec![0; d];
    (0..pg.len())
        .filter_map(|i| {
            row_times(f, pg.rep(i), m.data(), d, &mut v);
            proportional_to(f, &v, sys.functional_sigma(i), sys.functional_lead(i))
                .map(|lambda| (i, lambda))
        })
        .collect()
}

/// Theta computed by the functional scan and cross-checked by the flag scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaReport {
    #[serde(serialize_with = "serialize_mat")]
    pub matrix: Mat,
    pub theta: u64,
    pub kernel_part: u64,
    pub fixed_part: u64,
    pub weight: u64,
    pub intersection: u64,
}

pub(crate) fn serialize_mat<S: serde::Serializer>(m: &Mat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

pub(crate) fn serialize_mat_opt<S: serde::Serializer>(
    m: &Option<Mat>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => s.serialize_str(&m.to_string()),
        None => s.serialize_none(),
    }
}

pub fn theta(sys: &ProjectiveSystem, m: &Mat) -> Result<ThetaReport> {
    check_shape(sys, m)?;
    if m.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (q, n) = (sys.q(), sys.n() as u32);
    let mut scratch = vec![0; sys.side()];
    let (kernel_part, fixed_part) = theta_parts(sys, m.data(), &mut scratch);
    let theta = kernel_part + fixed_part;
    let intersection = intersection_count(sys, m.data());
    let predicted = intersection_from_theta(q, n, theta);
    if intersection != predicted {
        return Err(Error::Consistency(format!(
            "flag scan gives |M^perp cap Lambda| = {intersection}, theta = {theta} predicts {predicted}"
        )));
    }
    Ok(ThetaReport {
        matrix: m.clone(),
        theta,
        kernel_part,
        fixed_part,
        weight: sys.len() as u64 - intersection,
        intersection,
    })
}

/// `g^-1 M g^sigma`, the action of `GL(n+1, q)` on codewords.
pub fn act(f: &Field, sigma: &Frobenius, g: &Mat, m: &Mat) -> Result<Mat> {
    let g_inv = g.invert(f)?;
    g_inv.mul(f, m)?.mul(f, &g.sigma(sigma))
}
