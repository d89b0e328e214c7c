//! The twisted embedding `([x],[xi]) -> [x^sigma xi]` and the projective system it produces.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gamma::Gamma;
use crate::gf::{Elem, Field, Frobenius};
use crate::linalg::{dot, is_zero, normalize_slice, outer, row_times, ColVec, EchelonBasis, Mat, RowVec};
use crate::projgeom::PointHyperplaneFlag;

/// Normalized representative of `[x^sigma xi]`.
pub fn embed_flag(field: &Field, sigma: &Frobenius, x: &[Elem], xi: &[Elem]) -> Mat {
    let xs = sigma.apply_slice(x);
    let mut m = outer(field, &xs, xi);
    m.normalize(field);
    m
}

/// The ordered point set `{[X_1], .., [X_N]}`, one point per flag in flag order.
#[derive(Debug)]
pub struct ProjectiveSystem {
    field: Field,
    sigma: Frobenius,
    n: usize,
    gamma: Gamma,
    points: Vec<Elem>,
    span_dim: usize,
    functional_sigma: Vec<Elem>,
    functional_lead: Vec<u8>,
    locator: OnceLock<HashMap<Vec<Elem>, u32>>,
}

impl ProjectiveSystem {
    pub fn build(field: Field, sigma: Frobenius, n: usize) -> Result<Self> {
        let gamma = Gamma::enumerate(&field, n)?;
        let k = (n + 1) * (n + 1);
        let pg = gamma.space();
        let mut points = Vec::with_capacity(gamma.len() * k);
        let mut span = EchelonBasis::new(k);
        for fl in gamma.flags() {
            let x = embed_flag(&field, &sigma, pg.rep(fl.point), pg.rep(fl.functional));
            if span.rank() < k {
                span.insert(&field, x.data());
            }
            points.extend_from_slice(x.data());
        }
        let expected = if sigma.is_identity() { k - 1 } else { k };
        if span.rank() != expected {
            return Err(Error::Consistency(format!(
                "embedding spans dimension {}, expected {expected}",
                span.rank()
            )));
        }
        let mut functional_sigma = Vec::with_capacity(pg.len() * (n + 1));
        let mut functional_lead = Vec::with_capacity(pg.len());
        for xi in pg.iter() {
            functional_sigma.extend(sigma.apply_slice(xi));
            functional_lead.push(xi.iter().position(|&c| c != 0).unwrap() as u8);
        }
        Ok(ProjectiveSystem {
            field,
            sigma,
            n,
            gamma,
            points,
            span_dim: span.rank(),
            functional_sigma,
            functional_lead,
            locator: OnceLock::new(),
        })
    }

    /// Convenience constructor from `(q, n, j)` with the default modulus.
    pub fn from_params(q: u32, n: usize, j: u32) -> Result<Self> {
        let field = Field::with_order(q)?;
        let sigma = Frobenius::new(&field, j)?;
        Self::build(field, sigma, n)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn sigma(&self) -> &Frobenius {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    /// `s`, the order of the fixed subfield.
    pub fn s(&self) -> u64 {
        self.sigma.fixed_order() as u64
    }

    /// Side length `n + 1` of the matrices.
    pub fn side(&self) -> usize {
        self.n + 1
    }

    /// Ambient dimension `(n + 1)^2`.
    pub fn k(&self) -> usize {
        self.side() * self.side()
    }

    pub fn gamma(&self) -> &Gamma {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn flag(&self, i: usize) -> PointHyperplaneFlag {
        self.gamma.flags()[i]
    }

    /// Row-major entries of `X_i`.
    pub fn point(&self, i: usize) -> &[Elem] {
        let k = self.k();
        &self.points[i * k..(i + 1) * k]
    }

    pub fn point_mat(&self, i: usize) -> Mat {
        Mat::from_vec(self.side(), self.side(), self.point(i).to_vec()).expect("square")
    }

    /// Flattened representatives, `N * k` entries.
    pub fn points_flat(&self) -> &[Elem] {
        &self.points
    }

    pub fn span_dim(&self) -> usize {
        self.span_dim
    }

    /// `(q^(n+1)-1)/(q-1)`, the number of points (and of functionals) of `PG(n, q)`.
    pub fn pg_len(&self) -> usize {
        self.gamma.space().len()
    }

    pub(crate) fn functional_sigma(&self, i: usize) -> &[Elem] {
        let d = self.side();
        &self.functional_sigma[i * d..(i + 1) * d]
    }

    pub(crate) fn functional_lead(&self, i: usize) -> usize {
        self.functional_lead[i] as usize
    }

    /// `k x N` generator matrix: column `i` is `X_i` flattened row-major.
    pub fn generator_matrix(&self) -> Mat {
        let (k, len) = (self.k(), self.len());
        let mut g = Mat::zeros(k, len);
        for i in 0..len {
            for (r, &x) in self.point(i).iter().enumerate() {
                g.set(r, i, x);
            }
        }
        g
    }

    pub fn generator_rank(&self) -> usize {
        let mut span = EchelonBasis::new(self.k());
        for i in 0..self.len() {
            span.insert(&self.field, self.point(i));
        }
        span.rank()
    }

    /// Index of the point `[X]`, if `X` is (proportional to) a point of the system.
    pub fn locate(&self, x: &[Elem]) -> Option<usize> {
        let map = self.locator.get_or_init(|| {
            (0..self.len())
                .map(|i| (self.point(i).to_vec(), i as u32))
                .collect()
        });
        let mut key = x.to_vec();
        normalize_slice(&self.field, &mut key)?;
        map.get(&key).map(|&i| i as usize)
    }

    /// Generator matrix as CSV: `(n+1)^2` rows of `N` comma-separated elements.
    pub fn generator_csv(&self) -> String {
        let g = self.generator_matrix();
        let mut out = String::with_capacity(g.rows() * g.cols() * 2);
        for r in 0..g.rows() {
            let row: Vec<String> = g.row(r).iter().map(u16::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `x xi in M^perp` via `Tr((x xi) M) = 0`, cross-checked against `xi M x = 0`.
pub fn saturation_membership(field: &Field, x: &ColVec, xi: &RowVec, m: &Mat) -> Result<bool> {
    if is_zero(x) || is_zero(xi) {
        return Err(Error::ZeroInput);
    }
    let d = x.len();
    if xi.len() != d || m.rows() != d || m.cols() != d {
        return Err(Error::Shape("saturation membership needs matching sizes".into()));
    }
    let tensor = outer(field, x, xi);
    let by_trace = crate::linalg::trace_product_raw(field, tensor.data(), m.data(), d);
    let mut xi_m = vec![0; d];
    row_times(field, xi, m.data(), d, &mut xi_m);
    let by_form = dot(field, &xi_m, x);
    if by_trace != by_form {
        return Err(Error::Consistency("Tr(x xi M) differs from xi M x".into()));
    }
    Ok(by_trace == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn embeds_basis_flags() {
        let f = Field::with_order(4).unwrap();
        let s = Frobenius::new(&f, 1).unwrap();
        assert_eq!(embed_flag(&f, &s, &[1, 0, 0], &[0, 1, 0]), Mat::elementary(3, 0, 1));
    }

    #[test]
    fn embeds_twisted_flag() {
        let f = Field::with_order(4).unwrap();
        let s = Frobenius::new(&f, 1).unwrap();
        let w = f.primitive();
        let w2 = f.mul(w, w);
        // x = (1, w, 0)^T, xi = (w, 1, 0): xi x = w + w = 0
        let x = [1, w, 0];
        let xi = [w, 1, 0];
        assert_eq!(dot(&f, &xi, &x), 0);
        let m = embed_flag(&f, &s, &x, &xi);
        // x^sigma = (1, w^2, 0); normalized by w^-1 so the first row is xi / w
        let xi_n: Vec<Elem> = xi.iter().map(|&c| f.div(c, w)).collect();
        assert_eq!(m.row(0), xi_n.as_slice());
        let second: Vec<Elem> = xi_n.iter().map(|&c| f.mul(w2, c)).collect();
        assert_eq!(m.row(1), second.as_slice());
        assert_eq!(m.rank(&f), 1);
    }

    #[test]
    fn system_sizes_and_span() {
        for (q, n, j, len, span) in [(4, 2, 1, 105, 9), (4, 2, 0, 105, 8), (8, 2, 1, 657, 9)] {
            let sys = ProjectiveSystem::from_params(q, n, j).unwrap();
            assert_eq!(sys.len(), len);
            assert_eq!(sys.span_dim(), span);
            assert_eq!(sys.generator_rank(), span);
        }
    }

    #[test]
    fn embedding_is_injective_rank_one() {
        let sys = ProjectiveSystem::from_params(4, 2, 1).unwrap();
        let f = sys.field();
        let mut seen = HashSet::new();
        for i in 0..sys.len() {
            assert!(seen.insert(sys.point(i).to_vec()));
            assert_eq!(sys.point_mat(i).rank(f), 1);
            assert_eq!(sys.locate(sys.point(i)), Some(i));
        }
    }

    #[test]
    fn trace_zero_only_for_identity_twist() {
        let plain = ProjectiveSystem::from_params(4, 2, 0).unwrap();
        assert!((0..plain.len()).all(|i| plain.point_mat(i).trace(plain.field()) == 0));
        let twisted = ProjectiveSystem::from_params(4, 2, 1).unwrap();
        assert!((0..twisted.len()).any(|i| twisted.point_mat(i).trace(twisted.field()) != 0));
    }

    #[test]
    fn saturation_membership_cases() {
        let f = Field::with_order(4).unwrap();
        let x = ColVec(vec![1, 2, 0]);
        let xi = RowVec(vec![2, 1, 0]);
        assert!(saturation_membership(&f, &x, &xi, &Mat::zeros(3, 3)).unwrap());
        assert!(saturation_membership(&f, &x, &xi, &Mat::identity(3)).unwrap());
        assert_eq!(
            saturation_membership(&f, &ColVec(vec![0; 3]), &xi, &Mat::identity(3)),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn csv_shape() {
        let sys = ProjectiveSystem::from_params(4, 2, 1).unwrap();
        let csv = sys.generator_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 9);
        assert!(lines.iter().all(|l| l.split(',').count() == 105));
    }
}
