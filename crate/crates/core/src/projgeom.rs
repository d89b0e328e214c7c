//! Points of `PG(d-1, q)` with canonical representatives.
//!
//! A point is named by the representative whose first nonzero coordinate is 1. Points are
//! ordered lexicographically on representative digit strings, which makes the index a
//! closed-form function of the representative: with the leading 1 at position `l` and the
//! remaining `d-1-l` coordinates read as a base-`q` number `tail`,
//!
//! ```text
//! index = (q^(d-1-l) - 1) / (q - 1) + tail
//! ```
//!
//! The same indexing names projective classes of matrices (flattened row-major), which is
//! how the exhaustive sweeps walk `PG(M_{n+1}(q))`.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, Frobenius};
use crate::linalg::{dot, normalize_slice, EchelonBasis};

pub const MAX_POINTS: u128 = 10_000_000;

/// `(q^d - 1)/(q - 1)`, the number of points of `PG(d-1, q)`.
pub fn point_count(q: u64, d: u32) -> u128 {
    let q = q as u128;
    (q.pow(d) - 1) / (q - 1)
}

/// Index of a normalized representative. Panics on the zero vector.
pub fn encode_point(q: u64, rep: &[Elem]) -> u64 {
    let d = rep.len();
    let l = rep.iter().position(|&x| x != 0).expect("nonzero representative");
    debug_assert_eq!(rep[l], 1, "representative is not normalized");
    let tail = rep[l + 1..].iter().fold(0u64, |acc, &x| acc * q + x as u64);
    (q.pow((d - 1 - l) as u32) - 1) / (q - 1) + tail
}

/// Writes the normalized representative with the given index into `out`.
pub fn decode_point(q: u64, index: u64, out: &mut [Elem]) {
    let d = out.len();
    out.iter_mut().for_each(|x| *x = 0);
    // blocks of size q^0, q^1, ... for leading positions d-1, d-2, ...
    let mut rem = index;
    let mut block = 1u64;
    let mut l = d - 1;
    while rem >= block {
        rem -= block;
        block *= q;
        l -= 1;
    }
    out[l] = 1;
    for slot in out[l + 1..].iter_mut().rev() {
        *slot = (rem % q) as Elem;
        rem /= q;
    }
}

/// A projective point: normalized representative plus its global index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjClass {
    pub rep: Vec<Elem>,
    pub index: usize,
}

/// All points of `PG(dim-1, q)`, materialized in index order.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    q: u64,
    dim: usize,
    reps: Vec<Elem>,
}

impl ProjectiveSpace {
    /// `dim` is the vector-space dimension `n + 1`.
    pub fn enumerate(field: &Field, dim: usize) -> Result<Self> {
        let q = field.order() as u64;
        let count = point_count(q, dim as u32);
        if count > MAX_POINTS {
            return Err(Error::SizeCap {
                what: "projective points",
                size: count,
                cap: MAX_POINTS,
            });
        }
        let mut reps = vec![0; count as usize * dim];
        for (i, chunk) in reps.chunks_mut(dim).enumerate() {
            decode_point(q, i as u64, chunk);
        }
        Ok(ProjectiveSpace { q, dim, reps })
    }

    pub fn len(&self) -> usize {
        self.reps.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rep(&self, i: usize) -> &[Elem] {
        &self.reps[i * self.dim..(i + 1) * self.dim]
    }

    pub fn class(&self, i: usize) -> ProjClass {
        ProjClass {
            rep: self.rep(i).to_vec(),
            index: i,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> {
        self.reps.chunks(self.dim)
    }

    /// Index of the point spanned by the nonzero vector `v`.
    pub fn index_of(&self, f: &Field, v: &[Elem]) -> Option<usize> {
        let mut w = v.to_vec();
        normalize_slice(f, &mut w)?;
        Some(encode_point(self.q, &w) as usize)
    }

    /// Points on the hyperplane `xi = 0` (or, dually, functionals vanishing at a point).
    pub fn incident_with(&self, f: &Field, xi: &[Elem]) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| dot(f, xi, self.rep(i)) == 0)
            .collect()
    }

    /// Points `[v]` with `[v^sigma] = [v]`, i.e. the points of the subgeometry `PG(n, s)`.
    pub fn sigma_fixed_points(&self, sigma: &Frobenius) -> Result<Vec<usize>> {
        if sigma.is_identity() {
            return Err(Error::Configuration("sigma != 1".into()));
        }
        // normalized reps stay normalized under sigma, so the test is entrywise
        Ok((0..self.len())
            .filter(|&i| self.rep(i).iter().all(|&x| sigma.is_fixed(x)))
            .collect())
    }

    /// Points of the span of the given vectors, in index order.
    pub fn span_points(&self, f: &Field, gens: &[&[Elem]]) -> Vec<usize> {
        let mut basis = EchelonBasis::new(self.dim);
        for g in gens {
            basis.insert(f, g);
        }
        (0..self.len())
            .filter(|&i| basis.contains(f, self.rep(i)))
            .collect()
    }

    /// All lines, each as the sorted list of its `q + 1` point indices.
    pub fn lines(&self, f: &Field) -> Vec<Vec<usize>> {
        let q = self.q as usize;
        let mut lines = Vec::new();
        let mut w = vec![0; self.dim];
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                // the line through a and b: a itself plus b + c a for all c
                let mut pts = vec![a];
                let mut minimal = true;
                for c in f.elements() {
                    for (k, x) in w.iter_mut().enumerate() {
                        *x = f.add(self.rep(b)[k], f.mul(c, self.rep(a)[k]));
                    }
                    let idx = self.index_of(f, &w).expect("distinct points span a line");
                    if idx < b && idx != a {
                        minimal = false;
                        break;
                    }
                    pts.push(idx);
                }
                if minimal {
                    debug_assert_eq!(pts.len(), q + 1);
                    pts.sort_unstable();
                    lines.push(pts);
                }
            }
        }
        lines
    }
}

/// A flag `(p, H)` of `PG(V)`: point index and functional index, with `xi x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointHyperplaneFlag {
    pub point: usize,
    pub functional: usize,
}

pub fn incident(f: &Field, point: &ProjClass, functional: &ProjClass) -> Result<bool> {
    if point.rep.len() != functional.rep.len() {
        return Err(Error::Shape("point and functional dimensions differ".into()));
    }
    Ok(dot(f, &functional.rep, &point.rep) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let f4 = Field::with_order(4).unwrap();
        assert_eq!(ProjectiveSpace::enumerate(&f4, 3).unwrap().len(), 21);
        let f9 = Field::with_order(9).unwrap();
        assert_eq!(ProjectiveSpace::enumerate(&f9, 4).unwrap().len(), 820);
        let f2 = Field::with_order(2).unwrap();
        assert_eq!(ProjectiveSpace::enumerate(&f2, 2).unwrap().len(), 3);
        let f256 = Field::with_order(256).unwrap();
        assert!(matches!(
            ProjectiveSpace::enumerate(&f256, 4),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn order_is_lexicographic_and_bijective() {
        let f = Field::with_order(3).unwrap();
        let pg = ProjectiveSpace::enumerate(&f, 3).unwrap();
        let reps: Vec<Vec<Elem>> = pg.iter().map(<[Elem]>::to_vec).collect();
        assert!(reps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(reps[0], vec![0, 0, 1]);
        for (i, r) in reps.iter().enumerate() {
            assert_eq!(encode_point(3, r) as usize, i);
        }
    }

    #[test]
    fn incidence() {
        let f = Field::with_order(4).unwrap();
        let pg = ProjectiveSpace::enumerate(&f, 3).unwrap();
        let e1 = ProjClass { rep: vec![1, 0, 0], index: 20 };
        let eta1 = e1.clone();
        let eta2 = ProjClass { rep: vec![0, 1, 0], index: 0 };
        assert!(incident(&f, &e1, &eta2).unwrap());
        assert!(!incident(&f, &e1, &eta1).unwrap());
        for xi in pg.iter() {
            assert_eq!(pg.incident_with(&f, xi).len(), 5);
        }
    }

    #[test]
    fn fixed_subgeometry_sizes() {
        for (q, n1, j, expected) in [(4, 3, 1, 7), (9, 3, 1, 13), (8, 3, 1, 7), (8, 3, 2, 7)] {
            let f = Field::with_order(q).unwrap();
            let s = Frobenius::new(&f, j).unwrap();
            let pg = ProjectiveSpace::enumerate(&f, n1).unwrap();
            assert_eq!(pg.sigma_fixed_points(&s).unwrap().len(), expected);
        }
        let f = Field::with_order(4).unwrap();
        let id = Frobenius::new(&f, 0).unwrap();
        let pg = ProjectiveSpace::enumerate(&f, 3).unwrap();
        assert!(pg.sigma_fixed_points(&id).is_err());
    }

    #[test]
    fn fixed_subgeometry_is_closed_on_lines() {
        for q in [4u32, 9] {
            let f = Field::with_order(q).unwrap();
            let s = Frobenius::new(&f, 1).unwrap();
            let sub = s.fixed_order() as usize;
            let pg = ProjectiveSpace::enumerate(&f, 3).unwrap();
            let fixed = pg.sigma_fixed_points(&s).unwrap();
            for (i, &a) in fixed.iter().enumerate() {
                for &b in &fixed[i + 1..] {
                    let line = pg.span_points(&f, &[pg.rep(a), pg.rep(b)]);
                    let on = line.iter().filter(|p| fixed.contains(p)).count();
                    assert_eq!(on, sub + 1);
                }
            }
        }
    }

    #[test]
    fn line_enumeration() {
        let f = Field::with_order(4).unwrap();
        let pg = ProjectiveSpace::enumerate(&f, 3).unwrap();
        let lines = pg.lines(&f);
        assert_eq!(lines.len(), 21);
        assert!(lines.iter().all(|l| l.len() == 5));
        let pg3 = ProjectiveSpace::enumerate(&f, 4).unwrap();
        // (q^2+1)(q^2+q+1) lines in PG(3,q)
        assert_eq!(pg3.lines(&f).len(), 17 * 21);
    }
}
