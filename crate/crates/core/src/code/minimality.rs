//! Minimality through the cutting property: a projective system gives a minimal code
//! exactly when its intersection with every hyperplane spans that hyperplane.

use serde::Serialize;

use super::sweep::{class_matrix, for_each_class, run_chunks, MAX_CLASSES};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lambda::ProjectiveSystem;
use crate::linalg::{trace_product_raw, EchelonBasis, Mat};
use crate::projgeom::{decode_point, point_count};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuttingReport {
    pub minimal: bool,
    pub hyperplanes_checked: u64,
    /// First hyperplane `M^perp` (in sweep order) whose intersection fails to span it.
    #[serde(serialize_with = "super::serialize_mat_opt")]
    pub witness: Option<Mat>,
    /// Dimension spanned by the witness intersection.
    pub witness_span: Option<usize>,
}

/// Span dimension of `{X in points : Tr(X M) = 0}`, stopping once it reaches `target`.
fn hyperplane_span(f: &Field, points: &[Elem], side: usize, m: &[Elem], target: usize) -> usize {
    let k = side * side;
    let mut basis = EchelonBasis::new(k);
    for x in points.chunks(k) {
        if trace_product_raw(f, x, m, side) == 0 && basis.insert(f, x) && basis.rank() == target {
            break;
        }
    }
    basis.rank()
}

/// Checks the cutting property for the points (flattened `side x side` matrices) against
/// every hyperplane `M^perp` of `M_side(q)` under `(X, M) -> Tr(X M)`.
pub fn is_cutting_set(f: &Field, points: &[Elem], side: usize, threads: usize) -> Result<CuttingReport> {
    let k = side * side;
    if !points.len().is_multiple_of(k) {
        return Err(Error::Shape("point buffer is not a whole number of matrices".into()));
    }
    let q = f.order() as u64;
    let total = point_count(q, k as u32);
    if total > MAX_CLASSES {
        return Err(Error::SizeCap {
            what: "ambient hyperplanes",
            size: total,
            cap: MAX_CLASSES,
        });
    }
    let target = k - 1;
    let parts = run_chunks(total as u64, threads, |_, range| {
        let mut m = vec![0; k];
        for idx in range {
            decode_point(q, idx, &mut m);
            let span = hyperplane_span(f, points, side, &m, target);
            if span < target {
                return Some((idx, span));
            }
        }
        None
    })?;
    let failure = parts.into_iter().flatten().next();
    Ok(CuttingReport {
        minimal: failure.is_none(),
        hyperplanes_checked: total as u64,
        witness: failure.map(|(idx, _)| {
            let mut m = vec![0; k];
            decode_point(q, idx, &mut m);
            Mat::from_vec(side, side, m).expect("square")
        }),
        witness_span: failure.map(|(_, span)| span),
    })
}

pub fn is_minimal(sys: &ProjectiveSystem, threads: usize) -> Result<CuttingReport> {
    if sys.sigma().is_identity() {
        return Err(Error::Configuration(
            "sigma != 1 (for sigma = 1 the system lies in the trace-zero hyperplane)".into(),
        ));
    }
    is_cutting_set(sys.field(), sys.points_flat(), sys.side(), threads)
}

/// A copy of the system's points with `drop` of them removed so that some hyperplane is
/// no longer spanned: points are removed from the smallest hyperplane section first.
pub fn truncated_points(sys: &ProjectiveSystem, drop: usize, threads: usize) -> Result<Vec<Elem>> {
    let f = sys.field();
    let (side, k) = (sys.side(), sys.k());
    let total = super::sweep::checked_class_count(sys)?;
    // the class with the smallest intersection, first in sweep order
    let parts = run_chunks(total, threads, |_, range| {
        let mut best: Option<(u64, u64)> = None;
        for_each_class(sys, range, |idx, m| {
            let inter = super::intersection_count(sys, m);
            if best.is_none_or(|(b, _)| inter < b) {
                best = Some((inter, idx));
            }
        });
        best
    })?;
    let (inter, idx) = parts
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(u64, u64)>, x| match acc {
            Some(a) if a.0 <= x.0 => Some(a),
            _ => Some(x),
        })
        .expect("nonempty");
    let m = class_matrix(sys, idx);
    // keep k - 2 points of the section so it spans at most k - 2 dimensions
    let keep = k - 2;
    if (inter as usize) < keep || inter as usize - keep > drop {
        return Err(Error::Configuration(format!(
            "cannot break the smallest section ({inter} points) by dropping {drop}"
        )));
    }
    let mut section_dropped = 0;
    let mut other_dropped = 0;
    let other_quota = drop - (inter as usize - keep);
    let mut out = Vec::with_capacity((sys.len() - drop) * k);
    for i in 0..sys.len() {
        let x = sys.point(i);
        let on = trace_product_raw(f, x, m.data(), side) == 0;
        if on && section_dropped < inter as usize - keep {
            section_dropped += 1;
        } else if !on && other_dropped < other_quota {
            other_dropped += 1;
        } else {
            out.extend_from_slice(x);
        }
    }
    Ok(out)
}
