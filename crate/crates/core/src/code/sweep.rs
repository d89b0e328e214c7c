//! Exhaustive and sampled sweeps over projective classes of matrices.
//!
//! Class indices follow the point numbering of `projgeom` applied to flattened matrices.
//! The index range is cut into fixed chunks; chunks run on a rayon pool and their partial
//! results are merged in chunk order, so every output is independent of the worker count.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    intersection_count, intersection_from_theta, m_bound, serialize_mat, theta_parts,
    weight_from_theta,
};
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::lambda::ProjectiveSystem;
use crate::linalg::{rank_of, Mat};
use crate::projgeom::{decode_point, point_count};
use crate::rng;

pub const MAX_CLASSES: u128 = 20_000_000;
pub const CHUNK: u64 = 4096;

/// `(q^((n+1)^2) - 1)/(q - 1)`.
pub fn class_count(sys: &ProjectiveSystem) -> u128 {
    point_count(sys.q(), sys.k() as u32)
}

pub(crate) fn checked_class_count(sys: &ProjectiveSystem) -> Result<u64> {
    let total = class_count(sys);
    if total > MAX_CLASSES {
        return Err(Error::SizeCap {
            what: "matrix classes",
            size: total,
            cap: MAX_CLASSES,
        });
    }
    Ok(total as u64)
}

/// The normalized representative of class `index`.
pub fn class_matrix(sys: &ProjectiveSystem, index: u64) -> Mat {
    let mut data = vec![0; sys.k()];
    decode_point(sys.q(), index, &mut data);
    Mat::from_vec(sys.side(), sys.side(), data).expect("square")
}

/// Runs `work(chunk_id, range)` over `0..total` in chunks of `CHUNK`, returning results in
/// chunk order. `threads = 0` lets rayon choose.
pub fn run_chunks<A, F>(total: u64, threads: usize, work: F) -> Result<Vec<A>>
where
    A: Send,
    F: Fn(u64, Range<u64>) -> A + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Configuration(format!("thread pool: {e}")))?;
    let chunks = total.div_ceil(CHUNK);
    Ok(pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| work(c, c * CHUNK..((c + 1) * CHUNK).min(total)))
            .collect()
    }))
}

/// Calls `visit(index, data)` for each class in `range`, reusing one buffer.
pub(crate) fn for_each_class(
    sys: &ProjectiveSystem,
    range: Range<u64>,
    mut visit: impl FnMut(u64, &[Elem]),
) {
    let mut data = vec![0; sys.k()];
    for idx in range {
        decode_point(sys.q(), idx, &mut data);
        visit(idx, &data);
    }
}

/// A value together with the first class (in sweep order) attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Extremum {
    value: u64,
    index: u64,
}

fn merge_max(acc: &mut Option<Extremum>, other: Option<Extremum>) {
    if let Some(o) = other {
        if acc.is_none_or(|a| o.value > a.value) {
            *acc = Some(o);
        }
    }
}

fn merge_min(acc: &mut Option<Extremum>, other: Option<Extremum>) {
    if let Some(o) = other {
        if acc.is_none_or(|a| o.value < a.value) {
            *acc = Some(o);
        }
    }
}

#[derive(Clone, Debug, Default)]
struct ThetaAcc {
    hist: Vec<u64>,
    min: Option<Extremum>,
    max: Option<Extremum>,
    mismatches: u64,
    first_mismatch: Option<u64>,
    max_intersection: u64,
}

impl ThetaAcc {
    fn record(&mut self, idx: u64, theta: u64) {
        let t = theta as usize;
        if self.hist.len() <= t {
            self.hist.resize(t + 1, 0);
        }
        self.hist[t] += 1;
        let e = Some(Extremum { value: theta, index: idx });
        merge_min(&mut self.min, e);
        merge_max(&mut self.max, e);
    }

    fn merge(&mut self, other: ThetaAcc) {
        if self.hist.len() < other.hist.len() {
            self.hist.resize(other.hist.len(), 0);
        }
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            *a += b;
        }
        merge_min(&mut self.min, other.min);
        merge_max(&mut self.max, other.max);
        self.mismatches += other.mismatches;
        if self.first_mismatch.is_none() {
            self.first_mismatch = other.first_mismatch;
        }
        self.max_intersection = self.max_intersection.max(other.max_intersection);
    }
}

/// Result of a full sweep over all matrix classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaSweep {
    pub classes: u64,
    /// `theta_counts[t]` is the number of classes with `theta_M = t`.
    pub theta_counts: Vec<u64>,
    pub min_theta: u64,
    #[serde(serialize_with = "serialize_mat")]
    pub min_theta_witness: Mat,
    pub max_theta: u64,
    #[serde(serialize_with = "serialize_mat")]
    pub max_theta_witness: Mat,
    /// Whether every class was also scanned flag by flag.
    pub flag_scan: bool,
    /// Classes whose flag-scan intersection differs from the `theta` prediction.
    pub identity_mismatches: u64,
    #[serde(serialize_with = "super::serialize_mat_opt")]
    pub first_mismatch: Option<Mat>,
    /// Largest `|[M^perp] cap Lambda|` seen by the flag scan (0 without it).
    pub max_intersection: u64,
}

/// Computes `theta_M` for every class. With `flag_scan`, also counts `|[M^perp] cap Lambda|`
/// directly and compares it with the value predicted from `theta_M`.
pub fn theta_sweep(sys: &ProjectiveSystem, flag_scan: bool, threads: usize) -> Result<ThetaSweep> {
    let total = checked_class_count(sys)?;
    let (q, n) = (sys.q(), sys.n() as u32);
    let parts = run_chunks(total, threads, |_, range| {
        let mut acc = ThetaAcc::default();
        let mut scratch = vec![0; sys.side()];
        for_each_class(sys, range, |idx, m| {
            let (kernel, fixed) = theta_parts(sys, m, &mut scratch);
            let theta = kernel + fixed;
            acc.record(idx, theta);
            if flag_scan {
                let inter = intersection_count(sys, m);
                acc.max_intersection = acc.max_intersection.max(inter);
                if inter != intersection_from_theta(q, n, theta) {
                    acc.mismatches += 1;
                    acc.first_mismatch.get_or_insert(idx);
                }
            }
        });
        acc
    })?;
    let mut acc = ThetaAcc::default();
    for p in parts {
        acc.merge(p);
    }
    let (min, max) = (acc.min.expect("nonempty"), acc.max.expect("nonempty"));
    Ok(ThetaSweep {
        classes: total,
        theta_counts: acc.hist,
        min_theta: min.value,
        min_theta_witness: class_matrix(sys, min.index),
        max_theta: max.value,
        max_theta_witness: class_matrix(sys, max.index),
        flag_scan,
        identity_mismatches: acc.mismatches,
        first_mismatch: acc.first_mismatch.map(|i| class_matrix(sys, i)),
        max_intersection: acc.max_intersection,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumMode {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

/// Weight distribution. Exhaustive tables count every codeword (each class contributes
/// `q - 1` words); sampled tables count sampled nonzero words. Both carry `A_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumTable {
    pub mode: SpectrumMode,
    pub counts: BTreeMap<u64, u64>,
}

impl SpectrumTable {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<u64> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    /// `weight,count` rows in ascending weight order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,count\n");
        for (w, c) in &self.counts {
            out.push_str(&format!("{w},{c}\n"));
        }
        out
    }
}

fn spectrum_from_thetas(sys: &ProjectiveSystem, hist: &[u64], scale: u64, mode: SpectrumMode) -> SpectrumTable {
    let (q, n) = (sys.q(), sys.n() as u32);
    let mut counts = BTreeMap::from([(0, 1)]);
    for (theta, &c) in hist.iter().enumerate() {
        if c > 0 {
            *counts.entry(weight_from_theta(q, n, theta as u64)).or_insert(0) += c * scale;
        }
    }
    SpectrumTable { mode, counts }
}

pub fn weight_spectrum(sys: &ProjectiveSystem, mode: SpectrumMode, threads: usize) -> Result<SpectrumTable> {
    match mode {
        SpectrumMode::Exhaustive => {
            let sweep = theta_sweep(sys, false, threads)?;
            Ok(spectrum_from_thetas(sys, &sweep.theta_counts, sys.q() - 1, mode))
        }
        SpectrumMode::Sampled { seed, trials } => {
            let f = sys.field();
            let parts = run_chunks(trials, threads, |chunk, range| {
                let mut rng = rng::seeded(seed, chunk);
                let mut scratch = vec![0; sys.side()];
                let mut hist = vec![0u64; sys.pg_len() + 1];
                for _ in range {
                    let m = rng::random_nonzero_matrix(&mut rng, f, sys.side());
                    let (kernel, fixed) = theta_parts(sys, m.data(), &mut scratch);
                    hist[(kernel + fixed) as usize] += 1;
                }
                hist
            })?;
            let mut hist = vec![0u64; sys.pg_len() + 1];
            for p in parts {
                for (a, b) in hist.iter_mut().zip(p) {
                    *a += b;
                }
            }
            Ok(spectrum_from_thetas(sys, &hist, 1, mode))
        }
    }
}

/// Maximum of `theta_M` over the classes of one rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankTheta {
    pub rank: u32,
    pub classes: u64,
    pub max_theta: u64,
    #[serde(serialize_with = "serialize_mat")]
    pub witness: Mat,
    pub bound: u64,
    pub within_bound: bool,
    /// Whether the bound is attained.
    pub equality: bool,
}

fn require_twist(sys: &ProjectiveSystem) -> Result<()> {
    if sys.sigma().is_identity() {
        return Err(Error::Configuration("sigma != 1".into()));
    }
    Ok(())
}

/// `max theta_M` over rank-`r` classes for every `r = 1..=n+1`, each checked against `m(r)`.
pub fn theta_by_rank(sys: &ProjectiveSystem, threads: usize) -> Result<Vec<RankTheta>> {
    require_twist(sys)?;
    let total = checked_class_count(sys)?;
    let side = sys.side();
    let f = sys.field();
    let parts = run_chunks(total, threads, |_, range| {
        let mut best: Vec<Option<Extremum>> = vec![None; side + 1];
        let mut counts = vec![0u64; side + 1];
        let mut scratch = vec![0; side];
        for_each_class(sys, range, |idx, m| {
            let r = rank_of(f, m.to_vec(), side, side);
            let (kernel, fixed) = theta_parts(sys, m, &mut scratch);
            counts[r] += 1;
            merge_max(&mut best[r], Some(Extremum { value: kernel + fixed, index: idx }));
        });
        (best, counts)
    })?;
    let mut best: Vec<Option<Extremum>> = vec![None; side + 1];
    let mut counts = vec![0u64; side + 1];
    for (b, c) in parts {
        for r in 0..=side {
            merge_max(&mut best[r], b[r]);
            counts[r] += c[r];
        }
    }
    (1..=side)
        .map(|r| {
            let e = best[r].expect("every rank occurs");
            let bound = m_bound(r as u32, sys.q(), sys.n() as u32, sys.s())?;
            Ok(RankTheta {
                rank: r as u32,
                classes: counts[r],
                max_theta: e.value,
                witness: class_matrix(sys, e.index),
                bound,
                within_bound: e.value <= bound,
                equality: e.value == bound,
            })
        })
        .collect()
}

pub fn max_theta_by_rank(sys: &ProjectiveSystem, r: u32, threads: usize) -> Result<RankTheta> {
    if r == 0 || r as usize > sys.side() {
        return Err(Error::Configuration(format!("1 <= r <= {} (got r = {r})", sys.side())));
    }
    Ok(theta_by_rank(sys, threads)?.swap_remove(r as usize - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDistanceReport {
    pub closed_form: u64,
    /// `N - max |[M^perp] cap Lambda|` over all classes, by flag scan.
    pub exhaustive: Option<u64>,
    pub pass: bool,
}

/// The closed-form minimum distance; with `exhaustive`, also the swept value by direct
/// flag scans of every class.
pub fn min_distance(sys: &ProjectiveSystem, exhaustive: bool, threads: usize) -> Result<MinDistanceReport> {
    require_twist(sys)?;
    let closed_form = super::closed_form_min_distance(sys.q(), sys.n() as u32, sys.sigma())?;
    let swept = if exhaustive {
        let sweep = theta_sweep(sys, true, threads)?;
        Some(sys.len() as u64 - sweep.max_intersection)
    } else {
        None
    };
    Ok(MinDistanceReport {
        closed_form,
        exhaustive: swept,
        pass: swept.is_none_or(|d| d == closed_form),
    })
}
