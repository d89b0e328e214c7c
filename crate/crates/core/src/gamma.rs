//! The point-hyperplane geometry: flags `(p, H)` of `PG(n, q)` with `p` in `H`.
//!
//! Flags are numbered functional-major: the outer loop runs over functionals `[xi]` in
//! global order, the inner loop over the points `[x]` of the hyperplane `xi = 0`. Every
//! other module refers to flags by this index; it is also the codeword coordinate.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::dot;
use crate::projgeom::{PointHyperplaneFlag, ProjectiveSpace};

pub const MAX_FLAGS: u128 = 100_000_000;

/// `(q^(n+1) - 1)(q^n - 1)/(q - 1)^2`.
pub fn flag_count(q: u64, n: u32) -> u128 {
    let q = q as u128;
    (q.pow(n + 1) - 1) * (q.pow(n) - 1) / ((q - 1) * (q - 1))
}

#[derive(Clone, Debug)]
pub struct Gamma {
    n: usize,
    space: ProjectiveSpace,
    flags: Vec<PointHyperplaneFlag>,
    lookup: HashMap<(u32, u32), u32>,
}

impl Gamma {
    pub fn enumerate(field: &Field, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Configuration("n >= 1".into()));
        }
        let count = flag_count(field.order() as u64, n as u32);
        if count > MAX_FLAGS {
            return Err(Error::SizeCap {
                what: "flags",
                size: count,
                cap: MAX_FLAGS,
            });
        }
        let space = ProjectiveSpace::enumerate(field, n + 1)?;
        let mut flags = Vec::with_capacity(count as usize);
        for functional in 0..space.len() {
            for point in space.incident_with(field, space.rep(functional)) {
                flags.push(PointHyperplaneFlag { point, functional });
            }
        }
        let lookup = flags
            .iter()
            .enumerate()
            .map(|(i, fl)| ((fl.point as u32, fl.functional as u32), i as u32))
            .collect();
        Ok(Gamma {
            n,
            space,
            flags,
            lookup,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `PG(V)`; the same enumeration names the points of `PG(V*)`.
    pub fn space(&self) -> &ProjectiveSpace {
        &self.space
    }

    pub fn flags(&self) -> &[PointHyperplaneFlag] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn flag_index(&self, point: usize, functional: usize) -> Option<usize> {
        self.lookup
            .get(&(point as u32, functional as u32))
            .map(|&i| i as usize)
    }

    /// Both line families. Each projective line `L` together with a point `a` of the
    /// annihilator of `L` gives one line of each family: `{(p, a) : p in L}` and
    /// `{(a, H) : H in L}`.
    pub fn lines(&self, field: &Field) -> Vec<GammaLine> {
        let pg = &self.space;
        let proj_lines = pg.lines(field);
        let mut points_family = Vec::new();
        let mut pencil_family = Vec::new();
        for line in &proj_lines {
            let (u, v) = (pg.rep(line[0]), pg.rep(line[1]));
            let annihilator: Vec<usize> = (0..pg.len())
                .filter(|&a| dot(field, pg.rep(a), u) == 0 && dot(field, pg.rep(a), v) == 0)
                .collect();
            for &a in &annihilator {
                points_family.push(GammaLine {
                    kind: LineKind::Points {
                        line: line.clone(),
                        hyperplane: a,
                    },
                    flags: line
                        .iter()
                        .map(|&p| self.flag_index(p, a).expect("incident"))
                        .collect(),
                });
                pencil_family.push(GammaLine {
                    kind: LineKind::Hyperplanes {
                        point: a,
                        pencil: line.clone(),
                    },
                    flags: line
                        .iter()
                        .map(|&h| self.flag_index(a, h).expect("incident"))
                        .collect(),
                });
            }
        }
        points_family.extend(pencil_family);
        points_family
    }
}

/// Defining data of a line of the geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineKind {
    /// `l_{r,H}`: the points of a projective line `r` paired with a hyperplane `H` containing it.
    Points { line: Vec<usize>, hyperplane: usize },
    /// `l_{p,S}`: a point `p` paired with the hyperplanes through a codimension-2 space `S`
    /// containing `p`; `S` is given by its pencil of hyperplanes.
    Hyperplanes { point: usize, pencil: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaLine {
    pub kind: LineKind,
    pub flags: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HyperplaneViolation {
    Empty,
    NotProper,
    /// The set misses this line entirely.
    MissesLine(usize),
    /// The set meets this line in at least two flags but does not contain it.
    PartialLine(usize),
}

/// Checks that `members` (indexed by flag) is a geometric hyperplane: a proper subspace
/// meeting every line. The first violating line is reported.
pub fn is_geometric_hyperplane(
    lines: &[GammaLine],
    members: &[bool],
) -> std::result::Result<(), HyperplaneViolation> {
    let size = members.iter().filter(|&&m| m).count();
    if size == 0 {
        return Err(HyperplaneViolation::Empty);
    }
    if size == members.len() {
        return Err(HyperplaneViolation::NotProper);
    }
    for (i, line) in lines.iter().enumerate() {
        let hits = line.flags.iter().filter(|&&fl| members[fl]).count();
        if hits == 0 {
            return Err(HyperplaneViolation::MissesLine(i));
        }
        if hits >= 2 && hits < line.flags.len() {
            return Err(HyperplaneViolation::PartialLine(i));
        }
    }
    Ok(())
}
