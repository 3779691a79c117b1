//! Points and lines of PG(2,q²) in normalised homogeneous coordinates.
//!
//! A point or line is stored with its first nonzero coordinate equal to 1, so
//! equality is bit equality. Both are enumerated in lexicographic order of
//! their code triples, which gives a dense index in `0..q⁴+q²+1`.
//!
//! The fundamental triangle uses O = (0,0,1), Y∞ = (0,1,0), X∞ = (1,0,0) and
//! the lines ℓ_X: X₂ = 0, ℓ_Y: X₁ = 0, ℓ_∞: X₃ = 0. A line sometimes written
//! ℓ₀ alongside ℓ_X is taken to be the tangent at Y∞, which is ℓ_∞; nothing
//! here depends on that reading.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldTower, Fq2};

fn normalise(t: &FieldTower, v: [Fq2; 3]) -> Option<[Fq2; 3]> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    if lead == Fq2::ONE {
        return Some(v);
    }
    let s = t.inv(lead)?;
    Some([t.mul(v[0], s), t.mul(v[1], s), t.mul(v[2], s)])
}

fn triple_index(q2: u32, v: [Fq2; 3]) -> usize {
    let s = q2 as usize;
    let (x, y, z) = (v[0].0 as usize, v[1].0 as usize, v[2].0 as usize);
    if x == 0 {
        if y == 0 {
            0
        } else {
            1 + z
        }
    } else {
        1 + s + y * s + z
    }
}

fn triple_from_index(q2: u32, idx: usize) -> [Fq2; 3] {
    let s = q2 as usize;
    if idx == 0 {
        [Fq2::ZERO, Fq2::ZERO, Fq2::ONE]
    } else if idx <= s {
        [Fq2::ZERO, Fq2::ONE, Fq2((idx - 1) as u32)]
    } else {
        let k = idx - 1 - s;
        [Fq2::ONE, Fq2((k / s) as u32), Fq2((k % s) as u32)]
    }
}

fn parse_triple(s: &str) -> std::result::Result<[Fq2; 3], String> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected x:y:z, got {s:?}"));
    }
    let mut out = [Fq2::ZERO; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = Fq2(part.parse().map_err(|e| format!("{part:?}: {e}"))?);
    }
    Ok(out)
}

/// Number of points (and of lines) of PG(2,q²).
pub fn plane_size(t: &FieldTower) -> usize {
    let s = t.q2() as usize;
    s * s + s + 1
}

/// A point of PG(2,q²).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjPoint([Fq2; 3]);

impl ProjPoint {
    pub const O: ProjPoint = ProjPoint([Fq2::ZERO, Fq2::ZERO, Fq2::ONE]);
    pub const Y_INF: ProjPoint = ProjPoint([Fq2::ZERO, Fq2::ONE, Fq2::ZERO]);
    pub const X_INF: ProjPoint = ProjPoint([Fq2::ONE, Fq2::ZERO, Fq2::ZERO]);

    pub fn new(t: &FieldTower, v: [Fq2; 3]) -> Result<Self> {
        for c in v {
            t.element(c.0)?;
        }
        normalise(t, v).map(ProjPoint).ok_or(Error::ZeroVector)
    }

    /// The affine point (x, y, 1).
    pub fn affine(t: &FieldTower, x: Fq2, y: Fq2) -> Self {
        Self::new(t, [x, y, Fq2::ONE]).expect("affine point")
    }

    pub fn coords(&self) -> [Fq2; 3] {
        self.0
    }

    pub fn index(&self, t: &FieldTower) -> usize {
        triple_index(t.q2(), self.0)
    }

    pub fn from_index(t: &FieldTower, idx: usize) -> Self {
        ProjPoint(triple_from_index(t.q2(), idx))
    }

    pub fn is_affine(&self) -> bool {
        !self.0[2].is_zero()
    }

    /// (x, y) with the third coordinate scaled to 1, for affine points.
    pub fn affine_coords(&self, t: &FieldTower) -> Option<(Fq2, Fq2)> {
        let z = t.inv(self.0[2])?;
        Some((t.mul(self.0[0], z), t.mul(self.0[1], z)))
    }

    pub fn on(&self, t: &FieldTower, l: &ProjLine) -> bool {
        dot(t, self.0, l.0).is_zero()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for ProjPoint {
    type Err = String;

    /// Parses `x:y:z`; the triple must already be normalised.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let v = parse_triple(s)?;
        match v.iter().find(|c| !c.is_zero()) {
            Some(&Fq2::ONE) => Ok(ProjPoint(v)),
            Some(_) => Err(format!("{s:?} is not normalised")),
            None => Err("zero vector".into()),
        }
    }
}

/// A line of PG(2,q²): the points x with Σ coeffᵢ·xᵢ = 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjLine([Fq2; 3]);

impl ProjLine {
    /// ℓ_X: X₂ = 0.
    pub const L_X: ProjLine = ProjLine([Fq2::ZERO, Fq2::ONE, Fq2::ZERO]);
    /// ℓ_Y: X₁ = 0.
    pub const L_Y: ProjLine = ProjLine([Fq2::ONE, Fq2::ZERO, Fq2::ZERO]);
    /// ℓ_∞: X₃ = 0.
    pub const L_INF: ProjLine = ProjLine([Fq2::ZERO, Fq2::ZERO, Fq2::ONE]);

    pub fn new(t: &FieldTower, v: [Fq2; 3]) -> Result<Self> {
        for c in v {
            t.element(c.0)?;
        }
        normalise(t, v).map(ProjLine).ok_or(Error::ZeroVector)
    }

    pub fn coeffs(&self) -> [Fq2; 3] {
        self.0
    }

    pub fn index(&self, t: &FieldTower) -> usize {
        triple_index(t.q2(), self.0)
    }

    pub fn from_index(t: &FieldTower, idx: usize) -> Self {
        ProjLine(triple_from_index(t.q2(), idx))
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn dot(t: &FieldTower, a: [Fq2; 3], b: [Fq2; 3]) -> Fq2 {
    t.add(t.add(t.mul(a[0], b[0]), t.mul(a[1], b[1])), t.mul(a[2], b[2]))
}

pub(crate) fn cross(t: &FieldTower, a: [Fq2; 3], b: [Fq2; 3]) -> [Fq2; 3] {
    [
        t.sub(t.mul(a[1], b[2]), t.mul(a[2], b[1])),
        t.sub(t.mul(a[2], b[0]), t.mul(a[0], b[2])),
        t.sub(t.mul(a[0], b[1]), t.mul(a[1], b[0])),
    ]
}

/// All q⁴ + q² + 1 points in lexicographic order.
pub fn all_points(t: &FieldTower) -> Vec<ProjPoint> {
    (0..plane_size(t)).map(|i| ProjPoint::from_index(t, i)).collect()
}

/// All lines in lexicographic order of their coefficient triples.
pub fn all_lines(t: &FieldTower) -> Vec<ProjLine> {
    (0..plane_size(t)).map(|i| ProjLine::from_index(t, i)).collect()
}

/// The q⁴ points off ℓ_∞, in enumeration order.
pub fn affine_points(t: &FieldTower) -> Vec<ProjPoint> {
    all_points(t).into_iter().filter(|p| p.is_affine()).collect()
}

pub fn line_through(t: &FieldTower, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::SamePoint(*p));
    }
    ProjLine::new(t, cross(t, p.0, q.0))
}

pub fn meet(t: &FieldTower, a: &ProjLine, b: &ProjLine) -> Result<ProjPoint> {
    if a == b {
        return Err(Error::ZeroVector);
    }
    ProjPoint::new(t, cross(t, a.0, b.0))
}

/// The q² + 1 vectors annihilated by a normalised triple, normalised and
/// sorted by index. Serves both points of a line and lines through a point.
fn kernel_triples(t: &FieldTower, v: [Fq2; 3]) -> Vec<[Fq2; 3]> {
    let [a, b, c] = v;
    let (u, w) = if !a.is_zero() {
        ([t.neg(b), Fq2::ONE, Fq2::ZERO], [t.neg(c), Fq2::ZERO, Fq2::ONE])
    } else if !b.is_zero() {
        ([Fq2::ONE, Fq2::ZERO, Fq2::ZERO], [Fq2::ZERO, t.neg(c), Fq2::ONE])
    } else {
        ([Fq2::ONE, Fq2::ZERO, Fq2::ZERO], [Fq2::ZERO, Fq2::ONE, Fq2::ZERO])
    };
    let mut out = Vec::with_capacity(t.q2() as usize + 1);
    out.push(normalise(t, u).unwrap());
    for s in t.elements() {
        let x = [
            t.add(w[0], t.mul(s, u[0])),
            t.add(w[1], t.mul(s, u[1])),
            t.add(w[2], t.mul(s, u[2])),
        ];
        out.push(normalise(t, x).unwrap());
    }
    out.sort_by_key(|x| triple_index(t.q2(), *x));
    out
}

/// The q² + 1 points of a line, in enumeration order.
pub fn points_on_line(t: &FieldTower, l: &ProjLine) -> Vec<ProjPoint> {
    kernel_triples(t, l.0).into_iter().map(ProjPoint).collect()
}

/// The q² + 1 lines through a point, in enumeration order.
pub fn lines_through(t: &FieldTower, p: &ProjPoint) -> Vec<ProjLine> {
    kernel_triples(t, p.0).into_iter().map(ProjLine).collect()
}

/// Dense membership set over point (or line) indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    bits: Vec<u64>,
    len: usize,
}

impl IndexSet {
    pub fn new(universe: usize) -> Self {
        IndexSet {
            bits: vec![0; universe.div_ceil(64)],
            len: 0,
        }
    }

    pub fn from_points(t: &FieldTower, pts: &[ProjPoint]) -> Self {
        let mut s = IndexSet::new(plane_size(t));
        for p in pts {
            s.insert(p.index(t));
        }
        s
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.bits
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = (self.bits[w] >> b) & 1 == 0;
        self.bits[w] |= 1 << b;
        self.len += fresh as usize;
        fresh
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// The reference triangle and its sides, optionally attached to a coordinate
/// change that carries them to the standard positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalFrame {
    pub o: ProjPoint,
    pub y_inf: ProjPoint,
    pub x_inf: ProjPoint,
    pub l_x: ProjLine,
    pub l_y: ProjLine,
    pub l_inf: ProjLine,
    pub to_canonical: crate::collineation::Projectivity,
}

impl CanonicalFrame {
    pub fn standard() -> Self {
        CanonicalFrame {
            o: ProjPoint::O,
            y_inf: ProjPoint::Y_INF,
            x_inf: ProjPoint::X_INF,
            l_x: ProjLine::L_X,
            l_y: ProjLine::L_Y,
            l_inf: ProjLine::L_INF,
            to_canonical: crate::collineation::Projectivity::identity(),
        }
    }

    /// X∞ = ℓ_X ∩ ℓ_∞, and O, Y∞, X∞ are non-collinear.
    pub fn is_consistent(&self, t: &FieldTower) -> bool {
        let triangle = line_through(t, &self.o, &self.y_inf)
            .map(|l| !self.x_inf.on(t, &l))
            .unwrap_or(false);
        triangle
            && self.x_inf.on(t, &self.l_x)
            && self.x_inf.on(t, &self.l_inf)
            && self.o.on(t, &self.l_x)
            && self.o.on(t, &self.l_y)
            && self.y_inf.on(t, &self.l_y)
            && self.y_inf.on(t, &self.l_inf)
    }
}
