//! Projectivities of PGL(3,q²), cyclic groups they generate, orbits, and the
//! 2-point stabiliser of a unital.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{gcd, FieldTower, Fq2};
use crate::plane::{
    cross, dot, line_through, meet, plane_size, CanonicalFrame, IndexSet, ProjLine, ProjPoint,
};
use crate::unital::Unital;

type Matrix = [[Fq2; 3]; 3];

/// A collineation x ↦ Mx, M scaled so its first nonzero entry (row-major)
/// is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Projectivity(Matrix);

impl fmt::Debug for Projectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("{} {} {}", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl Serialize for Projectivity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[u32; 3]> = self.0.iter().map(|r| r.map(|c| c.0)).collect();
        rows.serialize(s)
    }
}

pub(crate) fn mat_mul(t: &FieldTower, a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[Fq2::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Fq2::ZERO;
            for k in 0..3 {
                acc = t.add(acc, t.mul(a[i][k], b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub(crate) fn mat_vec(t: &FieldTower, m: &Matrix, v: [Fq2; 3]) -> [Fq2; 3] {
    [dot(t, m[0], v), dot(t, m[1], v), dot(t, m[2], v)]
}

pub(crate) fn det(t: &FieldTower, m: &Matrix) -> Fq2 {
    dot(t, m[0], cross(t, m[1], m[2]))
}

/// Adjugate: inverse up to the scalar det(m).
pub(crate) fn adjugate(t: &FieldTower, m: &Matrix) -> Matrix {
    let c0 = cross(t, m[1], m[2]);
    let c1 = cross(t, m[2], m[0]);
    let c2 = cross(t, m[0], m[1]);
    transpose(&[c0, c1, c2])
}

pub(crate) fn transpose(m: &Matrix) -> Matrix {
    let mut out = [[Fq2::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}

impl Projectivity {
    pub fn identity() -> Self {
        Projectivity([
            [Fq2::ONE, Fq2::ZERO, Fq2::ZERO],
            [Fq2::ZERO, Fq2::ONE, Fq2::ZERO],
            [Fq2::ZERO, Fq2::ZERO, Fq2::ONE],
        ])
    }

    pub fn new(t: &FieldTower, m: Matrix) -> Result<Self> {
        for row in &m {
            for c in row {
                t.element(c.0)?;
            }
        }
        if det(t, &m).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let lead = *m.iter().flatten().find(|c| !c.is_zero()).unwrap();
        let s = t.inv(lead).unwrap();
        Ok(Projectivity(m.map(|r| r.map(|c| t.mul(c, s)))))
    }

    /// diag(a, b, c).
    pub fn diagonal(t: &FieldTower, a: Fq2, b: Fq2, c: Fq2) -> Result<Self> {
        Self::new(
            t,
            [
                [a, Fq2::ZERO, Fq2::ZERO],
                [Fq2::ZERO, b, Fq2::ZERO],
                [Fq2::ZERO, Fq2::ZERO, c],
            ],
        )
    }

    pub fn matrix(&self) -> Matrix {
        self.0
    }

    /// For a diagonal matrix, (m₀₀/m₂₂, m₁₁/m₂₂): the (λ, μ) of diag(λ, μ, 1).
    pub fn diagonal_entries(&self, t: &FieldTower) -> Option<(Fq2, Fq2)> {
        let m = &self.0;
        let off_diagonal_zero = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .all(|(i, j)| m[i][j].is_zero());
        if !off_diagonal_zero {
            return None;
        }
        Some((t.div(m[0][0], m[2][2]), t.div(m[1][1], m[2][2])))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, t: &FieldTower, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(t, mat_vec(t, &self.0, p.coords())).expect("invertible matrix")
    }

    /// Image of a line: ℓ ↦ ℓ·M⁻¹.
    pub fn apply_line(&self, t: &FieldTower, l: &ProjLine) -> ProjLine {
        let inv = adjugate(t, &self.0);
        let c = l.coeffs();
        let v = [
            dot(t, c, [inv[0][0], inv[1][0], inv[2][0]]),
            dot(t, c, [inv[0][1], inv[1][1], inv[2][1]]),
            dot(t, c, [inv[0][2], inv[1][2], inv[2][2]]),
        ];
        ProjLine::new(t, v).expect("invertible matrix")
    }

    /// self · other (apply `other` first).
    pub fn compose(&self, t: &FieldTower, other: &Projectivity) -> Projectivity {
        Projectivity::new(t, mat_mul(t, &self.0, &other.0)).expect("product of invertibles")
    }

    pub fn inverse(&self, t: &FieldTower) -> Projectivity {
        Projectivity::new(t, adjugate(t, &self.0)).expect("adjugate of invertible")
    }

    pub fn pow(&self, t: &FieldTower, mut e: u64) -> Projectivity {
        let mut base = *self;
        let mut acc = Projectivity::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(t, &base);
            }
            base = base.compose(t, &base);
            e >>= 1;
        }
        acc
    }

    /// The projectivity sending e₁, e₂, e₃, (1,1,1) to the four given points.
    pub fn from_frame(t: &FieldTower, pts: [ProjPoint; 4]) -> Result<Self> {
        let cols = [pts[0].coords(), pts[1].coords(), pts[2].coords()];
        let m = transpose(&cols);
        let d = det(t, &m);
        if d.is_zero() {
            return Err(Error::NotAFrame(pts.to_vec()));
        }
        // Solve m·λ = pts[3] with the adjugate; the common factor det is dropped.
        let lambda = mat_vec(t, &adjugate(t, &m), pts[3].coords());
        if lambda.iter().any(|c| c.is_zero()) {
            return Err(Error::NotAFrame(pts.to_vec()));
        }
        let scaled = [0, 1, 2].map(|j| cols[j].map(|c| t.mul(c, lambda[j])));
        Projectivity::new(t, transpose(&scaled))
    }

    pub fn random<R: rand::Rng>(t: &FieldTower, rng: &mut R) -> Self {
        loop {
            let m = [[(); 3]; 3].map(|r| r.map(|_| Fq2(rng.gen_range(0..t.q2()))));
            if let Ok(g) = Projectivity::new(t, m) {
                return g;
            }
        }
    }
}

/// Whether `g` maps the point set onto itself.
pub fn preserves(t: &FieldTower, g: &Projectivity, pts: &[ProjPoint], set: &IndexSet) -> bool {
    pts.iter().all(|p| set.contains(g.apply(t, p).index(t)))
}

/// ⟨g⟩ with its elements listed as powers g⁰, g¹, …, gⁿ⁻¹.
#[derive(Clone, Debug)]
pub struct CyclicSubgroup {
    pub generator: Projectivity,
    pub elements: Vec<Projectivity>,
}

impl CyclicSubgroup {
    pub fn generated_by(t: &FieldTower, g: Projectivity) -> Self {
        let mut elements = vec![Projectivity::identity()];
        let mut x = g;
        while !x.is_identity() {
            elements.push(x);
            x = x.compose(t, &g);
        }
        CyclicSubgroup {
            generator: g,
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// ⟨diag(λ, μ, 1)⟩.
pub fn diagonal_generator(t: &FieldTower, lambda: Fq2, mu: Fq2) -> Result<CyclicSubgroup> {
    if lambda.is_zero() || mu.is_zero() {
        return Err(Error::ZeroElement);
    }
    let g = Projectivity::diagonal(t, lambda, mu, Fq2::ONE)?;
    Ok(CyclicSubgroup::generated_by(t, g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub id: usize,
    pub points: Vec<ProjPoint>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Partitions `domain` into orbits of `group`; ids follow the smallest
/// member in enumeration order.
pub fn orbits(t: &FieldTower, group: &CyclicSubgroup, domain: &[ProjPoint]) -> Result<Vec<Orbit>> {
    let mut sorted = domain.to_vec();
    sorted.sort_by_key(|p| p.index(t));
    sorted.dedup();
    let members = IndexSet::from_points(t, &sorted);
    let mut seen = IndexSet::new(plane_size(t));
    let g = group.generator;
    let mut out = Vec::new();
    for start in &sorted {
        if seen.contains(start.index(t)) {
            continue;
        }
        let mut pts = vec![*start];
        seen.insert(start.index(t));
        let mut x = g.apply(t, start);
        while x != *start {
            let i = x.index(t);
            if !members.contains(i) {
                return Err(Error::DomainNotClosed(x));
            }
            seen.insert(i);
            pts.push(x);
            x = g.apply(t, &x);
        }
        pts.sort_by_key(|p| p.index(t));
        out.push(Orbit {
            id: out.len(),
            points: pts,
        });
    }
    Ok(out)
}

/// Result of a 2-point stabiliser computation, in the canonical frame where
/// the two points are O and Y∞ and every stabilising element is diag(a, b, 1).
#[derive(Clone, Debug, Serialize)]
pub struct StabilizerCertificate {
    pub order: usize,
    pub cyclic: bool,
    /// Diagonal entries of the reported generator; absent for non-cyclic groups.
    pub lambda: Option<Fq2>,
    pub mu: Option<Fq2>,
    /// For order q² − 1: whether λ generates GF(q²)* and μ generates GF(q)*.
    pub primitive_entries: Option<bool>,
    pub frame: CanonicalFrame,
    /// All group elements as (a, b) with diag(a, b, 1), sorted by code.
    #[serde(skip)]
    pub elements: Vec<(Fq2, Fq2)>,
}

fn diag_order(t: &FieldTower, a: Fq2, b: Fq2) -> u64 {
    let oa = t.order(a).unwrap();
    let ob = t.order(b).unwrap();
    oa / gcd(oa, ob) * ob
}

/// The projectivity taking P, Q and their tangents to O, Y∞, ℓ_X, ℓ_∞, plus
/// the smallest unital point off PQ to (1,1,1).
pub fn canonical_frame(u: &Unital, p: &ProjPoint, q: &ProjPoint) -> Result<CanonicalFrame> {
    let t = u.tower();
    for x in [p, q] {
        if !u.contains(x) {
            return Err(Error::PointNotInUnital(*x));
        }
    }
    if p == q {
        return Err(Error::SamePoint(*p));
    }
    let tp = u.tangent_line(p)?;
    let tq = u.tangent_line(q)?;
    let x_inf = meet(t, &tp, &tq)?;
    let pq = line_through(t, p, q)?;
    let aux = *u
        .points()
        .iter()
        .find(|x| !x.on(t, &pq))
        .ok_or_else(|| Error::NotAUnital("all points collinear".into()))?;
    let to_frame = Projectivity::from_frame(t, [x_inf, *q, *p, aux])?;
    Ok(CanonicalFrame {
        o: *p,
        y_inf: *q,
        x_inf,
        l_x: tp,
        l_y: pq,
        l_inf: tq,
        to_canonical: to_frame.inverse(t),
    })
}

/// The subgroup of PGL(3,q²) preserving `u` and fixing `p` and `q`.
pub fn two_point_stabilizer(
    u: &Unital,
    p: &ProjPoint,
    q: &ProjPoint,
) -> Result<StabilizerCertificate> {
    let t = u.tower();
    let frame = canonical_frame(u, p, q)?;
    let to_c = frame.to_canonical;
    let mapped: Vec<ProjPoint> = u.points().iter().map(|x| to_c.apply(t, x)).collect();
    let mapped_set = IndexSet::from_points(t, &mapped);

    let nonzero: Vec<Fq2> = t.nonzero_elements().collect();
    let mut elements: Vec<(Fq2, Fq2)> = nonzero
        .par_iter()
        .flat_map_iter(|&a| {
            let mapped = &mapped;
            let mapped_set = &mapped_set;
            nonzero.iter().filter_map(move |&b| {
                let ok = mapped.iter().all(|x| {
                    let [x0, x1, x2] = x.coords();
                    let img = ProjPoint::new(t, [t.mul(a, x0), t.mul(b, x1), x2]).unwrap();
                    mapped_set.contains(img.index(t))
                });
                ok.then_some((a, b))
            })
        })
        .collect();
    elements.sort();

    // Re-check each element in the original coordinates.
    let from_c = to_c.inverse(t);
    for &(a, b) in &elements {
        let d = Projectivity::diagonal(t, a, b, Fq2::ONE)?;
        let g = from_c.compose(t, &d).compose(t, &to_c);
        if !preserves(t, &g, u.points(), u.index_set()) || g.apply(t, p) != *p || g.apply(t, q) != *q
        {
            return Err(Error::ReductionUnsound);
        }
    }

    let order = elements.len();
    let generator = elements
        .iter()
        .find(|&&(a, b)| diag_order(t, a, b) == order as u64)
        .copied();
    let cyclic = generator.is_some();
    let primitive_entries = (order as u64 == t.q2() as u64 - 1).then(|| match generator {
        Some((l, m)) => {
            t.is_primitive(l, false).unwrap_or(false)
                && t.in_subfield(m)
                && t.is_primitive(m, true).unwrap_or(false)
        }
        None => false,
    });
    Ok(StabilizerCertificate {
        order,
        cyclic,
        lambda: generator.map(|g| g.0),
        mu: generator.map(|g| g.1),
        primitive_entries,
        frame,
        elements,
    })
}
