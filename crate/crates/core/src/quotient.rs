//! The quotient plane Π of AG(2,q²) by G = ⟨diag(λ, λ^{q+1}, 1)⟩.
//!
//! Points of Π are the G-orbits of length > 1 on affine points. Lines are
//! ℓ_Y, the curves H_b (b ≠ 0) and the cones C_c (one c per coset of
//! GF(q)*). A point lies on a line when its orbit sits inside the line's
//! affine point set; partial containment is a construction error.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::collineation::{diagonal_generator, orbits, preserves, CyclicSubgroup, Orbit, Projectivity};
use crate::error::{Error, Result};
use crate::field::{FieldTower, Fq2};
use crate::plane::{affine_points, plane_size, IndexSet, ProjPoint};
use crate::unital::{HermitianForm, Unital};

/// One c from each coset of GF(q)* in GF(q²)*, the smallest code of each.
pub fn coset_representatives(t: &FieldTower) -> Vec<Fq2> {
    let mut reps: Vec<Fq2> = Vec::new();
    for c in t.nonzero_elements() {
        if !reps.iter().any(|&r| t.in_subfield(t.div(c, r))) {
            reps.push(c);
        }
    }
    reps
}

/// The representative of c's coset.
pub fn coset_representative(t: &FieldTower, c: Fq2) -> Result<Fq2> {
    if c.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(t
        .subfield_elements()
        .into_iter()
        .filter(|s| !s.is_zero())
        .map(|s| t.mul(c, s))
        .min()
        .expect("GF(q)* is non-empty"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "tag", content = "param", rename_all = "lowercase")]
pub enum PlaneLine {
    #[serde(rename = "ly")]
    LY,
    #[serde(rename = "hb")]
    Curve(Fq2),
    #[serde(rename = "cc")]
    Cone(Fq2),
}

impl fmt::Display for PlaneLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneLine::LY => write!(f, "ly"),
            PlaneLine::Curve(b) => write!(f, "hb {b}"),
            PlaneLine::Cone(c) => write!(f, "cc {c}"),
        }
    }
}

impl PlaneLine {
    /// Affine points of PG(2,q²) on the representing curve.
    pub fn affine_points(&self, t: &FieldTower) -> Result<Vec<ProjPoint>> {
        let form = match *self {
            PlaneLine::LY => {
                return Ok(affine_points(t)
                    .into_iter()
                    .filter(|p| p.coords()[0].is_zero())
                    .collect())
            }
            PlaneLine::Curve(b) => HermitianForm::curve(t, b)?,
            PlaneLine::Cone(c) => HermitianForm::cone(t, c)?,
        };
        Ok(affine_points(t)
            .into_iter()
            .filter(|p| form.is_absolute(t, p))
            .collect())
    }
}

/// Row-major bit matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{})", self.rows, self.cols)
    }
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.bits[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    pub fn row_count(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of columns set in both rows.
    pub fn common(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    pub fn ones_in_row(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::new(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Row r as hex, column j in bit j%8 of byte j/8.
    pub fn hex_row(&self, r: usize) -> String {
        (0..self.cols.div_ceil(8))
            .map(|byte| {
                let mut v = 0u8;
                for bit in 0..8 {
                    let c = byte * 8 + bit;
                    if c < self.cols && self.get(r, c) {
                        v |= 1 << bit;
                    }
                }
                format!("{v:02x}")
            })
            .collect()
    }

    pub fn set_hex_row(&mut self, r: usize, hex: &str) -> std::result::Result<(), String> {
        if hex.len() != self.cols.div_ceil(8) * 2 {
            return Err(format!("expected {} hex digits", self.cols.div_ceil(8) * 2));
        }
        for c in 0..self.cols {
            self.set(r, c, false);
        }
        for (byte, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let s = std::str::from_utf8(chunk).map_err(|e| e.to_string())?;
            let v = u8::from_str_radix(s, 16).map_err(|e| format!("{s:?}: {e}"))?;
            for bit in 0..8 {
                if (v >> bit) & 1 == 1 {
                    let c = byte * 8 + bit;
                    if c >= self.cols {
                        return Err(format!("bit {c} beyond {} columns", self.cols));
                    }
                    self.set(r, c, true);
                }
            }
        }
        Ok(())
    }
}

/// Orbit lengths of G on the affine plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    /// Orbits of length q²−1.
    pub long: usize,
    /// Orbits of length q−1.
    pub short: usize,
    /// Affine points fixed by G (not points of Π).
    pub fixed: usize,
}

#[derive(Clone, Debug)]
pub struct QuotientPlane {
    tower: Arc<FieldTower>,
    lambda: Fq2,
    group: CyclicSubgroup,
    points: Vec<Orbit>,
    fixed: Vec<ProjPoint>,
    lines: Vec<PlaneLine>,
    incidence: BitMatrix,
    orbit_of: Vec<Option<usize>>,
    line_lookup: HashMap<Vec<usize>, usize>,
}

/// Π for the group ⟨diag(λ, λ^{q+1}, 1)⟩, λ primitive.
pub fn build_quotient_plane(tower: &Arc<FieldTower>, lambda: Fq2) -> Result<QuotientPlane> {
    let t: &FieldTower = tower;
    if !t.is_primitive(lambda, false)? {
        return Err(Error::NotPrimitive(lambda.0));
    }
    let group = diagonal_generator(t, lambda, t.norm(lambda))?;
    let all = orbits(t, &group, &affine_points(t))?;
    let (long, short): (Vec<Orbit>, Vec<Orbit>) = all.into_iter().partition(|o| o.len() > 1);
    let fixed: Vec<ProjPoint> = short.into_iter().flat_map(|o| o.points).collect();
    let points: Vec<Orbit> = long
        .into_iter()
        .enumerate()
        .map(|(id, o)| Orbit { id, points: o.points })
        .collect();
    let mut orbit_of = vec![None; plane_size(t)];
    for o in &points {
        for p in &o.points {
            orbit_of[p.index(t)] = Some(o.id);
        }
    }

    let mut lines = vec![PlaneLine::LY];
    lines.extend(t.nonzero_elements().map(PlaneLine::Curve));
    lines.extend(coset_representatives(t).into_iter().map(PlaneLine::Cone));

    let mut incidence = BitMatrix::new(points.len(), lines.len());
    let mut line_lookup = HashMap::new();
    for (j, line) in lines.iter().enumerate() {
        let pts = line.affine_points(t)?;
        let set = IndexSet::from_points(t, &pts);
        for o in &points {
            let inside = o.points.iter().filter(|p| set.contains(p.index(t))).count();
            if inside == o.len() {
                incidence.set(o.id, j, true);
            } else if inside > 0 {
                return Err(Error::OrbitStraddlesLine {
                    orbit: o.id,
                    line: j,
                });
            }
        }
        let mut key: Vec<usize> = pts.iter().map(|p| p.index(t)).collect();
        key.sort_unstable();
        if line_lookup.insert(key, j).is_some() {
            return Err(Error::Precondition(format!("line {line} repeats an earlier line")));
        }
    }
    Ok(QuotientPlane {
        tower: Arc::clone(tower),
        lambda,
        group,
        points,
        fixed,
        lines,
        incidence,
        orbit_of,
        line_lookup,
    })
}

impl QuotientPlane {
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn lambda(&self) -> Fq2 {
        self.lambda
    }

    pub fn group(&self) -> &CyclicSubgroup {
        &self.group
    }

    pub fn points(&self) -> &[Orbit] {
        &self.points
    }

    pub fn fixed_points(&self) -> &[ProjPoint] {
        &self.fixed
    }

    pub fn lines(&self) -> &[PlaneLine] {
        &self.lines
    }

    pub fn incidence(&self) -> &BitMatrix {
        &self.incidence
    }

    pub fn incidence_mut(&mut self) -> &mut BitMatrix {
        &mut self.incidence
    }

    /// Π-point containing an affine point, if its orbit is non-trivial.
    pub fn point_of(&self, p: &ProjPoint) -> Option<usize> {
        self.orbit_of.get(p.index(&self.tower)).copied().flatten()
    }

    pub fn line_id(&self, line: &PlaneLine) -> Option<usize> {
        self.lines.iter().position(|l| l == line)
    }

    /// Π-points on a line.
    pub fn points_on(&self, line: usize) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.incidence.get(i, line))
            .collect()
    }

    /// The Π-point formed by the affine part of ℓ_X.
    pub fn lx_point(&self) -> usize {
        let t = self.tower();
        self.point_of(&ProjPoint::affine(t, Fq2::ONE, Fq2::ZERO))
            .expect("ℓ_X is a non-trivial orbit")
    }

    pub fn census(&self) -> OrbitCensus {
        let t = self.tower();
        let q2 = t.q2() as usize;
        let q = t.q() as usize;
        OrbitCensus {
            long: self.points.iter().filter(|o| o.len() == q2 - 1).count(),
            short: self.points.iter().filter(|o| o.len() == q - 1).count(),
            fixed: self.fixed.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneCertificate {
    pub order: usize,
    pub points: usize,
    pub lines: usize,
    pub axioms: Vec<AxiomCheck>,
}

impl PlaneCertificate {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

fn axiom(name: &'static str, witness: Option<String>) -> AxiomCheck {
    AxiomCheck {
        name,
        passed: witness.is_none(),
        witness,
    }
}

/// First pair (a < b) of rows sharing other than exactly one column.
fn bad_pair(m: &BitMatrix) -> Option<(usize, usize, usize)> {
    (0..m.rows()).into_par_iter().find_map_first(|a| {
        (a + 1..m.rows())
            .map(|b| (a, b, m.common(a, b)))
            .find(|&(_, _, k)| k != 1)
    })
}

/// Checks the axioms of a projective plane of order q on Π's incidence.
pub fn verify_projective_plane(pi: &QuotientPlane) -> PlaneCertificate {
    let q = pi.tower().q() as usize;
    let n = q * q + q + 1;
    let inc = &pi.incidence;
    let tr = inc.transpose();
    let (np, nl) = (inc.rows(), inc.cols());

    let counts = (np != n || nl != n)
        .then(|| format!("{np} points and {nl} lines, expected {n} of each"));
    let per_line = (0..nl)
        .find(|&l| tr.row_count(l) != q + 1)
        .map(|l| format!("line {l} has {} points", tr.row_count(l)));
    let per_point = (0..np)
        .find(|&p| inc.row_count(p) != q + 1)
        .map(|p| format!("point {p} is on {} lines", inc.row_count(p)));
    let joins =
        bad_pair(inc).map(|(a, b, k)| format!("points {a} and {b} share {k} lines"));
    let meets = bad_pair(&tr).map(|(a, b, k)| format!("lines {a} and {b} share {k} points"));

    PlaneCertificate {
        order: q,
        points: np,
        lines: nl,
        axioms: vec![
            axiom("point and line counts", counts),
            axiom("q+1 points per line", per_line),
            axiom("q+1 lines per point", per_point),
            axiom("two points, one common line", joins),
            axiom("two lines, one common point", meets),
        ],
    }
}

/// Γ: the Π-points whose orbits make up U off {O, Y∞}.
pub fn unital_trace(u: &Unital, pi: &QuotientPlane) -> Result<Vec<usize>> {
    let t = u.tower();
    if t != pi.tower() {
        return Err(Error::TowerMismatch);
    }
    let mut ids = Vec::new();
    for p in u.points() {
        if *p == ProjPoint::O || *p == ProjPoint::Y_INF {
            continue;
        }
        let id = pi.point_of(p).ok_or(Error::NotInvariant(*p))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    for &id in &ids {
        if let Some(p) = pi.points[id].points.iter().find(|p| !u.contains(p)) {
            return Err(Error::NotInvariant(*p));
        }
    }
    ids.sort_unstable();
    Ok(ids)
}

/// How a Π-point's weight is derived from U ∩ ρ(P).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightRule {
    /// ν_P = number of ⟨g²⟩-orbits of U inside ρ(P).
    #[default]
    HalfOrbits,
    /// ν_P = 1 if n_P = 2 and ν_P = 2 if n_P = 1.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedPointSet {
    pub rule: WeightRule,
    /// ν_P for every Π-point of positive weight.
    pub weights: BTreeMap<usize, usize>,
    /// n_P: non-trivial ⟨g⟩-orbits of U meeting ρ(P), for every P met by U.
    pub support: BTreeMap<usize, usize>,
    pub total: usize,
    pub expected_total: usize,
    /// Smallest total weight on a line of Π.
    pub min_line_weight: usize,
    pub two_fold_blocking: bool,
    /// A line of weight below 2, if any.
    pub light_line: Option<usize>,
}

/// The weighted trace of a ⟨g⟩-invariant point set, g = diag(λ, −λ^{q+1}, 1).
pub fn blocking_multiset(
    t: &FieldTower,
    points: &[ProjPoint],
    pi: &QuotientPlane,
    g: &Projectivity,
    rule: WeightRule,
) -> Result<WeightedPointSet> {
    if t != pi.tower() {
        return Err(Error::TowerMismatch);
    }
    let q = t.q() as usize;
    if q % 2 == 0 {
        return Err(Error::EvenCharacteristic);
    }
    let (lambda, mu) = g
        .diagonal_entries(t)
        .ok_or_else(|| Error::Precondition("g is not diagonal".into()))?;
    if !t.is_primitive(lambda, false)? {
        return Err(Error::NotPrimitive(lambda.0));
    }
    if mu != t.neg(t.norm(lambda)) {
        return Err(Error::Precondition("g is not diag(λ, −λ^(q+1), 1)".into()));
    }
    let set = IndexSet::from_points(t, points);
    if let Some(p) = points.iter().find(|p| !set.contains(g.apply(t, p).index(t))) {
        return Err(Error::NotInvariant(*p));
    }

    let body: Vec<ProjPoint> = points
        .iter()
        .filter(|p| **p != ProjPoint::O && **p != ProjPoint::Y_INF)
        .copied()
        .collect();
    for p in &body {
        if pi.point_of(p).is_none() {
            return Err(Error::NotInvariant(*p));
        }
    }
    let cyclic = CyclicSubgroup::generated_by(t, *g);
    let g_orbits = orbits(t, &cyclic, &body)?;

    let mut support: BTreeMap<usize, usize> = BTreeMap::new();
    let mut met: BTreeMap<usize, usize> = BTreeMap::new();
    for o in &g_orbits {
        let mut ids: Vec<usize> = o.points.iter().filter_map(|p| pi.point_of(p)).collect();
        for &id in &ids {
            *met.entry(id).or_default() += 1;
        }
        ids.sort_unstable();
        ids.dedup();
        for id in ids {
            let n = support.entry(id).or_default();
            if o.len() > 1 {
                *n += 1;
            }
        }
    }

    let mut weights = BTreeMap::new();
    for (&id, &inside) in &met {
        let half = pi.points[id].len() / 2;
        if half == 0 || inside % half != 0 {
            return Err(Error::NotInvariant(pi.points[id].points[0]));
        }
        let nu = match rule {
            WeightRule::HalfOrbits => inside / half,
            WeightRule::Literal => match support[&id] {
                2 => 1,
                1 => 2,
                _ => 0,
            },
        };
        if nu > 0 {
            weights.insert(id, nu);
        }
    }
    let total: usize = weights.values().sum();
    let expected_total = 2 * q + 2;
    if total != expected_total {
        return Err(Error::WeightConflict {
            total,
            expected: expected_total,
        });
    }

    let tr = pi.incidence.transpose();
    let line_weights: Vec<usize> = (0..pi.lines.len())
        .map(|l| {
            tr.ones_in_row(l)
                .iter()
                .map(|p| weights.get(p).copied().unwrap_or(0))
                .sum()
        })
        .collect();
    let min_line_weight = line_weights.iter().copied().min().unwrap_or(0);
    Ok(WeightedPointSet {
        rule,
        weights,
        support,
        total,
        expected_total,
        min_line_weight,
        two_fold_blocking: min_line_weight >= 2,
        light_line: line_weights.iter().position(|&w| w < 2),
    })
}

/// The permutations of Π's points and lines induced by a collineation
/// normalising G.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedCollineation {
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
}

impl InducedCollineation {
    pub fn is_identity(&self) -> bool {
        self.points.iter().enumerate().all(|(i, &j)| i == j)
            && self.lines.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.points[i] == i).collect()
    }

    pub fn fixed_lines(&self) -> Vec<usize> {
        (0..self.lines.len()).filter(|&i| self.lines[i] == i).collect()
    }

    pub fn compose(&self, other: &InducedCollineation) -> InducedCollineation {
        InducedCollineation {
            points: other.points.iter().map(|&i| self.points[i]).collect(),
            lines: other.lines.iter().map(|&i| self.lines[i]).collect(),
        }
    }

    /// Order of the point permutation.
    pub fn point_order(&self) -> usize {
        let mut power = self.clone();
        let mut k = 1;
        while !power.points.iter().enumerate().all(|(i, &j)| i == j) {
            power = self.compose(&power);
            k += 1;
        }
        k
    }
}

pub fn induced_collineation(g: &Projectivity, pi: &QuotientPlane) -> Result<InducedCollineation> {
    let t = pi.tower();
    let mut points = Vec::with_capacity(pi.points.len());
    for o in &pi.points {
        let images: Vec<Option<usize>> =
            o.points.iter().map(|p| pi.point_of(&g.apply(t, p))).collect();
        match images[0] {
            Some(j) if images.iter().all(|&x| x == Some(j)) => points.push(j),
            _ => {
                return Err(Error::NotNormalising(format!(
                    "orbit {} is not mapped onto an orbit",
                    o.id
                )))
            }
        }
    }
    let mut lines = Vec::with_capacity(pi.lines.len());
    for line in &pi.lines {
        let mut key = Vec::new();
        for p in line.affine_points(t)? {
            let img = g.apply(t, &p);
            if !img.is_affine() {
                return Err(Error::NotNormalising(format!("{line} leaves the affine plane")));
            }
            key.push(img.index(t));
        }
        key.sort_unstable();
        let j = pi
            .line_lookup
            .get(&key)
            .ok_or_else(|| Error::NotNormalising(format!("image of {line} is not a line of Π")))?;
        lines.push(*j);
    }
    let broken = (0..points.len()).into_par_iter().any(|p| {
        (0..lines.len()).any(|l| pi.incidence.get(p, l) != pi.incidence.get(points[p], lines[l]))
    });
    if broken {
        return Err(Error::NotNormalising("incidence not preserved".into()));
    }
    Ok(InducedCollineation { points, lines })
}

/// Label of the image of H_b under diag(λ, μ, 1): b·λ^{q+1}·μ^{−q}.
pub fn curve_label_image(t: &FieldTower, lambda: Fq2, mu: Fq2, b: Fq2) -> Fq2 {
    t.div(t.mul(b, t.norm(lambda)), t.frobenius(mu))
}

/// Label of the preimage of H_b under diag(λ, μ, 1): b·μ^q·λ^{−(q+1)}.
pub fn curve_label_preimage(t: &FieldTower, lambda: Fq2, mu: Fq2, b: Fq2) -> Fq2 {
    t.div(t.mul(b, t.frobenius(mu)), t.norm(lambda))
}

/// All affine points in the given Π-points' orbits, in enumeration order.
pub fn orbit_union(pi: &QuotientPlane, ids: &[usize]) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = ids
        .iter()
        .flat_map(|&i| pi.points[i].points.iter().copied())
        .collect();
    out.sort_by_key(|p| p.index(pi.tower()));
    out.dedup();
    out
}

/// Whether `g` preserves a point set.
pub fn is_invariant(t: &FieldTower, g: &Projectivity, points: &[ProjPoint]) -> bool {
    preserves(t, g, points, &IndexSet::from_points(t, points))
}
