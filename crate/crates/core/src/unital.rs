//! Unitals of PG(2,q²), Hermitian forms, and the classicality decision.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::collineation::{adjugate, mat_mul, transpose, Projectivity};
use crate::error::{Error, Result};
use crate::field::{FieldTower, Fq2};
use crate::plane::{
    all_lines, all_points, lines_through, points_on_line, IndexSet, ProjLine, ProjPoint,
};

type Matrix = [[Fq2; 3]; 3];

/// A conjugate-symmetric 3×3 matrix H (Hᵢⱼ = Hⱼᵢ^q) and its form
/// x ↦ Σ Hᵢⱼ xᵢ^q xⱼ, which always takes values in GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HermitianForm {
    gram: Matrix,
}

impl Serialize for HermitianForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[u32; 3]> = self.gram.iter().map(|r| r.map(|c| c.0)).collect();
        rows.serialize(s)
    }
}

impl HermitianForm {
    pub fn new(t: &FieldTower, gram: Matrix) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                t.element(gram[i][j].0)?;
                if gram[i][j] != t.frobenius(gram[j][i]) {
                    return Err(Error::NotHermitian);
                }
            }
        }
        Ok(HermitianForm { gram })
    }

    /// H_b: −X₁^{q+1} + b·X₃X₂^q + b^q·X₃^qX₂.
    pub fn curve(t: &FieldTower, b: Fq2) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let z = Fq2::ZERO;
        Self::new(
            t,
            [
                [t.neg(Fq2::ONE), z, z],
                [z, z, b],
                [z, t.frobenius(b), z],
            ],
        )
    }

    /// C_c: c^q·X₂^qX₃ + c·X₂X₃^q, a cone with vertex X∞.
    pub fn cone(t: &FieldTower, c: Fq2) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroParameter);
        }
        let z = Fq2::ZERO;
        Self::new(t, [[z, z, z], [z, z, t.frobenius(c)], [z, c, z]])
    }

    pub fn gram(&self) -> Matrix {
        self.gram
    }

    pub fn value(&self, t: &FieldTower, x: [Fq2; 3]) -> Fq2 {
        let xq = x.map(|c| t.frobenius(c));
        let mut acc = Fq2::ZERO;
        for i in 0..3 {
            if xq[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                acc = t.add(acc, t.mul(self.gram[i][j], t.mul(xq[i], x[j])));
            }
        }
        acc
    }

    pub fn is_absolute(&self, t: &FieldTower, p: &ProjPoint) -> bool {
        self.value(t, p.coords()).is_zero()
    }

    pub fn rank(&self, t: &FieldTower) -> usize {
        matrix_rank(t, self.gram)
    }

    /// All absolute points, in enumeration order.
    pub fn absolute_points(&self, t: &FieldTower) -> Vec<ProjPoint> {
        all_points(t)
            .into_iter()
            .filter(|p| self.is_absolute(t, p))
            .collect()
    }

    /// The tangent {x : P^{(q)T}·H·x = 0} at an absolute point of a
    /// non-degenerate form.
    pub fn tangent_at(&self, t: &FieldTower, p: &ProjPoint) -> Result<ProjLine> {
        let pq = p.coords().map(|c| t.frobenius(c));
        let mut row = [Fq2::ZERO; 3];
        for (j, slot) in row.iter_mut().enumerate() {
            for i in 0..3 {
                *slot = t.add(*slot, t.mul(pq[i], self.gram[i][j]));
            }
        }
        ProjLine::new(t, row)
    }

    /// The form in coordinates x′ with x = A·x′: A^{(q)T}·H·A.
    pub fn pullback(&self, t: &FieldTower, a: &Matrix) -> HermitianForm {
        let aq = transpose(&a.map(|r| r.map(|c| t.frobenius(c))));
        HermitianForm {
            gram: mat_mul(t, &mat_mul(t, &aq, &self.gram), a),
        }
    }

    /// The form whose absolute set is g applied to this one's.
    pub fn image(&self, t: &FieldTower, g: &Projectivity) -> HermitianForm {
        self.pullback(t, &adjugate(t, &g.matrix()))
    }

    pub fn scale(&self, t: &FieldTower, s: Fq2) -> HermitianForm {
        HermitianForm {
            gram: self.gram.map(|r| r.map(|c| t.mul(c, s))),
        }
    }
}

pub(crate) fn matrix_rank(t: &FieldTower, mut m: Matrix) -> usize {
    let mut rank = 0;
    for col in 0..3 {
        let Some(pivot) = (rank..3).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = t.inv(m[rank][col]).unwrap();
        for r in 0..3 {
            if r != rank && !m[r][col].is_zero() {
                let f = t.mul(m[r][col], inv);
                for c in 0..3 {
                    m[r][c] = t.sub(m[r][c], t.mul(f, m[rank][c]));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Where a point set came from; carried into unital files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitalKind {
    Hermitian { b: Fq2 },
    BuekenhoutMetz { alpha: Fq2, beta: Fq2 },
    Custom(String),
}

impl fmt::Display for UnitalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitalKind::Hermitian { b } => write!(f, "hermitian b={b}"),
            UnitalKind::BuekenhoutMetz { alpha, beta } => write!(f, "bm alpha={alpha} beta={beta}"),
            UnitalKind::Custom(s) if s.is_empty() => write!(f, "custom"),
            UnitalKind::Custom(s) => write!(f, "custom {s}"),
        }
    }
}

/// Outcome of the secant census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitalVerdict {
    pub size: usize,
    pub expected_size: usize,
    /// A line meeting the set in neither 1 nor q+1 points: the one with the
    /// largest count, earliest in enumeration order on ties.
    pub witness: Option<(ProjLine, usize)>,
}

impl UnitalVerdict {
    pub fn is_unital(&self) -> bool {
        self.size == self.expected_size && self.witness.is_none()
    }
}

fn check_points(t: &FieldTower, pts: &[ProjPoint]) -> Result<()> {
    for p in pts {
        if p.coords().iter().any(|c| c.0 >= t.q2()) {
            return Err(Error::TowerMismatch);
        }
    }
    Ok(())
}

fn secant_counts(t: &FieldTower, set: &IndexSet) -> Vec<u32> {
    all_lines(t)
        .iter()
        .map(|l| {
            points_on_line(t, l)
                .iter()
                .filter(|p| set.contains(p.index(t)))
                .count() as u32
        })
        .collect()
}

/// Secant census: |S| = q³+1 and every line meets S in 1 or q+1 points.
pub fn is_unital(t: &FieldTower, pts: &[ProjPoint]) -> Result<UnitalVerdict> {
    check_points(t, pts)?;
    let set = IndexSet::from_points(t, pts);
    let q = t.q() as usize;
    let counts = secant_counts(t, &set);
    let mut witness: Option<(ProjLine, usize)> = None;
    for (i, &c) in counts.iter().enumerate() {
        let c = c as usize;
        if c != 1 && c != q + 1 && witness.is_none_or(|(_, w)| c > w) {
            witness = Some((ProjLine::from_index(t, i), c));
        }
    }
    Ok(UnitalVerdict {
        size: set.len(),
        expected_size: q * q * q + 1,
        witness,
    })
}

/// A verified unital. Points are kept in enumeration order.
pub struct Unital {
    tower: Arc<FieldTower>,
    points: Vec<ProjPoint>,
    set: IndexSet,
    kind: UnitalKind,
    secants: OnceLock<Vec<u32>>,
}

impl fmt::Debug for Unital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Unital")
            .field("kind", &self.kind)
            .field("points", &self.points.len())
            .finish()
    }
}

impl Clone for Unital {
    fn clone(&self) -> Self {
        Unital {
            tower: self.tower.clone(),
            points: self.points.clone(),
            set: self.set.clone(),
            kind: self.kind.clone(),
            secants: self.secants.clone(),
        }
    }
}

impl PartialEq for Unital {
    fn eq(&self, other: &Self) -> bool {
        *self.tower == *other.tower && self.points == other.points
    }
}

impl Unital {
    /// Runs the secant census and rejects anything that is not a unital.
    pub fn new(tower: Arc<FieldTower>, mut points: Vec<ProjPoint>, kind: UnitalKind) -> Result<Self> {
        points.sort_by_key(|p| p.index(&tower));
        points.dedup();
        let verdict = is_unital(&tower, &points)?;
        if !verdict.is_unital() {
            let msg = match verdict.witness {
                Some((l, c)) => format!("line {l} meets the set in {c} points"),
                None => format!("{} points, expected {}", verdict.size, verdict.expected_size),
            };
            return Err(Error::NotAUnital(msg));
        }
        let set = IndexSet::from_points(&tower, &points);
        Ok(Unital {
            tower,
            points,
            set,
            kind,
            secants: OnceLock::new(),
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.set
    }

    pub fn kind(&self) -> &UnitalKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.set.contains(p.index(&self.tower))
    }

    /// |ℓ ∩ U| for every line, indexed by line index; built on first use.
    pub fn secant_index(&self) -> &[u32] {
        self.secants
            .get_or_init(|| secant_counts(&self.tower, &self.set))
    }

    pub fn secant_count(&self, l: &ProjLine) -> usize {
        self.secant_index()[l.index(&self.tower)] as usize
    }

    /// The unique line through P meeting U only in P.
    pub fn tangent_line(&self, p: &ProjPoint) -> Result<ProjLine> {
        if !self.contains(p) {
            return Err(Error::PointNotInUnital(*p));
        }
        let tangents: Vec<ProjLine> = lines_through(&self.tower, p)
            .into_iter()
            .filter(|l| self.secant_count(l) == 1)
            .collect();
        match tangents.as_slice() {
            [l] => Ok(*l),
            other => Err(Error::TangentCount {
                point: *p,
                found: other.len(),
            }),
        }
    }

    /// g(U).
    pub fn image(&self, g: &Projectivity) -> Unital {
        let t = &self.tower;
        let mut pts: Vec<ProjPoint> = self.points.iter().map(|p| g.apply(t, p)).collect();
        pts.sort_by_key(|p| p.index(t));
        let set = IndexSet::from_points(t, &pts);
        Unital {
            tower: self.tower.clone(),
            points: pts,
            set,
            kind: UnitalKind::Custom(format!("image of {}", self.kind)),
            secants: OnceLock::new(),
        }
    }
}

/// The curve H_b as a unital.
pub fn hermitian_curve(tower: &Arc<FieldTower>, b: Fq2) -> Result<Unital> {
    let form = HermitianForm::curve(tower, b)?;
    Unital::new(
        tower.clone(),
        form.absolute_points(tower),
        UnitalKind::Hermitian { b },
    )
}

/// The rank-2 zero set C_c and the q+1 lines through X∞ it consists of.
#[derive(Clone, Debug)]
pub struct HermitianCone {
    pub form: HermitianForm,
    pub points: Vec<ProjPoint>,
    pub lines: Vec<ProjLine>,
}

pub fn hermitian_cone(t: &FieldTower, c: Fq2) -> Result<HermitianCone> {
    let form = HermitianForm::cone(t, c)?;
    let points = form.absolute_points(t);
    // X₂ = s·X₃ with c^q s^q + c s = 0, and X₃ = 0.
    let mut lines: Vec<ProjLine> = t
        .elements()
        .filter(|&s| t.trace(t.mul(c, s)).is_zero())
        .map(|s| ProjLine::new(t, [Fq2::ZERO, Fq2::ONE, t.neg(s)]).unwrap())
        .collect();
    lines.push(ProjLine::L_INF);
    lines.sort_by_key(|l| l.index(t));
    Ok(HermitianCone {
        form,
        points,
        lines,
    })
}

/// (β^q − β)² + 4α^{q+1}, an element of GF(q).
pub fn bm_discriminant(t: &FieldTower, alpha: Fq2, beta: Fq2) -> Fq2 {
    let d = t.sub(t.frobenius(beta), beta);
    t.add(t.mul(d, d), t.mul(t.from_int(4), t.norm(alpha)))
}

/// {(x, αx² + βx^{q+1} + r, 1) : x ∈ GF(q²), r ∈ GF(q)} ∪ {Y∞}, unchecked.
pub fn buekenhout_metz_points(t: &FieldTower, alpha: Fq2, beta: Fq2) -> Vec<ProjPoint> {
    let sub = t.subfield_elements();
    let mut pts = vec![ProjPoint::Y_INF];
    for x in t.elements() {
        let base = t.add(t.mul(alpha, t.mul(x, x)), t.mul(beta, t.norm(x)));
        for &r in &sub {
            pts.push(ProjPoint::affine(t, x, t.add(base, r)));
        }
    }
    pts.sort_by_key(|p| p.index(t));
    pts
}

/// Orthogonal-Buekenhout-Metz unital for odd q; needs the discriminant to be
/// a non-square in GF(q).
pub fn buekenhout_metz(tower: &Arc<FieldTower>, alpha: Fq2, beta: Fq2) -> Result<Unital> {
    let t = tower.as_ref();
    if t.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let disc = bm_discriminant(t, alpha, beta);
    if disc.is_zero() || t.is_square_in_subfield(disc)? {
        return Err(Error::Discriminant {
            discriminant: disc.0,
        });
    }
    Unital::new(
        tower.clone(),
        buekenhout_metz_points(t, alpha, beta),
        UnitalKind::BuekenhoutMetz { alpha, beta },
    )
}

/// Smallest-code (α ≠ 0, β) pair giving a valid Buekenhout–Metz unital.
pub fn first_nonclassical_bm_parameters(t: &FieldTower) -> Option<(Fq2, Fq2)> {
    if t.p() == 2 {
        return None;
    }
    t.nonzero_elements().find_map(|a| {
        t.elements().find_map(|b| {
            let d = bm_discriminant(t, a, b);
            (!d.is_zero() && !t.is_square_in_subfield(d).unwrap()).then_some((a, b))
        })
    })
}

/// Reduced row echelon basis over GF(q), grown one row at a time.
struct RowSpace {
    rows: Vec<[Fq2; 9]>,
    pivots: Vec<usize>,
}

impl RowSpace {
    fn insert(&mut self, t: &FieldTower, mut v: [Fq2; 9]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !v[pc].is_zero() {
                let f = v[pc];
                for c in 0..9 {
                    v[c] = t.sub(v[c], t.mul(f, row[c]));
                }
            }
        }
        let Some(pc) = (0..9).find(|&c| !v[c].is_zero()) else {
            return;
        };
        let inv = t.inv(v[pc]).unwrap();
        v = v.map(|c| t.mul(c, inv));
        for row in &mut self.rows {
            if !row[pc].is_zero() {
                let f = row[pc];
                for c in 0..9 {
                    row[c] = t.sub(row[c], t.mul(f, v[c]));
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
    }

    fn kernel(&self, t: &FieldTower) -> Vec<[Fq2; 9]> {
        (0..9)
            .filter(|c| !self.pivots.contains(c))
            .map(|free| {
                let mut k = [Fq2::ZERO; 9];
                k[free] = Fq2::ONE;
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    k[pc] = t.neg(row[free]);
                }
                k
            })
            .collect()
    }
}

// Unknown order: h11, h22, h33, then (u, v) for h12, h13, h23 with h = u + vω.
const OFF_DIAGONAL: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn condition_row(t: &FieldTower, omega: Fq2, x: [Fq2; 3]) -> [Fq2; 9] {
    let mut row = [Fq2::ZERO; 9];
    for i in 0..3 {
        row[i] = t.norm(x[i]);
    }
    for (k, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
        let z = t.mul(t.frobenius(x[i]), x[j]);
        row[3 + 2 * k] = t.trace(z);
        row[4 + 2 * k] = t.trace(t.mul(omega, z));
    }
    row
}

fn gram_from_vector(t: &FieldTower, omega: Fq2, v: &[Fq2; 9]) -> Matrix {
    let mut g = [[Fq2::ZERO; 3]; 3];
    for i in 0..3 {
        g[i][i] = v[i];
    }
    for (k, &(i, j)) in OFF_DIAGONAL.iter().enumerate() {
        let h = t.add(v[3 + 2 * k], t.mul(v[4 + 2 * k], omega));
        g[i][j] = h;
        g[j][i] = t.frobenius(h);
    }
    g
}

/// A non-degenerate Hermitian form whose absolute set is exactly `u`, if any.
///
/// Hermitian forms make up a 9-dimensional GF(q)-space and each point of the
/// unital imposes one GF(q)-linear condition, so this is a kernel
/// computation followed by a rank and set-equality check on each projective
/// kernel element.
pub fn classicality_check(u: &Unital) -> Result<Option<HermitianForm>> {
    let t = u.tower();
    let omega = t.subfield_complement_basis();
    let mut space = RowSpace {
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    for p in u.points() {
        space.insert(t, condition_row(t, omega, p.coords()));
        if space.rows.len() == 9 {
            return Ok(None);
        }
    }
    let basis = space.kernel(t);
    let sub = t.subfield_elements();
    let k = basis.len();
    let total = (sub.len() as u64).pow(k as u32);
    for n in 1..total {
        // base-q digits of n give the combination; keep only first-nonzero = 1
        let mut coeffs = vec![Fq2::ZERO; k];
        let mut rest = n;
        for c in coeffs.iter_mut() {
            *c = sub[(rest % sub.len() as u64) as usize];
            rest /= sub.len() as u64;
        }
        if coeffs.iter().find(|c| !c.is_zero()) != Some(&Fq2::ONE) {
            continue;
        }
        let mut v = [Fq2::ZERO; 9];
        for (c, b) in coeffs.iter().zip(&basis) {
            for i in 0..9 {
                v[i] = t.add(v[i], t.mul(*c, b[i]));
            }
        }
        let form = HermitianForm::new(t, gram_from_vector(t, omega, &v))?;
        if form.rank(t) != 3 {
            continue;
        }
        let abs = form.absolute_points(t);
        if abs == u.points() {
            return Ok(Some(form));
        }
    }
    Ok(None)
}

/// N = |U ∩ H| and whether N ≡ 1 (mod p).
pub fn curve_intersection_congruence(u: &Unital, h: &HermitianForm) -> (usize, bool) {
    let t = u.tower();
    let n = u.points().iter().filter(|p| h.is_absolute(t, p)).count();
    (n, n % t.p() as usize == 1 % t.p() as usize)
}

/// Points in the absolute sets of both forms.
pub fn common_points(t: &FieldTower, a: &HermitianForm, b: &HermitianForm) -> Vec<ProjPoint> {
    all_points(t)
        .into_iter()
        .filter(|p| a.is_absolute(t, p) && b.is_absolute(t, p))
        .collect()
}
