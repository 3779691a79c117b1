//! Local intersection multiplicities of a Hermitian curve with another
//! curve, via the branch of the curve at a point.
//!
//! In the standard frame the curve −X₁^{q+1} + X₂^qX₃ + X₂X₃^q = 0 has at
//! O = (0,0,1) the branch x = t, y = y(t) with y = t^{q+1} − y^q, tangent ℓ_X.
//! Any other point of a non-degenerate Hermitian curve is moved to O by an
//! explicit change of basis before the branch is substituted.

use rayon::prelude::*;
use serde::Serialize;

use crate::collineation::mat_vec;
use crate::error::{Error, Result};
use crate::field::{FieldTower, Fq2};
use crate::plane::{all_points, cross, dot, ProjLine, ProjPoint};
use crate::series::{SeriesOrder, TruncatedSeries};
use crate::unital::HermitianForm;

type Matrix = [[Fq2; 3]; 3];

/// Smallest precision that decides every multiplicity allowed by Bézout.
pub fn default_precision(t: &FieldTower) -> usize {
    let q = t.q() as usize;
    (q + 1) * (q + 1) + 1
}

/// The branch of the standard Hermitian curve at O.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchExpansion {
    y: TruncatedSeries,
}

impl BranchExpansion {
    pub fn y(&self) -> &TruncatedSeries {
        &self.y
    }

    pub fn precision(&self) -> usize {
        self.y.precision()
    }
}

/// Solves y = t^{q+1} − y^q by fixed-point iteration from y₀ = t^{q+1}.
pub fn hermitian_branch(t: &FieldTower, precision: usize) -> Result<BranchExpansion> {
    let q = t.q() as usize;
    if precision < q + 2 {
        return Err(Error::PrecisionTooSmall {
            got: precision,
            need: q + 2,
        });
    }
    let lead = TruncatedSeries::monomial(Fq2::ONE, q + 1, precision);
    let mut y = lead.clone();
    loop {
        let next = lead.sub(t, &y.power_q(t).truncate(precision))?;
        if next == y {
            break;
        }
        y = next;
    }
    // −t^{q+1} + y^q + y must vanish to full precision
    let residual = y.power_q(t).truncate(precision).add(t, &y)?.sub(t, &lead)?;
    debug_assert_eq!(residual.order(), SeriesOrder::AtLeast(precision));
    Ok(BranchExpansion { y })
}

/// A plane curve given by its defining homogeneous polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveEquation {
    Hermitian(HermitianForm),
    /// Σ aᵢXᵢ, not necessarily normalised.
    Line([Fq2; 3]),
}

impl From<HermitianForm> for CurveEquation {
    fn from(h: HermitianForm) -> Self {
        CurveEquation::Hermitian(h)
    }
}

impl From<ProjLine> for CurveEquation {
    fn from(l: ProjLine) -> Self {
        CurveEquation::Line(l.coeffs())
    }
}

impl CurveEquation {
    pub fn degree(&self, t: &FieldTower) -> u32 {
        match self {
            CurveEquation::Hermitian(_) => t.q() + 1,
            CurveEquation::Line(_) => 1,
        }
    }

    pub fn vanishes_at(&self, t: &FieldTower, p: &ProjPoint) -> bool {
        match self {
            CurveEquation::Hermitian(h) => h.is_absolute(t, p),
            CurveEquation::Line(l) => dot(t, *l, p.coords()).is_zero(),
        }
    }

    /// The equation in coordinates x′ with x = A·x′.
    pub fn pullback(&self, t: &FieldTower, a: &Matrix) -> CurveEquation {
        match self {
            CurveEquation::Hermitian(h) => CurveEquation::Hermitian(h.pullback(t, a)),
            CurveEquation::Line(l) => {
                let mut out = [Fq2::ZERO; 3];
                for (j, slot) in out.iter_mut().enumerate() {
                    for i in 0..3 {
                        *slot = t.add(*slot, t.mul(l[i], a[i][j]));
                    }
                }
                CurveEquation::Line(out)
            }
        }
    }

    /// F(s₁, s₂, s₃) for series coordinates.
    fn substitute(&self, t: &FieldTower, s: &[TruncatedSeries; 3], n: usize) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::zero(n);
        match self {
            CurveEquation::Line(l) => {
                for i in 0..3 {
                    if !l[i].is_zero() {
                        acc = acc.add(t, &s[i].scale(t, l[i]))?;
                    }
                }
            }
            CurveEquation::Hermitian(h) => {
                let g = h.gram();
                let sq: Vec<TruncatedSeries> =
                    s.iter().map(|x| x.power_q(t).truncate(n)).collect();
                for i in 0..3 {
                    for j in 0..3 {
                        if g[i][j].is_zero() {
                            continue;
                        }
                        let term = sq[i].mul(t, &s[j])?.truncate(n).scale(t, g[i][j]);
                        acc = acc.add(t, &term)?;
                    }
                }
            }
        }
        Ok(acc)
    }
}

/// I_O(H₁, F) for the standard curve H₁: ord_t F(t, y(t), 1).
pub fn multiplicity_at_origin(
    t: &FieldTower,
    f: &CurveEquation,
    branch: &BranchExpansion,
) -> Result<u32> {
    let need = default_precision(t);
    let n = branch.precision();
    if n < need {
        return Err(Error::PrecisionTooSmall { got: n, need });
    }
    if !f.vanishes_at(t, &ProjPoint::O) {
        return Err(Error::CentreNotOnCurve);
    }
    let s = [
        TruncatedSeries::monomial(Fq2::ONE, 1, n),
        branch.y.clone(),
        TruncatedSeries::one(n),
    ];
    match f.substitute(t, &s, n)?.order() {
        SeriesOrder::Exact(k) => Ok(k as u32),
        SeriesOrder::AtLeast(k) => Err(Error::CommonComponent(k)),
    }
}

/// Columns (a₁, a₂, a₃) with a₃ ∝ P taking the standard form
/// [[−1,0,0],[0,0,1],[0,1,0]] to `h` by pullback.
pub fn canonicalising_matrix(t: &FieldTower, h: &HermitianForm, p: &ProjPoint) -> Result<Matrix> {
    let rank = h.rank(t);
    if rank != 3 {
        return Err(Error::Degenerate(rank));
    }
    if !h.is_absolute(t, p) {
        return Err(Error::NotCommonPoint(*p));
    }
    let g = h.gram();
    let row = |v: [Fq2; 3]| -> [Fq2; 3] {
        let vq = v.map(|c| t.frobenius(c));
        let mut out = [Fq2::ZERO; 3];
        for (j, slot) in out.iter_mut().enumerate() {
            for i in 0..3 {
                *slot = t.add(*slot, t.mul(vq[i], g[i][j]));
            }
        }
        out
    };
    let a3 = p.coords();
    let r_p = row(a3);
    let q_pt = all_points(t)
        .into_iter()
        .find(|x| h.is_absolute(t, x) && !dot(t, r_p, x.coords()).is_zero())
        .ok_or(Error::Degenerate(rank))?;
    let r_q = row(q_pt.coords());
    let s = dot(t, r_q, a3);
    let kappa = t.frobenius(t.inv(s).ok_or(Error::Degenerate(rank))?);
    let a2 = q_pt.coords().map(|c| t.mul(c, kappa));
    let a1 = cross(t, r_p, r_q);
    let n = h.value(t, a1);
    let target = t.neg(t.inv(n).ok_or(Error::Degenerate(rank))?);
    let nu = t
        .nonzero_elements()
        .find(|&x| t.norm(x) == target)
        .ok_or(Error::Degenerate(rank))?;
    let a1 = a1.map(|c| t.mul(c, nu));
    let mut a = [[Fq2::ZERO; 3]; 3];
    for i in 0..3 {
        a[i] = [a1[i], a2[i], a3[i]];
    }
    debug_assert_eq!(h.pullback(t, &a), HermitianForm::curve(t, Fq2::ONE)?);
    debug_assert_eq!(
        ProjPoint::new(t, mat_vec(t, &a, ProjPoint::O.coords()))?,
        *p
    );
    Ok(a)
}

/// I_P(H₁, F) for any non-degenerate Hermitian H₁ through P.
pub fn multiplicity_at(
    t: &FieldTower,
    h1: &HermitianForm,
    f: &CurveEquation,
    p: &ProjPoint,
) -> Result<u32> {
    let a = canonicalising_matrix(t, h1, p)?;
    if !f.vanishes_at(t, p) {
        return Err(Error::NotCommonPoint(*p));
    }
    let branch = hermitian_branch(t, default_precision(t))?;
    multiplicity_at_origin(t, &f.pullback(t, &a), &branch)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointMultiplicity {
    pub coords: String,
    pub multiplicity: u32,
}

/// Local data of H₁ ∩ H₂ summed against the Bézout number (q+1)².
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub points: Vec<PointMultiplicity>,
    /// Number of common points.
    pub n: usize,
    /// Common points other than O and Y∞.
    pub m: usize,
    pub total: u32,
    pub budget: u32,
    /// Points where the curves are tangent (multiplicity above 1).
    pub tangential: usize,
    /// Whether the tangential count forced total = budget to be checked.
    pub equality_checked: bool,
}

pub fn bezout_reconcile(
    t: &FieldTower,
    h1: &HermitianForm,
    h2: &HermitianForm,
) -> Result<MultiplicityReport> {
    let q = t.q();
    let budget = (q + 1) * (q + 1);
    let common: Vec<ProjPoint> = all_points(t)
        .into_iter()
        .filter(|x| h1.is_absolute(t, x) && h2.is_absolute(t, x))
        .collect();
    let f = CurveEquation::Hermitian(*h2);
    let mults = common
        .par_iter()
        .map(|x| multiplicity_at(t, h1, &f, x))
        .collect::<Result<Vec<u32>>>()?;
    let total: u32 = mults.iter().sum();
    let tangential = mults.iter().filter(|&&k| k > 1).count();
    let equality_checked = tangential == q as usize + 1;
    if total > budget || (equality_checked && total != budget) {
        return Err(Error::BezoutMismatch { total, budget });
    }
    let special = common
        .iter()
        .filter(|x| **x == ProjPoint::O || **x == ProjPoint::Y_INF)
        .count();
    Ok(MultiplicityReport {
        points: common
            .iter()
            .zip(&mults)
            .map(|(x, &k)| PointMultiplicity {
                coords: x.to_string(),
                multiplicity: k,
            })
            .collect(),
        n: common.len(),
        m: common.len() - special,
        total,
        budget,
        tangential,
        equality_checked,
    })
}
