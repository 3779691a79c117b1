//! Power series over GF(q²) truncated at an explicit precision.
//!
//! A series of precision N knows its coefficients of t⁰ … t^{N−1}; everything
//! from t^N on is unknown. Results never claim more precision than their
//! operands support.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldTower, Fq2};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Fq2>,
}

/// ord_t of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrder {
    Exact(usize),
    /// Every known coefficient vanishes.
    AtLeast(usize),
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self, self.precision())
    }
}

/// Sparse `exponent:coefficient` list, e.g. `4:1 12:2 36:1`.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{i}:{c}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" "))
        }
    }
}

impl TruncatedSeries {
    pub fn zero(precision: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Fq2::ZERO; precision],
        }
    }

    /// c·t^e to the given precision.
    pub fn monomial(c: Fq2, e: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if e < precision {
            s.coeffs[e] = c;
        }
        s
    }

    pub fn one(precision: usize) -> Self {
        Self::monomial(Fq2::ONE, 0, precision)
    }

    pub fn from_coeffs(coeffs: Vec<Fq2>) -> Self {
        TruncatedSeries { coeffs }
    }

    /// Builds from sparse (exponent, coefficient) terms.
    pub fn from_terms(terms: &[(usize, Fq2)], precision: usize) -> Self {
        let mut s = Self::zero(precision);
        for &(e, c) in terms {
            if e < precision {
                s.coeffs[e] = c;
            }
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> Option<Fq2> {
        self.coeffs.get(i).copied()
    }

    pub fn coeffs(&self) -> &[Fq2] {
        &self.coeffs
    }

    pub fn truncate(mut self, precision: usize) -> Self {
        self.coeffs.truncate(precision);
        self
    }

    pub fn order(&self) -> SeriesOrder {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => SeriesOrder::Exact(i),
            None => SeriesOrder::AtLeast(self.precision()),
        }
    }

    fn checked(coeffs: Vec<Fq2>) -> Result<Self> {
        if coeffs.is_empty() {
            Err(Error::PrecisionUnderflow)
        } else {
            Ok(TruncatedSeries { coeffs })
        }
    }

    pub fn add(&self, t: &FieldTower, other: &Self) -> Result<Self> {
        Self::checked(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| t.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, t: &FieldTower, other: &Self) -> Result<Self> {
        Self::checked(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| t.sub(a, b))
                .collect(),
        )
    }

    pub fn neg(&self, t: &FieldTower) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&c| t.neg(c)).collect(),
        }
    }

    pub fn scale(&self, t: &FieldTower, c: Fq2) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&a| t.mul(a, c)).collect(),
        }
    }

    /// Multiplication by t^k; precision grows by k.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Fq2::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        TruncatedSeries { coeffs }
    }

    /// Product. If a = O(t^u) exactly known to N_a and b likewise, the
    /// product is known to min(N_a + v_b, N_b + v_a), v the lower order.
    pub fn mul(&self, t: &FieldTower, other: &Self) -> Result<Self> {
        let va = lower_order(self);
        let vb = lower_order(other);
        let n = (self.precision() + vb).min(other.precision() + va);
        let mut coeffs = vec![Fq2::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= n {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] = t.add(coeffs[i + j], t.mul(a, b));
            }
        }
        Self::checked(coeffs)
    }

    /// s(t)^q = Σ aᵢ^q t^{iq} (characteristic p). Precision becomes N·q.
    pub fn power_q(&self, t: &FieldTower) -> Self {
        let q = t.q() as usize;
        let mut coeffs = vec![Fq2::ZERO; self.precision() * q];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i * q] = t.frobenius(a);
        }
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, t: &FieldTower, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.precision());
        for _ in 0..e {
            acc = acc.mul(t, self)?;
        }
        Ok(acc)
    }

    /// self(inner(t)) for inner with zero constant term.
    pub fn compose(&self, t: &FieldTower, inner: &Self) -> Result<Self> {
        if inner.coeff(0) != Some(Fq2::ZERO) {
            return Err(Error::PrecisionUnderflow);
        }
        let v = lower_order(inner).max(1);
        let n = (self.precision() * v).min(inner.precision());
        let inner = inner.clone().truncate(n);
        let mut acc = Self::zero(n);
        let mut power = Self::one(n);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if k * v >= n {
                break;
            }
            if !c.is_zero() {
                acc = acc.add(t, &power.scale(t, c))?;
            }
            power = power.mul(t, &inner)?.truncate(n);
        }
        Ok(acc)
    }
}

/// ord_t if determinate, else the precision (a lower bound).
fn lower_order(s: &TruncatedSeries) -> usize {
    match s.order() {
        SeriesOrder::Exact(k) => k,
        SeriesOrder::AtLeast(n) => n,
    }
}
