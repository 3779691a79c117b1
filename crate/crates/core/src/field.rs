//! Arithmetic in GF(q²), q = p^r, with GF(q) as the fixed field of x ↦ x^q.
//!
//! GF(q²) is built once as GF(p)[x]/(f) with deg f = 2r and f primitive, so
//! the class of x is a generator of the multiplicative group. Elements are
//! integer codes: the residue polynomial's coefficients read as little-endian
//! base-p digits. Multiplication goes through log/antilog tables indexed by
//! powers of x; addition is digit-wise (tabulated for small fields).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of GF(q²), stored by its integer code.
#[derive(
    Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fq2(pub u32);

impl Fq2 {
    pub const ZERO: Fq2 = Fq2(0);
    pub const ONE: Fq2 = Fq2(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Above this many elements addition falls back to digit loops instead of a
// q²×q² table.
const ADD_TABLE_LIMIT: u32 = 1024;

/// The tower GF(p) ⊂ GF(q) ⊂ GF(q²). Immutable once built.
#[derive(Clone)]
pub struct FieldTower {
    p: u32,
    r: u32,
    q: u32,
    q2: u32,
    /// Monic modulus, coefficients low degree first (length 2r + 1).
    modulus: Vec<u32>,
    /// exp[i] = code of x^i, doubled so products of logs need no reduction.
    exp: Vec<u32>,
    /// log[code] = i with x^i = code; log[0] is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    /// Prime factors of q² − 1, for order computations.
    group_factors: Vec<u64>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldTower {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Polynomials over GF(p) modulo a fixed monic f, coefficient vectors low
/// degree first. Only used while searching for the modulus.
struct PolyRing<'a> {
    p: u64,
    f: &'a [u64],
}

impl PolyRing<'_> {
    fn degree(&self) -> usize {
        self.f.len() - 1
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.degree();
        let mut prod = vec![0u64; 2 * n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                prod[k - n + j] = (prod[k - n + j] + self.p * self.p - c * self.f[j]) % self.p;
            }
        }
        prod.truncate(n);
        prod
    }

    fn pow_x(&self, mut e: u64) -> Vec<u64> {
        let n = self.degree();
        let mut result = vec![0u64; n];
        result[0] = 1;
        let mut base = vec![0u64; n];
        if n == 1 {
            base[0] = (self.p - self.f[0]) % self.p;
        } else {
            base[1] = 1;
        }
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    fn is_one(v: &[u64]) -> bool {
        v[0] == 1 && v[1..].iter().all(|&c| c == 0)
    }

    /// The class of x has order exactly p^n − 1.
    fn x_is_primitive(&self, group_order: u64, factors: &[u64]) -> bool {
        if self.f[0] == 0 {
            return false;
        }
        if !Self::is_one(&self.pow_x(group_order)) {
            return false;
        }
        factors
            .iter()
            .all(|&l| !Self::is_one(&self.pow_x(group_order / l)))
    }
}

/// Lexicographically smallest monic primitive polynomial of degree n over
/// GF(p), comparing the constant term first.
fn smallest_primitive_polynomial(p: u32, n: u32, group_order: u64, factors: &[u64]) -> Vec<u32> {
    let p64 = p as u64;
    let count = p64.pow(n);
    for k in 0..count {
        // c0 is the most significant digit of k.
        let mut f = vec![0u64; n as usize + 1];
        let mut rest = k;
        for j in (0..n as usize).rev() {
            f[j] = rest % p64;
            rest /= p64;
        }
        f[n as usize] = 1;
        let ring = PolyRing { p: p64, f: &f };
        if ring.x_is_primitive(group_order, factors) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// Builds GF(q²) for q = p^r.
pub fn make_tower(p: u32, r: u32) -> Result<FieldTower> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::ZeroExponent);
    }
    let n = 2 * r;
    let q2 = (p as u64)
        .checked_pow(n)
        .filter(|&v| v < (1u64 << 32))
        .ok_or(Error::FieldTooLarge { p, n })?;
    let q = (p as u64).pow(r);
    let group_order = q2 - 1;
    let group_factors = prime_factors(group_order);
    let modulus = smallest_primitive_polynomial(p, n, group_order, &group_factors);

    let q2 = q2 as u32;
    let n = n as usize;
    let mut exp = vec![0u32; 2 * (q2 as usize - 1)];
    let mut log = vec![0u32; q2 as usize];
    let mut digits = vec![0u32; n];
    digits[0] = 1;
    for i in 0..(q2 - 1) as usize {
        let code = encode_digits(&digits, p);
        exp[i] = code;
        exp[i + q2 as usize - 1] = code;
        log[code as usize] = i as u32;
        // multiply by x
        let carry = digits[n - 1];
        for j in (1..n).rev() {
            digits[j] = (digits[j - 1] + p * p - carry * modulus[j] % p) % p;
        }
        digits[0] = (p - carry * modulus[0] % p) % p;
    }

    let neg = (0..q2)
        .map(|c| {
            let d = decode_digits(c, p, n);
            encode_digits(&d.iter().map(|&x| (p - x) % p).collect::<Vec<_>>(), p)
        })
        .collect();

    let mut tower = FieldTower {
        p,
        r,
        q: q as u32,
        q2,
        modulus,
        exp,
        log,
        neg,
        add: None,
        group_factors,
    };
    if q2 <= ADD_TABLE_LIMIT {
        let mut table = vec![0u32; (q2 * q2) as usize];
        for a in 0..q2 {
            for b in 0..q2 {
                table[(a * q2 + b) as usize] = tower.add_digits(a, b);
            }
        }
        tower.add = Some(table);
    }
    Ok(tower)
}

fn encode_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &x| acc * p + x)
}

fn decode_digits(mut code: u32, p: u32, n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n];
    for slot in d.iter_mut() {
        *slot = code % p;
        code /= p;
    }
    d
}

impl FieldTower {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Order of the subfield GF(q).
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of GF(q²).
    pub fn q2(&self) -> u32 {
        self.q2
    }

    /// Monic modulus of GF(q²) over GF(p), low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        2 * self.r as usize
    }

    pub fn element(&self, code: u32) -> Result<Fq2> {
        if code < self.q2 {
            Ok(Fq2(code))
        } else {
            Err(Error::InvalidElement(code))
        }
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> Fq2 {
        Fq2(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq2> {
        (0..self.q2).map(Fq2)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq2> {
        (1..self.q2).map(Fq2)
    }

    /// The class of x in GF(p)[x]/(f); a primitive element.
    pub fn primitive_root(&self) -> Fq2 {
        Fq2(self.exp[1])
    }

    /// λ^k for the primitive root λ.
    pub fn exp(&self, k: u64) -> Fq2 {
        Fq2(self.exp[(k % (self.q2 as u64 - 1)) as usize])
    }

    /// Discrete log to the primitive root.
    pub fn log(&self, x: Fq2) -> Result<u32> {
        if x.is_zero() {
            Err(Error::ZeroElement)
        } else {
            Ok(self.log[x.0 as usize])
        }
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Fq2, b: Fq2) -> Fq2 {
        match &self.add {
            Some(t) => Fq2(t[(a.0 * self.q2 + b.0) as usize]),
            None => Fq2(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq2) -> Fq2 {
        Fq2(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq2, b: Fq2) -> Fq2 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq2, b: Fq2) -> Fq2 {
        if a.is_zero() || b.is_zero() {
            return Fq2::ZERO;
        }
        Fq2(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fq2) -> Option<Fq2> {
        if a.is_zero() {
            return None;
        }
        let l = self.log[a.0 as usize];
        Some(Fq2(self.exp[((self.q2 - 1 - l) % (self.q2 - 1)) as usize]))
    }

    /// a / b. Panics if b is zero.
    #[inline]
    pub fn div(&self, a: Fq2, b: Fq2) -> Fq2 {
        self.mul(a, self.inv(b).expect("division by zero in GF(q^2)"))
    }

    pub fn pow(&self, a: Fq2, e: u64) -> Fq2 {
        if e == 0 {
            return Fq2::ONE;
        }
        if a.is_zero() {
            return Fq2::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        self.exp(l * (e % (self.q2 as u64 - 1)))
    }

    /// x ↦ x^q, the involutory automorphism of GF(q²) over GF(q).
    #[inline]
    pub fn frobenius(&self, a: Fq2) -> Fq2 {
        if a.is_zero() {
            return a;
        }
        let l = self.log[a.0 as usize] as u64;
        Fq2(self.exp[((l * self.q as u64) % (self.q2 as u64 - 1)) as usize])
    }

    /// x^{q+1}.
    #[inline]
    pub fn norm(&self, a: Fq2) -> Fq2 {
        self.mul(a, self.frobenius(a))
    }

    /// x^q + x.
    #[inline]
    pub fn trace(&self, a: Fq2) -> Fq2 {
        self.add(a, self.frobenius(a))
    }

    #[inline]
    pub fn in_subfield(&self, a: Fq2) -> bool {
        self.frobenius(a) == a
    }

    /// The q elements of GF(q), ascending by code.
    pub fn subfield_elements(&self) -> Vec<Fq2> {
        self.elements().filter(|&x| self.in_subfield(x)).collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq2) -> Result<u64> {
        let l = self.log(a)? as u64;
        let n = self.q2 as u64 - 1;
        Ok(n / gcd(l, n))
    }

    /// Whether `a` generates GF(q²)* (or GF(q)* when `subfield` is set).
    pub fn is_primitive(&self, a: Fq2, subfield: bool) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let target = if subfield {
            if !self.in_subfield(a) {
                return Err(Error::NotInSubfield(a.0));
            }
            self.q as u64 - 1
        } else {
            self.q2 as u64 - 1
        };
        Ok(self.order(a)? == target)
    }

    /// Euler's criterion in GF(q): nonzero d with d^{(q−1)/2} = 1.
    /// In characteristic 2 every element of GF(q) is a square.
    pub fn is_square_in_subfield(&self, d: Fq2) -> Result<bool> {
        if !self.in_subfield(d) {
            return Err(Error::NotInSubfield(d.0));
        }
        if d.is_zero() || self.p == 2 {
            return Ok(true);
        }
        Ok(self.pow(d, (self.q as u64 - 1) / 2) == Fq2::ONE)
    }

    /// Prime factors of q² − 1.
    pub fn group_factors(&self) -> &[u64] {
        &self.group_factors
    }

    /// Smallest-code element outside GF(q); with 1 it spans GF(q²) over GF(q).
    pub fn subfield_complement_basis(&self) -> Fq2 {
        self.elements()
            .find(|&x| !self.in_subfield(x))
            .expect("GF(q^2) is a proper extension")
    }

    /// Splits `a` as u + v·ω over GF(q), ω = `subfield_complement_basis()`.
    pub fn subfield_coordinates(&self, a: Fq2) -> (Fq2, Fq2) {
        // a = u + vω, a^q = u + vω^q  ⇒  v = (a − a^q)/(ω − ω^q)
        let w = self.subfield_complement_basis();
        let v = self.div(
            self.sub(a, self.frobenius(a)),
            self.sub(w, self.frobenius(w)),
        );
        let u = self.sub(a, self.mul(v, w));
        (u, v)
    }

    /// Digits of a code, little-endian base p.
    pub fn digits(&self, a: Fq2) -> Vec<u32> {
        decode_digits(a.0, self.p, self.degree())
    }

    /// Header used by every file format: `tower p=<p> r=<r> modulus=<c0,c1,..>`.
    pub fn header(&self) -> String {
        let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!("tower p={} r={} modulus={}", self.p, self.r, m.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_pow(t: &FieldTower, a: Fq2, e: u64) -> Fq2 {
        (0..e).fold(Fq2::ONE, |acc, _| t.mul(acc, a))
    }

    #[test]
    fn tower_parameters() {
        let t = make_tower(3, 1).unwrap();
        assert_eq!((t.q(), t.q2()), (3, 9));
        let t = make_tower(2, 2).unwrap();
        assert_eq!((t.q(), t.q2()), (4, 16));
        let t = make_tower(5, 1).unwrap();
        assert_eq!((t.q(), t.q2()), (5, 25));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_tower(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_tower(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(make_tower(3, 0).unwrap_err(), Error::ZeroExponent);
        assert!(matches!(
            make_tower(2, 16),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(make_tower(65537, 1), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn gf9_modulus_is_x2_plus_x_plus_2() {
        // x²+1, x²+x+1, x²+2x+1 and x²+2 all fail; x²+x+2 is primitive.
        let t = make_tower(3, 1).unwrap();
        assert_eq!(t.modulus(), &[2, 1, 1]);
    }

    #[test]
    fn gf25_root_has_order_24_by_powering() {
        let t = make_tower(5, 1).unwrap();
        let root = t.primitive_root();
        let mut x = root;
        let mut k = 1;
        while x != Fq2::ONE {
            x = t.mul(x, root);
            k += 1;
        }
        assert_eq!(k, 24);
    }

    #[test]
    fn frobenius_fixed_points_and_involution() {
        for (p, r) in [(3, 1), (2, 2), (5, 1), (2, 1)] {
            let t = make_tower(p, r).unwrap();
            assert_eq!(t.frobenius(Fq2::ZERO), Fq2::ZERO);
            assert_eq!(t.frobenius(Fq2::ONE), Fq2::ONE);
            for x in t.elements() {
                assert_eq!(t.frobenius(t.frobenius(x)), x);
                assert_eq!(t.frobenius(x), naive_pow(&t, x, t.q() as u64));
            }
            for x in t.subfield_elements() {
                assert_eq!(t.frobenius(x), x);
            }
        }
    }

    #[test]
    fn subfield_has_q_elements_and_is_closed() {
        for (p, r) in [(3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3)] {
            let t = make_tower(p, r).unwrap();
            let sub = t.subfield_elements();
            assert_eq!(sub.len(), t.q() as usize);
            for &a in &sub {
                for &b in &sub {
                    assert!(t.in_subfield(t.add(a, b)));
                    assert!(t.in_subfield(t.mul(a, b)));
                    if !b.is_zero() {
                        assert!(t.in_subfield(t.div(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn norm_and_trace_basics() {
        let t = make_tower(3, 1).unwrap();
        assert_eq!(t.norm(Fq2::ZERO), Fq2::ZERO);
        assert_eq!(t.trace(Fq2::ZERO), Fq2::ZERO);
        assert_eq!(t.norm(Fq2::ONE), Fq2::ONE);
        assert_eq!(t.trace(Fq2::ONE), Fq2(2));
    }

    #[test]
    fn norm_is_q_plus_one_to_one_on_gf9() {
        let t = make_tower(3, 1).unwrap();
        let mut fibres = std::collections::BTreeMap::new();
        for x in t.nonzero_elements() {
            let n = t.norm(x);
            assert!(t.in_subfield(n) && !n.is_zero());
            *fibres.entry(n).or_insert(0) += 1;
        }
        assert_eq!(fibres.len(), 2);
        assert!(fibres.values().all(|&c| c == 4));
    }

    #[test]
    fn norm_multiplicative_trace_additive() {
        for (p, r) in [(3, 1), (2, 2)] {
            let t = make_tower(p, r).unwrap();
            for x in t.elements() {
                assert!(t.in_subfield(t.norm(x)) && t.in_subfield(t.trace(x)));
                for y in t.elements() {
                    assert_eq!(t.norm(t.mul(x, y)), t.mul(t.norm(x), t.norm(y)));
                    assert_eq!(t.trace(t.add(x, y)), t.add(t.trace(x), t.trace(y)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, r) in [(3, 1), (2, 2)] {
            let t = make_tower(p, r).unwrap();
            for a in t.elements() {
                assert_eq!(t.add(a, t.neg(a)), Fq2::ZERO);
                if !a.is_zero() {
                    assert_eq!(t.mul(a, t.inv(a).unwrap()), Fq2::ONE);
                }
                for b in t.elements() {
                    assert_eq!(t.add(a, b), t.add(b, a));
                    assert_eq!(t.mul(a, b), t.mul(b, a));
                    for c in t.elements() {
                        assert_eq!(t.add(t.add(a, b), c), t.add(a, t.add(b, c)));
                        assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
                        assert_eq!(
                            t.mul(a, t.add(b, c)),
                            t.add(t.mul(a, b), t.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn digit_addition_matches_table() {
        // GF(7^2) has 49 elements and uses the table; GF(3^4) has 81.
        for (p, r) in [(7, 1), (3, 2)] {
            let t = make_tower(p, r).unwrap();
            for a in t.elements() {
                for b in t.elements() {
                    assert_eq!(t.add(a, b).0, t.add_digits(a.0, b.0));
                }
            }
        }
        // GF(2^12) is past the table limit: check against the digit definition.
        let t = make_tower(2, 6).unwrap();
        assert!(t.add.is_none());
        assert_eq!(t.add(Fq2(0b1010), Fq2(0b0110)), Fq2(0b1100));
    }

    #[test]
    fn primitive_elements() {
        let t = make_tower(3, 1).unwrap();
        assert!(!t.is_primitive(Fq2::ONE, false).unwrap());
        assert!(t.is_primitive(t.primitive_root(), false).unwrap());
        assert_eq!(t.is_primitive(Fq2::ZERO, false), Err(Error::ZeroElement));

        let t = make_tower(2, 2).unwrap();
        let count = t
            .nonzero_elements()
            .filter(|&x| t.is_primitive(x, false).unwrap())
            .count();
        let oracle = t
            .nonzero_elements()
            .filter(|&x| {
                let mut y = x;
                let mut k = 1;
                while y != Fq2::ONE {
                    y = t.mul(y, x);
                    k += 1;
                }
                k == 15
            })
            .count();
        assert_eq!(count, 8);
        assert_eq!(count, oracle);
    }

    #[test]
    fn subfield_primitivity() {
        let t = make_tower(5, 1).unwrap();
        let lambda = t.primitive_root();
        let mu = t.norm(lambda);
        assert!(t.is_primitive(mu, true).unwrap());
        assert_eq!(
            t.is_primitive(lambda, true),
            Err(Error::NotInSubfield(lambda.0))
        );
    }

    #[test]
    fn euler_criterion_counts() {
        let t = make_tower(5, 1).unwrap();
        let squares = t
            .subfield_elements()
            .into_iter()
            .filter(|&d| !d.is_zero() && t.is_square_in_subfield(d).unwrap())
            .count();
        assert_eq!(squares, 2);
    }

    #[test]
    fn subfield_coordinates_reconstruct() {
        let t = make_tower(3, 1).unwrap();
        let w = t.subfield_complement_basis();
        for a in t.elements() {
            let (u, v) = t.subfield_coordinates(a);
            assert!(t.in_subfield(u) && t.in_subfield(v));
            assert_eq!(t.add(u, t.mul(v, w)), a);
        }
    }

    #[test]
    fn deterministic_construction() {
        let a = make_tower(2, 3).unwrap();
        let b = make_tower(2, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.exp, b.exp);
        assert_eq!(a.header(), b.header());
    }
}
