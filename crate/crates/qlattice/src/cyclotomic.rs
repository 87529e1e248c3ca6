//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are kept in the canonical reduced form: a polynomial in
//! `zeta_N` of degree below `phi(N)`, obtained by reduction modulo the
//! N-th cyclotomic polynomial. Equality is therefore literal equality of
//! coefficient maps, which is what makes every relation check in the
//! convolution algebra a decision rather than a tolerance.
//!
//! Reduction tables (the cyclotomic polynomial and the expansions of
//! `zeta^k` over the power basis) are memoized per conductor behind a
//! mutex; the cache is write-once per conductor and safe to share.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{root_of_unity, rounding_bound, ComplexBall};
use crate::qmodz::{gcd, lcm};

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Dense integer polynomials, little-endian.
fn poly_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += Integer::from(ai * bj);
        }
    }
    out
}

/// Exact division by a monic divisor; panics if not exact (internal use
/// only, on identities that are exact by construction).
fn poly_div_exact(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let mut rem: Vec<Integer> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd] == 1, "divisor must be monic");
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![Integer::new(); qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd].clone();
        if c == 0 {
            continue;
        }
        quot[i] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= Integer::from(&c * dj);
        }
    }
    assert!(rem.iter().all(|c| *c == 0), "division was not exact");
    quot
}

struct ConductorTable {
    phi: usize,
    /// zeta^k over the power basis, for k = 0 .. 2N-1 (enough for products
    /// of two canonical forms).
    rows: Vec<Vec<Integer>>,
}

fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<Integer>>) -> Vec<Integer> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![Integer::new(); n as usize + 1];
    num[0] = Integer::from(-1);
    num[n as usize] = Integer::from(1);
    let mut den = vec![Integer::from(1)];
    for d in 1..n {
        if n % d == 0 {
            den = poly_mul(&den, &cyclotomic_poly(d, memo));
        }
    }
    let p = poly_div_exact(&num, &den);
    memo.insert(n, p.clone());
    p
}

fn table(n: u64) -> Arc<ConductorTable> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<ConductorTable>>>> = OnceLock::new();
    static POLYS: OnceLock<Mutex<HashMap<u64, Vec<Integer>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    if let Some(t) = cache.get(&n) {
        return t.clone();
    }
    let polys = POLYS.get_or_init(|| Mutex::new(HashMap::new()));
    let phi_poly = {
        let mut memo = polys.lock().unwrap();
        cyclotomic_poly(n, &mut memo)
    };
    let phi = phi_poly.len() - 1;
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(2 * n as usize);
    let mut row = vec![Integer::new(); phi];
    row[0] = Integer::from(1);
    rows.push(row.clone());
    for _k in 1..(2 * n as usize).max(2) {
        // multiply by x, reduce the overflow coefficient against Phi_n
        let top = row[phi - 1].clone();
        for i in (1..phi).rev() {
            row[i] = row[i - 1].clone();
        }
        row[0] = Integer::new();
        if top != 0 {
            for i in 0..phi {
                row[i] -= Integer::from(&top * &phi_poly[i]);
            }
        }
        rows.push(row.clone());
    }
    let t = Arc::new(ConductorTable { phi, rows });
    cache.insert(n, t.clone());
    t
}

/// An element of Q(zeta_N) in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: BTreeMap<u64, Rational>,
}

impl Cyclotomic {
    pub fn zero(conductor: u64) -> Self {
        Cyclotomic { conductor, coeffs: BTreeMap::new() }
    }

    pub fn one(conductor: u64) -> Self {
        Cyclotomic::from_rational(conductor, Rational::from(1))
    }

    pub fn from_rational(conductor: u64, r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if r != 0 {
            coeffs.insert(0, r);
        }
        Cyclotomic { conductor, coeffs }
    }

    /// zeta_N^k, reduced.
    pub fn root(conductor: u64, k: i64) -> Self {
        let kk = k.rem_euclid(conductor as i64) as u64;
        let mut raw = BTreeMap::new();
        raw.insert(kk, Rational::from(1));
        Cyclotomic::reduce(conductor, raw)
    }

    /// Canonicalize an exponent -> coefficient map (exponents arbitrary,
    /// taken mod N first).
    pub fn reduce(conductor: u64, raw: BTreeMap<u64, Rational>) -> Self {
        let t = table(conductor);
        let mut acc = vec![Rational::new(); t.phi];
        for (k, c) in raw {
            if c == 0 {
                continue;
            }
            let row = &t.rows[(k % conductor) as usize];
            for (i, ri) in row.iter().enumerate() {
                if *ri != 0 {
                    acc[i] += Rational::from((c.clone() * ri).into_numer_denom());
                }
            }
        }
        let coeffs = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (i as u64, c))
            .collect();
        Cyclotomic { conductor, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &BTreeMap<u64, Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r == 1).unwrap_or(false)
    }

    /// Some(r) when the element is the rational r.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::new()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    /// Rewrite in the field of conductor `m` (requires N | m).
    pub fn raise_conductor(&self, m: u64) -> Result<Cyclotomic> {
        if m % self.conductor != 0 {
            return Err(Error::LevelMismatch(format!(
                "conductor {} does not divide {}",
                self.conductor, m
            )));
        }
        if m == self.conductor {
            return Ok(self.clone());
        }
        let stride = m / self.conductor;
        let raw = self.coeffs.iter().map(|(k, c)| (k * stride, c.clone())).collect();
        Ok(Cyclotomic::reduce(m, raw))
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = lcm(a.conductor, b.conductor);
        (a.raise_conductor(m).unwrap(), b.raise_conductor(m).unwrap())
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, other);
        for (k, c) in b.coeffs {
            let entry = a.coeffs.entry(k).or_insert_with(Rational::new);
            *entry += c;
            if *entry == 0 {
                a.coeffs.remove(&k);
            }
        }
        a
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, Rational::from(-c.clone()))).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, other);
        let n = a.conductor;
        let t = table(n);
        let mut acc = vec![Rational::new(); t.phi];
        for (ka, ca) in &a.coeffs {
            for (kb, cb) in &b.coeffs {
                let c = Rational::from(ca * cb);
                // ka, kb < phi(n), so ka + kb < 2n and the row table covers it
                let row = &t.rows[(ka + kb) as usize];
                for (i, ri) in row.iter().enumerate() {
                    if *ri != 0 {
                        acc[i] += Rational::from((c.clone() * ri).into_numer_denom());
                    }
                }
            }
        }
        let coeffs = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (i as u64, c))
            .collect();
        Cyclotomic { conductor: n, coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        if *r == 0 {
            return Cyclotomic::zero(self.conductor);
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, Rational::from(c * r))).collect(),
        }
    }

    /// Equality across (possibly different) conductors, decided on the
    /// canonical forms at the common conductor.
    pub fn eq_value(&self, other: &Cyclotomic) -> bool {
        let (a, b) = Cyclotomic::common(self, other);
        a.coeffs == b.coeffs
    }

    /// The Galois map zeta -> zeta^u; requires gcd(u, N) = 1.
    pub fn galois(&self, u: u64) -> Result<Cyclotomic> {
        if gcd(u % self.conductor, self.conductor) != 1 {
            return Err(Error::NonInvertible(format!(
                "exponent {} is not a unit mod {}",
                u, self.conductor
            )));
        }
        let raw = self
            .coeffs
            .iter()
            .map(|(k, c)| ((k * (u % self.conductor)) % self.conductor, c.clone()))
            .collect();
        Ok(Cyclotomic::reduce(self.conductor, raw))
    }

    /// Complex conjugation (zeta -> zeta^{-1}).
    pub fn conj(&self) -> Cyclotomic {
        if self.conductor == 1 {
            return self.clone();
        }
        self.galois(self.conductor - 1).expect("N-1 is a unit mod N")
    }

    /// Complex embedding iota_u: zeta_N -> exp(2 pi i u / N), with a bound
    /// covering the accumulated rounding error.
    pub fn embed(&self, u: u64, prec: u32) -> Result<ComplexBall> {
        if gcd(u % self.conductor.max(1), self.conductor) != 1 && self.conductor > 1 {
            return Err(Error::NonInvertible(format!(
                "embedding exponent {} is not a unit mod {}",
                u, self.conductor
            )));
        }
        let wp = prec + 16;
        let mut total = crate::numeric::BigComplex::zero(wp);
        let mut size = rug::Float::with_val(wp, 1);
        for (k, c) in &self.coeffs {
            let z = root_of_unity(self.conductor, (k * (u % self.conductor)) as i64, wp);
            let cf = rug::Float::with_val(wp, c);
            size += cf.clone().abs();
            total = total.add(&z.scale(&cf));
        }
        let radius = rug::Float::with_val(wp, size * rounding_bound(prec, 8));
        Ok(ComplexBall::new(total, radius))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                if *k == 0 {
                    format!("{}", c)
                } else {
                    format!("{}*z{}^{}", c, self.conductor, k)
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<(u64, String)> =
            self.coeffs.iter().map(|(k, c)| (*k, c.to_string())).collect();
        let mut s = serializer.serialize_struct("Cyclotomic", 2)?;
        s.serialize_field("conductor", &self.conductor)?;
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}
