//! The convolution *-algebra of the one-dimensional commensurability
//! groupoid at finite level, with its standard generators and relations.
//!
//! An element is a finitely supported function on pairs `(r, rho)` with
//! `r` a positive rational and `rho` a level-N residue, subject to the
//! membership constraint that `r * rho` stays integral (for `r = p/q`
//! reduced: `q | rho`). Products follow the groupoid convolution
//!
//! ```text
//! (f * g)(r, rho) = sum over s with s*rho integral of f(r/s, s*rho) g(s, rho)
//! ```
//!
//! and the involution is `f*(r, rho) = conj(f(1/r, r*rho))`.
//!
//! Levels are managed explicitly. A fixed level N cannot represent the
//! division `rho / q` faithfully (it is only determined mod `N/q`), so
//! binary operations raise the working level just far enough - using the
//! effective dependence level of each coefficient function - for every
//! lookup they perform to be determined. Results therefore come back at a
//! level that may be a proper multiple of the operands'; comparisons
//! always lift both sides to a common level first.
//!
//! Coefficients are either exact cyclotomic numbers (relation checking is
//! then a decision) or arbitrary-precision complex values.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::numeric::{root_of_unity, BigComplex};
use crate::qmodz::{lcm, QmodZ};
use crate::ratio::PosRatio;

/// Coefficient mode of an element. Numeric mode carries its precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric(u32),
}

/// Values of a locally constant function on level-N residues, one slot per
/// residue class. The two variants are never mixed inside one element.
#[derive(Debug, Clone, PartialEq)]
pub enum CylValues {
    Exact(Vec<Cyclotomic>),
    Numeric(Vec<BigComplex>),
}

impl CylValues {
    fn len(&self) -> usize {
        match self {
            CylValues::Exact(v) => v.len(),
            CylValues::Numeric(v) => v.len(),
        }
    }

    fn is_zero_at(&self, i: usize) -> bool {
        match self {
            CylValues::Exact(v) => v[i].is_zero(),
            CylValues::Numeric(v) => v[i].is_zero(),
        }
    }

    fn mode(&self) -> Mode {
        match self {
            CylValues::Exact(_) => Mode::Exact,
            CylValues::Numeric(v) => {
                Mode::Numeric(v.iter().map(|c| c.prec()).max().unwrap_or(64))
            }
        }
    }
}

/// A locally constant function on residues at a fixed level.
#[derive(Debug, Clone, PartialEq)]
pub struct CylFunction {
    level: u64,
    values: CylValues,
}

impl CylFunction {
    pub fn exact(level: u64, values: Vec<Cyclotomic>) -> Result<Self> {
        if values.len() != level as usize {
            return Err(Error::LevelMismatch(format!(
                "expected {} values, got {}",
                level,
                values.len()
            )));
        }
        Ok(CylFunction { level, values: CylValues::Exact(values) })
    }

    pub fn numeric(level: u64, values: Vec<BigComplex>) -> Result<Self> {
        if values.len() != level as usize {
            return Err(Error::LevelMismatch(format!(
                "expected {} values, got {}",
                level,
                values.len()
            )));
        }
        Ok(CylFunction { level, values: CylValues::Numeric(values) })
    }

    pub fn constant_one(level: u64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => CylFunction {
                level,
                values: CylValues::Exact(vec![Cyclotomic::one(level); level as usize]),
            },
            Mode::Numeric(p) => CylFunction {
                level,
                values: CylValues::Numeric(vec![BigComplex::one(p); level as usize]),
            },
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn mode(&self) -> Mode {
        self.values.mode()
    }

    pub fn exact_values(&self) -> Option<&[Cyclotomic]> {
        match &self.values {
            CylValues::Exact(v) => Some(v),
            CylValues::Numeric(_) => None,
        }
    }

    pub fn numeric_values(&self) -> Option<&[BigComplex]> {
        match &self.values {
            CylValues::Numeric(v) => Some(v),
            CylValues::Exact(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.values.len()).all(|i| self.values.is_zero_at(i))
    }

    /// Replicate to a multiple level (locally constant refinement).
    pub fn raise_level(&self, m: u64) -> Result<CylFunction> {
        if m % self.level != 0 {
            return Err(Error::LevelMismatch(format!(
                "{} is not a multiple of level {}",
                m, self.level
            )));
        }
        if m == self.level {
            return Ok(self.clone());
        }
        let values = match &self.values {
            CylValues::Exact(v) => CylValues::Exact(
                (0..m).map(|i| v[(i % self.level) as usize].clone()).collect(),
            ),
            CylValues::Numeric(v) => CylValues::Numeric(
                (0..m).map(|i| v[(i % self.level) as usize].clone()).collect(),
            ),
        };
        Ok(CylFunction { level: m, values })
    }

    /// The smallest divisor M of the level such that the function only
    /// depends on the residue mod M.
    pub fn dependence_level(&self) -> u64 {
        'outer: for m in (1..=self.level).filter(|m| self.level % m == 0) {
            for i in 0..self.level as usize {
                let j = i % m as usize;
                let equal = match &self.values {
                    CylValues::Exact(v) => v[i].eq_value(&v[j]),
                    CylValues::Numeric(v) => v[i] == v[j],
                };
                if !equal {
                    continue 'outer;
                }
            }
            return m;
        }
        self.level
    }

    fn zero_values(level: u64, mode: Mode) -> CylValues {
        match mode {
            Mode::Exact => CylValues::Exact(vec![Cyclotomic::zero(level); level as usize]),
            Mode::Numeric(p) => CylValues::Numeric(vec![BigComplex::zero(p); level as usize]),
        }
    }
}

/// A finitely supported element of the groupoid convolution algebra.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    level: u64,
    mode: Mode,
    terms: BTreeMap<PosRatio, CylFunction>,
}

impl AlgebraElement {
    pub fn zero(level: u64, mode: Mode) -> Self {
        AlgebraElement { level, mode, terms: BTreeMap::new() }
    }

    /// The multiplicative identity: the constant 1 at ratio 1.
    pub fn identity(level: u64, mode: Mode) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(PosRatio::one(), CylFunction::constant_one(level, mode));
        AlgebraElement { level, mode, terms }
    }

    /// Build from explicit terms, enforcing the membership constraint
    /// (entries at residues not divisible by the ratio denominator are
    /// required to be zero and are zeroed).
    pub fn from_terms(level: u64, mode: Mode, terms: BTreeMap<PosRatio, CylFunction>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (ratio, f) in terms {
            if f.level() != level {
                return Err(Error::LevelMismatch(format!(
                    "term at ratio {} has level {}, element level is {}",
                    ratio,
                    f.level(),
                    level
                )));
            }
            let kind_matches = matches!(
                (f.mode(), mode),
                (Mode::Exact, Mode::Exact) | (Mode::Numeric(_), Mode::Numeric(_))
            );
            if !kind_matches && !f.is_zero() {
                return Err(Error::ModeMismatch(format!(
                    "term at ratio {} does not match element mode",
                    ratio
                )));
            }
            if ratio.denom() > 1 && level % ratio.denom() != 0 {
                return Err(Error::LevelMismatch(format!(
                    "ratio {} not representable at level {}",
                    ratio, level
                )));
            }
            let f = enforce_membership(&ratio, f);
            if !f.is_zero() {
                out.insert(ratio, f);
            }
        }
        Ok(AlgebraElement { level, mode, terms: out })
    }

    /// The generator attached to a torsion class: supported at ratio 1
    /// with the character value `exp(2 pi i rho(r))` at each residue.
    pub fn gen_e(r: &QmodZ, level: u64, mode: Mode) -> Result<Self> {
        let b = r.denom();
        if level % b != 0 {
            return Err(Error::LevelMismatch(format!(
                "generator argument {} needs a level divisible by {}, got {}",
                r, b, level
            )));
        }
        let values = match mode {
            Mode::Exact => CylValues::Exact(
                (0..level)
                    .map(|rho| {
                        let k = character_exponent(rho, r, level);
                        Cyclotomic::root(level, k as i64)
                    })
                    .collect(),
            ),
            Mode::Numeric(p) => CylValues::Numeric(
                (0..level)
                    .map(|rho| {
                        let k = character_exponent(rho, r, level);
                        root_of_unity(level, k as i64, p)
                    })
                    .collect(),
            ),
        };
        let mut terms = BTreeMap::new();
        terms.insert(PosRatio::one(), CylFunction { level, values });
        Ok(AlgebraElement { level, mode, terms })
    }

    /// The isometry generator at a natural number n: the indicator of
    /// ratio n. Requires n | level so that its adjoint stays representable.
    pub fn gen_mu(n: u64, level: u64, mode: Mode) -> Result<Self> {
        if n == 0 {
            return Err(Error::DomainError("mu index must be positive".into()));
        }
        if level % n != 0 {
            return Err(Error::LevelMismatch(format!(
                "mu index {} must divide the level {}",
                n, level
            )));
        }
        let mut terms = BTreeMap::new();
        terms.insert(PosRatio::from_integer(n)?, CylFunction::constant_one(level, mode));
        Ok(AlgebraElement { level, mode, terms })
    }

    /// Adjoint of `gen_mu(n)`: the indicator of ratio 1/n on its allowed
    /// set (residues divisible by n).
    pub fn gen_mu_star(n: u64, level: u64, mode: Mode) -> Result<Self> {
        Self::gen_mu(n, level, mode)?.involution()
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn terms(&self) -> &BTreeMap<PosRatio, CylFunction> {
        &self.terms
    }

    pub fn support(&self) -> Vec<PosRatio> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_mode(&self, other: &AlgebraElement) -> Result<()> {
        match (self.mode, other.mode) {
            (Mode::Exact, Mode::Exact) => Ok(()),
            (Mode::Numeric(_), Mode::Numeric(_)) => Ok(()),
            _ => Err(Error::ModeMismatch(
                "cannot combine exact and numeric elements".into(),
            )),
        }
    }

    pub fn raise_level(&self, m: u64) -> Result<AlgebraElement> {
        if m % self.level != 0 {
            return Err(Error::LevelMismatch(format!(
                "{} is not a multiple of level {}",
                m, self.level
            )));
        }
        let mut terms = BTreeMap::new();
        for (ratio, f) in &self.terms {
            terms.insert(*ratio, enforce_membership(ratio, f.raise_level(m)?));
        }
        Ok(AlgebraElement { level: m, mode: self.mode, terms })
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_mode(other)?;
        let level = lcm(self.level, other.level);
        let a = self.raise_level(level)?;
        let b = other.raise_level(level)?;
        let mut terms = a.terms;
        for (ratio, f) in b.terms {
            match terms.remove(&ratio) {
                None => {
                    terms.insert(ratio, f);
                }
                Some(g) => {
                    let sum = add_cyl(&g, &f)?;
                    if !sum.is_zero() {
                        terms.insert(ratio, sum);
                    }
                }
            }
        }
        Ok(AlgebraElement { level, mode: self.mode, terms })
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale_rational(&Rational::from(-1))
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.neg())
    }

    pub fn scale_rational(&self, c: &Rational) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        if *c != 0 {
            for (ratio, f) in &self.terms {
                let values = match &f.values {
                    CylValues::Exact(v) => {
                        CylValues::Exact(v.iter().map(|x| x.scale(c)).collect())
                    }
                    CylValues::Numeric(v) => {
                        let p = self.precision();
                        let cf = Float::with_val(p, c);
                        CylValues::Numeric(v.iter().map(|x| x.scale(&cf)).collect())
                    }
                };
                terms.insert(*ratio, CylFunction { level: f.level, values });
            }
        }
        AlgebraElement { level: self.level, mode: self.mode, terms }
    }

    fn precision(&self) -> u32 {
        match self.mode {
            Mode::Numeric(p) => p,
            Mode::Exact => 0,
        }
    }

    /// Groupoid convolution. The working level is raised so that every
    /// residue division performed by the sum is determined; see the module
    /// notes.
    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_mode(other)?;
        let base = lcm(self.level, other.level);
        // level needed: for each pair (x-term r1, y-term s = p/q), lookups
        // of x at s*rho require q * dep(r1-term) | level; the product
        // ratio's denominator must divide it as well.
        let mut needed = base;
        let x_dep: BTreeMap<PosRatio, u64> = self
            .terms
            .iter()
            .map(|(r, f)| (*r, f.dependence_level().max(r.denom())))
            .collect();
        for s in other.terms.keys() {
            let q = s.denom();
            for (r1, dep) in &x_dep {
                needed = lcm(needed, q * dep);
                needed = lcm(needed, r1.mul(s).denom());
            }
        }
        let level = needed;
        let x = self.raise_level(level)?;
        let y = other.raise_level(level)?;

        let mut terms: BTreeMap<PosRatio, CylFunction> = BTreeMap::new();
        for (s, g) in &y.terms {
            let (p, q) = (s.numer(), s.denom());
            for (r1, f) in &x.terms {
                let out_ratio = r1.mul(s);
                for rho in 0..level {
                    if rho % q != 0 {
                        continue;
                    }
                    if g.values.is_zero_at(rho as usize) {
                        continue;
                    }
                    // s * rho as an exact integer representative
                    let s_rho = ((rho / q) as u128 * p as u128 % level as u128) as u64;
                    if f.values.is_zero_at(s_rho as usize) {
                        continue;
                    }
                    let entry = terms.entry(out_ratio).or_insert_with(|| CylFunction {
                        level,
                        values: CylFunction::zero_values(level, self.mode),
                    });
                    accumulate_product(entry, rho as usize, f, s_rho as usize, g, rho as usize);
                }
            }
        }
        let terms = terms
            .into_iter()
            .map(|(ratio, f)| (ratio, enforce_membership(&ratio, f)))
            .filter(|(_, f)| !f.is_zero())
            .collect();
        Ok(AlgebraElement { level, mode: self.mode, terms })
    }

    /// The *-involution. The result level is raised so that the flipped
    /// divisions are determined.
    pub fn involution(&self) -> Result<AlgebraElement> {
        let mut needed = self.level;
        for (r, f) in &self.terms {
            let dep = f.dependence_level().max(r.denom());
            needed = lcm(needed, r.numer() * dep);
        }
        let level = needed;
        let x = self.raise_level(level)?;
        let mut terms = BTreeMap::new();
        for (r, f) in &x.terms {
            let starred = r.inv();
            let (p, q) = (r.numer(), r.denom());
            let values = match (&f.values, self.mode) {
                (CylValues::Exact(v), _) => CylValues::Exact(
                    (0..level)
                        .map(|rho| {
                            if rho % p != 0 {
                                Cyclotomic::zero(level)
                            } else {
                                let inner = ((rho / p) as u128 * q as u128 % level as u128) as u64;
                                v[inner as usize].conj()
                            }
                        })
                        .collect(),
                ),
                (CylValues::Numeric(v), Mode::Numeric(prec)) => CylValues::Numeric(
                    (0..level)
                        .map(|rho| {
                            if rho % p != 0 {
                                BigComplex::zero(prec)
                            } else {
                                let inner = ((rho / p) as u128 * q as u128 % level as u128) as u64;
                                v[inner as usize].conj()
                            }
                        })
                        .collect(),
                ),
                _ => unreachable!("mode is consistent by construction"),
            };
            let g = enforce_membership(&starred, CylFunction { level, values });
            if !g.is_zero() {
                terms.insert(starred, g);
            }
        }
        Ok(AlgebraElement { level, mode: self.mode, terms })
    }

    /// Time evolution: scales the ratio-r term by `r^{it}`. Real times
    /// need numeric mode; purely imaginary integer times `t = i*beta`
    /// scale by the rational `r^{-beta}` and stay exact.
    pub fn time_evolve(&self, t: &TimeParameter) -> Result<AlgebraElement> {
        match t {
            TimeParameter::Real(tv) => {
                let prec = match self.mode {
                    Mode::Numeric(p) => p.max(tv.prec()),
                    Mode::Exact => {
                        return Err(Error::ModeMismatch(
                            "real-time evolution needs numeric coefficients (r^{it} is not cyclotomic)"
                                .into(),
                        ))
                    }
                };
                let mut terms = BTreeMap::new();
                for (ratio, f) in &self.terms {
                    // r^{it} = cos(t ln r) + i sin(t ln r)
                    let lnr = Float::with_val(prec, Rational::from((ratio.numer(), ratio.denom()))).ln();
                    let angle = Float::with_val(prec, tv * &lnr);
                    let (s, c) = angle.sin_cos(Float::new(prec));
                    let phase = BigComplex::new(c, s);
                    let values = match &f.values {
                        CylValues::Numeric(v) => {
                            CylValues::Numeric(v.iter().map(|x| x.mul(&phase)).collect())
                        }
                        CylValues::Exact(_) => unreachable!("mode checked above"),
                    };
                    terms.insert(*ratio, CylFunction { level: f.level, values });
                }
                Ok(AlgebraElement { level: self.level, mode: self.mode, terms })
            }
            TimeParameter::ImaginaryInteger(beta) => {
                let mut terms = BTreeMap::new();
                for (ratio, f) in &self.terms {
                    // r^{i * (i beta)} = r^{-beta}, a rational
                    let base = Rational::from((ratio.numer(), ratio.denom()));
                    let factor = rational_power(&base, -*beta);
                    let values = match &f.values {
                        CylValues::Exact(v) => {
                            CylValues::Exact(v.iter().map(|x| x.scale(&factor)).collect())
                        }
                        CylValues::Numeric(v) => {
                            let p = self.precision();
                            let cf = Float::with_val(p, &factor);
                            CylValues::Numeric(v.iter().map(|x| x.scale(&cf)).collect())
                        }
                    };
                    terms.insert(*ratio, CylFunction { level: f.level, values });
                }
                Ok(AlgebraElement { level: self.level, mode: self.mode, terms })
            }
        }
    }

    /// Exact equality of values, decided at the common level. Exact mode
    /// only; numeric elements are compared with [`max_deviation`].
    ///
    /// [`max_deviation`]: AlgebraElement::max_deviation
    pub fn eq_value(&self, other: &AlgebraElement) -> Result<bool> {
        self.check_mode(other)?;
        if let Mode::Numeric(_) = self.mode {
            return Err(Error::ModeMismatch(
                "numeric elements have no exact equality; use max_deviation".into(),
            ));
        }
        let level = lcm(self.level, other.level);
        let a = self.raise_level(level)?;
        let b = other.raise_level(level)?;
        if a.terms.len() != b.terms.len() {
            return Ok(false);
        }
        for ((ra, fa), (rb, fb)) in a.terms.iter().zip(b.terms.iter()) {
            if ra != rb {
                return Ok(false);
            }
            let (va, vb) = (fa.exact_values().unwrap(), fb.exact_values().unwrap());
            for (x, y) in va.iter().zip(vb.iter()) {
                if !x.eq_value(y) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Largest coefficient distance between two numeric elements at the
    /// common level (0 for identical supports and values).
    pub fn max_deviation(&self, other: &AlgebraElement) -> Result<Float> {
        self.check_mode(other)?;
        let prec = self.precision().max(other.precision()).max(64);
        if self.mode == Mode::Exact {
            return Err(Error::ModeMismatch("max_deviation is for numeric elements".into()));
        }
        let level = lcm(self.level, other.level);
        let a = self.raise_level(level)?;
        let b = other.raise_level(level)?;
        let mut worst = Float::new(prec);
        let ratios: std::collections::BTreeSet<_> =
            a.terms.keys().chain(b.terms.keys()).copied().collect();
        for ratio in ratios {
            for rho in 0..level as usize {
                let zero = BigComplex::zero(prec);
                let x = a
                    .terms
                    .get(&ratio)
                    .map(|f| &f.numeric_values().unwrap()[rho])
                    .unwrap_or(&zero);
                let y = b
                    .terms
                    .get(&ratio)
                    .map(|f| &f.numeric_values().unwrap()[rho])
                    .unwrap_or(&zero);
                let d = x.sub(y).abs();
                if d > worst {
                    worst = Float::with_val(prec, d);
                }
            }
        }
        Ok(worst)
    }
}

/// Time evolution parameter: a real time, or `i * beta` with integer beta
/// (the exactly representable imaginary times).
#[derive(Debug, Clone)]
pub enum TimeParameter {
    Real(Float),
    ImaginaryInteger(i64),
}

fn rational_power(base: &Rational, e: i64) -> Rational {
    let mut out = Rational::from(1);
    let (b, n) = if e >= 0 { (base.clone(), e) } else { (Rational::from(base.recip_ref()), -e) };
    for _ in 0..n {
        out *= &b;
    }
    out
}

/// Exponent of the character value at `rho`: for `r = a/b` with `b | N`,
/// `rho(a/b) = rho * a * (N/b) / N`, so the value is `zeta_N` to this power.
fn character_exponent(rho: u64, r: &QmodZ, level: u64) -> u64 {
    (rho as u128 * r.numer() as u128 % level as u128 * (level / r.denom()) as u128
        % level as u128) as u64
}

fn enforce_membership(ratio: &PosRatio, f: CylFunction) -> CylFunction {
    let q = ratio.denom();
    if q == 1 {
        return f;
    }
    let level = f.level;
    let values = match f.values {
        CylValues::Exact(mut v) => {
            for (rho, x) in v.iter_mut().enumerate() {
                if rho as u64 % q != 0 {
                    *x = Cyclotomic::zero(level);
                }
            }
            CylValues::Exact(v)
        }
        CylValues::Numeric(mut v) => {
            for (rho, x) in v.iter_mut().enumerate() {
                if rho as u64 % q != 0 {
                    *x = BigComplex::zero(x.prec());
                }
            }
            CylValues::Numeric(v)
        }
    };
    CylFunction { level, values }
}

fn add_cyl(a: &CylFunction, b: &CylFunction) -> Result<CylFunction> {
    match (&a.values, &b.values) {
        (CylValues::Exact(x), CylValues::Exact(y)) => Ok(CylFunction {
            level: a.level,
            values: CylValues::Exact(x.iter().zip(y.iter()).map(|(u, v)| u.add(v)).collect()),
        }),
        (CylValues::Numeric(x), CylValues::Numeric(y)) => Ok(CylFunction {
            level: a.level,
            values: CylValues::Numeric(x.iter().zip(y.iter()).map(|(u, v)| u.add(v)).collect()),
        }),
        _ => Err(Error::ModeMismatch("cannot add exact and numeric functions".into())),
    }
}

fn accumulate_product(
    acc: &mut CylFunction,
    at: usize,
    f: &CylFunction,
    fi: usize,
    g: &CylFunction,
    gi: usize,
) {
    match (&mut acc.values, &f.values, &g.values) {
        (CylValues::Exact(a), CylValues::Exact(x), CylValues::Exact(y)) => {
            a[at] = a[at].add(&x[fi].mul(&y[gi]));
        }
        (CylValues::Numeric(a), CylValues::Numeric(x), CylValues::Numeric(y)) => {
            a[at] = a[at].add(&x[fi].mul(&y[gi]));
        }
        _ => unreachable!("modes are uniform within an operation"),
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            ratio: String,
            values: ValuesRepr<'a>,
        }
        #[derive(Serialize)]
        #[serde(untagged)]
        enum ValuesRepr<'a> {
            Exact(&'a [Cyclotomic]),
            Numeric(&'a [BigComplex]),
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(r, f)| Term {
                ratio: r.to_string(),
                values: match &f.values {
                    CylValues::Exact(v) => ValuesRepr::Exact(v),
                    CylValues::Numeric(v) => ValuesRepr::Numeric(v),
                },
            })
            .collect();
        let mut s = serializer.serialize_struct("AlgebraElement", 3)?;
        s.serialize_field("level", &self.level)?;
        s.serialize_field(
            "mode",
            match self.mode {
                Mode::Exact => "exact",
                Mode::Numeric(_) => "numeric",
            },
        )?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "algebra element at level {} with support {{{}}}",
            self.level,
            self.terms.keys().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
        )
    }
}

/// An element of the group algebra of Q/Z at a finite level: a formal
/// rational combination of torsion classes with denominator dividing the
/// level. This is the domain of the averaging endomorphisms and of the
/// transform that turns classes into characters.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraElement {
    level: u64,
    terms: BTreeMap<QmodZ, Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(level: u64) -> Self {
        GroupAlgebraElement { level, terms: BTreeMap::new() }
    }

    /// The basis element attached to a torsion class.
    pub fn class(r: &QmodZ, level: u64) -> Result<Self> {
        if level % r.denom() != 0 {
            return Err(Error::LevelMismatch(format!(
                "class {} not representable at level {}",
                r, level
            )));
        }
        let mut terms = BTreeMap::new();
        terms.insert(*r, Rational::from(1));
        Ok(GroupAlgebraElement { level, terms })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<QmodZ, Rational> {
        &self.terms
    }

    pub fn raise_level(&self, m: u64) -> Result<GroupAlgebraElement> {
        if m % self.level != 0 {
            return Err(Error::LevelMismatch(format!(
                "{} is not a multiple of level {}",
                m, self.level
            )));
        }
        Ok(GroupAlgebraElement { level: m, terms: self.terms.clone() })
    }

    pub fn add(&self, other: &GroupAlgebraElement) -> GroupAlgebraElement {
        let level = lcm(self.level, other.level);
        let mut terms = self.terms.clone();
        for (r, c) in &other.terms {
            let entry = terms.entry(*r).or_insert_with(Rational::new);
            *entry += c;
            if *entry == 0 {
                terms.remove(r);
            }
        }
        GroupAlgebraElement { level, terms }
    }

    pub fn scale(&self, c: &Rational) -> GroupAlgebraElement {
        if *c == 0 {
            return GroupAlgebraElement::zero(self.level);
        }
        GroupAlgebraElement {
            level: self.level,
            terms: self.terms.iter().map(|(r, x)| (*r, Rational::from(x * c))).collect(),
        }
    }

    pub fn eq_value(&self, other: &GroupAlgebraElement) -> bool {
        self.terms == other.terms
    }
}

/// The averaging endomorphism of the group algebra:
/// `beta_n[r] = (1/n) * sum of the n classes s with n*s = r`,
/// landing at level `n * level`.
pub fn beta_action(n: u64, x: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    if n == 0 {
        return Err(Error::DomainError("averaging index must be positive".into()));
    }
    let level = n * x.level;
    let inv_n = Rational::from((1, n));
    let mut out = GroupAlgebraElement::zero(level);
    for (r, c) in &x.terms {
        for s in r.divided_by(n) {
            let mut t = GroupAlgebraElement::class(&s, level)?;
            t = t.scale(&Rational::from(&inv_n * c));
            out = out.add(&t);
        }
    }
    Ok(out)
}

/// The dual endomorphism action on locally constant functions:
/// `(alpha_n f)(rho) = f(rho / n)` when `n | rho`, zero otherwise.
/// The output lives at level `n * level(f)`, where the division is
/// determined.
pub fn alpha_action(n: u64, f: &CylFunction) -> Result<CylFunction> {
    if n == 0 {
        return Err(Error::DomainError("index must be positive".into()));
    }
    let level = n * f.level;
    let values = match &f.values {
        CylValues::Exact(v) => CylValues::Exact(
            (0..level)
                .map(|rho| {
                    if rho % n == 0 {
                        v[((rho / n) % f.level) as usize].clone()
                    } else {
                        Cyclotomic::zero(level)
                    }
                })
                .collect(),
        ),
        CylValues::Numeric(v) => CylValues::Numeric(
            (0..level)
                .map(|rho| {
                    if rho % n == 0 {
                        v[((rho / n) % f.level) as usize].clone()
                    } else {
                        BigComplex::zero(v.first().map(|c| c.prec()).unwrap_or(64))
                    }
                })
                .collect(),
        ),
    };
    Ok(CylFunction { level, values })
}

/// The transform sending a class to its character: `[r] -> (rho ->
/// exp(2 pi i rho(r)))`, extended linearly. Exact cyclotomic values.
pub fn gelfand(x: &GroupAlgebraElement) -> CylFunction {
    let level = x.level;
    let values: Vec<Cyclotomic> = (0..level)
        .map(|rho| {
            let mut acc = Cyclotomic::zero(level);
            for (r, c) in &x.terms {
                let k = character_exponent(rho, r, level);
                acc = acc.add(&Cyclotomic::root(level, k as i64).scale(c));
            }
            acc
        })
        .collect();
    CylFunction { level, values: CylValues::Exact(values) }
}

/// Does the square `alpha_n after transform = transform after beta_n`
/// commute on every class of denominator dividing b? Decided exactly at
/// level n*b.
pub fn gelfand_square_check(n: u64, b: u64) -> Result<bool> {
    for r in QmodZ::all_with_denominator(b) {
        let class = GroupAlgebraElement::class(&r, b)?;
        let lhs = gelfand(&beta_action(n, &class)?);
        let rhs = alpha_action(n, &gelfand(&class))?;
        if lhs.level != rhs.level {
            return Err(Error::LevelMismatch(format!(
                "transform levels diverged: {} vs {}",
                lhs.level, rhs.level
            )));
        }
        let (va, vb) = (lhs.exact_values().unwrap(), rhs.exact_values().unwrap());
        for (x, y) in va.iter().zip(vb.iter()) {
            if !x.eq_value(y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One row of a relation-check report.
#[derive(Debug, Clone, Serialize)]
pub struct RelationEntry {
    pub relation: String,
    pub instance: String,
    pub pass: bool,
    pub witness: Option<String>,
}

/// Outcome of running the defining relations over a grid of generators.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub level: u64,
    pub entries: Vec<RelationEntry>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }
}

/// Options for [`check_relations`]. `max_level` caps the working level;
/// instances that would need more report a level-mismatch row instead of
/// being computed. `corrupt_mu` is a negative-control hook: it doubles one
/// coefficient of each isometry generator so the relations must fail.
#[derive(Debug, Clone, Default)]
pub struct RelationCheckOptions {
    pub max_level: Option<u64>,
    pub corrupt_mu: bool,
}

fn corrupted_mu(n: u64, level: u64, corrupt: bool) -> Result<AlgebraElement> {
    let mu = AlgebraElement::gen_mu(n, level, Mode::Exact)?;
    if !corrupt || n == 1 {
        return Ok(mu);
    }
    Ok(mu.scale_rational(&Rational::from(2)))
}

/// Verify the defining relations of the algebra in exact mode over all
/// pairs from `ns` and `rs`:
///
/// * isometry: `mu_n* mu_n = 1`, together with the projection identity
///   `mu_n mu_n* = (1/n) sum over n-torsion of e(s)` that the averaging
///   relation forces at r = 0 (the two-sided relation printed elsewhere
///   as a unitarity would contradict it);
/// * commutation: `mu_m mu_n = mu_n mu_m = mu_{mn}`;
/// * group law and involution: `e(r) e(s) = e(r+s)`, `e(0) = 1`,
///   `e(r)* = e(-r)`;
/// * averaging: `mu_n e(r) mu_n* = (1/n) sum over {s : ns = r} of e(s)`.
///
/// Every instance is decided exactly, raising the working level as far as
/// the instance requires (for the averaging relation with `r = a/b` that
/// is `lcm(level, n*b)`).
pub fn check_relations(
    level: u64,
    ns: &[u64],
    rs: &[QmodZ],
    opts: &RelationCheckOptions,
) -> Result<RelationReport> {
    let mut entries = Vec::new();
    let mode = Mode::Exact;
    let cap_ok = |needed: u64| opts.max_level.map(|cap| needed <= cap).unwrap_or(true);
    let push = |entries: &mut Vec<RelationEntry>, relation: &str, instance: String, ok: bool, witness: Option<String>| {
        entries.push(RelationEntry { relation: relation.into(), instance, pass: ok, witness });
    };

    for &n in ns {
        if level % n != 0 {
            return Err(Error::LevelMismatch(format!("index {} does not divide level {}", n, level)));
        }
        // (isometry) mu_n* mu_n = 1
        let mu = corrupted_mu(n, level, opts.corrupt_mu)?;
        let lhs = mu.involution()?.convolve(&mu)?;
        let ok = lhs.eq_value(&AlgebraElement::identity(level, mode))?;
        push(&mut entries, "isometry", format!("n={}", n), ok, None);

        // (projection) mu_n mu_n* = (1/n) sum over n-torsion of e(s)
        let lhs = mu.convolve(&mu.involution()?)?;
        let mut rhs = AlgebraElement::zero(level, mode);
        for s in QmodZ::zero().divided_by(n) {
            rhs = rhs.add(&AlgebraElement::gen_e(&s, level, mode)?)?;
        }
        rhs = rhs.scale_rational(&Rational::from((1, n)));
        let ok = lhs.eq_value(&rhs)?;
        push(&mut entries, "projection", format!("n={}", n), ok, None);
    }

    // (commutation) over pairs
    for &m in ns {
        for &n in ns {
            let needed = lcm(level, m * n);
            if !cap_ok(needed) {
                push(
                    &mut entries,
                    "commutation",
                    format!("m={}, n={}", m, n),
                    false,
                    Some(format!("LevelMismatch: needs level {}", needed)),
                );
                continue;
            }
            let mu_m = corrupted_mu(m, level, opts.corrupt_mu)?;
            let mu_n = corrupted_mu(n, level, opts.corrupt_mu)?;
            let ab = mu_m.convolve(&mu_n)?;
            let ba = mu_n.convolve(&mu_m)?;
            let mu_mn = AlgebraElement::gen_mu(m * n, needed, mode)?;
            let ok = ab.eq_value(&ba)? && ab.eq_value(&mu_mn)?;
            push(&mut entries, "commutation", format!("m={}, n={}", m, n), ok, None);
        }
    }

    // (group law / involution) over torsion classes
    for r in rs {
        if level % r.denom() != 0 {
            return Err(Error::LevelMismatch(format!(
                "class {} does not live at level {}",
                r, level
            )));
        }
    }
    let e0 = AlgebraElement::gen_e(&QmodZ::zero(), level, mode)?;
    push(
        &mut entries,
        "group_law",
        "e(0) = 1".into(),
        e0.eq_value(&AlgebraElement::identity(level, mode))?,
        None,
    );
    for r in rs {
        let er = AlgebraElement::gen_e(r, level, mode)?;
        let ok = er.involution()?.eq_value(&AlgebraElement::gen_e(&r.neg(), level, mode)?)?;
        push(&mut entries, "involution", format!("e({})* = e(-{})", r, r), ok, None);
        for s in rs {
            let es = AlgebraElement::gen_e(s, level, mode)?;
            let sum = AlgebraElement::gen_e(&r.add(s), level, mode)?;
            let ok = er.convolve(&es)?.eq_value(&sum)?;
            push(&mut entries, "group_law", format!("e({}) e({})", r, s), ok, None);
        }
    }

    // (averaging) mu_n e(r) mu_n* = (1/n) sum over division points
    for &n in ns {
        for r in rs {
            let needed = lcm(level, n * r.denom());
            if !cap_ok(needed) {
                push(
                    &mut entries,
                    "averaging",
                    format!("n={}, r={}", n, r),
                    false,
                    Some(format!("LevelMismatch: needs level {}", needed)),
                );
                continue;
            }
            let mu = corrupted_mu(n, needed, opts.corrupt_mu)?;
            let er = AlgebraElement::gen_e(r, needed, mode)?;
            let lhs = mu.convolve(&er)?.convolve(&mu.involution()?)?;
            let mut rhs = AlgebraElement::zero(needed, mode);
            for s in r.divided_by(n) {
                rhs = rhs.add(&AlgebraElement::gen_e(&s, needed, mode)?)?;
            }
            rhs = rhs.scale_rational(&Rational::from((1, n)));
            let ok = lhs.eq_value(&rhs)?;
            push(&mut entries, "averaging", format!("n={}, r={}", n, r), ok, None);
        }
    }

    Ok(RelationReport { level, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::ResidueEndo;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: u64) -> QmodZ {
        QmodZ::new(n, d).unwrap()
    }

    #[test]
    fn e_of_half_at_level_two() {
        let e = AlgebraElement::gen_e(&q(1, 2), 2, Mode::Exact).unwrap();
        let f = &e.terms()[&PosRatio::one()];
        let v = f.exact_values().unwrap();
        assert!(v[0].is_one());
        assert!(v[1].eq_value(&Cyclotomic::one(2).neg()));
        assert!(AlgebraElement::gen_e(&q(1, 3), 2, Mode::Exact).is_err());
    }

    #[test]
    fn e_zero_is_identity() {
        let e = AlgebraElement::gen_e(&QmodZ::zero(), 6, Mode::Exact).unwrap();
        assert!(e.eq_value(&AlgebraElement::identity(6, Mode::Exact)).unwrap());
    }

    #[test]
    fn mu_support_and_level_guard() {
        let mu = AlgebraElement::gen_mu(2, 4, Mode::Exact).unwrap();
        assert_eq!(mu.support(), vec![PosRatio::new(2, 1).unwrap()]);
        assert!(AlgebraElement::gen_mu(3, 4, Mode::Exact).is_err());
        assert!(AlgebraElement::gen_mu(1, 4, Mode::Exact)
            .unwrap()
            .eq_value(&AlgebraElement::identity(4, Mode::Exact))
            .unwrap());
    }

    #[test]
    fn characters_multiply() {
        // e(r) e(s) = e(r+s) on a grid
        for (r, s) in [(q(1, 2), q(1, 3)), (q(1, 4), q(3, 4)), (q(5, 6), q(1, 6))] {
            let level = 12;
            let er = AlgebraElement::gen_e(&r, level, Mode::Exact).unwrap();
            let es = AlgebraElement::gen_e(&s, level, Mode::Exact).unwrap();
            let sum = AlgebraElement::gen_e(&r.add(&s), level, Mode::Exact).unwrap();
            assert!(er.convolve(&es).unwrap().eq_value(&sum).unwrap());
        }
    }

    #[test]
    fn isometry_and_projection() {
        let level = 4;
        let mu = AlgebraElement::gen_mu(2, level, Mode::Exact).unwrap();
        let star = mu.involution().unwrap();
        // mu* mu = 1
        let lhs = star.convolve(&mu).unwrap();
        assert!(lhs.eq_value(&AlgebraElement::identity(level, Mode::Exact)).unwrap());
        // mu mu* = (1/2)(e(0) + e(1/2))
        let proj = mu.convolve(&star).unwrap();
        let rhs = AlgebraElement::gen_e(&QmodZ::zero(), level, Mode::Exact)
            .unwrap()
            .add(&AlgebraElement::gen_e(&q(1, 2), level, Mode::Exact).unwrap())
            .unwrap()
            .scale_rational(&Rational::from((1, 2)));
        assert!(proj.eq_value(&rhs).unwrap());
    }

    #[test]
    fn averaging_relation_with_level_raise() {
        // mu_2 e(1/2) mu_2* = (1/2)(e(1/4) + e(3/4)), which needs level 4
        // data even when the inputs live at level 2.
        let level = 4;
        let mu = AlgebraElement::gen_mu(2, level, Mode::Exact).unwrap();
        let er = AlgebraElement::gen_e(&q(1, 2), level, Mode::Exact).unwrap();
        let lhs = mu.convolve(&er).unwrap().convolve(&mu.involution().unwrap()).unwrap();
        let rhs = AlgebraElement::gen_e(&q(1, 4), 4, Mode::Exact)
            .unwrap()
            .add(&AlgebraElement::gen_e(&q(3, 4), 4, Mode::Exact).unwrap())
            .unwrap()
            .scale_rational(&Rational::from((1, 2)));
        assert!(lhs.eq_value(&rhs).unwrap());
    }

    fn random_exact_element(rng: &mut StdRng, level: u64) -> AlgebraElement {
        let mut acc = AlgebraElement::zero(level, Mode::Exact);
        for _ in 0..rng.gen_range(1..=3) {
            let pick = rng.gen_range(0..3);
            let piece = match pick {
                0 => {
                    let den = *[1u64, 2, 3, 4, 6, 12].iter().nth(rng.gen_range(0..6)).unwrap();
                    let num = rng.gen_range(0..den.max(1)) as i64;
                    AlgebraElement::gen_e(&q(num, den), level, Mode::Exact).unwrap()
                }
                1 => {
                    let n = *[2u64, 3, 4].iter().nth(rng.gen_range(0..3)).unwrap();
                    AlgebraElement::gen_mu(n, level, Mode::Exact).unwrap()
                }
                _ => {
                    let n = *[2u64, 3].iter().nth(rng.gen_range(0..2)).unwrap();
                    AlgebraElement::gen_mu_star(n, level, Mode::Exact).unwrap()
                }
            };
            let c = Rational::from((rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2)));
            acc = acc.add(&piece.scale_rational(&c)).unwrap();
        }
        acc
    }

    #[test]
    fn identity_is_neutral_on_seeded_elements() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_exact_element(&mut rng, 12);
            let id = AlgebraElement::identity(12, Mode::Exact);
            assert!(id.convolve(&x).unwrap().eq_value(&x).unwrap());
            assert!(x.convolve(&id).unwrap().eq_value(&x).unwrap());
        }
    }

    #[test]
    fn convolution_is_associative_on_seeded_triples() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..12 {
            let x = random_exact_element(&mut rng, 12);
            let y = random_exact_element(&mut rng, 12);
            let z = random_exact_element(&mut rng, 12);
            let left = x.convolve(&y).unwrap().convolve(&z).unwrap();
            let right = x.convolve(&y.convolve(&z).unwrap()).unwrap();
            assert!(left.eq_value(&right).unwrap());
        }
    }

    #[test]
    fn involution_is_an_antiautomorphism() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..12 {
            let x = random_exact_element(&mut rng, 12);
            let y = random_exact_element(&mut rng, 12);
            let lhs = x.convolve(&y).unwrap().involution().unwrap();
            let rhs = y.involution().unwrap().convolve(&x.involution().unwrap()).unwrap();
            assert!(lhs.eq_value(&rhs).unwrap());
            let twice = x.involution().unwrap().involution().unwrap();
            assert!(twice.eq_value(&x).unwrap());
        }
    }

    #[test]
    fn character_coefficients_match_residue_application() {
        // duality: the stored coefficient of e(r) at rho equals the
        // character value exp(2 pi i rho(r)) computed through residues
        let level = 12u64;
        for r in [q(1, 3), q(5, 12), q(1, 2)] {
            let e = AlgebraElement::gen_e(&r, level, Mode::Exact).unwrap();
            let vals = e.terms()[&PosRatio::one()].exact_values().unwrap();
            for rho in 0..level {
                let image = ResidueEndo::new(level, rho).unwrap().apply(&r).unwrap();
                // image = k/N as a class; the coefficient must be zeta_N^k
                let k = image.numer() * (level / image.denom());
                assert!(vals[rho as usize].eq_value(&Cyclotomic::root(level, k as i64)));
            }
        }
    }

    #[test]
    fn time_evolution_scales_mu() {
        let mu = AlgebraElement::gen_mu(2, 4, Mode::Exact).unwrap();
        let evolved = mu.time_evolve(&TimeParameter::ImaginaryInteger(1)).unwrap();
        let expected = mu.scale_rational(&Rational::from((1, 2)));
        assert!(evolved.eq_value(&expected).unwrap());
        // sigma_0 in numeric mode is the identity map
        let mun = AlgebraElement::gen_mu(2, 4, Mode::Numeric(96)).unwrap();
        let ev0 = mun.time_evolve(&TimeParameter::Real(Float::with_val(96, 0))).unwrap();
        assert!(ev0.max_deviation(&mun).unwrap().is_zero());
        // real-time evolution refuses exact coefficients
        assert!(mu.time_evolve(&TimeParameter::Real(Float::with_val(64, 1.0))).is_err());
    }

    #[test]
    fn time_evolution_one_parameter_group_numeric() {
        let prec = 128;
        let tol = crate::numeric::rounding_bound(prec, 8);
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..6 {
            let x = {
                // random numeric element: evolve exact ones numerically
                let e = random_exact_element(&mut rng, 12);
                exact_to_numeric(&e, prec)
            };
            let s = Float::with_val(prec, 0.3);
            let t = Float::with_val(prec, 1.7);
            let st = Float::with_val(prec, &s + &t);
            let a = x
                .time_evolve(&TimeParameter::Real(s.clone()))
                .unwrap()
                .time_evolve(&TimeParameter::Real(t.clone()))
                .unwrap();
            let b = x.time_evolve(&TimeParameter::Real(st)).unwrap();
            assert!(a.max_deviation(&b).unwrap() < tol);
            // multiplicativity
            let y = exact_to_numeric(&random_exact_element(&mut rng, 12), prec);
            let lhs = x.convolve(&y).unwrap().time_evolve(&TimeParameter::Real(t.clone())).unwrap();
            let rhs = x
                .time_evolve(&TimeParameter::Real(t.clone()))
                .unwrap()
                .convolve(&y.time_evolve(&TimeParameter::Real(t)).unwrap())
                .unwrap();
            assert!(lhs.max_deviation(&rhs).unwrap() < tol);
        }
    }

    fn exact_to_numeric(x: &AlgebraElement, prec: u32) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        for (ratio, f) in x.terms() {
            let v = f
                .exact_values()
                .unwrap()
                .iter()
                .map(|c| c.embed(1, prec).unwrap().value)
                .collect();
            terms.insert(*ratio, CylFunction::numeric(f.level(), v).unwrap());
        }
        AlgebraElement::from_terms(x.level(), Mode::Numeric(prec), terms).unwrap()
    }

    #[test]
    fn beta_action_examples() {
        let i0 = GroupAlgebraElement::class(&QmodZ::zero(), 1).unwrap();
        let b2 = beta_action(2, &i0).unwrap();
        // (1/2)(i(0) + i(1/2))
        assert_eq!(b2.level(), 2);
        assert_eq!(b2.terms().len(), 2);
        assert_eq!(b2.terms()[&QmodZ::zero()], Rational::from((1, 2)));
        assert_eq!(b2.terms()[&q(1, 2)], Rational::from((1, 2)));
        // beta_1 = identity
        let b1 = beta_action(1, &i0).unwrap();
        assert!(b1.eq_value(&i0));
        // beta_2(beta_3(i(0))) = beta_6(i(0)), six terms each
        let lhs = beta_action(2, &beta_action(3, &i0).unwrap()).unwrap();
        let rhs = beta_action(6, &i0).unwrap();
        assert!(lhs.eq_value(&rhs));
        assert_eq!(lhs.terms().len(), 6);
    }

    #[test]
    fn alpha_action_examples() {
        // alpha_2 of the constant 1 at level 2, read at level 4: the
        // indicator of even residues
        let one = CylFunction::constant_one(2, Mode::Exact);
        let a = alpha_action(2, &one).unwrap();
        assert_eq!(a.level(), 4);
        let v = a.exact_values().unwrap();
        assert!(v[0].is_one() && v[2].is_one());
        assert!(v[1].is_zero() && v[3].is_zero());
        // alpha_1 = identity
        let id = alpha_action(1, &one).unwrap();
        assert_eq!(id.level(), 2);
        assert!(id.exact_values().unwrap().iter().all(|c| c.is_one()));
    }

    #[test]
    fn alpha_semigroup_law() {
        // alpha_2(alpha_3(f)) = alpha_6(f) pointwise on a non-constant f
        let f = gelfand(&GroupAlgebraElement::class(&q(1, 4), 4).unwrap());
        let lhs = alpha_action(2, &alpha_action(3, &f).unwrap()).unwrap();
        let rhs = alpha_action(6, &f).unwrap();
        assert_eq!(lhs.level(), rhs.level());
        for (x, y) in lhs
            .exact_values()
            .unwrap()
            .iter()
            .zip(rhs.exact_values().unwrap().iter())
        {
            assert!(x.eq_value(y));
        }
    }

    #[test]
    fn gelfand_square_commutes() {
        assert!(gelfand_square_check(2, 2).unwrap());
        assert!(gelfand_square_check(3, 4).unwrap());
        assert!(gelfand_square_check(1, 6).unwrap());
    }

    #[test]
    fn relation_report_level_24_subgrid() {
        let rs: Vec<QmodZ> = QmodZ::all_with_denominator(12);
        let report = check_relations(12, &[2, 3, 4, 6], &rs, &RelationCheckOptions::default()).unwrap();
        assert!(report.all_pass(), "failures: {}", report.failures());
    }

    #[test]
    fn relation_report_respects_level_cap() {
        // at level 2 with a cap at 2, the averaging instance (n=2, r=1/2)
        // needs level 4 and must surface as a level-mismatch row
        let opts = RelationCheckOptions { max_level: Some(2), corrupt_mu: false };
        let report = check_relations(2, &[2], &[q(1, 2)], &opts).unwrap();
        let row = report
            .entries
            .iter()
            .find(|e| e.relation == "averaging")
            .expect("averaging row present");
        assert!(!row.pass);
        assert!(row.witness.as_deref().unwrap_or("").contains("LevelMismatch"));
        // n = 1 instances pass trivially
        let trivial = check_relations(2, &[1], &[QmodZ::zero()], &RelationCheckOptions::default())
            .unwrap();
        assert!(trivial.all_pass());
    }

    #[test]
    fn corrupted_generator_fails() {
        let opts = RelationCheckOptions { max_level: None, corrupt_mu: true };
        let report = check_relations(4, &[2], &[q(1, 2)], &opts).unwrap();
        assert!(!report.all_pass());
    }
}
