//! Hurwitz and Riemann zeta evaluation with certified tails.
//!
//! Two independent routes are kept deliberately separate:
//!
//! * [`hurwitz_zeta`] uses Euler-Maclaurin summation. The remainder after
//!   the `B_{2m}` correction is bounded in magnitude by the first omitted
//!   term because every derivative of `x -> (x+a)^{-s}` has constant sign
//!   on the summation range (the function is completely monotone).
//! * [`hurwitz_zeta_direct`] sums `M` terms and brackets the tail between
//!   `I` and `I + f(M)` where `I` is the integral `(M+a)^{1-s}/(s-1)`.
//!
//! The direct route is slower and cruder; it exists so that every
//! Euler-Maclaurin value in this crate can be cross-checked against an
//! evaluation that shares no code with it.

use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{rounding_bound, RealBall};

/// Exact Bernoulli numbers B_0, B_1, B_2, ... (B_1 = -1/2 convention),
/// grown on demand and cached process-wide.
pub fn bernoulli(n: usize) -> Rational {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut cache = cache.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = Rational::new();
        for (j, bj) in cache.iter().enumerate() {
            let c = Integer::from(m as u32 + 1).binomial(j as u32);
            acc += Rational::from((c, Integer::from(1))) * bj;
        }
        acc /= -Rational::from((m as i64 + 1, 1));
        cache.push(acc);
    }
    cache[n].clone()
}

fn check_domain(beta: &Float, a: &Rational) -> Result<()> {
    if !(*beta > 1u32) {
        return Err(Error::DomainError(format!(
            "zeta series diverges for beta <= 1 (got {})",
            beta
        )));
    }
    if *a <= 0 || *a > 1 {
        return Err(Error::DomainError(format!("offset a must lie in (0, 1], got {}", a)));
    }
    Ok(())
}

/// Hurwitz zeta `sum_{n >= 0} (n + a)^{-beta}` by Euler-Maclaurin, for real
/// `beta > 1` and rational `a` in `(0, 1]`. Returns value and error radius.
pub fn hurwitz_zeta(beta: &Float, a: &Rational, prec: u32) -> Result<RealBall> {
    check_domain(beta, a)?;
    let wp = prec + 32;
    let target = rounding_bound(prec, 0);

    let mut cutoff = (prec as u64 / 2).max(24);
    for _attempt in 0..4 {
        if let Some(ball) = euler_maclaurin(beta, a, cutoff, wp, &target) {
            // Fold in rounding slop relative to the value size.
            let slop = Float::with_val(wp, ball.value.clone().abs() * rounding_bound(prec, 10));
            return Ok(RealBall::new(ball.value, Float::with_val(wp, ball.radius + slop)));
        }
        cutoff *= 2;
    }
    // Give up on the asymptotic series shrinking below target; return the
    // best bound achieved at the largest cutoff.
    let ball = euler_maclaurin_best(beta, a, cutoff, wp);
    Ok(ball)
}

fn em_prefix(beta: &Float, a: &Rational, cutoff: u64, wp: u32) -> (Float, Float, Float) {
    // partial sum over n = 0..cutoff-1, plus the integral and midpoint terms
    let mut partial = Float::new(wp);
    for n in 0..cutoff {
        let base = Float::with_val(wp, Rational::from((Integer::from(n), Integer::from(1))) + a);
        partial += base.pow(&Float::with_val(wp, -beta));
    }
    let ma = Float::with_val(wp, Rational::from((Integer::from(cutoff), Integer::from(1))) + a);
    // (M+a)^{1-beta}/(beta-1)
    let integral = Float::with_val(wp, (&ma).pow(&Float::with_val(wp, 1 - beta.clone())))
        / Float::with_val(wp, beta.clone() - 1);
    (partial, Float::with_val(wp, integral), ma)
}

/// One Euler-Maclaurin pass; `None` when the correction terms refuse to
/// drop below `target` before they start growing.
fn euler_maclaurin(beta: &Float, a: &Rational, cutoff: u64, wp: u32, target: &Float) -> Option<RealBall> {
    let (partial, integral, ma) = em_prefix(beta, a, cutoff, wp);
    let half = Float::with_val(wp, (&ma).pow(&Float::with_val(wp, -beta.clone()))) / 2u32;
    let mut value = partial + integral + half;

    // pochhammer (beta)_j accumulated incrementally; term_k =
    // B_{2k}/(2k)! * (beta)_{2k-1} * (M+a)^{-beta-2k+1}
    let mut poch = beta.clone(); // (beta)_1
    let mut factorial = Rational::from(2); // (2k)! at k=1
    let mut prev_mag: Option<Float> = None;
    for k in 1..=96usize {
        let b2k = bernoulli(2 * k);
        let expo = Float::with_val(wp, -beta.clone() - (2 * k as u32 - 1));
        let power = Float::with_val(wp, (&ma).pow(&expo));
        let coeff = Float::with_val(wp, Rational::from(b2k / &factorial));
        let term = Float::with_val(wp, &coeff * &poch) * power;
        let mag = term.clone().abs();
        if let Some(prev) = &prev_mag {
            if mag > *prev {
                // asymptotic series turned; remainder bound no longer improves
                return None;
            }
        }
        if mag <= *target {
            // remainder is bounded by the first omitted term, which is
            // no larger than the last included one; use it as the radius
            return Some(RealBall::new(value, mag));
        }
        value += &term;
        prev_mag = Some(mag);
        // advance (beta)_{2k-1} -> (beta)_{2k+1} and (2k)! -> (2k+2)!
        poch *= Float::with_val(wp, beta.clone() + (2 * k as u32 - 1));
        poch *= Float::with_val(wp, beta.clone() + (2 * k as u32));
        factorial *= Rational::from(((2 * k as u64 + 1) * (2 * k as u64 + 2), 1));
    }
    None
}

fn euler_maclaurin_best(beta: &Float, a: &Rational, cutoff: u64, wp: u32) -> RealBall {
    let (partial, integral, ma) = em_prefix(beta, a, cutoff, wp);
    let half = Float::with_val(wp, (&ma).pow(&Float::with_val(wp, -beta.clone()))) / 2u32;
    let mut value = partial + integral + half;
    let mut poch = beta.clone();
    let mut factorial = Rational::from(2);
    let mut best_radius: Option<Float> = None;
    for k in 1..=96usize {
        let b2k = bernoulli(2 * k);
        let expo = Float::with_val(wp, -beta.clone() - (2 * k as u32 - 1));
        let power = Float::with_val(wp, (&ma).pow(&expo));
        let coeff = Float::with_val(wp, Rational::from(b2k / &factorial));
        let term = Float::with_val(wp, &coeff * &poch) * power;
        let mag = term.clone().abs();
        match &best_radius {
            Some(prev) if mag > *prev => break,
            _ => {}
        }
        value += &term;
        best_radius = Some(mag);
        poch *= Float::with_val(wp, beta.clone() + (2 * k as u32 - 1));
        poch *= Float::with_val(wp, beta.clone() + (2 * k as u32));
        factorial *= Rational::from(((2 * k as u64 + 1) * (2 * k as u64 + 2), 1));
    }
    RealBall::new(value, best_radius.unwrap_or_else(|| Float::with_val(wp, 1)))
}

/// Direct truncation: `sum_{n=0}^{terms-1} (n+a)^{-beta}` plus a bracketed
/// tail. The tail `sum_{n >= terms}` lies in `[I, I + f(terms)]` with
/// `I = (terms+a)^{1-beta}/(beta-1)`; we take the midpoint and half-width.
pub fn hurwitz_zeta_direct(beta: &Float, a: &Rational, terms: u64, prec: u32) -> Result<RealBall> {
    check_domain(beta, a)?;
    let wp = prec + 16;
    let (partial, integral, ma) = em_prefix(beta, a, terms, wp);
    let f_m = Float::with_val(wp, (&ma).pow(&Float::with_val(wp, -beta.clone())));
    let half_width = Float::with_val(wp, &f_m / 2u32);
    let value = partial + integral + &half_width;
    let slop = Float::with_val(wp, value.clone().abs() * rounding_bound(prec, 10));
    Ok(RealBall::new(value, half_width + slop))
}

/// Riemann zeta via the Euler-Maclaurin route.
pub fn riemann_zeta(beta: &Float, prec: u32) -> Result<RealBall> {
    hurwitz_zeta(beta, &Rational::from(1), prec)
}

/// Riemann zeta as a bare truncation `sum_{n=1}^{M} n^{-beta}` whose radius
/// is the integral tail bound `M^{1-beta}/(beta-1)`. This is the partition-
/// function evaluation policy; the true value sits inside the interval
/// because `0 < tail < M^{1-beta}/(beta-1)`.
pub fn riemann_zeta_truncated(beta: &Float, terms: u64, prec: u32) -> Result<RealBall> {
    if !(*beta > 1u32) {
        return Err(Error::DomainError(format!(
            "partition function diverges for beta <= 1 (got {})",
            beta
        )));
    }
    let wp = prec + 16;
    let mut partial = Float::new(wp);
    let minus_beta = Float::with_val(wp, -beta);
    for n in 1..=terms {
        partial += Float::with_val(wp, n).pow(&minus_beta);
    }
    let tail = Float::with_val(wp, Float::with_val(wp, terms).pow(&Float::with_val(wp, 1 - beta.clone())))
        / Float::with_val(wp, beta.clone() - 1);
    let slop = Float::with_val(wp, partial.clone().abs() * rounding_bound(prec, 10));
    Ok(RealBall::new(partial, tail + slop))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::pi;

    fn f(x: f64) -> Float {
        Float::with_val(192, x)
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), Rational::from(1));
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(3), Rational::new());
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = riemann_zeta(&f(2.0), 128).unwrap();
        let reference = pi(192).square() / 6u32;
        let err = Float::with_val(192, &z.value - &reference).abs();
        assert!(err < 1e-30, "err = {}", err);
        assert!(z.radius < 1e-30);
    }

    #[test]
    fn hurwitz_half_offset_identity() {
        // zeta_H(2, 1/2) = sum over odd n of 4/n^2 = pi^2/2
        let z = hurwitz_zeta(&f(2.0), &Rational::from((1, 2)), 128).unwrap();
        let reference = pi(192).square() / 2u32;
        let err = Float::with_val(192, &z.value - &reference).abs();
        assert!(err < 1e-30, "err = {}", err);
    }

    #[test]
    fn direct_sum_brackets_euler_maclaurin() {
        for (beta, a) in [
            (2.0, Rational::from(1)),
            (2.0, Rational::from((1, 2))),
            (3.0, Rational::from(1)),
            (1.25, Rational::from((2, 3))),
            (20.0, Rational::from((1, 5))),
        ] {
            let em = hurwitz_zeta(&f(beta), &a, 128).unwrap();
            let direct = hurwitz_zeta_direct(&f(beta), &a, 200_000, 128).unwrap();
            assert!(em.agrees_with(&direct), "beta={} a={}", beta, a);
        }
    }

    #[test]
    fn apery_constant() {
        // zeta(3), frozen from the direct oracle at 10^6 terms.
        let z = riemann_zeta(&f(3.0), 128).unwrap();
        let apery = f(1.2020569031595942854);
        assert!(Float::with_val(192, &z.value - &apery).abs() < 1e-15);
    }

    #[test]
    fn truncated_policy_interval_contains_truth() {
        let t = riemann_zeta_truncated(&f(2.0), 1000, 128).unwrap();
        let truth = pi(192).square() / 6u32;
        let err = Float::with_val(192, &t.value - &truth).abs();
        assert!(err <= t.radius);
        // and the radius is what the policy says: M^{1-beta}/(beta-1) + slop
        assert!(t.radius <= 1.0001e-3);
    }

    #[test]
    fn domain_errors() {
        assert!(riemann_zeta(&f(1.0), 64).is_err());
        assert!(riemann_zeta(&f(0.5), 64).is_err());
        assert!(hurwitz_zeta(&f(2.0), &Rational::from(2), 64).is_err());
        assert!(hurwitz_zeta(&f(2.0), &Rational::new(), 64).is_err());
    }
}
