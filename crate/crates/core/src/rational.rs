//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Q = num_rational::BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn half() -> Q {
    q(1, 2)
}

/// Parses `a`, `a/b` or a plain decimal such as `0.49`.
pub fn parse_q(text: &str) -> Result<Q, Error> {
    let s = text.trim();
    let bad = || Error::BadRational(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches('-') {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = Q::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn min_q(a: &Q, b: &Q) -> Q {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn max_q(a: &Q, b: &Q) -> Q {
    if a >= b { a.clone() } else { b.clone() }
}

/// Smallest `k >= 0` with `2^-k <= eps`.
pub fn log2_scale(eps: &Q) -> u32 {
    let mut k = 0u32;
    let mut p = Q::one();
    while &p > eps {
        p /= qi(2);
        k += 1;
    }
    k
}

/// Smallest integer `m >= 1` with `1/m <= eps`.
pub fn inverse_ceil(eps: &Q) -> u64 {
    let inv = eps.recip();
    let c = inv.ceil().to_integer();
    c.to_u64().unwrap_or(u64::MAX).max(1)
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 { a.max(b) } else { a.lcm(&b) }
}

/// Compact `a/b` rendering (integers without denominator).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Continued-fraction description of an irrational angle in `(0, 1)`:
/// `[0; pre..., period, period, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl ContinuedFraction {
    /// `(sqrt 5 - 1) / 2 = [0; 1, 1, 1, ...]`.
    pub fn golden() -> Self {
        ContinuedFraction { preperiod: vec![], period: vec![1] }
    }

    fn quotient(&self, i: usize) -> u64 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// First convergent `p/q` with `q >= min_denominator`, together with
    /// the certified error bound `1/q^2`.
    pub fn convergent(&self, min_denominator: &BigInt) -> (Q, Q) {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
        let mut i = 0;
        loop {
            let a = BigInt::from(self.quotient(i));
            let p2 = &a * &p1 + &p0;
            let q2 = &a * &q1 + &q0;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            i += 1;
            if &q1 >= min_denominator {
                let delta = Q::new(BigInt::one(), &q1 * &q1);
                return (Q::new(p1, q1), delta);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_q("0.49").unwrap(), q(49, 100));
        assert_eq!(parse_q("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert!(matches!(parse_q("3/0"), Err(Error::BadRational(_))));
        assert!(parse_q("x").is_err());
        assert!(parse_q("1.").is_err());
    }

    #[test]
    fn scales() {
        assert_eq!(log2_scale(&q(1, 8)), 3);
        assert_eq!(log2_scale(&q(1, 5)), 3);
        assert_eq!(inverse_ceil(&q(1, 50)), 50);
        assert_eq!(inverse_ceil(&q(2, 7)), 4);
    }

    #[test]
    fn golden_convergents_are_fibonacci() {
        let (c, d) = ContinuedFraction::golden().convergent(&BigInt::from(50));
        assert_eq!(c, q(34, 55));
        assert_eq!(d, q(1, 55 * 55));
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        assert!((to_f64(&c) - alpha).abs() < to_f64(&d));
    }
}
