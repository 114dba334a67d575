//! `exp_p`, `log_p` and square roots.

use super::error::{PadicError, Result};
use super::number::{PadicNumber, Prime};
use super::poly::{hensel_lift, PadicPoly};

/// `exp_p(x) = Σ x^n / n!` for `|x|_p < p^(-1/(p-1))`.
///
/// Terms are summed until the lower bound `n·v(x) − (n−1)/(p−1)` on the
/// valuation of every remaining term reaches the absolute precision of `x`.
pub fn exp_p(x: &PadicNumber) -> Result<PadicNumber> {
    let prime = x.prime();
    let threshold = prime.exp_threshold();
    if x.valuation() < threshold {
        return Err(PadicError::OutOfDomain {
            function: "exp_p",
            reason: format!(
                "|x|_{prime} = {prime}^({}) but exp_p needs valuation ≥ {threshold}",
                -x.valuation()
            ),
        });
    }
    if x.is_zero() {
        return Ok(PadicNumber::one(prime, x.valuation().max(1) as u32));
    }
    let target = x.absolute_precision();
    let v = x.valuation();
    let p_minus_1 = prime.get() as i64 - 1;
    let work = target as u32;
    let mut sum = PadicNumber::one(prime, work);
    let mut term = PadicNumber::one(prime, work);
    let mut n: i64 = 1;
    while n * v - (n - 1) / p_minus_1 < target {
        term = &(&term * x) / &PadicNumber::from_i64(prime, n, work);
        sum = &sum + &term;
        n += 1;
    }
    Ok(sum)
}

fn floor_log(prime: Prime, n: i64) -> i64 {
    let p = prime.get() as i64;
    let mut k = 0;
    let mut q = n;
    while q >= p {
        q /= p;
        k += 1;
    }
    k
}

/// `log_p(x) = Σ (−1)^(n+1) (x−1)^n / n` for `|x − 1|_p < 1`.
pub fn log_p(x: &PadicNumber) -> Result<PadicNumber> {
    let prime = x.prime();
    if !x.is_unit() {
        return Err(PadicError::OutOfDomain {
            function: "log_p",
            reason: "argument is not a unit".into(),
        });
    }
    let h = x - &PadicNumber::one(prime, x.precision());
    if h.valuation() < 1 {
        return Err(PadicError::OutOfDomain {
            function: "log_p",
            reason: format!("|x - 1|_{prime} = 1, outside B(1, 1)"),
        });
    }
    if h.is_zero() {
        return Ok(h);
    }
    let target = h.absolute_precision();
    let vh = h.valuation();
    let mut sum = h.clone();
    let mut power = h.clone();
    let mut n: i64 = 2;
    // n·v(h) − ⌊log_p n⌋ is non-decreasing, so the first n reaching the
    // target bounds every later term as well.
    while n * vh - floor_log(prime, n) < target {
        power = &power * &h;
        let term = &power / &PadicNumber::from_i64(prime, n, power.precision().max(1));
        sum = if n % 2 == 0 {
            &sum - &term
        } else {
            &sum + &term
        };
        n += 1;
    }
    Ok(sum)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Decides whether `x^2 = a` is solvable in `Q_p`: `γ(a)` even, plus
/// `a_0` a square mod `p` (odd `p`) or `a_1 = a_2 = 0` (`p = 2`).
///
/// Returns the residue from which the root is lifted: the smaller square
/// root of `a_0` modulo `p`, or `1` for `p = 2`.
pub fn sqrt_witness(a: &PadicNumber) -> Result<Option<u64>> {
    let prime = a.prime();
    if a.is_zero() {
        return Err(PadicError::OutOfDomain {
            function: "sqrt",
            reason: "argument is zero to working precision".into(),
        });
    }
    if a.valuation() % 2 != 0 {
        return Ok(None);
    }
    let p = prime.get();
    if p == 2 {
        if a.precision() < 3 {
            return Err(PadicError::PrecisionExhausted {
                context: "2-adic square test needs three unit digits".into(),
            });
        }
        let low = a.digits();
        return Ok((low[1] == 0 && low[2] == 0).then_some(1));
    }
    let a0 = a.digits()[0];
    Ok(sqrt_mod_prime(a0, p).map(|r| r.min(p - r)))
}

pub fn sqrt_exists(a: &PadicNumber) -> Result<bool> {
    Ok(sqrt_witness(a)?.is_some())
}

/// The square root of `a` whose leading digit is the witness residue.
pub fn sqrt(a: &PadicNumber) -> Result<PadicNumber> {
    let prime = a.prime();
    let Some(witness) = sqrt_witness(a)? else {
        let reason = if a.valuation() % 2 != 0 {
            format!("valuation {} is odd", a.valuation())
        } else if prime.get() == 2 {
            "unit part is not 1 mod 8".to_string()
        } else {
            format!(
                "leading digit {} is not a square mod {prime}",
                a.digits()[0]
            )
        };
        return Err(PadicError::NoSquareRoot {
            prime: prime.get(),
            reason,
        });
    };
    let unit = a.shift(-a.valuation());
    let n = unit.precision();
    let f = PadicPoly::new(
        prime,
        vec![
            -&unit,
            PadicNumber::zero(prime, PadicPoly::EXACT),
            PadicNumber::one(prime, n),
        ],
    )?;
    let index = if prime.get() == 2 { 1 } else { 0 };
    let root = hensel_lift(&f, &PadicNumber::from_i64(prime, witness as i64, n), index)?;
    Ok(root.shift(a.valuation() / 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = exp_p(&PadicNumber::zero(p(3), 20)).unwrap();
        assert!(e.eq_to_precision(&PadicNumber::one(p(3), 20)));
    }

    #[test]
    fn exp_of_three_mod_27() {
        let e = exp_p(&PadicNumber::from_i64(p(3), 3, 2)).unwrap();
        assert_eq!(e.residue_u64(3).unwrap(), 13);
        let e = exp_p(&PadicNumber::from_i64(p(3), 3, 40)).unwrap();
        assert_eq!(e.residue_u64(3).unwrap(), 13);
    }

    #[test]
    fn exp_domain_error_for_two_adic_two() {
        let r = exp_p(&PadicNumber::from_i64(p(2), 2, 10));
        assert!(matches!(r, Err(PadicError::OutOfDomain { .. })));
    }

    #[test]
    fn log_basics() {
        assert!(log_p(&PadicNumber::one(p(3), 10)).unwrap().is_zero());
        let l = log_p(&PadicNumber::from_i64(p(3), 4, 30)).unwrap();
        assert_eq!(l.valuation(), 1);
        let x = PadicNumber::from_i64(p(3), 3, 30);
        let back = log_p(&exp_p(&x).unwrap()).unwrap();
        assert!(back.eq_to_precision(&x));
        assert!(log_p(&PadicNumber::from_i64(p(3), 2, 10)).is_err());
    }

    #[test]
    fn tonelli_shanks_matches_brute_force() {
        for &q in &[3u64, 5, 7, 13, 17, 41, 97] {
            for a in 1..q {
                let brute = (1..q).any(|y| y * y % q == a);
                let ts = sqrt_mod_prime(a, q);
                assert_eq!(brute, ts.is_some(), "p={q} a={a}");
                if let Some(r) = ts {
                    assert_eq!(r * r % q, a);
                }
            }
        }
    }

    #[test]
    fn square_root_examples() {
        let seven = PadicNumber::from_i64(p(3), 7, 8);
        assert_eq!(sqrt_witness(&seven).unwrap(), Some(1));
        let r = sqrt(&seven).unwrap();
        assert_eq!(r.residue_u64(2).unwrap(), 4);
        assert!((&r * &r).eq_to_precision(&seven));
        assert!(!sqrt_exists(&PadicNumber::from_i64(p(3), 3, 8)).unwrap());
        assert!(!sqrt_exists(&PadicNumber::from_i64(p(3), 2, 8)).unwrap());
        assert!(matches!(
            sqrt(&PadicNumber::from_i64(p(3), 2, 8)),
            Err(PadicError::NoSquareRoot { .. })
        ));
        let one = sqrt(&PadicNumber::one(p(5), 10)).unwrap();
        assert!(one.eq_to_precision(&PadicNumber::one(p(5), 10)));
    }

    #[test]
    fn two_adic_square_roots() {
        let a = PadicNumber::from_i64(p(2), 17, 20);
        let r = sqrt(&a).unwrap();
        assert!((&r * &r).eq_to_precision(&a));
        assert!(!sqrt_exists(&PadicNumber::from_i64(p(2), 5, 20)).unwrap());
        let b = PadicNumber::from_i64(p(2), 4 * 9, 20);
        let r = sqrt(&b).unwrap();
        assert_eq!(r.valuation(), 1);
        assert!((&r * &r).eq_to_precision(&b));
    }
}
