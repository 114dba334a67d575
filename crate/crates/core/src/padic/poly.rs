use serde::{Deserialize, Serialize};

use super::error::{PadicError, Result};
use super::number::{PadicNumber, Prime};

/// Polynomial over `Q_p`, coefficients stored from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicPoly {
    prime: Prime,
    coefficients: Vec<PadicNumber>,
}

impl PadicPoly {
    /// Absolute precision used for coefficients that are exactly zero.
    pub const EXACT: i64 = 1 << 40;

    pub fn new(prime: Prime, coefficients: Vec<PadicNumber>) -> Result<Self> {
        if let Some(c) = coefficients.iter().find(|c| c.prime() != prime) {
            return Err(PadicError::PrimeMismatch {
                left: prime.get(),
                right: c.prime().get(),
            });
        }
        Ok(Self {
            prime,
            coefficients,
        })
    }

    pub fn from_i64s(prime: Prime, coefficients: &[i64], precision: u32) -> Self {
        let coefficients = coefficients
            .iter()
            .map(|&c| {
                if c == 0 {
                    PadicNumber::zero(prime, Self::EXACT)
                } else {
                    PadicNumber::from_i64(prime, c, precision)
                }
            })
            .collect();
        Self {
            prime,
            coefficients,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn coefficients(&self) -> &[PadicNumber] {
        &self.coefficients
    }

    /// Formal degree (number of stored coefficients minus one).
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        if x.prime() != self.prime {
            return Err(PadicError::PrimeMismatch {
                left: self.prime.get(),
                right: x.prime().get(),
            });
        }
        let mut iter = self.coefficients.iter().rev();
        let Some(lead) = iter.next() else {
            return Ok(PadicNumber::zero(self.prime, Self::EXACT));
        };
        let mut acc = lead.clone();
        for c in iter {
            acc = &(&acc * x) + c;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| {
                if c.is_zero() {
                    PadicNumber::zero(self.prime, c.valuation())
                } else {
                    c * &PadicNumber::from_i64(self.prime, j as i64, c.precision())
                }
            })
            .collect();
        Self {
            prime: self.prime,
            coefficients,
        }
    }

    /// Smallest absolute precision among the coefficients; no root can be
    /// resolved beyond it.
    pub fn coefficient_precision(&self) -> i64 {
        self.coefficients
            .iter()
            .map(PadicNumber::absolute_precision)
            .min()
            .unwrap_or(Self::EXACT)
    }
}

/// Treats the known digits of `x` as exact and pads to absolute precision
/// `absolute`.
fn pad_to(x: &PadicNumber, absolute: i64) -> PadicNumber {
    if x.is_zero() {
        return PadicNumber::zero(x.prime(), PadicPoly::EXACT);
    }
    let digits = (absolute - x.valuation()).max(x.precision() as i64) as u32;
    x.extend_precision(digits)
}

const MAX_NEWTON_STEPS: usize = 200;

/// Lifts an approximate root `a0` of `f` to the unique root `x0 ≡ a0
/// (mod p^(i+1))`.
///
/// Requires coefficients and `a0` in `Z_p`, `f(a0) ≡ 0 (mod p^(2i+1))` and
/// `v(f'(a0)) = i` exactly. Newton steps `x ← x − f(x)/f'(x)` run until
/// `f(x)` vanishes at the coefficients' precision; the root is then known
/// modulo `p^(M − i)` where `M` is that precision.
pub fn hensel_lift(f: &PadicPoly, a0: &PadicNumber, index: u32) -> Result<PadicNumber> {
    let i = index as i64;
    if a0.prime() != f.prime() {
        return Err(PadicError::PrimeMismatch {
            left: f.prime().get(),
            right: a0.prime().get(),
        });
    }
    if f.coefficients().iter().any(|c| c.valuation() < 0) {
        return Err(PadicError::HenselPrecondition(
            "a coefficient of f is not a p-adic integer".into(),
        ));
    }
    if a0.valuation() < 0 {
        return Err(PadicError::HenselPrecondition(
            "a0 is not a p-adic integer".into(),
        ));
    }
    let df = f.derivative();
    let fa = f.eval(a0)?;
    if fa.valuation() < 2 * i + 1 {
        return Err(PadicError::HenselPrecondition(format!(
            "f(a0) ≢ 0 (mod p^{}): v(f(a0)) = {}",
            2 * i + 1,
            fa.valuation()
        )));
    }
    let da = df.eval(a0)?;
    check_derivative(&da, i, "a0")?;

    let target = f.coefficient_precision();
    let pad = target + i + 2;
    let mut x = pad_to(a0, pad);
    for step in 0..MAX_NEWTON_STEPS {
        let fx = f.eval(&x)?;
        if fx.is_zero() {
            return Ok(x.truncate_absolute(fx.valuation() - i));
        }
        let dx = df.eval(&x)?;
        check_derivative(&dx, i, &format!("Newton step {step}"))?;
        x = pad_to(&(&x - &(&fx / &dx)), pad);
    }
    Err(PadicError::NotConverged {
        iterations: MAX_NEWTON_STEPS,
    })
}

fn check_derivative(d: &PadicNumber, i: i64, at: &str) -> Result<()> {
    if d.valuation() < i {
        return Err(PadicError::HenselPrecondition(format!(
            "f'({at}) ≢ 0 (mod p^{i}): v(f') = {}",
            d.valuation()
        )));
    }
    if d.is_zero() || d.valuation() > i {
        return Err(PadicError::HenselPrecondition(format!(
            "f'({at}) ≡ 0 (mod p^{}): v(f') ≥ {}",
            i + 1,
            d.valuation()
        )));
    }
    Ok(())
}
