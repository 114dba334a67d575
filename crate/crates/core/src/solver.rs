//! Boundary-law equations of the SOS model and their solutions.
//!
//! A boundary field assigns to each vertex a vector `z = (z_0, …, z_m)` with
//! `z_m = 1`. It defines a Gibbs measure when, at every non-root vertex `x`,
//!
//! ```text
//! z_{i,x} = Π_{y ∈ S(x)} F_i(z_y),
//! F_i(z) = (Σ_{j<m} θ^|i−j| z_j + θ^(m−i)) / (Σ_{j<m} θ^(m−j) z_j + 1).
//! ```
//!
//! For translation-invariant fields this reads `z_i = F_i(z)^k`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{hensel_lift, sqrt, sqrt_exists, PadicError, PadicNumber, PadicPoly, Prime};
use crate::tree::{ModelParams, TreeVolume};

/// Digits below working precision tolerated in residual checks.
pub const RESIDUAL_SLACK: u32 = 8;

/// Largest Hensel index tried when lifting roots of `g`.
pub const HENSEL_INDEX_BOUND: u32 = 4;

/// Extra digits carried internally by solvers that lose precision.
pub const GUARD_DIGITS: u32 = 16;

/// Bound on residue classes visited by the Newton search used when
/// `p | m + 1` and no closed-form analysis exists.
pub const NEWTON_CLASS_BUDGET: usize = 4096;

const NEWTON_STEPS: u32 = 24;

/// Largest prime for which residue classes modulo `p` are scanned.
pub const RESIDUE_SCAN_PRIME_LIMIT: u64 = 1 << 16;

/// A normalized vector `(z_0, …, z_m)` with `z_m = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PadicNumber>", into = "Vec<PadicNumber>")]
pub struct FieldVector {
    components: Vec<PadicNumber>,
}

impl TryFrom<Vec<PadicNumber>> for FieldVector {
    type Error = Error;

    fn try_from(components: Vec<PadicNumber>) -> Result<Self> {
        Self::new(components)
    }
}

impl From<FieldVector> for Vec<PadicNumber> {
    fn from(z: FieldVector) -> Self {
        z.components
    }
}

impl FieldVector {
    /// Checks that the vector has at least two entries sharing one prime,
    /// that the last one is `1` and that every entry lies in `E_p`.
    pub fn new(components: Vec<PadicNumber>) -> Result<Self> {
        let z = Self::unchecked(components)?;
        let last = z.components.last().expect("length checked");
        if !last.eq_to_precision(&PadicNumber::one(last.prime(), last.precision().max(1))) {
            return Err(Error::InvalidField(format!(
                "last component is {last}, not 1"
            )));
        }
        if let Some((i, c)) = z.components.iter().enumerate().find(|(_, c)| !c.in_ep()) {
            return Err(Error::InvalidField(format!(
                "component {i} = {c} is not in E_p"
            )));
        }
        Ok(z)
    }

    fn unchecked(components: Vec<PadicNumber>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidField(
                "a field vector needs m + 1 ≥ 2 components".into(),
            ));
        }
        let p = components[0].prime();
        if let Some(c) = components.iter().find(|c| c.prime() != p) {
            return Err(PadicError::PrimeMismatch {
                left: p.get(),
                right: c.prime().get(),
            }
            .into());
        }
        Ok(Self { components })
    }

    /// Divides every entry by the last one.
    pub fn normalized(components: Vec<PadicNumber>) -> Result<Self> {
        let z = Self::unchecked(components)?;
        let last = z.components.last().expect("length checked").clone();
        let components = z
            .components
            .iter()
            .map(|c| c.checked_div(&last))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(components)
    }

    /// `(z_0, …, z_{m−1}, 1)` from the free components.
    pub fn from_free(free: Vec<PadicNumber>) -> Result<Self> {
        let p = free
            .first()
            .map(PadicNumber::prime)
            .ok_or_else(|| Error::InvalidField("no free components".into()))?;
        let n = free.iter().map(PadicNumber::precision).max().unwrap_or(1);
        let mut components = free;
        components.push(PadicNumber::one(p, n));
        Self::new(components)
    }

    pub fn ones(p: Prime, m: u32, precision: u32) -> Self {
        Self {
            components: vec![PadicNumber::one(p, precision); m as usize + 1],
        }
    }

    pub fn prime(&self) -> Prime {
        self.components[0].prime()
    }

    /// `m`, the largest spin value.
    pub fn m(&self) -> u32 {
        self.components.len() as u32 - 1
    }

    pub fn components(&self) -> &[PadicNumber] {
        &self.components
    }

    pub fn get(&self, i: usize) -> &PadicNumber {
        &self.components[i]
    }

    /// Smallest relative precision among the components.
    pub fn precision(&self) -> u32 {
        self.components
            .iter()
            .map(PadicNumber::precision)
            .min()
            .unwrap_or(0)
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| c.with_precision(precision))
                .collect(),
        }
    }

    /// `min_i v(z_i − t_i)`, i.e. `−log_p ‖z − t‖_p`.
    pub fn distance_valuation(&self, other: &Self) -> Result<i64> {
        if self.components.len() != other.components.len() {
            return Err(Error::InvalidField("vectors of different length".into()));
        }
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.distance_valuation(b).map_err(Error::from))
            .try_fold(i64::MAX, |acc, v| Ok(acc.min(v?)))
    }

    /// Whether `z_i = z_{m−i}` for every `i`, at working precision.
    pub fn is_symmetric(&self) -> bool {
        let n = self.components.len();
        (0..n / 2).all(|i| self.components[i].eq_to_precision(&self.components[n - 1 - i]))
    }

    /// Residues of the components modulo `p^3`.
    pub fn residues(&self, exponent: u32) -> Vec<BigUint> {
        self.components
            .iter()
            .map(|c| c.residue(exponent).unwrap_or_else(|_| BigUint::zero()))
            .collect()
    }
}

impl fmt::Display for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A boundary field on the tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BoundaryField {
    TranslationInvariant {
        z: FieldVector,
    },
    /// One vector per vertex of a ball of radius `radius` in breadth-first
    /// order. The root entry is never read: the root value is always derived
    /// from its successors.
    PerVertex {
        k: u32,
        radius: u32,
        values: Vec<FieldVector>,
    },
}

impl BoundaryField {
    pub fn translation_invariant(z: FieldVector) -> Self {
        BoundaryField::TranslationInvariant { z }
    }

    pub fn per_vertex(volume: &TreeVolume, values: Vec<FieldVector>) -> Result<Self> {
        if values.len() != volume.len() {
            return Err(Error::InvalidField(format!(
                "{} vectors for {} vertices",
                values.len(),
                volume.len()
            )));
        }
        let m = values[0].m();
        if values.iter().any(|z| z.m() != m) {
            return Err(Error::InvalidField("vectors of different length".into()));
        }
        Ok(BoundaryField::PerVertex {
            k: volume.k(),
            radius: volume.radius(),
            values,
        })
    }

    pub fn m(&self) -> u32 {
        match self {
            BoundaryField::TranslationInvariant { z } => z.m(),
            BoundaryField::PerVertex { values, .. } => values[0].m(),
        }
    }

    pub fn prime(&self) -> Prime {
        match self {
            BoundaryField::TranslationInvariant { z } => z.prime(),
            BoundaryField::PerVertex { values, .. } => values[0].prime(),
        }
    }

    /// `z_x` at a vertex of a volume; errors when a per-vertex field does not
    /// cover it.
    pub fn at(&self, volume: &TreeVolume, x: usize) -> Result<&FieldVector> {
        match self {
            BoundaryField::TranslationInvariant { z } => Ok(z),
            BoundaryField::PerVertex { k, radius, values } => {
                if *k != volume.k() || volume.position(x).0 > *radius {
                    return Err(Error::InvalidField(format!(
                        "vertex {x} is outside the ball of radius {radius} on the order-{k} tree"
                    )));
                }
                Ok(&values[x])
            }
        }
    }

    /// Whether the field is defined on every vertex of `volume`.
    pub fn covers(&self, volume: &TreeVolume) -> bool {
        match self {
            BoundaryField::TranslationInvariant { .. } => true,
            BoundaryField::PerVertex { k, radius, .. } => {
                *k == volume.k() && *radius >= volume.radius()
            }
        }
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        match self {
            BoundaryField::TranslationInvariant { z } => BoundaryField::TranslationInvariant {
                z: z.with_precision(precision),
            },
            BoundaryField::PerVertex { k, radius, values } => BoundaryField::PerVertex {
                k: *k,
                radius: *radius,
                values: values.iter().map(|z| z.with_precision(precision)).collect(),
            },
        }
    }
}

/// Evaluator for `F_0, …, F_m` with the powers of `θ` precomputed.
#[derive(Debug, Clone)]
pub struct Rhs {
    m: u32,
    /// `θ^0, …, θ^m`.
    powers: Vec<PadicNumber>,
}

impl Rhs {
    pub fn new(params: &ModelParams) -> Self {
        Self {
            m: params.m,
            powers: params.theta_powers(params.m as u64),
        }
    }

    fn check(&self, z: &FieldVector) -> Result<()> {
        if z.m() != self.m {
            return Err(Error::InvalidField(format!(
                "vector has {} components, the model has {}",
                z.m() + 1,
                self.m + 1
            )));
        }
        Ok(())
    }

    /// `Σ_{j<m} θ^|i−j| z_j + θ^(m−i)`.
    pub fn numerator(&self, z: &FieldVector, i: u32) -> Result<PadicNumber> {
        self.check(z)?;
        let m = self.m;
        let mut acc = self.powers[(m - i) as usize].clone();
        for j in 0..m {
            let e = i.abs_diff(j) as usize;
            acc = &acc + &(&self.powers[e] * z.get(j as usize));
        }
        Ok(acc)
    }

    /// `Σ_{j<m} θ^(m−j) z_j + 1`; equals the numerator at `i = m`.
    pub fn denominator(&self, z: &FieldVector) -> Result<PadicNumber> {
        self.numerator(z, self.m)
    }

    pub fn component(&self, z: &FieldVector, i: u32) -> Result<PadicNumber> {
        let den = self.denominator(z)?;
        self.component_with(z, i, &den)
    }

    fn component_with(&self, z: &FieldVector, i: u32, den: &PadicNumber) -> Result<PadicNumber> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator { component: i });
        }
        Ok(self.numerator(z, i)?.checked_div(den)?)
    }

    /// `(F_0(z), …, F_m(z))`; the last entry is `1`.
    pub fn all(&self, z: &FieldVector) -> Result<Vec<PadicNumber>> {
        let den = self.denominator(z)?;
        let mut out = (0..self.m)
            .map(|i| self.component_with(z, i, &den))
            .collect::<Result<Vec<_>>>()?;
        out.push(PadicNumber::one(z.prime(), den.precision().max(1)));
        Ok(out)
    }

    /// Componentwise `Π_s F_i(z^(s))`.
    pub fn product(&self, zs: &[&FieldVector]) -> Result<Vec<PadicNumber>> {
        let mut acc: Option<Vec<PadicNumber>> = None;
        for z in zs {
            let f = self.all(z)?;
            acc = Some(match acc {
                None => f,
                Some(a) => a.iter().zip(&f).map(|(x, y)| x * y).collect(),
            });
        }
        acc.ok_or_else(|| Error::InvalidField("empty product".into()))
    }

    /// The translation-invariant map `z ↦ (F_0(z)^k, …, F_{m−1}(z)^k, 1)`.
    pub fn ti_map(&self, z: &FieldVector, k: u32) -> Result<FieldVector> {
        let f = self.all(z)?;
        Ok(FieldVector {
            components: f.iter().map(|c| c.pow(k as u64)).collect(),
        })
    }
}

/// `F_i(z)` for the model.
pub fn rhs_component(z: &FieldVector, i: u32, params: &ModelParams) -> Result<PadicNumber> {
    if i > params.m {
        return Err(Error::Precondition(format!(
            "spin {i} outside 0..={}",
            params.m
        )));
    }
    Rhs::new(params).component(z, i)
}

/// A map `z ↦ Σ_j a_j z_j / Σ_j b_j z_j` with coefficient vectors in
/// `E_p^(m+1)`; the SOS right-hand sides are the special case
/// `a_j = θ^|i−j|`, `b_j = θ^(m−j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFractional {
    pub a: Vec<PadicNumber>,
    pub b: Vec<PadicNumber>,
}

impl LinearFractional {
    pub fn new(a: Vec<PadicNumber>, b: Vec<PadicNumber>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::Precondition(
                "coefficient vectors differ in length".into(),
            ));
        }
        Ok(Self { a, b })
    }

    pub fn eval(&self, z: &[PadicNumber]) -> Result<PadicNumber> {
        if z.len() != self.a.len() {
            return Err(Error::Precondition("argument has the wrong length".into()));
        }
        let dot = |c: &[PadicNumber]| -> PadicNumber {
            let mut it = c.iter().zip(z).map(|(x, y)| x * y);
            let first = it.next().expect("non-empty");
            it.fold(first, |acc, t| &acc + &t)
        };
        let den = dot(&self.b);
        if den.is_zero() {
            return Err(Error::ZeroDenominator { component: 0 });
        }
        Ok(dot(&self.a).checked_div(&den)?)
    }
}

/// `f(x) = ((2a + x) / (a² + a x + 1))^k`, the right-hand side of the
/// three-state equation for `z_1` once `z_0 = 1`.
pub fn z1_branch_map(a: &PadicNumber, x: &PadicNumber, k: u32) -> Result<PadicNumber> {
    let p = a.prime();
    let n = a.precision().max(x.precision());
    let two = PadicNumber::from_i64(p, 2, n);
    let one = PadicNumber::one(p, n);
    let num = &(&two * a) + x;
    let den = &(&(a * a) + &(a * x)) + &one;
    if den.is_zero() {
        return Err(Error::ZeroDenominator { component: 1 });
    }
    Ok(num.checked_div(&den)?.pow(k as u64))
}

/// Result of the contraction iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiSolution {
    pub z: FieldVector,
    /// Number of applications of the map until two successive iterates
    /// agreed at working precision.
    pub iterations: u32,
}

fn reject_p_divides(params: &ModelParams) -> Result<()> {
    if params.p_divides_states() {
        return Err(Error::Precondition(format!(
            "p = {} divides m + 1 = {}; the contraction argument needs p ∤ m + 1",
            params.p,
            params.m + 1
        )));
    }
    Ok(())
}

/// The unique translation-invariant solution for `p ∤ m + 1`, iterated from
/// the all-ones vector.
pub fn solve_ti_unique(params: &ModelParams) -> Result<TiSolution> {
    solve_ti_from(
        params,
        &FieldVector::ones(params.p, params.m, params.precision),
    )
}

/// Contraction iteration from an arbitrary start in `E_p^(m+1)`.
pub fn solve_ti_from(params: &ModelParams, start: &FieldVector) -> Result<TiSolution> {
    reject_p_divides(params)?;
    if start.m() != params.m || start.prime() != params.p {
        return Err(Error::InvalidField(
            "start vector does not match the model".into(),
        ));
    }
    let start = FieldVector::new(start.with_precision(params.precision).components)?;
    let rhs = Rhs::new(params);
    let max_iterations = params.precision + RESIDUAL_SLACK;
    let mut z = start;
    for iteration in 1..=max_iterations {
        let next = rhs.ti_map(&z, params.k)?;
        if next.distance_valuation(&z)? >= params.precision as i64 {
            return Ok(TiSolution {
                z: next,
                iterations: iteration,
            });
        }
        z = next;
    }
    Err(Error::NotConverged {
        iterations: max_iterations,
    })
}

/// `g(x) = θ x^(k+1) − x^k + (θ² + 1) x − 2θ`.
pub fn build_g_poly(params: &ModelParams) -> Result<PadicPoly> {
    if params.m != 2 {
        return Err(Error::Precondition(format!(
            "g(x) is defined for m = 2, got m = {}",
            params.m
        )));
    }
    let p = params.p;
    let n = params.precision;
    let theta = &params.theta;
    let k = params.k as usize;
    let exact_zero = || PadicNumber::zero(p, PadicPoly::EXACT);
    let mut c = vec![exact_zero(); k + 2];
    c[0] = -&(&PadicNumber::from_i64(p, 2, n) * theta);
    c[1] = &(theta * theta) + &PadicNumber::one(p, n);
    c[k] = &c[k] - &PadicNumber::one(p, n);
    c[k + 1] = theta.clone();
    Ok(PadicPoly::new(p, c)?)
}

/// Residual of a field against the boundary-law equations, as a valuation
/// (larger is better).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub valuation: i64,
    pub threshold: i64,
}

impl Residual {
    pub fn passes(&self) -> bool {
        self.valuation >= self.threshold
    }
}

/// `min_{x,i} v(z_{i,x} − Π_{y∈S(x)} F_i(z_y))` over non-root vertices with
/// successors, compared against `N − slack`.
pub fn solution_residual(field: &BoundaryField, params: &ModelParams) -> Result<Residual> {
    if field.m() != params.m || field.prime() != params.p {
        return Err(Error::InvalidField("field does not match the model".into()));
    }
    let rhs = Rhs::new(params);
    let threshold = params.precision as i64 - RESIDUAL_SLACK as i64;
    let mut worst = i64::MAX;
    let mut check = |z: &FieldVector, image: &[PadicNumber]| -> Result<()> {
        for (i, w) in image.iter().enumerate().take(params.m as usize) {
            worst = worst.min(z.get(i).distance_valuation(w)?);
        }
        Ok(())
    };
    match field {
        BoundaryField::TranslationInvariant { z } => {
            let image = rhs.ti_map(z, params.k)?;
            check(z, image.components())?;
        }
        BoundaryField::PerVertex { k, radius, .. } => {
            if *k != params.k {
                return Err(Error::InvalidField(
                    "field lives on a tree of another order".into(),
                ));
            }
            let volume = TreeVolume::new(*k, *radius)?;
            for x in 1..volume.len() {
                let succ: Vec<&FieldVector> = volume
                    .successors(x)
                    .map(|y| field.at(&volume, y))
                    .collect::<Result<_>>()?;
                if succ.is_empty() {
                    continue;
                }
                let image = rhs.product(&succ)?;
                check(field.at(&volume, x)?, &image)?;
            }
        }
    }
    Ok(Residual {
        valuation: worst,
        threshold,
    })
}

/// Whether a field solves the boundary-law equations to working precision.
pub fn verify_solution(field: &BoundaryField, params: &ModelParams) -> bool {
    let in_ep = match field {
        BoundaryField::TranslationInvariant { z } => z.components().iter().all(PadicNumber::in_ep),
        BoundaryField::PerVertex { values, .. } => values
            .iter()
            .flat_map(|z| z.components())
            .all(PadicNumber::in_ep),
    };
    in_ep
        && solution_residual(field, params)
            .map(|r| r.passes())
            .unwrap_or(false)
}

/// Where a solution came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Provenance {
    /// Fixed point of the contraction map.
    Contraction { iterations: u32 },
    /// `z = (1, x^k, 1)` for a root `x` of `g` lifted from a residue class.
    GRoot {
        residue: String,
        modulus_exponent: u32,
        hensel_index: u32,
    },
    /// `z = (x², y², 1)` from a root of the quartic in `x = √z_0`.
    Quartic { root: QuarticRootLabel },
    /// Newton iteration from the class `start mod p^modulus_exponent`.
    NewtonSearch {
        start: Vec<String>,
        modulus_exponent: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuarticRootLabel {
    /// `+√D`, `+` outer root.
    UpperPlus,
    /// `+√D`, `−` outer root.
    UpperMinus,
    /// `−√D`, `+` outer root.
    LowerPlus,
    /// `−√D`, `−` outer root.
    LowerMinus,
    /// Root of the reduced quadratic when `x = 1` is a double root.
    DegeneratePlus,
    DegenerateMinus,
}

/// A verified solution with its residue data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    pub z: FieldVector,
    pub provenance: Provenance,
    pub residual: Residual,
}

impl SolutionRecord {
    fn build(z: FieldVector, provenance: Provenance, params: &ModelParams) -> Result<Self> {
        let residual = solution_residual(&BoundaryField::translation_invariant(z.clone()), params)?;
        Ok(Self {
            z,
            provenance,
            residual,
        })
    }

    pub fn field(&self) -> BoundaryField {
        BoundaryField::translation_invariant(self.z.clone())
    }
}

/// Parameters at `N + GUARD_DIGITS` when an exact source allows it.
fn guarded(params: &ModelParams) -> ModelParams {
    params
        .with_precision(params.precision + GUARD_DIGITS)
        .unwrap_or_else(|_| params.clone())
}

/// Two solutions count as distinct when they differ by at least
/// `p^(−N/2)`.
pub fn distinct(a: &FieldVector, b: &FieldVector, precision: u32) -> bool {
    a.distance_valuation(b)
        .map(|v| v <= (precision / 2) as i64)
        .unwrap_or(true)
}

fn push_distinct(out: &mut Vec<SolutionRecord>, rec: SolutionRecord, precision: u32) {
    if out.iter().all(|r| distinct(&r.z, &rec.z, precision)) {
        out.push(rec);
    }
}

/// Outcome of the `z_0 = 1` branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Z0Branch {
    pub solutions: Vec<SolutionRecord>,
    /// Roots of `g` whose `k`-th power is not in `E_p`.
    pub rejected_roots: Vec<PadicNumber>,
    /// Residue classes where `g` vanishes but no index up to the bound
    /// satisfies the lifting conditions, as `(residue, exponent)`.
    pub inconclusive_residues: Vec<(String, u32)>,
}

fn big_to_padic(p: Prime, r: &BigUint, precision: u32) -> PadicNumber {
    PadicNumber::from_bigint(p, &r.clone().into(), precision)
}

/// All roots of `g` in `Z_p`, each giving `(1, x^k, 1)`.
///
/// Residue classes modulo `p^j` on which `g ≡ 0` are refined until some
/// index `i < j` satisfies the lifting conditions at the class
/// representative; the lift is then the only root in the class.
pub fn solve_z0_equal_1_branch(params: &ModelParams) -> Result<Z0Branch> {
    let g_params = guarded(params);
    let g = build_g_poly(&g_params)?;
    let dg = g.derivative();
    let p = params.p;
    if p.get() > RESIDUE_SCAN_PRIME_LIMIT {
        return Err(Error::Precondition(format!(
            "residue scan is limited to p ≤ {RESIDUE_SCAN_PRIME_LIMIT}"
        )));
    }
    let work = g_params.precision;
    let pb = BigUint::from(p.get());
    let max_depth = 2 * HENSEL_INDEX_BOUND + 2;

    let vanishes = |r: &BigUint, j: u32| -> Result<bool> {
        let x = big_to_padic(p, r, work + j);
        Ok(g.eval(&x)?.valuation() >= j as i64)
    };

    let mut stack: Vec<(BigUint, u32)> = Vec::new();
    for a in (0..p.get()).rev() {
        let r = BigUint::from(a);
        if vanishes(&r, 1)? {
            stack.push((r, 1));
        }
    }

    let mut roots: Vec<(PadicNumber, Provenance)> = Vec::new();
    let mut inconclusive = Vec::new();
    while let Some((r, j)) = stack.pop() {
        let x = big_to_padic(p, &r, work + j);
        let gx = g.eval(&x)?;
        let dx = dg.eval(&x)?;
        let index = (0..=HENSEL_INDEX_BOUND.min(j - 1)).find(|&i| {
            gx.valuation() > 2 * i as i64 && !dx.is_zero() && dx.valuation() == i as i64
        });
        if let Some(i) = index {
            let root = hensel_lift(&g, &x, i)?;
            let provenance = Provenance::GRoot {
                residue: r.to_string(),
                modulus_exponent: j,
                hensel_index: i,
            };
            roots.push((root, provenance));
            continue;
        }
        if j >= max_depth {
            inconclusive.push((r.to_string(), j));
            continue;
        }
        let step = pb.pow(j);
        for t in (0..p.get()).rev() {
            let child = &r + &step * BigUint::from(t);
            if vanishes(&child, j + 1)? {
                stack.push((child, j + 1));
            }
        }
    }

    let mut solutions = Vec::new();
    let mut rejected_roots = Vec::new();
    for (x, provenance) in roots {
        let z1 = x.pow(params.k as u64).with_precision(params.precision);
        if !z1.in_ep() {
            rejected_roots.push(x.with_precision(params.precision));
            continue;
        }
        let z = FieldVector::new(vec![
            PadicNumber::one(p, params.precision),
            z1,
            PadicNumber::one(p, params.precision),
        ])?;
        push_distinct(
            &mut solutions,
            SolutionRecord::build(z, provenance, params)?,
            params.precision,
        );
    }
    Ok(Z0Branch {
        solutions,
        rejected_roots,
        inconclusive_residues: inconclusive,
    })
}

/// Square-root existence for one radicand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SqrtTest {
    pub radicand: PadicNumber,
    pub exists: bool,
}

impl SqrtTest {
    fn of(radicand: PadicNumber) -> Result<Self> {
        let exists = radicand.is_zero() || sqrt_exists(&radicand)?;
        Ok(Self { radicand, exists })
    }

    fn root(&self) -> Result<Option<PadicNumber>> {
        if !self.exists {
            return Ok(None);
        }
        if self.radicand.is_zero() {
            return Ok(Some(self.radicand.clone()));
        }
        Ok(Some(sqrt(&self.radicand)?))
    }
}

/// Case analysis of the `z_0 ≠ 1` branch for `m = 2`, `k = 2`, odd `p`.
///
/// With `x = √z_0`, `y = √z_1` the equations reduce to the palindromic
/// quartic `θ³x⁴ + θ(3θ²−1)x³ + (4θ³−2θ+1)x² + θ(3θ²−1)x + θ³ = 0` and
/// `y = x / (θ(x+1))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuarticAnalysis {
    /// `12θ³ − 4θ + 1` vanishes at working precision, making `x = 1` a
    /// double root.
    pub degenerate: bool,
    /// `D = θ⁴ + 2θ² − 4θ + 1`.
    pub d: SqrtTest,
    /// The root of `D` whose unit part is `≡ 1 (mod p)`.
    pub sqrt_d: Option<PadicNumber>,
    /// `2(1 − 7θ² + √D)`.
    pub upper_chain: Option<SqrtTest>,
    /// `2(1 − 7θ² − √D)`.
    pub lower_chain: Option<SqrtTest>,
    /// `(1 − 7θ² ± √D)(1 + θ² ± √D)`, the radicands in the root formulas.
    pub upper_radicand: Option<SqrtTest>,
    pub lower_radicand: Option<SqrtTest>,
    /// Degenerate case: `1 − 7θ²` and the discriminant of the reduced
    /// quadratic.
    pub degenerate_chain: Option<SqrtTest>,
    pub degenerate_discriminant: Option<SqrtTest>,
    /// Roots `x` of the quartic that exist in `Q_p`.
    pub roots: Vec<(QuarticRootLabel, PadicNumber)>,
    /// Verified solutions in `E_p²` with `z_0 ≠ 1`.
    pub solutions: Vec<SolutionRecord>,
    /// Roots rejected because `(x², y²)` is not in `E_p²`, is on the `z_0 = 1`
    /// branch, or fails the residual check.
    pub rejected: Vec<(QuarticRootLabel, String)>,
}

impl QuarticAnalysis {
    /// Whether every square-root existence test on the path to a root
    /// fails.
    pub fn all_tests_fail(&self) -> bool {
        let ok = |t: &Option<SqrtTest>| t.as_ref().is_some_and(|t| t.exists);
        if self.degenerate {
            !ok(&self.degenerate_discriminant)
        } else {
            !self.d.exists || (!ok(&self.upper_radicand) && !ok(&self.lower_radicand))
        }
    }
}

fn int(p: Prime, n: i64, precision: u32) -> PadicNumber {
    PadicNumber::from_i64(p, n, precision)
}

/// The resolvent `θ³t² + θ(3θ²−1)t + 2θ³ − 2θ + 1` in `t = x + 1/x`.
pub fn resolvent_poly(theta: &PadicNumber) -> Result<PadicPoly> {
    let p = theta.prime();
    let n = theta.precision();
    let t2 = theta * theta;
    let t3 = &t2 * theta;
    let c2 = t3.clone();
    let c1 = theta * &(&(&int(p, 3, n) * &t2) - &PadicNumber::one(p, n));
    let c0 = &(&(&int(p, 2, n) * &t3) - &(&int(p, 2, n) * theta)) + &PadicNumber::one(p, n);
    Ok(PadicPoly::new(p, vec![c0, c1, c2])?)
}

/// The quartic in `x = √z_0`.
pub fn quartic_poly(theta: &PadicNumber) -> Result<PadicPoly> {
    let p = theta.prime();
    let n = theta.precision();
    let one = PadicNumber::one(p, n);
    let t2 = theta * theta;
    let t3 = &t2 * theta;
    let c1 = theta * &(&(&int(p, 3, n) * &t2) - &one);
    let c2 = &(&(&int(p, 4, n) * &t3) - &(&int(p, 2, n) * theta)) + &one;
    Ok(PadicPoly::new(p, vec![t3.clone(), c1.clone(), c2, c1, t3])?)
}

/// `D = θ⁴ + 2θ² − 4θ + 1`.
pub fn discriminant_d(theta: &PadicNumber) -> PadicNumber {
    let p = theta.prime();
    let n = theta.precision();
    let t2 = theta * theta;
    &(&(&(&t2 * &t2) + &(&int(p, 2, n) * &t2)) - &(&int(p, 4, n) * theta)) + &PadicNumber::one(p, n)
}

/// `b² − 4ac` for a quadratic `c0 + c1 t + c2 t²`.
pub fn quadratic_discriminant(poly: &PadicPoly) -> Result<PadicNumber> {
    let c = poly.coefficients();
    if c.len() != 3 {
        return Err(Error::Precondition("not a quadratic".into()));
    }
    let four = int(poly.prime(), 4, c[2].precision().max(1));
    Ok(&(&c[1] * &c[1]) - &(&four * &(&c[0] * &c[2])))
}

/// The square root whose leading unit digit is at most `p/2`; for `p = 3`
/// its unit part is `≡ 1 (mod 3)`.
fn normalized_sqrt(a: &PadicNumber) -> Result<PadicNumber> {
    if a.is_zero() {
        return Ok(a.clone());
    }
    let r = sqrt(a)?;
    let p = a.prime().get();
    Ok(if r.digits()[0] > p / 2 { -r } else { r })
}

/// Runs the `z_0 ≠ 1` case analysis for `m = 2`, `k = 2` and odd `p`.
pub fn analyze_quartic_branch(params: &ModelParams) -> Result<QuarticAnalysis> {
    if params.m != 2 || params.k != 2 || params.p.get() == 2 {
        return Err(Error::Precondition(
            "the quartic branch needs m = 2, k = 2 and an odd prime".into(),
        ));
    }
    let work = guarded(params);
    let p = params.p;
    let n = work.precision;
    let theta = &work.theta;
    let one = PadicNumber::one(p, n);
    let t2 = theta * theta;
    let t3 = &t2 * theta;

    let twelve = &(&(&int(p, 12, n) * &t3) - &(&int(p, 4, n) * theta)) + &one;
    let degenerate = twelve.is_zero();
    let d = SqrtTest::of(discriminant_d(theta))?;

    let mut analysis = QuarticAnalysis {
        degenerate,
        d: d.clone(),
        sqrt_d: None,
        upper_chain: None,
        lower_chain: None,
        upper_radicand: None,
        lower_radicand: None,
        degenerate_chain: None,
        degenerate_discriminant: None,
        roots: Vec::new(),
        solutions: Vec::new(),
        rejected: Vec::new(),
    };
    let four_t2 = &int(p, 4, n) * &t2;
    let one_minus_7 = &one - &(&int(p, 7, n) * &t2);

    if degenerate {
        // x4 = (x − 1)² (θ³x² + θ(5θ²−1)x + θ³)
        let b = &(&int(p, 5, n) * &t2) - &one;
        let disc = &(&b * &b) - &(&int(p, 4, n) * &(&t2 * &t2));
        analysis.degenerate_chain = Some(SqrtTest::of(one_minus_7.clone())?);
        let dt = SqrtTest::of(disc)?;
        if let Some(s) = dt.root()? {
            let two_t2 = &int(p, 2, n) * &t2;
            let nb = -&b;
            analysis.roots.push((
                QuarticRootLabel::DegeneratePlus,
                (&nb + &s).checked_div(&two_t2)?,
            ));
            analysis.roots.push((
                QuarticRootLabel::DegenerateMinus,
                (&nb - &s).checked_div(&two_t2)?,
            ));
        }
        analysis.degenerate_discriminant = Some(dt);
    } else if d.exists {
        let sd = normalized_sqrt(&d.radicand)?;
        let one_plus = &one + &t2;
        let base = &one - &(&int(p, 3, n) * &t2);
        let two = int(p, 2, n);
        for (upper, s) in [(true, sd.clone()), (false, -&sd)] {
            let chain = SqrtTest::of(&two * &(&one_minus_7 + &s))?;
            let radicand = SqrtTest::of(&(&one_minus_7 + &s) * &(&one_plus + &s))?;
            if let Some(r) = radicand.root()? {
                let centre = &base + &s;
                let (plus, minus) = if upper {
                    (QuarticRootLabel::UpperPlus, QuarticRootLabel::UpperMinus)
                } else {
                    (QuarticRootLabel::LowerPlus, QuarticRootLabel::LowerMinus)
                };
                analysis
                    .roots
                    .push((plus, (&centre + &r).checked_div(&four_t2)?));
                analysis
                    .roots
                    .push((minus, (&centre - &r).checked_div(&four_t2)?));
            }
            if upper {
                analysis.upper_chain = Some(chain);
                analysis.upper_radicand = Some(radicand);
            } else {
                analysis.lower_chain = Some(chain);
                analysis.lower_radicand = Some(radicand);
            }
        }
        analysis.sqrt_d = Some(sd.with_precision(params.precision));
    }

    let roots = std::mem::take(&mut analysis.roots);
    for (label, x) in &roots {
        match quartic_solution(x, theta, *label, params) {
            Ok(rec) => push_distinct(&mut analysis.solutions, rec, params.precision),
            Err(reason) => analysis.rejected.push((*label, reason)),
        }
    }
    analysis.roots = roots
        .into_iter()
        .map(|(l, x)| (l, x.with_precision(params.precision)))
        .collect();
    Ok(analysis)
}

/// `(x², y², 1)` with `y = x / (θ(x + 1))`, checked against the model.
fn quartic_solution(
    x: &PadicNumber,
    theta: &PadicNumber,
    label: QuarticRootLabel,
    params: &ModelParams,
) -> std::result::Result<SolutionRecord, String> {
    let p = params.p;
    let n = params.precision;
    let one = PadicNumber::one(p, x.precision().max(1));
    let x1 = x + &one;
    if x1.is_zero() {
        return Err("x = −1".into());
    }
    let y = x.checked_div(&(theta * &x1)).map_err(|e| e.to_string())?;
    let z0 = (x * x).with_precision(n);
    let z1 = (&y * &y).with_precision(n);
    if !z0.in_ep() || !z1.in_ep() {
        return Err(format!("(x², y²) = ({z0}, {z1}) is not in E_p²"));
    }
    if z0.eq_to_precision(&PadicNumber::one(p, n)) {
        return Err("z_0 = 1".into());
    }
    let z = FieldVector::new(vec![z0, z1, PadicNumber::one(p, n)]).map_err(|e| e.to_string())?;
    let rec = SolutionRecord::build(z, Provenance::Quartic { root: label }, params)
        .map_err(|e| e.to_string())?;
    if !rec.residual.passes() {
        return Err(format!(
            "residual valuation {} below {}",
            rec.residual.valuation, rec.residual.threshold
        ));
    }
    Ok(rec)
}

/// The `z_0 ≠ 1` branch for `p = 3`, `k = 2`, `m = 2`, given `θ ∈ E_3`.
pub fn solve_three_state_k2_p3(theta: &PadicNumber) -> Result<Vec<SolutionRecord>> {
    if theta.prime().get() != 3 {
        return Err(Error::Precondition("θ must be a 3-adic number".into()));
    }
    let params = ModelParams::from_theta(theta.prime(), 2, 2, theta.clone())?;
    Ok(analyze_quartic_branch(&params)?.solutions)
}

/// Solves `A x = b` over `Q_p` by elimination with minimal-valuation
/// pivots; returns the solution and `v(det A)`.
pub fn solve_linear(
    mut a: Vec<Vec<PadicNumber>>,
    mut b: Vec<PadicNumber>,
) -> Result<(Vec<PadicNumber>, i64)> {
    let n = b.len();
    let mut det_valuation = 0;
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].valuation())
            .ok_or(Error::Padic(PadicError::DivisionByZero {
                prime: b[0].prime().get(),
                absolute_precision: a[col][col].absolute_precision(),
            }))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        det_valuation += a[col][col].valuation();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].checked_div(&a[col][col])?;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = &*x - &(&f * y);
            }
            let t = &f * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    let mut x = vec![PadicNumber::zero(b[0].prime(), PadicPoly::EXACT); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = &acc - &(&a[r][c] * &x[c]);
        }
        x[r] = acc.checked_div(&a[r][r])?;
    }
    Ok((x, det_valuation))
}

/// `G(z) = z − T(z)` on the free components and its Jacobian.
fn newton_system(
    rhs: &Rhs,
    params: &ModelParams,
    z: &FieldVector,
) -> Result<(Vec<PadicNumber>, Vec<Vec<PadicNumber>>)> {
    let m = params.m as usize;
    let k = params.k as u64;
    let p = params.p;
    let n = z.precision();
    let den = rhs.denominator(z)?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator {
            component: params.m,
        });
    }
    let inv = den.inverse()?;
    let inv2 = &inv * &inv;
    let powers = &rhs.powers;
    let mut g = Vec::with_capacity(m);
    let mut jac = Vec::with_capacity(m);
    for i in 0..m {
        let num = rhs.numerator(z, i as u32)?;
        let f = &num * &inv;
        g.push(z.get(i) - &f.pow(k));
        let scale = &int(p, k as i64, n) * &f.pow(k - 1);
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let d = &(&powers[i.abs_diff(j)] * &den) - &(&num * &powers[m - j]);
            let partial = &scale * &(&d * &inv2);
            let entry = if i == j {
                &PadicNumber::one(p, n) - &partial
            } else {
                -&partial
            };
            row.push(entry);
        }
        jac.push(row);
    }
    Ok((g, jac))
}

fn newton_from(params: &ModelParams, start: Vec<PadicNumber>) -> Result<FieldVector> {
    let rhs = Rhs::new(params);
    let p = params.p;
    let n = params.precision;
    let mut free = start;
    let mut best = i64::MIN;
    let mut stalled = 0;
    for _ in 0..NEWTON_STEPS {
        let mut comps = free.clone();
        comps.push(PadicNumber::one(p, n));
        let z = FieldVector::unchecked(comps)?;
        let (g, jac) = newton_system(&rhs, params, &z)?;
        if g.iter().all(PadicNumber::is_zero) {
            return FieldVector::new(z.components);
        }
        let v = g.iter().map(PadicNumber::valuation).min().expect("m ≥ 1");
        if v > best {
            best = v;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 2 {
                return Err(Error::NotConverged {
                    iterations: NEWTON_STEPS,
                });
            }
        }
        let (step, _) = solve_linear(jac, g)?;
        if step.iter().all(PadicNumber::is_zero) {
            return FieldVector::new(z.components);
        }
        free = free
            .iter()
            .zip(&step)
            .map(|(x, s)| (x - s).with_precision(n))
            .collect();
        if !free.iter().all(PadicNumber::in_ep) {
            return Err(Error::InvalidField("Newton iterate left E_p".into()));
        }
        // Re-pad so that precision lost to cancellation is regained by the
        // next step.
        free = free.iter().map(|x| x.extend_precision(n)).collect();
    }
    Err(Error::NotConverged {
        iterations: NEWTON_STEPS,
    })
}

const NEWTON_COARSE_PRECISION: u32 = 20;

/// Deepest residue modulus `p^j` the Newton search refines to.
const NEWTON_MAX_DEPTH: u32 = 8;

/// Bounded search for translation-invariant solutions by refinement of
/// residue classes of the free components inside `E_p`.
///
/// Classes start modulo `p²` (modulo 8 for `p = 2`). A class `r mod p^j`
/// can hold a root only if `v(g(r)) ≥ j − v(den(r))`, where `g(z) = z −
/// F(z)^k` and `den` is the common denominator of `F`; classes failing this
/// are discarded. Newton's method is tried from every surviving class, and
/// classes where it fails are split modulo `p^(j+1)`, down to
/// `p^NEWTON_MAX_DEPTH`. At most `class_budget` classes are visited.
/// Returns the verified solutions and whether the search ran to completion.
pub fn newton_search(
    params: &ModelParams,
    class_budget: usize,
) -> Result<(Vec<SolutionRecord>, bool)> {
    let work = guarded(params);
    let prime = params.p;
    let p = BigUint::from(prime.get());
    let m = params.m as usize;
    let n = work.precision;
    // Pruning and a first Newton pass run at low precision; only converged
    // starts are refined at the working precision.
    let coarse = work
        .with_precision(n.min(NEWTON_COARSE_PRECISION))
        .unwrap_or_else(|_| work.clone());
    let rhs = Rhs::new(&coarse);
    let nc = coarse.precision;
    let (j0, step, per_coord) = if prime.get() == 2 {
        (3, 4u64, 2u64)
    } else {
        (2, prime.get(), prime.get())
    };

    let mut queue: std::collections::VecDeque<(Vec<BigUint>, u32)> =
        std::collections::VecDeque::new();
    let total = (per_coord as u128)
        .checked_pow(m as u32)
        .unwrap_or(u128::MAX);
    for idx in 0..total.min(class_budget as u128) {
        let mut rest = idx;
        let r = (0..m)
            .map(|_| {
                let t = (rest % per_coord as u128) as u64;
                rest /= per_coord as u128;
                BigUint::from(1 + step * t)
            })
            .collect();
        queue.push_back((r, j0));
    }
    let mut complete = total <= class_budget as u128;
    let mut visited = 0usize;
    let mut out = Vec::new();
    while let Some((r, j)) = queue.pop_front() {
        visited += 1;
        if visited > class_budget {
            complete = false;
            break;
        }
        let free: Vec<PadicNumber> = r
            .iter()
            .map(|x| PadicNumber::from_bigint(prime, &BigInt::from(x.clone()), nc))
            .collect();
        let mut comps = free.clone();
        comps.push(PadicNumber::one(prime, nc));
        let z = FieldVector::unchecked(comps)?;
        let den = rhs.denominator(&z)?;
        if !den.is_zero() {
            let d = den.valuation();
            if (j as i64) > d {
                let image = rhs.ti_map(&z, params.k)?;
                let gv = (0..m)
                    .map(|i| z.get(i).distance_valuation(image.get(i)))
                    .collect::<std::result::Result<Vec<_>, _>>()?
                    .into_iter()
                    .min()
                    .expect("m ≥ 1");
                if gv < j as i64 - d {
                    continue;
                }
            }
            if let Ok(root) = newton_from(&coarse, free).and_then(|z| {
                let lifted = z.components()[..m]
                    .iter()
                    .map(|c| c.extend_precision(n))
                    .collect();
                newton_from(&work, lifted)
            }) {
                let labels = r.iter().map(ToString::to_string).collect();
                let provenance = Provenance::NewtonSearch {
                    start: labels,
                    modulus_exponent: j,
                };
                if let Ok(rec) =
                    SolutionRecord::build(root.with_precision(params.precision), provenance, params)
                {
                    if rec.residual.passes() {
                        push_distinct(&mut out, rec, params.precision);
                        continue;
                    }
                }
            }
        }
        if j >= NEWTON_MAX_DEPTH {
            complete = false;
            continue;
        }
        let children = prime.get().saturating_pow(m as u32);
        if (visited + queue.len()) as u64 + children > class_budget as u64 {
            complete = false;
            continue;
        }
        let scale = p.pow(j);
        for idx in 0..children {
            let mut rest = idx;
            let child = r
                .iter()
                .map(|x| {
                    let t = rest % prime.get();
                    rest /= prime.get();
                    x + &scale * t
                })
                .collect();
            queue.push_back((child, j + 1));
        }
    }
    Ok((out, complete))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    UniqueNoTransition,
    TransitionCertified,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::UniqueNoTransition => "unique_no_transition",
            Verdict::TransitionCertified => "transition_certified",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundednessClass {
    Bounded,
    Unbounded,
}

impl BoundednessClass {
    pub fn of(params: &ModelParams) -> Self {
        if params.p_divides_states() {
            BoundednessClass::Unbounded
        } else {
            BoundednessClass::Bounded
        }
    }
}

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GibbsCertificate {
    pub p: u64,
    pub k: u32,
    pub m: u32,
    pub theta: PadicNumber,
    pub precision: u32,
    pub solutions: Vec<SolutionRecord>,
    pub verdict: Verdict,
    pub boundedness: BoundednessClass,
    /// Facts that limit the verdict, such as unexplored branches.
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quartic: Option<QuarticAnalysis>,
}

impl GibbsCertificate {
    /// Residues modulo `p³` of each solution's components.
    pub fn residues(&self) -> Vec<Vec<BigUint>> {
        self.solutions.iter().map(|s| s.z.residues(3)).collect()
    }
}

/// Decides uniqueness or phase transition for the translation-invariant
/// boundary laws of the model.
pub fn certify(params: &ModelParams) -> Result<GibbsCertificate> {
    if !params.theta.in_ep() {
        return Err(Error::Precondition(format!(
            "θ = {} is not in E_p",
            params.theta
        )));
    }
    let mut notes = Vec::new();
    let mut solutions = Vec::new();
    let mut quartic = None;
    let verdict;
    if !params.p_divides_states() {
        let sol = solve_ti_unique(params)?;
        let rec = SolutionRecord::build(
            sol.z,
            Provenance::Contraction {
                iterations: sol.iterations,
            },
            params,
        )?;
        solutions.push(rec);
        verdict = Verdict::UniqueNoTransition;
    } else if params.m == 2 {
        let branch = solve_z0_equal_1_branch(params)?;
        for r in &branch.inconclusive_residues {
            notes.push(format!(
                "g vanishes on the class {} mod p^{} but no Hensel index ≤ {HENSEL_INDEX_BOUND} applies",
                r.0, r.1
            ));
        }
        for rec in branch.solutions {
            if rec.residual.passes() {
                push_distinct(&mut solutions, rec, params.precision);
            }
        }
        if params.k == 2 && params.p.get() != 2 {
            let q = analyze_quartic_branch(params)?;
            for rec in q.solutions.iter().cloned() {
                push_distinct(&mut solutions, rec, params.precision);
            }
            quartic = Some(q);
        } else {
            notes.push(format!(
                "the z_0 ≠ 1 branch is not analyzed for k = {}",
                params.k
            ));
        }
        verdict = if solutions.len() >= 2 {
            Verdict::TransitionCertified
        } else {
            Verdict::Inconclusive
        };
    } else {
        let (found, exhaustive) = newton_search(params, NEWTON_CLASS_BUDGET)?;
        solutions = found;
        notes.push(format!(
            "bounded Newton search over residue classes ({}); the solution list is not claimed to be complete",
            if exhaustive { "search completed" } else { "class budget or depth reached" }
        ));
        verdict = Verdict::Inconclusive;
    }
    Ok(GibbsCertificate {
        p: params.p.get(),
        k: params.k,
        m: params.m,
        theta: params.theta.clone(),
        precision: params.precision,
        solutions,
        verdict,
        boundedness: BoundednessClass::of(params),
        notes,
        quartic,
    })
}

/// Residues of the components as `u64`, when they fit.
pub fn residues_u64(z: &FieldVector, exponent: u32) -> Option<Vec<u64>> {
    z.residues(exponent)
        .iter()
        .map(ToPrimitive::to_u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, k: u32, m: u32, theta: i64, n: u32) -> ModelParams {
        ModelParams::with_theta_int(p, k, m, theta, n).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let pr = params(3, 2, 1, 4, 20);
        let ones = FieldVector::ones(pr.p, 1, 20);
        assert!(rhs_component(&ones, 0, &pr)
            .unwrap()
            .eq_to_precision(&pr.one()));

        let pr = params(5, 2, 2, 6, 20);
        let ones = FieldVector::ones(pr.p, 2, 20);
        let f1 = rhs_component(&ones, 1, &pr).unwrap();
        let expected = PadicNumber::from_rational(
            pr.p,
            &num_rational::BigRational::new(13.into(), 43.into()),
            20,
        );
        assert!(f1.eq_to_precision(&expected));
        assert!(f1.in_ep());
    }

    #[test]
    fn g_poly_coefficients() {
        let pr = params(3, 2, 2, 28, 20);
        let g = build_g_poly(&pr).unwrap();
        let expected = PadicPoly::from_i64s(pr.p, &[-56, 785, -1, 28], 20);
        for (a, b) in g.coefficients().iter().zip(expected.coefficients()) {
            assert!(a.eq_to_precision(b), "{a} vs {b}");
        }
        let one = pr.one();
        assert!(g.eval(&one).unwrap().eq_to_precision(&int(pr.p, 756, 20)));
        let pr = params(3, 2, 2, 4, 20);
        let g = build_g_poly(&pr).unwrap();
        assert!(g
            .eval(&int(pr.p, 2, 20))
            .unwrap()
            .eq_to_precision(&int(pr.p, 54, 20)));
    }

    #[test]
    fn contraction_for_ising() {
        let pr = params(3, 2, 1, 4, 30);
        let sol = solve_ti_unique(&pr).unwrap();
        assert!(sol.z.get(0).eq_to_precision(&pr.one()));
    }

    #[test]
    fn rejects_p_dividing_states() {
        let pr = params(3, 2, 2, 28, 20);
        assert!(matches!(solve_ti_unique(&pr), Err(Error::Precondition(_))));
    }

    #[test]
    fn z0_branch_theta_28() {
        let pr = params(3, 2, 2, 28, 40);
        let branch = solve_z0_equal_1_branch(&pr).unwrap();
        assert!(branch.inconclusive_residues.is_empty());
        assert_eq!(branch.solutions.len(), 3);
        for s in &branch.solutions {
            assert!(s.residual.passes());
        }
    }

    #[test]
    fn quartic_theta_118() {
        let pr = params(3, 2, 2, 118, 40);
        let q = analyze_quartic_branch(&pr).unwrap();
        assert!(q.d.exists);
        assert!(!q.upper_chain.as_ref().unwrap().exists);
        assert!(q.lower_chain.as_ref().unwrap().exists);
        assert_eq!(q.solutions.len(), 2);
    }

    #[test]
    fn quartic_theta_4_is_empty() {
        let pr = params(3, 2, 2, 4, 30);
        let q = analyze_quartic_branch(&pr).unwrap();
        assert!(q.solutions.is_empty());
        assert!(q.all_tests_fail());
    }

    #[test]
    fn linear_solver() {
        let p = Prime::new(5).unwrap();
        let a = vec![
            vec![int(p, 2, 20), int(p, 1, 20)],
            vec![int(p, 1, 20), int(p, 3, 20)],
        ];
        let b = vec![int(p, 3, 20), int(p, 4, 20)];
        let (x, dv) = solve_linear(a, b).unwrap();
        assert_eq!(dv, 1);
        assert!(x[0].eq_to_precision(&int(p, 1, 20)));
        assert!(x[1].eq_to_precision(&int(p, 1, 20)));
    }
}
