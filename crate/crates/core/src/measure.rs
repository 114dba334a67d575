//! Finite-volume measures `μ^(n)`, partition functions, compatibility and
//! boundedness.
//!
//! `μ^(n)(σ) = Z_n^(−1) θ^(E(σ)) Π_{x∈W_n} z_{σ(x),x}`, where `E(σ)` is the
//! edge energy, so that `θ^E = exp_p(H_n(σ))`. At `n = 0` the formula reads
//! `μ^(0)(i) = z_{i,x⁰} / Σ_j z_{j,x⁰}`, with the root vector
//! `z_{i,x⁰} = Π_{y∈S(x⁰)} F_i(z_y)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::solver::{
    certify, solve_ti_unique, BoundaryField, BoundednessClass, FieldVector, Rhs, RESIDUAL_SLACK,
};
use crate::tree::{enumerate_configs, ModelParams, Region, SpinConfiguration, TreeVolume};

/// `z_{x⁰} = Π_{y∈S(x⁰)} F(z_y)`; `F(z)^(k+1)` for translation-invariant
/// fields.
pub fn root_vector(field: &BoundaryField, params: &ModelParams) -> Result<Vec<PadicNumber>> {
    let rhs = Rhs::new(params);
    match field {
        BoundaryField::TranslationInvariant { z } => Ok(rhs
            .all(z)?
            .iter()
            .map(|c| c.pow(params.k as u64 + 1))
            .collect()),
        BoundaryField::PerVertex { .. } => {
            let ball = TreeVolume::new(params.k, 1)?;
            let succ: Vec<&FieldVector> = ball
                .successors(0)
                .map(|y| field.at(&ball, y))
                .collect::<Result<_>>()?;
            rhs.product(&succ)
        }
    }
}

/// Boundary weights `z̃_x` for each vertex of `W_n`, in breadth-first order.
pub fn boundary_values(
    field: &BoundaryField,
    volume: &TreeVolume,
    params: &ModelParams,
) -> Result<Vec<Vec<PadicNumber>>> {
    check_field(field, params)?;
    if volume.radius() == 0 {
        return Ok(vec![root_vector(field, params)?]);
    }
    volume
        .level(volume.radius())
        .map(|x| field.at(volume, x).map(|z| z.components().to_vec()))
        .collect()
}

fn check_field(field: &BoundaryField, params: &ModelParams) -> Result<()> {
    if field.m() != params.m || field.prime() != params.p {
        return Err(Error::InvalidField("field does not match the model".into()));
    }
    Ok(())
}

/// All values of `μ^(n)` on `Ω_{V_n}` in lexicographic configuration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureTable {
    pub k: u32,
    pub radius: u32,
    pub m: u32,
    pub partition: PadicNumber,
    pub values: Vec<PadicNumber>,
}

#[derive(Serialize)]
struct Entry<'a> {
    sigma: Vec<u32>,
    mu: &'a PadicNumber,
}

impl Serialize for MeasureTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let volume = TreeVolume::new(self.k, self.radius).map_err(serde::ser::Error::custom)?;
        let configs = enumerate_configs(&volume, self.m, Region::Ball, u64::MAX)
            .map_err(serde::ser::Error::custom)?;
        let entries: Vec<Entry> = configs
            .zip(&self.values)
            .map(|(c, mu)| Entry { sigma: c.spins, mu })
            .collect();
        let mut st = s.serialize_struct("MeasureTable", 5)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("radius", &self.radius)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("partition", &self.partition)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// `θ^E(σ) Π_{x∈W_n} z̃_{σ(x),x}` for every configuration in lexicographic
/// order. Vertices are assigned in breadth-first order, so each partial
/// product is shared by all configurations with the same prefix.
fn weights_depth_first(
    volume: &TreeVolume,
    m: u32,
    powers: &[PadicNumber],
    boundary: &[Vec<PadicNumber>],
) -> Vec<PadicNumber> {
    let len = volume.len();
    let first_leaf = volume.level(volume.radius()).start;
    let mut out = Vec::new();
    let mut spins = vec![0u32; len];
    let mut prefix: Vec<Option<PadicNumber>> = vec![None; len + 1];
    prefix[0] = Some(powers[0].clone());
    let mut x = 0usize;
    let mut next_spin = vec![0u32; len];
    loop {
        if x == len {
            out.push(prefix[len].clone().expect("prefix set"));
            x -= 1;
            continue;
        }
        let s = next_spin[x];
        if s > m {
            next_spin[x] = 0;
            if x == 0 {
                break;
            }
            x -= 1;
            continue;
        }
        next_spin[x] = s + 1;
        spins[x] = s;
        let mut w = prefix[x].clone().expect("prefix set");
        if let Some(parent) = volume.parent(x) {
            let e = spins[parent].abs_diff(s) as usize;
            if e > 0 {
                w = &w * &powers[e];
            }
        }
        if x >= first_leaf {
            w = &w * &boundary[x - first_leaf][s as usize];
        }
        prefix[x + 1] = Some(w);
        x += 1;
    }
    out
}

/// `Z_n` by summing out the tree from the leaves:
/// `w_x(i) = Π_{y∈S(x)} Σ_j θ^|i−j| w_y(j)` with `w_x = z̃_x` on `W_n`.
pub fn partition_function_recursive(
    field: &BoundaryField,
    volume: &TreeVolume,
    params: &ModelParams,
) -> Result<PadicNumber> {
    let boundary = boundary_values(field, volume, params)?;
    let first_leaf = volume.level(volume.radius()).start;
    let states = params.m as usize + 1;
    let powers = params.theta_powers(params.m as u64);
    let mut w: Vec<Vec<PadicNumber>> = vec![Vec::new(); volume.len()];
    for x in (0..volume.len()).rev() {
        w[x] = if x >= first_leaf {
            boundary[x - first_leaf].clone()
        } else {
            (0..states)
                .map(|i| {
                    volume.successors(x).fold(params.one(), |acc, y| {
                        let inner = (0..states)
                            .map(|j| &powers[i.abs_diff(j)] * &w[y][j])
                            .reduce(|a, b| &a + &b)
                            .expect("at least two states");
                        &acc * &inner
                    })
                })
                .collect()
        };
    }
    Ok(sum(&w[0], params))
}

impl MeasureTable {
    /// Brute-force table from arbitrary nonzero boundary weights, one vector
    /// per vertex of `W_n`.
    pub fn from_boundary_values(
        volume: &TreeVolume,
        params: &ModelParams,
        boundary: &[Vec<PadicNumber>],
        cap: u64,
    ) -> Result<Self> {
        let m = params.m;
        let w_n = volume.level(volume.radius());
        if boundary.len() != w_n.len() || boundary.iter().any(|z| z.len() != m as usize + 1) {
            return Err(Error::InvalidField(format!(
                "expected {} boundary vectors of length {}",
                w_n.len(),
                m + 1
            )));
        }
        enumerate_configs(volume, m, Region::Ball, cap)?;
        let max_energy = (volume.len().saturating_sub(1) as u64) * m as u64;
        let powers = params.theta_powers(max_energy);
        let weights = weights_depth_first(volume, m, &powers, boundary);
        let partition = sum(&weights, params);
        if partition.is_zero() {
            return Err(Error::Padic(crate::padic::PadicError::PrecisionExhausted {
                context: format!(
                    "Z_{} vanishes modulo p^{}",
                    volume.radius(),
                    partition.valuation()
                ),
            }));
        }
        let inverse = partition.inverse()?;
        let values = weights.iter().map(|w| w * &inverse).collect();
        Ok(Self {
            k: volume.k(),
            radius: volume.radius(),
            m,
            partition,
            values,
        })
    }

    /// Table for a boundary field.
    pub fn new(
        field: &BoundaryField,
        volume: &TreeVolume,
        params: &ModelParams,
        cap: u64,
    ) -> Result<Self> {
        let boundary = boundary_values(field, volume, params)?;
        Self::from_boundary_values(volume, params, &boundary, cap)
    }

    /// Position of a configuration in the table.
    pub fn index_of(&self, sigma: &SpinConfiguration) -> Result<usize> {
        let base = self.m as usize + 1;
        let volume = TreeVolume::new(self.k, self.radius)?;
        if sigma.region != Region::Ball || sigma.spins.len() != volume.len() {
            return Err(Error::InvalidField(
                "configuration does not cover the ball".into(),
            ));
        }
        sigma.spins.iter().try_fold(0usize, |acc, &s| {
            if s > self.m {
                Err(Error::InvalidField(format!(
                    "spin {s} outside 0..={}",
                    self.m
                )))
            } else {
                Ok(acc * base + s as usize)
            }
        })
    }

    pub fn get(&self, sigma: &SpinConfiguration) -> Result<&PadicNumber> {
        Ok(&self.values[self.index_of(sigma)?])
    }

    /// `Σ_σ μ^(n)(σ)`.
    pub fn total(&self, params: &ModelParams) -> PadicNumber {
        sum(&self.values, params)
    }

    /// Smallest and largest `v(μ^(n)(σ))`.
    pub fn valuation_range(&self) -> (i64, i64) {
        let vs = self.values.iter().map(PadicNumber::valuation);
        (vs.clone().min().unwrap_or(0), vs.max().unwrap_or(0))
    }
}

fn sum(values: &[PadicNumber], params: &ModelParams) -> PadicNumber {
    values
        .iter()
        .fold(PadicNumber::zero(params.p, i64::MAX / 4), |acc, v| &acc + v)
}

/// `Z_n`.
pub fn partition_function(
    field: &BoundaryField,
    volume: &TreeVolume,
    params: &ModelParams,
    cap: u64,
) -> Result<PadicNumber> {
    Ok(MeasureTable::new(field, volume, params, cap)?.partition)
}

/// `μ^(n)(σ)` for one configuration.
pub fn mu_n(
    field: &BoundaryField,
    volume: &TreeVolume,
    sigma: &SpinConfiguration,
    params: &ModelParams,
    cap: u64,
) -> Result<PadicNumber> {
    let table = MeasureTable::new(field, volume, params, cap)?;
    Ok(table.get(sigma)?.clone())
}

/// `a(x) = Π_{y∈S(x)} (Σ_{j<m} θ^(m−j) z_{j,y} + 1)`.
pub fn a_factor(
    field: &BoundaryField,
    volume: &TreeVolume,
    x: usize,
    params: &ModelParams,
) -> Result<PadicNumber> {
    check_field(field, params)?;
    let succ = volume.successors(x);
    if succ.is_empty() {
        return Err(Error::Precondition(format!(
            "vertex {x} has no successors in the volume"
        )));
    }
    let rhs = Rhs::new(params);
    let mut acc = params.one();
    for y in succ {
        acc = &acc * &rhs.denominator(field.at(volume, y)?)?;
    }
    Ok(acc)
}

/// `A_j = Π_{x∈W_j} a(x)` for `j < radius`.
pub fn a_product(
    field: &BoundaryField,
    volume: &TreeVolume,
    j: u32,
    params: &ModelParams,
) -> Result<PadicNumber> {
    if j >= volume.radius() {
        return Err(Error::Precondition(format!(
            "A_{j} needs a volume of radius > {j}"
        )));
    }
    let mut acc = params.one();
    for x in volume.level(j) {
        acc = &acc * &a_factor(field, volume, x, params)?;
    }
    Ok(acc)
}

/// Result of the brute-force compatibility check between levels `n − 1`
/// and `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub n: u32,
    pub passed: bool,
    /// `min_σ v(Σ_ω μ^(n)(σ ∨ ω) − μ^(n−1)(σ))`.
    pub residual_valuation: i64,
    pub threshold: i64,
    pub configurations: usize,
}

/// Checks `Σ_{ω∈Ω_{W_n}} μ^(n)(σ ∨ ω) = μ^(n−1)(σ)` for every
/// `σ ∈ Ω_{V_{n−1}}`, passing when every residual has valuation at least
/// `target − slack`.
pub fn check_compatibility_at(
    field: &BoundaryField,
    params: &ModelParams,
    n: u32,
    target: u32,
    cap: u64,
) -> Result<CompatibilityReport> {
    if n == 0 {
        return Err(Error::Precondition("compatibility starts at n = 1".into()));
    }
    let outer = TreeVolume::new(params.k, n)?;
    let inner = TreeVolume::new(params.k, n - 1)?;
    let big = MeasureTable::new(field, &outer, params, cap)?;
    let small = MeasureTable::new(field, &inner, params, cap)?;
    let block = big.values.len() / small.values.len();
    let mut worst = i64::MAX;
    for (s, chunk) in big.values.chunks(block).enumerate() {
        let marginal = sum(chunk, params);
        worst = worst.min(marginal.distance_valuation(&small.values[s])?);
    }
    let threshold = target as i64 - RESIDUAL_SLACK as i64;
    Ok(CompatibilityReport {
        n,
        passed: worst >= threshold,
        residual_valuation: worst,
        threshold,
        configurations: big.values.len(),
    })
}

/// [`check_compatibility_at`] against the parameters' own precision.
pub fn check_compatibility(
    field: &BoundaryField,
    params: &ModelParams,
    n: u32,
    cap: u64,
) -> Result<CompatibilityReport> {
    check_compatibility_at(field, params, n, params.precision, cap)
}

/// Relative precision a field must carry so that level-`n` residuals are
/// resolved to `params.precision` digits: `N + 2 v(Z_n)`.
pub fn compatibility_precision(
    field: &BoundaryField,
    params: &ModelParams,
    n: u32,
    cap: u64,
) -> Result<u32> {
    let volume = TreeVolume::new(params.k, n)?;
    enumerate_configs(&volume, params.m, Region::Ball, cap)?;
    let z = partition_function_recursive(field, &volume, params)?;
    Ok(params.precision + 2 * z.valuation().max(0) as u32)
}

/// Compatibility at level `n` resolved to `params.precision` digits. The
/// field is rebuilt by `field_at` at [`compatibility_precision`] when that
/// exceeds the working precision.
pub fn check_compatibility_resolved<F>(
    params: &ModelParams,
    n: u32,
    cap: u64,
    field_at: F,
) -> Result<CompatibilityReport>
where
    F: Fn(&ModelParams) -> Result<BoundaryField>,
{
    let field = field_at(params)?;
    let needed = compatibility_precision(&field, params, n, cap)?;
    if needed <= params.precision {
        return check_compatibility_at(&field, params, n, params.precision, cap);
    }
    let work = params.with_precision(needed)?;
    check_compatibility_at(&field_at(&work)?, &work, n, params.precision, cap)
}

/// Measured norms at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub n: u32,
    /// `v(a(x))` for `x ∈ W_{n−1}`, smallest and largest.
    pub a_valuation: (i64, i64),
    /// `v(A_{n−1})`.
    pub a_product_valuation: i64,
    /// `v(Z_n)`.
    pub partition_valuation: i64,
    /// `v(μ^(n)(σ))` over all `σ`, smallest and largest.
    pub mu_valuation: (i64, i64),
    /// `k |V_{n−1}|`.
    pub bound_exponent: i64,
    /// `|μ^(n)| = 1` everywhere (bounded) or `|μ^(n)| ≥ p^(k|V_{n−1}|)`
    /// everywhere (unbounded).
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundednessReport {
    pub class: BoundednessClass,
    pub p: u64,
    pub k: u32,
    pub m: u32,
    /// Which field the measurements used.
    pub field_source: String,
    pub levels: Vec<LevelReport>,
}

/// Field used for measurements when none is supplied: the contraction
/// solution, the first certified solution, or the all-ones vector.
pub fn default_field(params: &ModelParams) -> Result<(BoundaryField, String)> {
    if !params.p_divides_states() {
        let sol = solve_ti_unique(params)?;
        return Ok((
            BoundaryField::translation_invariant(sol.z),
            "contraction solution".into(),
        ));
    }
    let cert = certify(params)?;
    match cert.solutions.into_iter().next() {
        Some(s) => Ok((s.field(), "first certified solution".into())),
        None => Ok((
            BoundaryField::translation_invariant(FieldVector::ones(
                params.p,
                params.m,
                params.precision,
            )),
            "all-ones field (no solution found)".into(),
        )),
    }
}

/// Boundedness class with measured norms at the given levels.
pub fn classify_boundedness(
    params: &ModelParams,
    field: Option<&BoundaryField>,
    levels: &[u32],
    cap: u64,
) -> Result<BoundednessReport> {
    let class = BoundednessClass::of(params);
    let (field, field_source) = match field {
        Some(f) => (f.clone(), "supplied".to_string()),
        None => default_field(params)?,
    };
    let mut out = Vec::new();
    for &n in levels {
        if n == 0 {
            return Err(Error::Precondition("levels start at n = 1".into()));
        }
        let volume = TreeVolume::new(params.k, n)?;
        let table = MeasureTable::new(&field, &volume, params, cap)?;
        let a: Vec<i64> = volume
            .level(n - 1)
            .map(|x| a_factor(&field, &volume, x, params).map(|a| a.valuation()))
            .collect::<Result<_>>()?;
        let a_product_valuation = a.iter().sum();
        let mu_valuation = table.valuation_range();
        let bound_exponent = params.k as i64 * volume.ball_size(n - 1) as i64;
        let bound_holds = match class {
            BoundednessClass::Bounded => mu_valuation == (0, 0),
            BoundednessClass::Unbounded => mu_valuation.1 <= -bound_exponent,
        };
        out.push(LevelReport {
            n,
            a_valuation: (
                a.iter().copied().min().unwrap_or(0),
                a.iter().copied().max().unwrap_or(0),
            ),
            a_product_valuation,
            partition_valuation: table.partition.valuation(),
            mu_valuation,
            bound_exponent,
            bound_holds,
        });
    }
    Ok(BoundednessReport {
        class,
        p: params.p.get(),
        k: params.k,
        m: params.m,
        field_source,
        levels: out,
    })
}
