//! Rooted Cayley-tree volumes, spin configurations and the SOS Hamiltonian.
//!
//! Vertices of the ball `V_n` are numbered breadth-first: the root is `0`,
//! `W_1` holds `1..=k+1`, and the children of a vertex are consecutive. The
//! sphere `W_n` therefore occupies the last `|W_n|` ids of `V_n`, and a
//! configuration on `V_n` is the concatenation of one on `V_{n-1}` with one
//! on `W_n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{exp_p, log_p, PadicError, PadicNumber, Prime};

/// Default bound on the number of configurations enumerated in one call.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// Largest ball materialized by [`TreeVolume::new`].
pub const MAX_VERTICES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("branching order must be at least 1")]
    InvalidOrder,
    #[error("ball of radius {radius} on the order-{k} tree exceeds {MAX_VERTICES} vertices")]
    TooManyVertices { k: u32, radius: u32 },
    #[error("enumeration of {states}^{sites} configurations exceeds the cap of {cap}")]
    CapExceeded { states: u64, sites: usize, cap: u64 },
    #[error("configuration has {got} spins, region needs {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("spin {spin} outside 0..={m}")]
    SpinOutOfRange { spin: u32, m: u32 },
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// The ball `V_n` of the rooted Cayley tree `Γ^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeVolume {
    k: u32,
    radius: u32,
    /// `level_start[j]` is the id of the first vertex of `W_j`; one extra
    /// entry marks the end of `V_n`.
    level_start: Vec<usize>,
}

impl TreeVolume {
    pub fn new(k: u32, radius: u32) -> Result<Self, TreeError> {
        if k == 0 {
            return Err(TreeError::InvalidOrder);
        }
        let mut level_start = vec![0usize, 1];
        let mut size = 1usize;
        for j in 1..=radius {
            let w = if j == 1 {
                k as usize + 1
            } else {
                size.checked_mul(k as usize)
                    .ok_or(TreeError::TooManyVertices { k, radius })?
            };
            size = w;
            let end = level_start[j as usize]
                .checked_add(w)
                .filter(|&e| e <= MAX_VERTICES)
                .ok_or(TreeError::TooManyVertices { k, radius })?;
            level_start.push(end);
        }
        Ok(Self {
            k,
            radius,
            level_start,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// `|V_n|`
    pub fn len(&self) -> usize {
        *self.level_start.last().expect("at least the root")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Vertex ids of `W_j`.
    pub fn level(&self, j: u32) -> std::ops::Range<usize> {
        assert!(j <= self.radius, "level {j} outside radius {}", self.radius);
        self.level_start[j as usize]..self.level_start[j as usize + 1]
    }

    pub fn level_size(&self, j: u32) -> usize {
        self.level(j).len()
    }

    /// `|V_j|` for `j ≤ n`.
    pub fn ball_size(&self, j: u32) -> usize {
        self.level_start[j as usize + 1]
    }

    /// `(level, index within level)`; equals `(d(x, x^0), …)`.
    pub fn position(&self, x: usize) -> (u32, usize) {
        assert!(x < self.len(), "vertex {x} outside the volume");
        let j = self.level_start.partition_point(|&s| s <= x) - 1;
        (j as u32, x - self.level_start[j])
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        let (j, idx) = self.position(x);
        match j {
            0 => None,
            1 => Some(0),
            _ => Some(self.level_start[j as usize - 1] + idx / self.k as usize),
        }
    }

    /// Direct successors `S(x)`; empty for vertices on the outer sphere.
    pub fn successors(&self, x: usize) -> std::ops::Range<usize> {
        let (j, idx) = self.position(x);
        if j == self.radius {
            return 0..0;
        }
        let next = self.level_start[j as usize + 1];
        if j == 0 {
            next..next + self.k as usize + 1
        } else {
            let start = next + idx * self.k as usize;
            start..start + self.k as usize
        }
    }

    /// `(parent, child)` pairs in child order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.len()).map(move |x| (self.parent(x).expect("non-root"), x))
    }
}

/// Which vertex set a configuration lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `Ω_{V_n}`
    Ball,
    /// `Ω_{W_n}`
    Sphere,
}

impl Region {
    pub fn size(self, volume: &TreeVolume) -> usize {
        match self {
            Region::Ball => volume.len(),
            Region::Sphere => volume.level_size(volume.radius()),
        }
    }
}

/// Spin values `σ(x) ∈ {0, …, m}` on a region of a volume of radius
/// `radius`; spins are indexed by vertex id (ball) or by position in `W_n`
/// (sphere).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinConfiguration {
    pub radius: u32,
    pub region: Region,
    pub spins: Vec<u32>,
}

impl SpinConfiguration {
    /// `σ_{n-1} ∨ ω`.
    pub fn concat(&self, boundary: &SpinConfiguration) -> Result<SpinConfiguration, TreeError> {
        if self.region != Region::Ball || boundary.region != Region::Sphere {
            return Err(TreeError::InvalidParams(
                "concatenation joins a ball configuration with a sphere configuration".into(),
            ));
        }
        if boundary.radius != self.radius + 1 {
            return Err(TreeError::InvalidParams(format!(
                "sphere radius {} does not follow ball radius {}",
                boundary.radius, self.radius
            )));
        }
        let mut spins = self.spins.clone();
        spins.extend_from_slice(&boundary.spins);
        Ok(SpinConfiguration {
            radius: boundary.radius,
            region: Region::Ball,
            spins,
        })
    }

    /// Restriction of a ball configuration to `V_j`.
    pub fn restrict(&self, volume: &TreeVolume, j: u32) -> SpinConfiguration {
        SpinConfiguration {
            radius: j,
            region: Region::Ball,
            spins: self.spins[..volume.ball_size(j)].to_vec(),
        }
    }

    /// Spin flip `j ↦ m − j` at every vertex.
    pub fn flipped(&self, m: u32) -> SpinConfiguration {
        SpinConfiguration {
            spins: self.spins.iter().map(|&s| m - s).collect(),
            ..self.clone()
        }
    }

    fn validate(&self, volume: &TreeVolume, m: u32) -> Result<(), TreeError> {
        let expected = self.region.size(volume);
        if self.radius != volume.radius() || self.spins.len() != expected {
            return Err(TreeError::SizeMismatch {
                expected,
                got: self.spins.len(),
            });
        }
        if let Some(&spin) = self.spins.iter().find(|&&s| s > m) {
            return Err(TreeError::SpinOutOfRange { spin, m });
        }
        Ok(())
    }
}

fn check_cap(states: u64, sites: usize, cap: u64) -> Result<u64, TreeError> {
    let err = TreeError::CapExceeded { states, sites, cap };
    let exp = u32::try_from(sites).map_err(|_| err.clone())?;
    match states.checked_pow(exp) {
        Some(n) if n <= cap => Ok(n),
        _ => Err(err),
    }
}

/// Lexicographic enumeration of `{0..=m}^region`; the first vertex is the
/// most significant position.
#[derive(Debug, Clone)]
pub struct ConfigIter {
    radius: u32,
    region: Region,
    m: u32,
    next: Option<Vec<u32>>,
    remaining: u64,
}

impl Iterator for ConfigIter {
    type Item = SpinConfiguration;

    fn next(&mut self) -> Option<SpinConfiguration> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for s in succ.iter_mut().rev() {
            if *s < self.m {
                *s += 1;
                carried = false;
                break;
            }
            *s = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        self.remaining -= 1;
        Some(SpinConfiguration {
            radius: self.radius,
            region: self.region,
            spins: current,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

impl ExactSizeIterator for ConfigIter {}

/// All configurations of `region`, refusing when `(m+1)^|region| > cap`.
pub fn enumerate_configs(
    volume: &TreeVolume,
    m: u32,
    region: Region,
    cap: u64,
) -> Result<ConfigIter, TreeError> {
    let sites = region.size(volume);
    let total = check_cap(m as u64 + 1, sites, cap)?;
    Ok(ConfigIter {
        radius: volume.radius(),
        region,
        m,
        next: Some(vec![0; sites]),
        remaining: total,
    })
}

/// `Σ_{⟨x,y⟩ ⊂ V_n} |σ(x) − σ(y)|`, the integer multiplier of `J` in `H_n`.
pub fn edge_energy(volume: &TreeVolume, sigma: &SpinConfiguration) -> u64 {
    volume
        .edges()
        .map(|(x, y)| sigma.spins[x].abs_diff(sigma.spins[y]) as u64)
        .sum()
}

/// Parameters of the `(m+1)`-state p-adic SOS model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelParams {
    pub p: Prime,
    pub k: u32,
    pub m: u32,
    /// Coupling constant `J`, with `θ = exp_p(J)`.
    pub coupling: PadicNumber,
    /// `θ ∈ E_p`.
    pub theta: PadicNumber,
    /// Working relative precision `N`.
    pub precision: u32,
    /// Exact rational source of the coupling, when known; lets the
    /// parameters be re-embedded at a higher precision.
    #[serde(skip)]
    source: Option<CouplingSource>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum CouplingSource {
    Theta(BigRational),
    Coupling(BigRational),
}

impl ModelParams {
    fn check_shape(p: Prime, k: u32, m: u32) -> Result<(), TreeError> {
        if k == 0 {
            return Err(TreeError::InvalidParams("k must be at least 1".into()));
        }
        if m == 0 {
            return Err(TreeError::InvalidParams("m must be at least 1".into()));
        }
        let _ = p;
        Ok(())
    }

    /// Parameters from `θ` directly; `J = log_p(θ)`.
    pub fn from_theta(p: Prime, k: u32, m: u32, theta: PadicNumber) -> Result<Self, TreeError> {
        Self::check_shape(p, k, m)?;
        if theta.prime() != p {
            return Err(PadicError::PrimeMismatch {
                left: p.get(),
                right: theta.prime().get(),
            }
            .into());
        }
        if !theta.in_ep() {
            return Err(TreeError::InvalidParams(format!(
                "θ = {theta} is not in E_{p}"
            )));
        }
        let coupling = log_p(&theta)?;
        Ok(Self {
            p,
            k,
            m,
            precision: theta.precision(),
            coupling,
            theta,
            source: None,
        })
    }

    /// Parameters from the coupling `J`; `θ = exp_p(J)`.
    pub fn from_coupling(
        p: Prime,
        k: u32,
        m: u32,
        coupling: PadicNumber,
    ) -> Result<Self, TreeError> {
        Self::check_shape(p, k, m)?;
        let theta = exp_p(&coupling).map_err(|e| match e {
            PadicError::OutOfDomain { reason, .. } => {
                TreeError::InvalidParams(format!("coupling J outside the exp_p domain: {reason}"))
            }
            other => other.into(),
        })?;
        let precision = theta.precision();
        Ok(Self {
            p,
            k,
            m,
            coupling,
            theta,
            precision,
            source: None,
        })
    }

    pub fn from_theta_rational(
        p: Prime,
        k: u32,
        m: u32,
        theta: &BigRational,
        precision: u32,
    ) -> Result<Self, TreeError> {
        let t = PadicNumber::from_rational(p, theta, precision);
        let mut params = Self::from_theta(p, k, m, t)?;
        params.precision = precision;
        params.source = Some(CouplingSource::Theta(theta.clone()));
        Ok(params)
    }

    pub fn from_coupling_rational(
        p: Prime,
        k: u32,
        m: u32,
        coupling: &BigRational,
        precision: u32,
    ) -> Result<Self, TreeError> {
        let j = PadicNumber::from_rational(p, coupling, precision);
        let mut params = Self::from_coupling(p, k, m, j)?;
        params.theta = params.theta.with_precision(precision);
        params.precision = precision;
        params.source = Some(CouplingSource::Coupling(coupling.clone()));
        Ok(params)
    }

    /// Convenience for integer `θ`.
    pub fn with_theta_int(
        p: u64,
        k: u32,
        m: u32,
        theta: i64,
        precision: u32,
    ) -> Result<Self, TreeError> {
        let p = Prime::new(p)?;
        Self::from_theta_rational(
            p,
            k,
            m,
            &BigRational::from_integer(BigInt::from(theta)),
            precision,
        )
    }

    /// The same model at another working precision. Raising the precision
    /// needs an exact rational source.
    pub fn with_precision(&self, precision: u32) -> Result<Self, TreeError> {
        match &self.source {
            Some(CouplingSource::Theta(t)) => {
                Self::from_theta_rational(self.p, self.k, self.m, t, precision)
            }
            Some(CouplingSource::Coupling(j)) => {
                Self::from_coupling_rational(self.p, self.k, self.m, j, precision)
            }
            None if precision <= self.precision => {
                let mut out = self.clone();
                out.theta = self.theta.with_precision(precision);
                out.coupling = self.coupling.with_precision(precision);
                out.precision = precision;
                Ok(out)
            }
            None => Err(PadicError::PrecisionExhausted {
                context: format!(
                    "θ is only known to {} digits and has no exact source",
                    self.precision
                ),
            }
            .into()),
        }
    }

    /// Exact rational `θ`, when the parameters were built from one.
    pub fn theta_rational(&self) -> Option<&BigRational> {
        match &self.source {
            Some(CouplingSource::Theta(t)) => Some(t),
            _ => None,
        }
    }

    /// Whether `p | m + 1`.
    pub fn p_divides_states(&self) -> bool {
        (self.m as u64 + 1) % self.p.get() == 0
    }

    pub fn one(&self) -> PadicNumber {
        PadicNumber::one(self.p, self.precision)
    }

    /// `θ^0, θ^1, …, θ^max`.
    pub fn theta_powers(&self, max: u64) -> Vec<PadicNumber> {
        let mut out = Vec::with_capacity(max as usize + 1);
        out.push(self.one());
        for e in 1..=max {
            let next = &out[e as usize - 1] * &self.theta;
            out.push(next);
        }
        out
    }
}

/// `H_n(σ) = J Σ_{⟨x,y⟩} |σ(x) − σ(y)|`.
pub fn hamiltonian(
    volume: &TreeVolume,
    sigma: &SpinConfiguration,
    params: &ModelParams,
) -> Result<PadicNumber, TreeError> {
    if sigma.region != Region::Ball {
        return Err(TreeError::InvalidParams(
            "the Hamiltonian is defined on ball configurations".into(),
        ));
    }
    sigma.validate(volume, params.m)?;
    let e = edge_energy(volume, sigma);
    Ok(&params.coupling * &PadicNumber::from_i64(params.p, e as i64, params.precision))
}

/// `exp_p(H_n(σ))`, computed as `θ^E` with `E` the edge energy.
pub fn boltzmann_weight(
    volume: &TreeVolume,
    sigma: &SpinConfiguration,
    params: &ModelParams,
) -> Result<PadicNumber, TreeError> {
    sigma.validate(volume, params.m)?;
    Ok(params.theta.pow(edge_energy(volume, sigma)))
}
