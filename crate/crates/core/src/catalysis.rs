//! Catalyzed majorization `p⊗c ≺ q⊗c` for incomparable `p`, `q`.
//!
//! Two catalyst families are built in: the path-entangled single photon
//! `cos θ_c |1,0⟩ + sin θ_c |0,1⟩` and the two-mode squeezed vacuum, whose
//! geometric spectrum `(1−x)xⁿ`, `x = tanh²r`, is truncated once the
//! remaining tail mass `xᴺ` drops below a tolerance.

use serde::{Deserialize, Serialize};

use crate::entropy::{renyi, RenyiOrder};
use crate::error::{domain, Error, Result};
use crate::majorization::{compare, MajorizationVerdict, Relation};
use crate::scalar::Scalar;
use crate::vectors::{sorted_prefix_sums, tensor, ProbVector};

/// Default tail-mass tolerance for squeezed-vacuum truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Gaps this many tail masses from zero are flagged as marginal.
const MARGIN_FACTOR: f64 = 10.0;

/// Prefixes whose remaining mass is within this multiple of the marginal
/// band are pinned by the truncation and not inspected.
const SATURATION_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CatalystFamily {
    SinglePhoton,
    Tmsv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub enum CatalystSpec<T> {
    SinglePhoton { theta_c: T },
    Tmsv { r: T, truncation_dim: Option<usize> },
    Explicit { spectrum: ProbVector<T> },
}

impl<T: Scalar> CatalystSpec<T> {
    pub fn trivial() -> Self {
        CatalystSpec::Explicit {
            spectrum: ProbVector::point_mass(1, 0).expect("dimension 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct CatalystSpectrum<T> {
    pub spectrum: ProbVector<T>,
    /// Probability mass discarded by truncation, before renormalization.
    pub tail_mass: T,
}

/// Terms needed for the squeezed-vacuum tail `xᴺ` to fall below `tail_tol`.
pub fn tmsv_required_terms<T: Scalar>(r: T, tail_tol: T) -> Result<usize> {
    if !r.is_finite() || r <= T::zero() {
        return Err(domain(format!(
            "squeezing parameter r = {r} must be positive"
        )));
    }
    let x = r.tanh().powi(2);
    if x >= T::one() {
        return Err(domain(format!("r = {r} too large to truncate")));
    }
    let n = (tail_tol.ln() / x.ln()).floor();
    let mut n = n.to_usize().unwrap_or(usize::MAX).max(1);
    while x.powi(n as i32) >= tail_tol {
        n += 1;
    }
    Ok(n)
}

pub fn catalyst_spectrum<T: Scalar>(c: &CatalystSpec<T>) -> Result<CatalystSpectrum<T>> {
    catalyst_spectrum_with_tail(c, T::lit(DEFAULT_TAIL_TOL))
}

pub fn catalyst_spectrum_with_tail<T: Scalar>(
    c: &CatalystSpec<T>,
    tail_tol: T,
) -> Result<CatalystSpectrum<T>> {
    match c {
        CatalystSpec::SinglePhoton { theta_c } => {
            let (s, co) = theta_c.sin_cos();
            Ok(CatalystSpectrum {
                spectrum: ProbVector::new(vec![co * co, s * s])?,
                tail_mass: T::zero(),
            })
        }
        CatalystSpec::Tmsv { r, truncation_dim } => {
            let required = tmsv_required_terms(*r, tail_tol)?;
            let x = r.tanh().powi(2);
            let n = match *truncation_dim {
                Some(n) if x.powi(n as i32) >= tail_tol => {
                    return Err(Error::Truncation {
                        requested: n,
                        required,
                        tail: x.powi(n as i32).to_f64().unwrap_or(f64::NAN),
                    })
                }
                Some(n) => n,
                None => required,
            };
            let raw: Vec<T> = (0..n).map(|i| (T::one() - x) * x.powi(i as i32)).collect();
            let kept: T = raw.iter().copied().sum();
            Ok(CatalystSpectrum {
                spectrum: ProbVector::new(raw.into_iter().map(|v| v / kept).collect())?,
                tail_mass: x.powi(n as i32),
            })
        }
        CatalystSpec::Explicit { spectrum } => Ok(CatalystSpectrum {
            spectrum: spectrum.clone(),
            tail_mass: T::zero(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct CatalysisReport<T> {
    pub verdict_without: MajorizationVerdict<T>,
    pub verdict_with: MajorizationVerdict<T>,
    pub catalyst: CatalystSpec<T>,
    pub catalyst_dim: usize,
    pub tail_mass: T,
    /// Some unsaturated prefix gap sits within the truncation floor.
    pub marginal: bool,
}

impl<T: Scalar> CatalysisReport<T> {
    /// Incomparable without the catalyst, majorized with it, and not marginal.
    pub fn catalyzes(&self) -> bool {
        self.verdict_without.relation == Relation::Incomparable
            && self.verdict_with.relation == Relation::MajorizedBy
            && !self.marginal
    }
}

pub fn check_catalysis<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    c: &CatalystSpec<T>,
) -> Result<CatalysisReport<T>> {
    check_catalysis_with_tail(p, q, c, T::lit(DEFAULT_TAIL_TOL))
}

pub fn check_catalysis_with_tail<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    c: &CatalystSpec<T>,
    tail_tol: T,
) -> Result<CatalysisReport<T>> {
    let cat = catalyst_spectrum_with_tail(c, tail_tol)?;
    let pc = tensor(p, &cat.spectrum);
    let qc = tensor(q, &cat.spectrum);
    let verdict_with = compare(&pc, &qc);
    let marginal = matches!(c, CatalystSpec::Tmsv { .. })
        && has_marginal_gap(&pc, &qc, &verdict_with, T::lit(MARGIN_FACTOR) * tail_tol);
    Ok(CatalysisReport {
        verdict_without: compare(p, q),
        verdict_with,
        catalyst: c.clone(),
        catalyst_dim: cat.spectrum.dim(),
        tail_mass: cat.tail_mass,
        marginal,
    })
}

/// A gap counts only while both vectors keep well over `floor` mass outside
/// the prefix. Deeper in, the geometric tail makes every gap a fixed fraction
/// of the remaining mass, so small gaps there say nothing about the head.
fn has_marginal_gap<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    verdict: &MajorizationVerdict<T>,
    floor: T,
) -> bool {
    let sp = sorted_prefix_sums(p);
    let sq = sorted_prefix_sums(q);
    let pinned = floor * T::lit(SATURATION_FACTOR);
    verdict
        .partial_sum_gaps
        .iter()
        .enumerate()
        .take(verdict.partial_sum_gaps.len().saturating_sub(1))
        .any(|(i, &g)| {
            let rest_p = T::one() - sp.get(i).copied().unwrap_or(T::one());
            let rest_q = T::one() - sq.get(i).copied().unwrap_or(T::one());
            rest_p.min(rest_q) > pinned && g.abs() < floor
        })
}

/// Default Rényi grid for the additivity necessary condition.
pub fn default_order_grid<T: Scalar>() -> Vec<RenyiOrder<T>> {
    [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0]
        .into_iter()
        .map(|a| RenyiOrder::new(T::lit(a)).expect("nonnegative"))
        .chain(std::iter::once(RenyiOrder::min_entropy()))
        .collect()
}

/// `S_α(p) ≥ S_α(q) − tol` on the default grid: necessary for any catalyst.
pub fn necessary_conditions<T: Scalar>(p: &ProbVector<T>, q: &ProbVector<T>) -> bool {
    necessary_conditions_on(p, q, &default_order_grid(), T::TOL)
}

pub fn necessary_conditions_on<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    orders: &[RenyiOrder<T>],
    tol: T,
) -> bool {
    orders.iter().all(|&o| renyi(p, o) >= renyi(q, o) - tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchGrid<T> {
    pub step: T,
    /// Upper end of the squeezing scan; the single-photon scan stops at π/4.
    pub r_max: T,
}

impl<T: Scalar> SearchGrid<T> {
    pub fn new(step: T) -> Self {
        Self {
            step,
            r_max: T::lit(3.0),
        }
    }

    fn candidates(&self, family: CatalystFamily) -> Result<Vec<CatalystSpec<T>>> {
        if self.step.is_nan() || self.step <= T::zero() {
            return Err(domain(format!("grid step {} must be positive", self.step)));
        }
        let upper = match family {
            CatalystFamily::SinglePhoton => T::FRAC_PI_4(),
            CatalystFamily::Tmsv => self.r_max,
        };
        let slack = self.step * T::lit(1e-9);
        let mut out = Vec::new();
        let mut i = 1usize;
        loop {
            let x = self.step * T::from_count(i);
            if x > upper + slack {
                break;
            }
            out.push(match family {
                CatalystFamily::SinglePhoton => CatalystSpec::SinglePhoton { theta_c: x },
                CatalystFamily::Tmsv => CatalystSpec::Tmsv {
                    r: x,
                    truncation_dim: None,
                },
            });
            i += 1;
        }
        Ok(out)
    }
}

/// First grid catalyst that catalyzes `p` from `q`, scanning upward.
///
/// Returns the trivial catalyst when `p ≺ q` already holds, and `None` when
/// the pair fails the entropy necessary condition.
pub fn search_catalyst<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    family: CatalystFamily,
    grid: SearchGrid<T>,
) -> Result<Option<CatalystSpec<T>>> {
    Ok(scan(p, q, family, grid, true)?.into_iter().next())
}

/// Every grid catalyst that succeeds, in ascending order.
pub fn catalyst_success_set<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    family: CatalystFamily,
    grid: SearchGrid<T>,
) -> Result<Vec<CatalystSpec<T>>> {
    scan(p, q, family, grid, false)
}

fn scan<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    family: CatalystFamily,
    grid: SearchGrid<T>,
    first_only: bool,
) -> Result<Vec<CatalystSpec<T>>> {
    let candidates = grid.candidates(family)?;
    match compare(p, q).relation {
        Relation::MajorizedBy | Relation::Equal => return Ok(vec![CatalystSpec::trivial()]),
        Relation::Majorizes => return Ok(Vec::new()),
        Relation::Incomparable => {}
    }
    if !necessary_conditions(p, q) {
        return Ok(Vec::new());
    }
    let mut hits = Vec::new();
    for c in candidates {
        if check_catalysis(p, q, &c)?.catalyzes() {
            hits.push(c);
            if first_only {
                break;
            }
        }
    }
    Ok(hits)
}
