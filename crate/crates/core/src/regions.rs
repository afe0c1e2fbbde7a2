//! Ordering regions of `θ ∈ [0, π/4)` for a fixed photon number and the
//! infinitesimal parametric-majorization test inside them.
//!
//! Two eigenvalues `P_n` and `P_m` (transmitted-photon indices, `n > m`)
//! coincide where `tan^{2(n−m)}θ = C(k,n)/C(k,m)`. Every such angle inside the
//! window is a crossover; between consecutive crossovers the sorting
//! permutation is constant. Regions are half-open, `[θ_{r−1}, θ_r)`, so a
//! crossover belongs to the region on its right.
//!
//! The accumulation derivative `a_j` is the θ-derivative of the `j`-th
//! prefix sum of the sorted spectrum. `P(θ+ε) ≺ P(θ)` for infinitesimal
//! `ε > 0` iff `a_j ≤ 0` for all `j < k`.

use serde::{Deserialize, Serialize};

use crate::beamsplitter::spectrum;
use crate::error::{domain, Error, Result};
use crate::scalar::{binomial, ln_binomial, Scalar};
use crate::vectors::sort_desc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPartition<T> {
    pub k: usize,
    /// Crossover angles `θ₁ < θ₂ < …` inside `(0, π/4)`.
    pub crossovers: Vec<T>,
    /// For each crossover, the eigenvalue pairs `(n, m)` that meet there.
    pub pairs: Vec<Vec<(usize, usize)>>,
    /// Sorting permutation per region (`orderings[r][i]` is the original
    /// index at sorted position `i`), one more entry than `crossovers`.
    pub orderings: Vec<Vec<usize>>,
}

impl<T: Scalar> RegionPartition<T> {
    pub fn region_count(&self) -> usize {
        self.orderings.len()
    }

    /// 0-based region containing `θ`; crossovers belong to the right region.
    pub fn region_of(&self, theta: T) -> usize {
        self.crossovers.iter().take_while(|&&c| c <= theta).count()
    }

    /// `[lower, upper)` of region `r` (0-based).
    pub fn bounds(&self, r: usize) -> (T, T) {
        let lower = if r == 0 {
            T::zero()
        } else {
            self.crossovers[r - 1]
        };
        let upper = self.crossovers.get(r).copied().unwrap_or(T::FRAC_PI_4());
        (lower, upper)
    }

    pub fn nearest_crossover(&self, theta: T, tol: T) -> Option<T> {
        self.crossovers
            .iter()
            .copied()
            .find(|&c| (c - theta).abs() <= tol)
    }
}

pub fn find_crossovers<T: Scalar>(k: usize) -> Result<RegionPartition<T>> {
    if k == 0 {
        return Err(domain("region analysis needs k >= 1"));
    }
    let upper = T::FRAC_PI_4() - T::TOL;
    let mut found: Vec<(T, (usize, usize))> = Vec::new();
    for n in 1..=k {
        for m in 0..n {
            let ln_ratio = ln_binomial::<T>(k, n) - ln_binomial::<T>(k, m);
            let tan = (ln_ratio / T::from_count(2 * (n - m))).exp();
            let theta = tan.atan();
            if theta > T::zero() && theta < upper {
                found.push((theta, (n, m)));
            }
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));

    let mut crossovers: Vec<T> = Vec::new();
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    for (theta, pair) in found {
        match crossovers.last() {
            Some(&last) if (theta - last).abs() <= T::TOL => {
                pairs.last_mut().expect("parallel vectors").push(pair);
            }
            _ => {
                crossovers.push(theta);
                pairs.push(vec![pair]);
            }
        }
    }

    let mut partition = RegionPartition {
        k,
        crossovers,
        pairs,
        orderings: Vec::new(),
    };
    partition.orderings = (0..=partition.crossovers.len())
        .map(|r| {
            let (lo, hi) = partition.bounds(r);
            let mid = (lo + hi) / T::two();
            sort_desc(&spectrum(k, mid).expect("midpoint inside window")).perm
        })
        .collect();
    Ok(partition)
}

/// `dP_n/dθ` in polynomial form, finite at both ends of `[0, π/2]`.
pub fn component_derivative<T: Scalar>(k: usize, n: usize, theta: T) -> T {
    let (s, c) = theta.sin_cos();
    let coeff: T = binomial(k, n);
    let two = T::two();
    let mut d = T::zero();
    if k > n {
        d = d + two
            * T::from_count(k - n)
            * c.powi(2 * n as i32 + 1)
            * s.powi(2 * (k - n) as i32 - 1);
    }
    if n > 0 {
        d = d - two * T::from_count(n) * c.powi(2 * n as i32 - 1) * s.powi(2 * (k - n) as i32 + 1);
    }
    coeff * d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccumulationDerivatives<T> {
    pub theta: T,
    /// 1-based ordering region.
    pub region: usize,
    /// `a_j` for `j = 0..k−1`; the full sum has zero derivative and is omitted.
    pub values: Vec<T>,
}

pub fn accumulation_derivatives<T: Scalar>(
    k: usize,
    theta: T,
) -> Result<AccumulationDerivatives<T>> {
    let partition = find_crossovers(k)?;
    accumulation_derivatives_in(&partition, theta)
}

/// As [`accumulation_derivatives`], reusing a precomputed partition.
pub fn accumulation_derivatives_in<T: Scalar>(
    partition: &RegionPartition<T>,
    theta: T,
) -> Result<AccumulationDerivatives<T>> {
    if !(theta >= T::zero() && theta < T::FRAC_PI_4()) {
        return Err(domain(format!("theta = {theta} outside [0, pi/4)")));
    }
    if let Some(c) = partition.nearest_crossover(theta, T::TOL) {
        return Err(Error::AmbiguousOrdering {
            theta: theta.to_f64().unwrap_or(f64::NAN),
            crossover: c.to_f64().unwrap_or(f64::NAN),
        });
    }
    let k = partition.k;
    let r = partition.region_of(theta);
    let d: Vec<T> = partition.orderings[r]
        .iter()
        .map(|&n| component_derivative(k, n, theta))
        .collect();
    // The full sum vanishes, so a_j is also minus the tail sum; take whichever
    // side carries less absolute mass to keep tiny values sign-accurate.
    let mut values = Vec::with_capacity(k);
    let (mut head, mut head_abs) = (T::zero(), T::zero());
    let mut tail_abs: T = d.iter().map(|x| x.abs()).sum::<T>();
    for &x in d.iter().take(k) {
        head = head + x;
        head_abs = head_abs + x.abs();
        tail_abs = tail_abs - x.abs();
        let j = values.len();
        values.push(if tail_abs < head_abs {
            -tail_from(&d, j + 1)
        } else {
            head
        });
    }
    Ok(AccumulationDerivatives {
        theta,
        region: r + 1,
        values,
    })
}

fn tail_from<T: Scalar>(d: &[T], start: usize) -> T {
    d[start..].iter().rev().copied().sum()
}

/// Closed form of `a_j` in the first region:
/// `−cos²ᵏθ · 2(k−j) · C(k,j) · tan^{2j+1}θ`.
pub fn region1_closed_form<T: Scalar>(k: usize, j: usize, theta: T) -> Result<T> {
    if j >= k {
        return Err(domain(format!("j = {j} outside 0..{k}")));
    }
    // The first crossover is always P_k = P_{k−1}, i.e. tan²θ = 1/k.
    let first = if k == 1 {
        T::FRAC_PI_4()
    } else {
        (T::one() / T::from_count(k)).sqrt().atan()
    };
    if !(theta >= T::zero() && theta < first) {
        return Err(domain(format!(
            "theta = {theta} outside region 1 [0, {first})"
        )));
    }
    let c = theta.cos();
    let coeff: T = binomial(k, j);
    Ok(-c.powi(2 * k as i32)
        * T::two()
        * T::from_count(k - j)
        * coeff
        * theta.tan().powi(2 * j as i32 + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum InfinitesimalVerdict {
    Holds,
    /// First accumulation index with `a_j > tol`.
    Violated {
        j: usize,
    },
    /// `θ` sits on a crossover (or on `π/4`), where the ordering is ambiguous.
    Boundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinitesimalReport<T> {
    pub k: usize,
    pub theta: T,
    pub verdict: InfinitesimalVerdict,
    /// Absent on a boundary.
    pub derivatives: Option<AccumulationDerivatives<T>>,
}

pub fn infinitesimal_verdict<T: Scalar>(k: usize, theta: T) -> Result<InfinitesimalReport<T>> {
    if !(theta >= T::zero() && theta <= T::FRAC_PI_4()) {
        return Err(domain(format!("theta = {theta} outside [0, pi/4]")));
    }
    if k == 0 {
        return Ok(InfinitesimalReport {
            k,
            theta,
            verdict: InfinitesimalVerdict::Holds,
            derivatives: Some(AccumulationDerivatives {
                theta,
                region: 1,
                values: Vec::new(),
            }),
        });
    }
    let partition = find_crossovers(k)?;
    infinitesimal_verdict_in(&partition, theta)
}

pub fn infinitesimal_verdict_in<T: Scalar>(
    partition: &RegionPartition<T>,
    theta: T,
) -> Result<InfinitesimalReport<T>> {
    let boundary = InfinitesimalReport {
        k: partition.k,
        theta,
        verdict: InfinitesimalVerdict::Boundary,
        derivatives: None,
    };
    if (theta - T::FRAC_PI_4()).abs() <= T::TOL {
        return Ok(boundary);
    }
    let derivatives = match accumulation_derivatives_in(partition, theta) {
        Ok(d) => d,
        Err(Error::AmbiguousOrdering { .. }) => return Ok(boundary),
        Err(e) => return Err(e),
    };
    let verdict = match derivatives.values.iter().position(|&a| a > T::TOL) {
        Some(j) => InfinitesimalVerdict::Violated { j },
        None => InfinitesimalVerdict::Holds,
    };
    Ok(InfinitesimalReport {
        k: partition.k,
        theta,
        verdict,
        derivatives: Some(derivatives),
    })
}

/// Angle up to which the component with `n` reflected photons (position `n`
/// in the first-region order) has a positive θ-derivative:
/// `arctan(√(n/(k−n)))`.
pub fn positivity_bound<T: Scalar>(k: usize, n: usize) -> Result<T> {
    if n == 0 || n >= k {
        return Err(domain(format!("n = {n} outside 1..{k}")));
    }
    Ok((T::from_count(n) / T::from_count(k - n)).sqrt().atan())
}
