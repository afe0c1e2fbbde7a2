//! Output Schmidt spectra for `|k⟩ ⊗ |0⟩` through a beam splitter of angle θ.
//!
//! Component `n` is the probability that `n` of the `k` photons are
//! transmitted, `C(k,n) cos²ⁿθ sin²⁽ᵏ⁻ⁿ⁾θ`, with transmittance `τ = cos²θ`.

use serde::{Deserialize, Serialize};

use crate::birkhoff::{apply, bs_witness_matrix};
use crate::error::{domain, Result};
use crate::majorization::{compare, MajorizationVerdict};
use crate::scalar::{binomial, ln_binomial, Scalar};
use crate::vectors::{pad_to, sort_desc, ProbVector};

/// Above this photon number binomials are evaluated in log space.
const DIRECT_BINOMIAL_MAX_K: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterInput<T> {
    pub k: usize,
    pub theta: T,
}

impl<T: Scalar> BeamSplitterInput<T> {
    pub fn new(k: usize, theta: T) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { k, theta })
    }

    pub fn transmittance(&self) -> T {
        let c = self.theta.cos();
        c * c
    }

    pub fn spectrum(&self) -> ProbVector<T> {
        spectrum_unchecked(self.k, self.theta)
    }
}

pub(crate) fn check_theta<T: Scalar>(theta: T) -> Result<()> {
    if theta >= T::zero() && theta <= T::FRAC_PI_2() {
        Ok(())
    } else {
        Err(domain(format!("theta = {theta} outside [0, pi/2]")))
    }
}

/// `(k+1)`-dimensional spectrum indexed by transmitted photon number.
pub fn spectrum<T: Scalar>(k: usize, theta: T) -> Result<ProbVector<T>> {
    check_theta(theta)?;
    Ok(spectrum_unchecked(k, theta))
}

/// The spectrum sorted into non-increasing order.
pub fn sorted_spectrum<T: Scalar>(k: usize, theta: T) -> Result<ProbVector<T>> {
    Ok(sort_desc(&spectrum(k, theta)?).sorted)
}

fn spectrum_unchecked<T: Scalar>(k: usize, theta: T) -> ProbVector<T> {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let components: Vec<T> = if k <= DIRECT_BINOMIAL_MAX_K {
        (0..=k)
            .map(|n| binomial::<T>(k, n) * c2.powi(n as i32) * s2.powi((k - n) as i32))
            .collect()
    } else {
        let (ln_c2, ln_s2) = (c2.ln(), s2.ln());
        let scaled = |e: usize, ln_base: T| {
            if e == 0 {
                T::zero()
            } else {
                T::from_count(e) * ln_base
            }
        };
        (0..=k)
            .map(|n| (ln_binomial::<T>(k, n) + scaled(n, ln_c2) + scaled(k - n, ln_s2)).exp())
            .collect()
    };
    ProbVector::new(components).expect("binomial distribution is normalized")
}

/// Same spectrum built from `(1)` by the Pascal recurrence
/// `P⁽ᵏ⁺¹⁾ₙ = P⁽ᵏ⁾ₙ₋₁ cos²θ + P⁽ᵏ⁾ₙ sin²θ`.
pub fn spectrum_recurrence<T: Scalar>(k: usize, theta: T) -> Result<ProbVector<T>> {
    check_theta(theta)?;
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let mut p = vec![T::one()];
    for _ in 0..k {
        let mut next = vec![T::zero(); p.len() + 1];
        for (n, &x) in p.iter().enumerate() {
            next[n] = next[n] + x * s2;
            next[n + 1] = next[n + 1] + x * c2;
        }
        p = next;
    }
    ProbVector::new(p)
}

/// Verdicts for `compare(P⁽ᵏ⁺¹⁾, P⁽ᵏ⁾)`, `k = 0..k_max`.
pub fn photon_chain_check<T: Scalar>(
    k_max: usize,
    theta: T,
) -> Result<Vec<MajorizationVerdict<T>>> {
    if k_max == 0 {
        return Err(domain("k_max must be at least 1"));
    }
    check_theta(theta)?;
    let mut prev = spectrum_unchecked(0, theta);
    let mut out = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let next = spectrum_unchecked(k + 1, theta);
        out.push(compare(&next, &prev));
        prev = next;
    }
    Ok(out)
}

/// Largest componentwise error of `D⁽ᵏ⁺¹⁾ · pad(P⁽ᵏ⁾)` against `P⁽ᵏ⁺¹⁾`.
pub fn witness_residual<T: Scalar>(k: usize, theta: T) -> Result<T> {
    let d = bs_witness_matrix(k, theta)?;
    let lifted = apply(&d, &pad_to(&spectrum(k, theta)?, k + 2)?)?;
    lifted.max_abs_diff(&spectrum(k + 1, theta)?)
}
