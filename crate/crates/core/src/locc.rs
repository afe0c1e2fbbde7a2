//! Deterministic LOCC conversion `Ψ⁽ᵏ⁺¹⁾(θ) → Ψ⁽ᵏ⁾(θ)`.
//!
//! Alice measures a two-outcome POVM on her mode:
//!
//! * `F₁ = Σₙ √((k+1−n)/(k+1)) |n⟩⟨n|`
//! * `F₂ = Σₙ √((n+1)/(k+1)) |n⟩⟨n+1|`
//!
//! with `n = 0..=k` on the `(k+2)`-dimensional support. On outcome 1 Bob
//! applies the cyclic shift `|m⟩ → |m−1⟩` (with `|0⟩ → |k+1⟩` closing the cycle);
//! on outcome 2 he does nothing. Amplitudes are real and nonnegative
//! throughout, so the simulation tracks `(alice, bob, amplitude)` terms.

use serde::{Deserialize, Serialize};

use crate::beamsplitter::{check_theta, spectrum};
use crate::error::Result;
use crate::majorization::compare;
use crate::scalar::Scalar;
use crate::vectors::ProbVector;

/// Post-spectra must reproduce the target within this bound.
const DETERMINISM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausPair<T> {
    pub k: usize,
    /// Diagonal of `F₁`, entry `n` multiplies `|n⟩⟨n|`.
    pub f1_diag: Vec<T>,
    /// Entry `n` multiplies `|n⟩⟨n+1|` in `F₂`.
    pub f2_weights: Vec<T>,
}

impl<T: Scalar> KrausPair<T> {
    /// Column sums of `F₁†F₁ + F₂†F₂` over the `k+2` basis states.
    pub fn completeness_columns(&self) -> Vec<T> {
        (0..self.k + 2)
            .map(|col| {
                let a = self.f1_diag.get(col).map_or(T::zero(), |&x| x * x);
                let b = col
                    .checked_sub(1)
                    .and_then(|n| self.f2_weights.get(n))
                    .map_or(T::zero(), |&x| x * x);
                a + b
            })
            .collect()
    }

    pub fn completeness_defect(&self) -> T {
        self.completeness_columns()
            .into_iter()
            .map(|s| (s - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

pub fn build_kraus<T: Scalar>(k: usize) -> KrausPair<T> {
    let denom = T::from_count(k + 1);
    let pair = KrausPair {
        k,
        f1_diag: (0..=k)
            .map(|n| (T::from_count(k + 1 - n) / denom).sqrt())
            .collect(),
        f2_weights: (0..=k)
            .map(|n| (T::from_count(n + 1) / denom).sqrt())
            .collect(),
    };
    debug_assert!(pair.completeness_defect() <= T::lit(1e-6));
    pair
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BobCorrection {
    CyclicShift,
    Identity,
}

impl BobCorrection {
    /// Bob's basis relabeling on the `(k+2)`-dimensional support.
    pub fn permutation(self, k: usize) -> Vec<usize> {
        let d = k + 2;
        match self {
            BobCorrection::CyclicShift => (0..d).map(|m| (m + d - 1) % d).collect(),
            BobCorrection::Identity => (0..d).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct LoccOutcomeReport<T> {
    pub branch: u8,
    pub probability: T,
    pub post_spectrum: ProbVector<T>,
    pub bob_correction: BobCorrection,
    /// Bob's index after correction equals `k − alice` for every term.
    pub aligned: bool,
    /// Zero-probability branch; the post-spectrum is the target by convention.
    pub vacuous: bool,
}

/// A bipartite term `amplitude · |alice⟩|bob⟩`.
#[derive(Debug, Clone, Copy)]
struct Term<T> {
    alice: usize,
    bob: usize,
    amp: T,
}

fn run_branch<T: Scalar>(
    k: usize,
    terms: &[Term<T>],
    branch: u8,
    kraus: &KrausPair<T>,
    target: &ProbVector<T>,
) -> LoccOutcomeReport<T> {
    let correction = if branch == 1 {
        BobCorrection::CyclicShift
    } else {
        BobCorrection::Identity
    };
    let shift = correction.permutation(k);
    let mut out: Vec<Term<T>> = Vec::with_capacity(k + 1);
    for t in terms {
        let mapped = match branch {
            1 => kraus.f1_diag.get(t.alice).map(|&w| (t.alice, w)),
            _ => t
                .alice
                .checked_sub(1)
                .and_then(|n| kraus.f2_weights.get(n).map(|&w| (n, w))),
        };
        if let Some((alice, w)) = mapped {
            out.push(Term {
                alice,
                bob: shift[t.bob],
                amp: w * t.amp,
            });
        }
    }
    let probability: T = out.iter().map(|t| t.amp * t.amp).sum();
    let aligned = out.iter().all(|t| t.alice + t.bob == k);
    if probability <= T::TOL {
        return LoccOutcomeReport {
            branch,
            probability,
            post_spectrum: target.clone(),
            bob_correction: correction,
            aligned,
            vacuous: true,
        };
    }
    let mut post = vec![T::zero(); k + 1];
    for t in &out {
        post[t.alice] = post[t.alice] + t.amp * t.amp / probability;
    }
    LoccOutcomeReport {
        branch,
        probability,
        post_spectrum: ProbVector::new(post).expect("renormalized branch"),
        bob_correction: correction,
        aligned,
        vacuous: false,
    }
}

/// Applies Alice's POVM to `Ψ⁽ᵏ⁺¹⁾(θ)` and Bob's conditional correction,
/// returning the two branch reports.
pub fn run_protocol<T: Scalar>(
    k: usize,
    theta: T,
) -> Result<(LoccOutcomeReport<T>, LoccOutcomeReport<T>)> {
    check_theta(theta)?;
    let source = spectrum(k + 1, theta)?;
    let target = spectrum(k, theta)?;
    let terms: Vec<Term<T>> = source
        .iter()
        .enumerate()
        .map(|(n, &p)| Term {
            alice: n,
            bob: k + 1 - n,
            amp: p.sqrt(),
        })
        .collect();
    let kraus = build_kraus::<T>(k);
    Ok((
        run_branch(k, &terms, 1, &kraus, &target),
        run_branch(k, &terms, 2, &kraus, &target),
    ))
}

/// Both sides of Nielsen's criterion for the `k+1 → k` conversion: the
/// majorization verdict and the explicit protocol must agree that it works.
pub fn verify_nielsen<T: Scalar>(k: usize, theta: T) -> Result<bool> {
    let majorized = compare(&spectrum(k + 1, theta)?, &spectrum(k, theta)?)
        .relation
        .is_majorized_by();
    let (b1, b2) = run_protocol(k, theta)?;
    let target = spectrum(k, theta)?;
    let tol = T::lit(DETERMINISM_TOL);
    let branch_ok = |b: &LoccOutcomeReport<T>| {
        b.aligned
            && b.post_spectrum
                .max_abs_diff(&target)
                .is_ok_and(|e| e <= tol)
    };
    let total_ok = (b1.probability + b2.probability - T::one()).abs() <= tol;
    Ok(majorized && branch_ok(&b1) && branch_ok(&b2) && total_ok)
}
