//! The majorization partial order on probability vectors.
//!
//! `p ≺ q` ("p is majorized by q") when every prefix sum of the sorted `p`
//! is at most the matching prefix sum of the sorted `q`. Vectors of different
//! dimension are zero-padded to a common length before comparing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::vectors::{pad_to, sort_desc, ProbVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `q ≺ p`
    Majorizes,
    /// `p ≺ q`
    MajorizedBy,
    Equal,
    Incomparable,
}

impl Relation {
    /// True for `p ≺ q`, counting equality as the degenerate case.
    pub fn is_majorized_by(self) -> bool {
        matches!(self, Relation::MajorizedBy | Relation::Equal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Majorizes => "Majorizes",
            Relation::MajorizedBy => "MajorizedBy",
            Relation::Equal => "Equal",
            Relation::Incomparable => "Incomparable",
        }
    }
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict<T> {
    pub relation: Relation,
    /// `Σ q↓ − Σ p↓` for each prefix length `1..=d`.
    #[serde(rename = "gaps")]
    pub partial_sum_gaps: Vec<T>,
    /// First prefix (0-based) at which `p ≺ q` fails, if any.
    pub first_violation: Option<usize>,
}

impl<T: Scalar> MajorizationVerdict<T> {
    pub fn min_gap(&self) -> T {
        self.partial_sum_gaps
            .iter()
            .copied()
            .fold(T::infinity(), T::min)
    }
}

pub fn compare<T: Scalar>(p: &ProbVector<T>, q: &ProbVector<T>) -> MajorizationVerdict<T> {
    compare_with_tol(p, q, T::TOL)
}

pub fn compare_with_tol<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    tol: T,
) -> MajorizationVerdict<T> {
    let d = p.dim().max(q.dim());
    let ps = sort_desc(&pad_to(p, d).expect("d >= dim")).sorted;
    let qs = sort_desc(&pad_to(q, d).expect("d >= dim")).sorted;

    let mut gaps = Vec::with_capacity(d);
    let (mut sp, mut sq) = (T::zero(), T::zero());
    for i in 0..d {
        sp = sp + ps[i];
        sq = sq + qs[i];
        gaps.push(sq - sp);
    }

    let equal = ps
        .iter()
        .zip(qs.iter())
        .all(|(a, b)| (*a - *b).abs() <= tol);
    let forward = gaps.iter().all(|&g| g >= -tol);
    let backward = gaps.iter().all(|&g| g <= tol);
    let relation = if equal {
        Relation::Equal
    } else if forward {
        Relation::MajorizedBy
    } else if backward {
        Relation::Majorizes
    } else {
        Relation::Incomparable
    };
    let first_violation = gaps.iter().position(|&g| g < -tol);
    MajorizationVerdict {
        relation,
        partial_sum_gaps: gaps,
        first_violation,
    }
}

/// `p ≺ q` within the default tolerance.
pub fn is_majorized_by<T: Scalar>(p: &ProbVector<T>, q: &ProbVector<T>) -> bool {
    compare(p, q).relation.is_majorized_by()
}

/// Random convex mixture of `n_perms` random permutations of `q`.
///
/// Mixture weights are Dirichlet(1, …, 1); the result is majorized by `q` by
/// construction.
pub fn random_majorized<T: Scalar>(q: &ProbVector<T>, n_perms: usize, seed: u64) -> ProbVector<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_majorized_with(q, n_perms.max(1), &mut rng)
}

pub fn random_majorized_with<T: Scalar, R: Rng + ?Sized>(
    q: &ProbVector<T>,
    n_perms: usize,
    rng: &mut R,
) -> ProbVector<T> {
    let raw: Vec<f64> = (0..n_perms.max(1))
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let mut out = vec![T::zero(); q.dim()];
    let mut idx: Vec<usize> = (0..q.dim()).collect();
    for w in raw {
        idx.shuffle(rng);
        let w = T::lit(w / total);
        for (slot, &j) in out.iter_mut().zip(&idx) {
            *slot = *slot + w * q[j];
        }
    }
    ProbVector::new(out).expect("mixture of permutations stays normalized")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> ProbVector<f64> {
        ProbVector::new(v.to_vec()).unwrap()
    }

    fn normalized(v: &[f64]) -> ProbVector<f64> {
        let s: f64 = v.iter().sum();
        pv(&v.iter().map(|x| x / s).collect::<Vec<_>>())
    }

    /// Brute-force check: sort, accumulate, compare each prefix.
    fn brute_majorized(p: &[f64], q: &[f64]) -> bool {
        let d = p.len().max(q.len());
        let mut a = p.to_vec();
        let mut b = q.to_vec();
        a.resize(d, 0.0);
        b.resize(d, 0.0);
        a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        b.sort_by(|x, y| y.partial_cmp(x).unwrap());
        (1..=d).all(|k| a[..k].iter().sum::<f64>() <= b[..k].iter().sum::<f64>() + 1e-12)
    }

    #[test]
    fn uniform_is_minimal() {
        let v = compare(&pv(&[0.5, 0.5]), &pv(&[1.0, 0.0]));
        assert_eq!(v.relation, Relation::MajorizedBy);
        assert_eq!(v.first_violation, None);
        let back = compare(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5]));
        assert_eq!(back.relation, Relation::Majorizes);
        assert_eq!(back.first_violation, Some(0));
    }

    #[test]
    fn reflexive() {
        let p = pv(&[0.6, 0.3, 0.1]);
        assert_eq!(compare(&p, &p).relation, Relation::Equal);
        assert_eq!(compare(&p, &pv(&[0.1, 0.6, 0.3])).relation, Relation::Equal);
    }

    #[test]
    fn three_photon_pair_is_incomparable() {
        // Printed to six digits; the sums miss one by ~1e-7.
        let q = normalized(&[0.44439, 0.290641, 0.226491, 0.0384782]);
        let p = normalized(&[0.416698, 0.320544, 0.180565, 0.0821927]);
        let v = compare(&p, &q);
        assert_eq!(v.relation, Relation::Incomparable);
        assert_eq!(v.first_violation, Some(1));
    }

    #[test]
    fn pads_to_common_dimension() {
        let v = compare(&pv(&[0.5, 0.5]), &pv(&[1.0]));
        assert_eq!(v.relation, Relation::MajorizedBy);
        assert_eq!(v.partial_sum_gaps.len(), 2);
    }

    #[test]
    fn random_majorized_examples() {
        for seed in 0..20 {
            let q = pv(&[1.0, 0.0, 0.0]);
            let p = random_majorized(&q, 3, seed);
            assert!(compare(&p, &q).relation.is_majorized_by());

            let q = pv(&[0.7, 0.2, 0.1]);
            let p = random_majorized(&q, 4, seed);
            assert!(brute_majorized(p.as_slice(), q.as_slice()));
            assert!(compare(&p, &q).relation.is_majorized_by());
        }
        let u = ProbVector::<f64>::uniform(4).unwrap();
        assert_eq!(
            compare(&random_majorized(&u, 5, 7), &u).relation,
            Relation::Equal
        );
        assert_eq!(random_majorized(&u, 5, 7), random_majorized(&u, 5, 7));
    }

    #[test]
    fn agrees_with_brute_force_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let d: usize = rng.gen_range(1..7);
            let mk = |rng: &mut ChaCha8Rng| {
                let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>() + 1e-3).collect();
                let s: f64 = v.iter().sum();
                v.into_iter().map(|x| x / s).collect::<Vec<_>>()
            };
            let (a, b) = (mk(&mut rng), mk(&mut rng));
            let v = compare(&pv(&a), &pv(&b));
            assert_eq!(v.relation.is_majorized_by(), brute_majorized(&a, &b));
            assert_eq!(
                matches!(v.relation, Relation::Majorizes | Relation::Equal),
                brute_majorized(&b, &a)
            );
        }
    }

    #[test]
    fn verdict_json_shape() {
        let v = compare(&pv(&[0.5, 0.5]), &pv(&[1.0, 0.0]));
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["relation"], "MajorizedBy");
        assert_eq!(json["gaps"].as_array().unwrap().len(), 2);
        assert!(json["first_violation"].is_null());
        let back: MajorizationVerdict<f64> = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
    }
}
