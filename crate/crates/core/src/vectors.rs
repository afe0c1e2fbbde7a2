//! Probability vectors: the Schmidt spectra everything else operates on.
//!
//! A [`ProbVector`] is validated on construction: components within the
//! scalar tolerance of zero are clamped, and a sum within the normalization
//! window of one is renormalized. Anything further off is rejected.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct ProbVector<T> {
    components: Vec<T>,
}

impl<T: Scalar> ProbVector<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty);
        }
        let mut components = components;
        for (index, c) in components.iter_mut().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if *c < T::zero() {
                if *c < -T::TOL {
                    return Err(Error::Negative {
                        index,
                        value: c.to_f64().unwrap_or(f64::NAN),
                    });
                }
                *c = T::zero();
            }
        }
        let sum: T = components.iter().copied().sum();
        if (sum - T::one()).abs() > T::NORM_TOL {
            return Err(Error::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        if sum != T::one() {
            for c in components.iter_mut() {
                *c = *c / sum;
            }
        }
        Ok(Self { components })
    }

    /// Point mass on index `at` in dimension `dim`.
    pub fn point_mass(dim: usize, at: usize) -> Result<Self> {
        if at >= dim {
            return Err(Error::Dimension {
                expected: dim,
                found: at + 1,
            });
        }
        let mut components = vec![T::zero(); dim];
        components[at] = T::one();
        Ok(Self { components })
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty);
        }
        let w = T::one() / T::from_count(dim);
        Ok(Self {
            components: vec![w; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.components
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.components.iter()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.components
    }

    pub fn max(&self) -> T {
        self.components
            .iter()
            .copied()
            .fold(T::neg_infinity(), T::max)
    }

    pub fn sum(&self) -> T {
        self.components.iter().copied().sum()
    }

    /// Components in reverse index order.
    pub fn reversed(&self) -> Self {
        let mut components = self.components.clone();
        components.reverse();
        Self { components }
    }

    /// Relabels components: entry `i` of the result is `self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: perm.len(),
            });
        }
        let mut seen = vec![false; perm.len()];
        for &j in perm {
            if j >= perm.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::Domain(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Self {
            components: perm.iter().map(|&j| self.components[j]).collect(),
        })
    }

    /// Largest componentwise absolute difference; dimensions must agree.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max))
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_raw(components: Vec<T>) -> Self {
        debug_assert!(!components.is_empty());
        Self { components }
    }

    /// Reads a JSON array of numbers or a single-column CSV (an optional
    /// non-numeric header line is skipped).
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let values: Vec<f64> = if trimmed.starts_with('[') {
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            let mut out = Vec::new();
            for (lineno, line) in trimmed.lines().enumerate() {
                let field = line.split(',').next().unwrap_or("").trim();
                if field.is_empty() || field.starts_with('#') {
                    continue;
                }
                match field.parse::<f64>() {
                    Ok(v) => out.push(v),
                    Err(_) if lineno == 0 => continue,
                    Err(e) => return Err(Error::Parse(format!("line {}: {e}", lineno + 1))),
                }
            }
            out
        };
        Self::new(values.into_iter().map(T::lit).collect())
    }

    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string(&self.components).expect("numbers serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for ProbVector<T> {
    type Error = Error;

    fn try_from(components: Vec<T>) -> Result<Self> {
        Self::new(components)
    }
}

impl<T> From<ProbVector<T>> for Vec<T> {
    fn from(p: ProbVector<T>) -> Self {
        p.components
    }
}

impl<T> std::ops::Index<usize> for ProbVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.components[i]
    }
}

/// Ordered Schmidt coefficients together with the sorting permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct OscVector<T> {
    pub sorted: ProbVector<T>,
    /// `perm[i]` is the original index of the component at sorted position `i`.
    pub perm: Vec<usize>,
}

/// Sorts into non-increasing order; exact ties keep ascending original index.
pub fn sort_desc<T: Scalar>(p: &ProbVector<T>) -> OscVector<T> {
    let mut perm: Vec<usize> = (0..p.dim()).collect();
    perm.sort_by(|&a, &b| p[b].partial_cmp(&p[a]).unwrap_or(Ordering::Equal));
    let sorted = ProbVector::from_raw(perm.iter().map(|&i| p[i]).collect());
    OscVector { sorted, perm }
}

/// Appends zeros up to dimension `d`.
pub fn pad_to<T: Scalar>(p: &ProbVector<T>, d: usize) -> Result<ProbVector<T>> {
    if d < p.dim() {
        return Err(Error::Dimension {
            expected: p.dim(),
            found: d,
        });
    }
    let mut components = p.as_slice().to_vec();
    components.resize(d, T::zero());
    Ok(ProbVector::from_raw(components))
}

/// Spectrum of a product state: entry `i * q.dim() + j` is `p[i] * q[j]`.
pub fn tensor<T: Scalar>(p: &ProbVector<T>, q: &ProbVector<T>) -> ProbVector<T> {
    let mut components = Vec::with_capacity(p.dim() * q.dim());
    for &a in p.iter() {
        components.extend(q.iter().map(|&b| a * b));
    }
    ProbVector::from_raw(components)
}

/// Prefix sums of the non-increasingly sorted vector.
pub fn sorted_prefix_sums<T: Scalar>(p: &ProbVector<T>) -> Vec<T> {
    let osc = sort_desc(p);
    osc.sorted
        .iter()
        .scan(T::zero(), |acc, &x| {
            *acc = *acc + x;
            Some(*acc)
        })
        .collect()
}
